"""Sharp and meager element sets, blocks, centers, and subset predicates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    UNDEFINED,
    EffectAlgebra,
    InternalInconsistencyError,
    SumTable,
    TheoremViolationError,
    validate,
)
from .lattice import compatibility_matrix, order_structure, require_lattice

#: default subset-enumeration cutoff for the bifullness oracle.
BIFULL_CUTOFF = 20


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_of(members):
    m = 0
    for x in members:
        m |= 1 << int(x)
    return m


@dataclass(frozen=True)
class SharpSet:
    """Elements x with x /\\ x' = 0, plus closure flags computed by scan."""

    members: tuple
    closed_under: dict


@dataclass
class MeagerStructure:
    """Meager elements with the induced partial sum (no top element).

    ``sum(x, y)`` is defined exactly when the ambient sum is defined and lands
    inside the member set.  ``atom_ords`` maps each meager atom to its
    isotropic index computed inside this structure, which is one less than the
    ambient index.
    """

    members: tuple
    atom_ords: dict
    _E: EffectAlgebra
    _member_mask: int

    def __contains__(self, x):
        return bool((self._member_mask >> int(x)) & 1)

    def sum(self, x, y):
        if x not in self or y not in self:
            raise ValueError("operands must be meager elements")
        v = self._E.sum(x, y)
        if v is None or v not in self:
            return None
        return v


@dataclass(frozen=True)
class BlockSet:
    """All blocks (maximal pairwise-compatible subsets), their intersection,
    and each block's atom set (minimal nonzero members)."""

    blocks: tuple
    intersection: tuple
    atom_sets: tuple


@dataclass(frozen=True)
class CenterSet:
    members: tuple


def sharp_elements(E: EffectAlgebra) -> SharpSet:
    """Sh(E) = {x : x /\\ x' = 0}; closure flags are computed, not assumed."""
    os = require_lattice(E)
    members = tuple(
        x for x in range(E.n) if os.meet[x, E.comp[x]] == E.zero
    )
    mset = set(members)
    comp_ok = all(E.comp[x] in mset for x in members)
    meet_ok = all(os.meet[x, y] in mset for x in members for y in members)
    join_ok = all(os.join[x, y] in mset for x in members for y in members)
    sum_ok = all(
        E.table[x, y] in mset
        for x in members
        for y in members
        if E.table[x, y] != UNDEFINED
    )
    return SharpSet(
        members,
        {
            "complement": comp_ok,
            "meet": meet_ok,
            "join": join_ok,
            "partial_sum": sum_ok,
        },
    )


def meager_elements(E: EffectAlgebra) -> MeagerStructure:
    """Mea(E): elements whose only sharp lower bound is zero."""
    require_lattice(E)
    sharp_mask = _mask_of(sharp_elements(E).members)
    os = order_structure(E)
    zero_bit = 1 << E.zero
    members = tuple(
        x for x in range(E.n) if os.down_masks[x] & sharp_mask == zero_bit
    )
    mask = _mask_of(members)
    atom_ords = {}
    for a in E.atoms():
        if not (mask >> a) & 1:
            continue
        # fold inside the member set only
        k = 0
        acc = E.zero
        while True:
            nxt = E.sum(acc, a)
            if nxt is None or not (mask >> nxt) & 1:
                break
            acc = nxt
            k += 1
        atom_ords[a] = k
    return MeagerStructure(members, atom_ords, E, mask)


def _max_cliques(adj, n):
    """All maximal cliques of the graph given by bitmask adjacency rows."""
    out = []

    def expand(r, p, x):
        if p == 0 and x == 0:
            out.append(r)
            return
        pux = p | x
        u = max(_bits(pux), key=lambda v: (p & adj[v]).bit_count())
        for v in _bits(p & ~adj[u]):
            bv = 1 << v
            expand(r | bv, p & adj[v], x & adj[v])
            p &= ~bv
            x |= bv

    expand(0, (1 << n) - 1, 0)
    return out


def blocks(E: EffectAlgebra) -> BlockSet:
    """Maximal cliques of the compatibility graph, each checked to be a
    sub-lattice effect algebra in which all pairs are compatible."""
    key = "blocks"
    if key in E._cache:
        return E._cache[key]
    C = compatibility_matrix(E)
    n = E.n
    adj = [_mask_of(np.flatnonzero(C[v])) & ~(1 << v) for v in range(n)]
    cliques = sorted(tuple(sorted(_bits(m))) for m in _max_cliques(adj, n))
    for blk in cliques:
        if not is_sub_lattice_effect_algebra(E, blk):
            raise TheoremViolationError(
                f"block {[E.names[i] for i in blk]} is not a sub-lattice effect algebra"
            )
    atom_sets = []
    leq = E.leq
    for blk in cliques:
        ats = tuple(
            x for x in blk
            if x != E.zero and not any(leq[y, x] and y not in (E.zero, x) for y in blk)
        )
        atom_sets.append(ats)
    inter = _mask_of(cliques[0]) if cliques else 0
    for blk in cliques[1:]:
        inter &= _mask_of(blk)
    bs = BlockSet(tuple(cliques), tuple(sorted(_bits(inter))), tuple(atom_sets))
    E._cache[key] = bs
    return bs


def compatibility_center(E: EffectAlgebra) -> tuple:
    """B(E) = {x : x <-> y for every y}; cross-checked against the block
    intersection, which must agree."""
    C = compatibility_matrix(E)
    members = tuple(int(x) for x in np.flatnonzero(C.all(axis=1)))
    inter = blocks(E).intersection
    if members != inter:
        raise InternalInconsistencyError(
            "compatibility center disagrees with the intersection of blocks"
        )
    return members


def center(E: EffectAlgebra) -> CenterSet:
    """C(E) = {x : y = (y /\\ x) \\/ (y /\\ x') for all y}.

    Computed from the defining identity; equality with B(E) ∩ Sh(E) is
    asserted because both must agree on every instance.
    """
    os = require_lattice(E)
    members = []
    for x in range(E.n):
        xc = E.comp[x]
        ok = all(
            os.join[os.meet[y, x], os.meet[y, xc]] == y for y in range(E.n)
        )
        if ok:
            members.append(x)
    members = tuple(members)
    bs = set(compatibility_center(E)) & set(sharp_elements(E).members)
    if set(members) != bs:
        raise InternalInconsistencyError(
            "center identity disagrees with B(E) intersect Sh(E)"
        )
    return CenterSet(members)


def is_sub_effect_algebra(E: EffectAlgebra, Q) -> bool:
    """Two-out-of-three closure plus membership of the unit."""
    qset = set(int(q) for q in Q)
    if E.unit not in qset:
        return False
    T = E.table
    for x in range(E.n):
        for y in range(x, E.n):
            z = T[x, y]
            if z == UNDEFINED:
                continue
            inq = (x in qset) + (y in qset) + (int(z) in qset)
            if inq == 2:
                return False
    return True


def is_sub_lattice_effect_algebra(E: EffectAlgebra, Q) -> bool:
    """Sub-effect algebra that is also closed under binary meet and join."""
    if not is_sub_effect_algebra(E, Q):
        return False
    os = require_lattice(E)
    qset = set(int(q) for q in Q)
    return all(
        os.meet[x, y] in qset and os.join[x, y] in qset
        for x in qset
        for y in qset
    )


def is_full_sub_lattice(E: EffectAlgebra, Q) -> bool:
    """Closure under all existing suprema/infima of subsets of Q.

    On a finite lattice this coincides with binary meet/join closure (folding),
    so that is what gets checked; the distinction only matters on infinite
    carriers.
    """
    os = require_lattice(E)
    qset = set(int(q) for q in Q)
    return all(
        os.meet[x, y] in qset and os.join[x, y] in qset
        for x in qset
        for y in qset
    )


@dataclass(frozen=True)
class BifullResult:
    ok: bool
    witness: tuple | None   # offending subset X (indices), or None
    method: str             # "sublattice-shortcut" | "subset-oracle" | mix

    def __bool__(self):
        return self.ok


def _join_in(E, ub_mask, up_masks):
    """Least element of the upper-bound set, or None."""
    for z in _bits(ub_mask):
        if ub_mask & ~up_masks[z] == 0:
            return z
    return None


def _sup_side(E, D, cutoff):
    """Check the join half of bifullness for subset D."""
    os = order_structure(E)
    dlist = sorted(int(d) for d in D)
    dmask = _mask_of(dlist)
    closed = all(
        os.join[x, y] != UNDEFINED and (dmask >> int(os.join[x, y])) & 1
        for x in dlist
        for y in dlist
    )
    if closed:
        # in a finite carrier the E-join of X ⊆ D is a fold of binary joins,
        # so it stays in D and is then automatically the D-join
        return BifullResult(True, None, "sublattice-shortcut")
    if len(dlist) > cutoff:
        raise ValueError(
            f"|D| = {len(dlist)} exceeds the cutoff {cutoff} and D is not closed "
            "under binary join; refusing the exponential subset scan"
        )
    up = os.up_masks
    full = (1 << E.n) - 1
    for sub in range(1, 1 << len(dlist)):
        xs = [dlist[i] for i in _bits(sub)]
        ub = full
        for x in xs:
            ub &= up[x]
        j_e = _join_in(E, ub, up)
        j_d = _join_in(E, ub & dmask, up)
        if (j_e is None) != (j_d is None) or (j_e is not None and j_e != j_d):
            return BifullResult(False, tuple(xs), "subset-oracle")
    return BifullResult(True, None, "subset-oracle")


def _inf_side(E, D, cutoff):
    os = order_structure(E)
    dlist = sorted(int(d) for d in D)
    dmask = _mask_of(dlist)
    closed = all(
        os.meet[x, y] != UNDEFINED and (dmask >> int(os.meet[x, y])) & 1
        for x in dlist
        for y in dlist
    )
    if closed:
        return BifullResult(True, None, "sublattice-shortcut")
    if len(dlist) > cutoff:
        raise ValueError(
            f"|D| = {len(dlist)} exceeds the cutoff {cutoff} and D is not closed "
            "under binary meet; refusing the exponential subset scan"
        )
    down = os.down_masks
    full = (1 << E.n) - 1

    def greatest(lb_mask):
        for z in _bits(lb_mask):
            if lb_mask & ~down[z] == 0:
                return z
        return None

    for sub in range(1, 1 << len(dlist)):
        xs = [dlist[i] for i in _bits(sub)]
        lb = full
        for x in xs:
            lb &= down[x]
        m_e = greatest(lb)
        m_d = greatest(lb & dmask)
        if (m_e is None) != (m_d is None) or (m_e is not None and m_e != m_d):
            return BifullResult(False, tuple(xs), "subset-oracle")
    return BifullResult(True, None, "subset-oracle")


def is_sup_bifull(E: EffectAlgebra, D, cutoff: int = BIFULL_CUTOFF) -> BifullResult:
    """Join-bifullness: for every nonempty X ⊆ D the join computed inside D
    exists iff the ambient join does, with the same value."""
    return _sup_side(E, D, cutoff)


def is_bifull(E: EffectAlgebra, D, cutoff: int = BIFULL_CUTOFF) -> BifullResult:
    """Bifullness of D in E: join- and meet-bifull (nonempty subsets).

    Subsets closed under binary meet and join get the proved shortcut; anything
    else under the cutoff runs the exact subset oracle.
    """
    sup = _sup_side(E, D, cutoff)
    if not sup.ok:
        return sup
    inf = _inf_side(E, D, cutoff)
    if not inf.ok:
        return inf
    method = sup.method if sup.method == inf.method else f"{sup.method}+{inf.method}"
    return BifullResult(True, None, method)


def restrict(E: EffectAlgebra, Q):
    """Build the sub-effect algebra on carrier Q; returns (algebra, embedding).

    ``embedding[i]`` is the E-index of the i-th element of the restriction.
    Q must contain the unit and satisfy two-out-of-three closure; the induced
    table is then total on exactly the pairs whose ambient sum is defined.
    """
    qlist = sorted(int(q) for q in Q)
    if not is_sub_effect_algebra(E, qlist):
        raise ValueError("carrier is not a sub-effect algebra")
    pos = {g: i for i, g in enumerate(qlist)}
    m = len(qlist)
    arr = np.full((m, m), UNDEFINED, dtype=np.int16)
    for i, gx in enumerate(qlist):
        for j, gy in enumerate(qlist):
            v = E.table[gx, gy]
            if v != UNDEFINED:
                arr[i, j] = pos[int(v)]
    t = SumTable(
        [E.names[g] for g in qlist], pos[E.zero], pos[E.unit], arr
    )
    return validate(t), qlist
