"""Triple extraction and reconstruction.

A finite lattice effect algebra is determined, up to isomorphism, by three
pieces of data: its sharp part (a sub-effect algebra), its meager part (a
generalized effect algebra: the induced partial sum with no top), and the map
``h`` sending each sharp element to the set of meager elements below it.

This module extracts that triple, rebuilds the four auxiliary mappings
(``map_hat``, ``map_pi``, ``map_R``, ``map_S``) *purely from the triple*, uses
them to construct a new effect algebra ``Tea`` on pairs (sharp, meager), and
verifies that x -> (sharp floor of x, remainder) is an isomorphism onto it.

Triple-side computations never read the original algebra; the embedding
indices carried on :class:`Triple` exist solely for the isomorphism check and
cross-check code paths.  Without that separation the reconstruction would be
vacuous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    UNDEFINED,
    EffectAlgebra,
    InternalInconsistencyError,
    SumTable,
    TheoremViolationError,
    ValidationError,
    derive_order,
    validate,
)
from .decomp import basic_decomposition
from .lattice import require_lattice
from .substructures import (
    center,
    compatibility_center,
    meager_elements,
    restrict,
    sharp_elements,
)


class MeagerPart:
    """Standalone meager structure on its own indices: a partial sum with a
    bottom and no top, plus the order, difference, atoms and isotropic
    indices derived from that sum alone."""

    def __init__(self, names, zero, table):
        self.names = tuple(names)
        self.zero = int(zero)
        self.n = len(self.names)
        arr = np.array(table, dtype=np.int16)
        arr.setflags(write=False)
        self.table = arr
        leq, om = derive_order(arr)
        leq.setflags(write=False)
        om.setflags(write=False)
        self.leq = leq
        self.ominus_table = om
        below_counts = leq.sum(axis=0)
        self.atoms = tuple(
            x for x in range(self.n) if x != self.zero and below_counts[x] == 2
        )

    def sum(self, x, y):
        v = int(self.table[x, y])
        return None if v == UNDEFINED else v

    def ominus(self, y, x):
        v = int(self.ominus_table[y, x])
        return None if v == UNDEFINED else v

    def multiple(self, x, k):
        acc = self.zero
        for _ in range(k):
            acc = int(self.table[acc, x])
            if acc == UNDEFINED:
                return None
        return acc

    def ord(self, x):
        """Greatest k with kx defined inside the meager structure."""
        if x == self.zero:
            raise ValueError("ord of the bottom element is unbounded")
        k = 1
        acc = x
        while True:
            nxt = int(self.table[acc, x])
            if nxt == UNDEFINED:
                return k
            acc = nxt
            k += 1

    def join_of(self, xs):
        """Least upper bound of ``xs`` within this poset, or None."""
        ub = [
            u for u in range(self.n) if all(self.leq[x, u] for x in xs)
        ]
        for u in ub:
            if all(self.leq[u, v] for v in ub):
                return u
        return None


@dataclass
class Triple:
    """(sharp part, meager part, h) plus embedding data for cross-checks.

    ``h[s]`` is a bitmask over meager indices: bit m set iff the m-th meager
    element lies below the s-th sharp element.  ``sharp_in_E`` and
    ``meager_in_E`` map local indices back to the source algebra and are used
    only by the isomorphism verdict, never by the reconstruction itself.
    """

    sharp: EffectAlgebra
    meager: MeagerPart
    h: tuple
    sharp_in_E: tuple
    meager_in_E: tuple
    _memo: dict = field(default_factory=dict, repr=False)


def extract_triple(E: EffectAlgebra) -> Triple:
    require_lattice(E)
    sh_members = sharp_elements(E).members
    sharp_alg, sh_map = restrict(E, sh_members)

    mea = meager_elements(E)
    m_list = list(mea.members)
    m_pos = {g: i for i, g in enumerate(m_list)}
    m = len(m_list)
    arr = np.full((m, m), UNDEFINED, dtype=np.int16)
    for i, gx in enumerate(m_list):
        for j, gy in enumerate(m_list):
            v = E.sum(gx, gy)
            if v is not None and v in mea:
                arr[i, j] = m_pos[v]
    part = MeagerPart([E.names[g] for g in m_list], m_pos[E.zero], arr)

    h = []
    for gs in sh_map:
        mask = 0
        for i, gm in enumerate(m_list):
            if E.leq[gm, gs]:
                mask |= 1 << i
        h.append(mask)
    return Triple(sharp_alg, part, tuple(h), tuple(sh_map), tuple(m_list))


def map_hat(t: Triple, x) -> int:
    """Smallest sharp element whose h-fiber contains the meager element x."""
    memo = t._memo.setdefault("hat", {})
    if x in memo:
        return memo[x]
    bit = 1 << x
    cands = [s for s in range(t.sharp.n) if t.h[s] & bit]
    for s in cands:
        if all(t.sharp.leq[s, u] for u in cands):
            memo[x] = s
            return s
    raise InternalInconsistencyError(
        f"no minimum sharp element covers meager {t.meager.names[x]!r}"
    )


def map_pi(t: Triple, s, x) -> int:
    """Projection of meager x to the part below sharp s: the greatest meager
    element below x that lies in h(s)."""
    memo = t._memo.setdefault("pi", {})
    key = (s, x)
    if key in memo:
        return memo[key]
    hm = t.h[s]
    cands = [
        y for y in range(t.meager.n) if t.meager.leq[y, x] and (hm >> y) & 1
    ]
    for y in cands:
        if all(t.meager.leq[u, y] for u in cands):
            memo[key] = y
            return y
    raise InternalInconsistencyError(
        f"projection of {t.meager.names[x]!r} below sharp "
        f"{t.sharp.names[s]!r} has no maximum"
    )


def map_R(t: Triple, x) -> int:
    """Remainder map: distance from x up to its sharp cover, computed from
    atom multiplicities of the meager structure alone.

    Ambient isotropic indices are recoverable as ord(a) + 1 for each meager
    atom a, so the remainder is the join of the (n_a - k_a) multiples.
    """
    memo = t._memo.setdefault("R", {})
    if x in memo:
        return memo[x]
    mp = t.meager
    if x == mp.zero:
        memo[x] = mp.zero
        return mp.zero
    parts = []
    for a in mp.atoms:
        if not mp.leq[a, x]:
            continue
        k = 0
        acc = mp.zero
        while True:
            nxt = mp.sum(acc, a)
            if nxt is None or not mp.leq[nxt, x]:
                break
            acc = nxt
            k += 1
        n_a = mp.ord(a) + 1
        piece = mp.multiple(a, n_a - k)
        if piece is None:
            raise InternalInconsistencyError(
                f"residual multiple of atom {mp.names[a]!r} missing from the "
                "meager structure"
            )
        parts.append(piece)
    out = mp.join_of(parts) if parts else mp.zero
    if out is None:
        raise InternalInconsistencyError(
            f"residual multiples of {mp.names[x]!r} have no join in the "
            "meager structure"
        )
    memo[x] = out
    return out


def map_S(t: Triple, x, y):
    """Top of the set of sharp elements splitting across the pair (x, y).

    A sharp z qualifies iff z is the sharp cover of its projection of x and
    the remainder of that projection equals its projection of y.  Returns the
    top of the qualifying set under the sharp order, or None when no top
    exists; undefinedness is a first-class outcome, not an error.
    """
    memo = t._memo.setdefault("S", {})
    key = (x, y)
    if key in memo:
        return memo[key]
    qual = []
    for z in range(t.sharp.n):
        px = map_pi(t, z, x)
        if map_hat(t, px) != z:
            continue
        if map_R(t, px) != map_pi(t, z, y):
            continue
        qual.append(z)
    out = None
    for z in qual:
        if all(t.sharp.leq[u, z] for u in qual):
            out = z
            break
    memo[key] = out
    return out


@dataclass
class TeaAlgebra:
    """Reconstructed algebra on pairs (sharp, meager) with the four-clause
    partial sum; ``algebra`` is the validated result, ``pairs`` its carrier in
    triple-local indices, in carrier order."""

    algebra: EffectAlgebra
    pairs: tuple
    triple: Triple

    def pair_index(self, pair):
        return self.pairs.index(pair)


def _tea_sum(t: Triple, p, q):
    """The four definedness clauses; returns the resulting pair or None."""
    xs, xm = p
    ys, ym = q
    s = map_S(t, xm, ym)
    if s is None:
        return None
    zs = t.sharp.sum(xs, ys)
    if zs is None:
        return None
    zs = t.sharp.sum(zs, s)
    if zs is None:
        return None
    ux = map_pi(t, s, xm)
    uy = map_pi(t, s, ym)
    rx = t.meager.ominus(xm, ux)
    ry = t.meager.ominus(ym, uy)
    if rx is None or ry is None:
        raise InternalInconsistencyError("projection exceeded its argument")
    zm = t.meager.sum(rx, ry)
    if zm is None:
        return None
    if not (t.h[t.sharp.complement_of(zs)] >> zm) & 1:
        return None
    return (zs, zm)


def build_tea(t: Triple) -> TeaAlgebra:
    """Assemble the pair algebra from the triple and validate it.

    The carrier is every (s, m) with m below the orthosupplement of s; a
    validation failure of the assembled table would falsify the reconstruction
    and is reported as a theorem violation.
    """
    pairs = [
        (s, m)
        for s in range(t.sharp.n)
        for m in range(t.meager.n)
        if (t.h[t.sharp.complement_of(s)] >> m) & 1
    ]
    pos = {p: i for i, p in enumerate(pairs)}
    n = len(pairs)
    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for i, p in enumerate(pairs):
        for j, q in enumerate(pairs):
            if j < i:
                continue
            r = _tea_sum(t, p, q)
            if r is not None:
                if r not in pos:
                    raise TheoremViolationError(
                        f"pair sum {r} escaped the reconstructed carrier"
                    )
                arr[i, j] = arr[j, i] = pos[r]
    names = [
        f"({t.sharp.names[s]},{t.meager.names[m]})" for s, m in pairs
    ]
    zero_pair = (t.sharp.zero, t.meager.zero)
    unit_pair = (t.sharp.unit, t.meager.zero)
    table = SumTable(names, pos[zero_pair], pos[unit_pair], arr)
    try:
        alg = validate(table)
    except ValidationError as exc:
        raise TheoremViolationError(
            f"reconstructed pair table is not an effect algebra: {exc}"
        ) from exc
    return TeaAlgebra(alg, tuple(pairs), t)


def phi(E: EffectAlgebra, x):
    """The canonical map x -> (sharp floor of x, remainder), as E-indices."""
    dec = basic_decomposition(E, x)
    return (dec.sharp_part, dec.meager_part)


@dataclass(frozen=True)
class IsoResult:
    ok: bool
    mapping: tuple          # rows (element name, image pair name)
    failure: str | None = None

    def __bool__(self):
        return self.ok


def _check_iso(source: EffectAlgebra, tea: TeaAlgebra, image_of):
    """Shared isomorphism verdict: ``image_of(i)`` gives the Tea pair of the
    i-th source element."""
    pos = {p: i for i, p in enumerate(tea.pairs)}
    img = []
    for x in range(source.n):
        pair = image_of(x)
        if pair not in pos:
            return IsoResult(
                False, (), f"image of {source.names[x]!r} is outside the carrier"
            )
        img.append(pos[pair])
    if len(set(img)) != source.n or len(tea.pairs) != source.n:
        return IsoResult(False, (), "mapping is not a bijection")
    A = tea.algebra
    if img[source.zero] != A.zero or img[source.unit] != A.unit:
        return IsoResult(False, (), "zero or unit not preserved")
    for x in range(source.n):
        for y in range(source.n):
            v = source.sum(x, y)
            w = A.sum(img[x], img[y])
            if (v is None) != (w is None):
                return IsoResult(
                    False,
                    (),
                    f"definedness mismatch at ({source.names[x]}, {source.names[y]})",
                )
            if v is not None and img[v] != w:
                return IsoResult(
                    False,
                    (),
                    f"value mismatch at ({source.names[x]}, {source.names[y]})",
                )
    rows = tuple(
        (source.names[x], A.names[img[x]]) for x in range(source.n)
    )
    return IsoResult(True, rows)


def verify_iso(E: EffectAlgebra, tea: TeaAlgebra) -> IsoResult:
    """Check that phi is an isomorphism from E onto the reconstruction."""
    t = tea.triple
    sh_pos = {g: i for i, g in enumerate(t.sharp_in_E)}
    me_pos = {g: i for i, g in enumerate(t.meager_in_E)}

    def image_of(x):
        xs, xm = phi(E, x)
        if xs not in sh_pos or xm not in me_pos:
            return ("?", "?")
        return (sh_pos[xs], me_pos[xm])

    return _check_iso(E, tea, image_of)


def build_tea_restricted(E: EffectAlgebra) -> TeaAlgebra:
    """The reconstruction cut down to the compatibility center.

    Carrier: pairs (c, m) with c central and m a meager member of B(E) lying
    below the orthosupplement of c; the sum is the restriction of the full
    pair sum.  Validated like the full construction.
    """
    t = extract_triple(E)
    c_members = set(center(E).members)
    b_members = set(compatibility_center(E))
    pairs = [
        (s, m)
        for s in range(t.sharp.n)
        for m in range(t.meager.n)
        if t.sharp_in_E[s] in c_members
        and t.meager_in_E[m] in b_members
        and (t.h[t.sharp.complement_of(s)] >> m) & 1
    ]
    pos = {p: i for i, p in enumerate(pairs)}
    n = len(pairs)
    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for i, p in enumerate(pairs):
        for j, q in enumerate(pairs):
            if j < i:
                continue
            r = _tea_sum(t, p, q)
            if r is not None:
                if r not in pos:
                    raise TheoremViolationError(
                        f"restricted pair sum {r} escaped the restricted carrier"
                    )
                arr[i, j] = arr[j, i] = pos[r]
    names = [f"({t.sharp.names[s]},{t.meager.names[m]})" for s, m in pairs]
    zero_pair = (t.sharp.zero, t.meager.zero)
    unit_pair = (t.sharp.unit, t.meager.zero)
    table = SumTable(names, pos[zero_pair], pos[unit_pair], arr)
    try:
        alg = validate(table)
    except ValidationError as exc:
        raise TheoremViolationError(
            f"restricted pair table is not an effect algebra: {exc}"
        ) from exc
    return TeaAlgebra(alg, tuple(pairs), t)


def verify_iso_restricted(E: EffectAlgebra, tea: TeaAlgebra) -> IsoResult:
    """Check that phi restricted to B(E) is an isomorphism onto the
    restricted reconstruction."""
    t = tea.triple
    b_alg, b_map = restrict(E, compatibility_center(E))
    sh_pos = {g: i for i, g in enumerate(t.sharp_in_E)}
    me_pos = {g: i for i, g in enumerate(t.meager_in_E)}

    def image_of(i):
        xs, xm = phi(E, b_map[i])
        if xs not in sh_pos or xm not in me_pos:
            return ("?", "?")
        return (sh_pos[xs], me_pos[xm])

    return _check_iso(b_alg, tea, image_of)


def existence_lemma_holds(E: EffectAlgebra, t: Triple):
    """Cross-check: for meager x, y the ambient sum exists iff the triple-side
    three-part condition holds, with matching values.  Returns a witness pair
    on failure, else None."""
    for xi, gx in enumerate(t.meager_in_E):
        for yi, gy in enumerate(t.meager_in_E):
            s = map_S(t, xi, yi)
            triple_defined = False
            triple_value = None
            if s is not None:
                rx = t.meager.ominus(xi, map_pi(t, s, xi))
                ry = t.meager.ominus(yi, map_pi(t, s, yi))
                zm = t.meager.sum(rx, ry) if rx is not None and ry is not None else None
                if zm is not None and (t.h[t.sharp.complement_of(s)] >> zm) & 1:
                    triple_defined = True
                    triple_value = (s, zm)
            v = E.sum(gx, gy)
            if (v is not None) != triple_defined:
                return (gx, gy)
            if v is not None:
                zs_e = t.sharp_in_E[triple_value[0]]
                zm_e = t.meager_in_E[triple_value[1]]
                if E.sum(zs_e, zm_e) != v:
                    return (gx, gy)
    return None
