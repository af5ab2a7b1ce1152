"""Executable law registry.

Each law is a quantified identity over a lattice effect algebra; a check
instantiates the quantifiers exhaustively (within configured bounds for
family/tuple sizes) and reports pass/fail with a concrete witness on failure.
A failure on a validated instance is build-stopping for the test suite: these
identities hold on every finite lattice effect algebra.

Laws are data: the registry maps stable ids L1..L17 to statements and
checkers so the command line can list and select them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import UNDEFINED, EffectAlgebra
from .lattice import compatibility_matrix, order_structure, require_lattice
from .substructures import (
    blocks,
    center,
    compatibility_center,
    is_bifull,
    is_sup_bifull,
    meager_elements,
    restrict,
    sharp_elements,
)


@dataclass(frozen=True)
class LawConfig:
    """Quantifier bounds.  ``family_bound`` caps join-family sizes,
    ``tuple_bound`` caps orthogonality tuples, ``mult_bound`` optionally caps
    multiplicity ranges (None = up to each isotropic index), and
    ``bifull_cutoff`` bounds the exact subset oracle."""

    family_bound: int = 3
    tuple_bound: int = 3
    mult_bound: int | None = None
    bifull_cutoff: int = 20


@dataclass(frozen=True)
class LawReport:
    law_id: str
    statement: str
    instances: int
    verdict: str               # "pass" | "fail" | "skipped"
    witness: tuple | None = None
    bounded: bool = False
    note: str = ""

    @property
    def ok(self):
        return self.verdict == "pass"


@dataclass(frozen=True)
class Law:
    law_id: str
    statement: str
    checker: object = field(compare=False)


def _families(n, bound):
    for size in range(1, bound + 1):
        yield from itertools.combinations(range(n), size)


def _multiples(E):
    """mult[x] = [x, 2x, ..., ord(x)*x] for nonzero x; [] for zero."""
    out = []
    for x in range(E.n):
        if x == E.zero:
            out.append([])
            continue
        vals = []
        acc = x
        while acc is not None:
            vals.append(acc)
            acc = E.sum(acc, x)
        out.append(vals)
    return out


def _fold_join(join, items):
    it = iter(items)
    acc = next(it)
    for x in it:
        acc = join[acc, x]
    return acc


def _sharp_cover_table(E):
    """Smallest sharp element above each element, by direct scan."""
    os = order_structure(E)
    sharp = sharp_elements(E).members
    out = np.empty(E.n, dtype=np.int16)
    for x in range(E.n):
        acc = E.unit
        for s in sharp:
            if E.leq[x, s]:
                acc = int(os.meet[acc, s])
        out[x] = acc
    return out


# -- individual checkers -----------------------------------------------------


def _check_l1(E, cfg):
    os = order_structure(E)
    C = compatibility_matrix(E)
    join, meet = os.join, os.meet
    count = 0
    for A in _families(E.n, cfg.family_bound):
        jA = _fold_join(join, A)
        cand = C[A[0]].copy()
        for a in A[1:]:
            cand &= C[a]
        bs = np.flatnonzero(cand)
        if len(bs) == 0:
            continue
        count += len(bs)
        if not C[bs, jA].all():
            b = int(bs[~C[bs, jA]][0])
            return count, (tuple(A), b, "not compatible with the join")
        folded = meet[bs, A[0]]
        for a in A[1:]:
            folded = join[folded, meet[bs, a]]
        target = meet[bs, jA]
        if not np.array_equal(folded, target):
            b = int(bs[folded != target][0])
            return count, (tuple(A), b, "meets do not distribute over the join")
    return count, None


def _check_l2(E, cfg):
    os = order_structure(E)
    meet = os.meet
    leq = E.leq
    comp = E.comp
    mult = _multiples(E)
    if cfg.mult_bound is not None:
        mult = [m[: cfg.mult_bound] for m in mult]
    count = 0
    for x in range(E.n):
        if x == E.zero:
            continue
        for y in range(x, E.n):
            if y == E.zero:
                continue
            lhs = meet[x, y] == E.zero and leq[x, comp[y]]
            for kx in mult[x]:
                for ly in mult[y]:
                    rhs = (
                        meet[kx, ly] == E.zero
                        and leq[kx, comp[ly]]
                    )
                    count += 1
                    if bool(rhs) != bool(lhs):
                        return count, (x, y, kx, ly)
    return count, None


def _check_l3(E, cfg):
    os = order_structure(E)
    join = os.join
    om = E.ominus_table
    leq = E.leq
    count = 0
    for B in _families(E.n, cfg.family_bound):
        jB = _fold_join(join, B)
        cand = leq[:, B[0]].copy()
        for b in B[1:]:
            cand &= leq[:, b]
        az = np.flatnonzero(cand)
        if len(az) == 0:
            continue
        count += len(az)
        lhs = om[jB, az]
        folded = om[B[0], az]
        for b in B[1:]:
            folded = join[folded, om[b, az]]
        if np.any(lhs == UNDEFINED) or not np.array_equal(lhs, folded):
            a = int(az[lhs != folded][0]) if np.any(lhs != folded) else int(az[0])
            return count, (tuple(B), a)
    return count, None


def _check_l4(E, cfg):
    os = order_structure(E)
    join = os.join
    T = E.table
    D = T != UNDEFINED
    count = 0
    for A in _families(E.n, cfg.family_bound):
        jA = _fold_join(join, A)
        cand = D[:, A[0]].copy()
        for a in A[1:]:
            cand &= D[:, a]
        bs = np.flatnonzero(cand)
        if len(bs) == 0:
            continue
        count += len(bs)
        folded = T[bs, A[0]]
        for a in A[1:]:
            folded = join[folded, T[bs, a]]
        target = T[bs, jA]
        if np.any(target == UNDEFINED) or not np.array_equal(folded, target):
            bad = np.flatnonzero((target == UNDEFINED) | (folded != target))
            return count, (tuple(A), int(bs[bad[0]]))
    return count, None


def _check_l5(E, cfg):
    os = order_structure(E)
    meet = os.meet
    T = E.table
    xs, ys = np.nonzero(T != UNDEFINED)
    sums = T[xs, ys]
    count = 0
    for z in center(E).members:
        lhs = meet[sums, z]
        rhs = T[meet[xs, z], meet[ys, z]]
        count += len(xs)
        if np.any(rhs == UNDEFINED) or not np.array_equal(lhs, rhs):
            bad = np.flatnonzero((rhs == UNDEFINED) | (lhs != rhs))[0]
            return count, (int(xs[bad]), int(ys[bad]), int(z))
    return count, None


def _check_l6(E, cfg):
    os = order_structure(E)
    join, meet = os.join, os.meet
    T = E.table
    D = T != UNDEFINED
    count = 0
    for A in _families(E.n, cfg.family_bound):
        jA = _fold_join(join, A)
        cand = D[:, A[0]].copy()
        for a in A[1:]:
            cand &= D[:, a]
        bs = np.flatnonzero(cand)
        if len(bs) == 0:
            continue
        count += len(bs)
        lhs = T[bs, jA]
        if np.any(lhs == UNDEFINED):
            return count, (tuple(A), int(bs[np.flatnonzero(lhs == UNDEFINED)[0]]),
                           "sum with the join does not exist")
        outer = join[bs, jA]
        folded = meet[bs, A[0]]
        for a in A[1:]:
            folded = join[folded, meet[bs, a]]
        rhs = T[outer, folded]
        if np.any(rhs == UNDEFINED) or not np.array_equal(lhs, rhs):
            bad = np.flatnonzero((rhs == UNDEFINED) | (lhs != rhs))[0]
            return count, (tuple(A), int(bs[bad]))
    return count, None


def _greedy_atom_decomposition(E, x):
    """Peel maximal atom multiples off x until nothing remains."""
    os = order_structure(E)
    om = E.ominus_table
    pieces = []
    remaining = x
    while remaining != E.zero:
        a = next(a for a in E.atoms() if E.leq[a, remaining])
        k = 0
        acc = E.zero
        while True:
            nxt = E.sum(acc, a)
            if nxt is None or not E.leq[nxt, remaining]:
                break
            acc = nxt
            k += 1
        pieces.append((a, k, acc))
        remaining = int(om[remaining, acc])
    return pieces


def _check_l7(E, cfg):
    os = order_structure(E)
    sharp = set(sharp_elements(E).members)
    count = 0
    for x in range(E.n):
        if x == E.zero:
            continue
        pieces = _greedy_atom_decomposition(E, x)
        count += 1
        ats = [a for a, _, _ in pieces]
        if len(set(ats)) != len(ats):
            return count, (x, "repeated atom in decomposition")
        total = E.ortho_sum(a for a, k, _ in pieces for _ in range(k))
        joined = E.zero
        for _, _, m in pieces:
            joined = int(os.join[joined, m])
        if total != x or joined != x:
            return count, (x, "sum or join does not reassemble the element")
        maximal = all(k == E.isotropic_index(a) for a, k, _ in pieces)
        if (x in sharp) != maximal:
            return count, (x, "sharpness does not match maximal multiplicities")
    return count, None


def _check_l8(E, cfg):
    bs = blocks(E)
    all_elems = set(range(E.n))
    covered = set()
    for blk in bs.blocks:
        covered |= set(blk)
    if covered != all_elems:
        return len(bs.blocks), (tuple(sorted(all_elems - covered)), "blocks do not cover")
    b_set = set(compatibility_center(E))
    if set(bs.intersection) != b_set:
        return len(bs.blocks), ("block intersection is not the compatibility center",)
    sharp_e = set(sharp_elements(E).members)
    c_e = set(center(E).members)
    sh_parts = []
    c_parts = []
    for blk in bs.blocks:
        M, emb = restrict(E, blk)
        sh_parts.append({emb[i] for i in sharp_elements(M).members})
        c_parts.append({emb[i] for i in center(M).members})
    inter_c = set.intersection(*c_parts)
    inter_sh = set.intersection(*sh_parts)
    union_c = set.union(*c_parts)
    union_sh = set.union(*sh_parts)
    if not (c_e == inter_c == inter_sh):
        return len(bs.blocks), ("center is not the intersection of block centers",)
    if not (sharp_e == union_c == union_sh):
        return len(bs.blocks), ("sharp set is not the union of block centers",)
    return len(bs.blocks), None


def _l9_rhs(E, os, ms):
    """Sum/partition conditions for a tuple of multiples ``ms``."""
    meet = os.meet
    join = os.join
    comp = E.comp
    leq = E.leq
    total = E.ortho_sum(ms)
    if total is None:
        return False
    joined = ms[0]
    for m in ms[1:]:
        joined = int(join[joined, m])
    if total != joined:
        return False
    idx = range(len(ms))
    for r in range(1, len(ms)):
        for I in itertools.combinations(idx, r):
            J = [i for i in idx if i not in I]
            sI = E.ortho_sum(ms[i] for i in I)
            sJ = E.ortho_sum(ms[j] for j in J)
            if sI is None or sJ is None:
                return False
            if meet[sI, sJ] != E.zero or not leq[sJ, comp[sI]]:
                return False
    return True


def _check_l9(E, cfg):
    os = order_structure(E)
    meet = os.meet
    leq = E.leq
    comp = E.comp
    mult = _multiples(E)
    if cfg.mult_bound is not None:
        mult = [m[: cfg.mult_bound] for m in mult]
    nonzero = [x for x in range(E.n) if x != E.zero]
    count = 0
    orth = set()
    for x, y in itertools.combinations_with_replacement(nonzero, 2):
        lhs = meet[x, y] == E.zero and leq[x, comp[y]]
        if lhs and x != y:
            orth.add((x, y))
        for kx in mult[x]:
            for ly in mult[y]:
                count += 1
                if _l9_rhs(E, os, (kx, ly)) != lhs:
                    return count, (x, y, kx, ly)
    if cfg.tuple_bound >= 3:
        # tuples with a non-orthogonal pair are settled by the pair sweep:
        # the singleton-partition conditions of the tuple imply the pair
        # conditions, so only pairwise-orthogonal tuples need direct checks
        for xs in itertools.combinations(nonzero, 3):
            if not all(
                (a, b) in orth for a, b in itertools.combinations(xs, 2)
            ):
                continue
            for ms in itertools.product(*(mult[x] for x in xs)):
                count += 1
                if not _l9_rhs(E, os, ms):
                    return count, (xs, ms)
    return count, None


def _check_l10(E, cfg):
    os = order_structure(E)
    C = compatibility_matrix(E)
    cover = _sharp_cover_table(E)
    sharp = set(sharp_elements(E).members)
    join = os.join
    ats = E.atoms()
    count = 0
    for size in range(1, cfg.tuple_bound + 1):
        for As in itertools.combinations(ats, size):
            if not all(C[a, b] for a, b in itertools.combinations(As, 2)):
                continue
            ords = [E.isotropic_index(a) for a in As]
            fulls = [E.multiple(a, o) for a, o in zip(As, ords)]
            m_full = E.ortho_sum(a for a, o in zip(As, ords) for _ in range(o))
            if m_full is None or m_full not in sharp:
                return count, (As, "full multiples do not sum to a sharp element")
            jf = _fold_join(join, fulls)
            if jf != m_full:
                return count, (As, "full multiple sum is not the join")
            ranges = [
                range(1, (o if cfg.mult_bound is None else min(o, cfg.mult_bound)) + 1)
                for o in ords
            ]
            for ks in itertools.product(*ranges):
                count += 1
                s = E.ortho_sum(a for a, k in zip(As, ks) for _ in range(k))
                if s is None:
                    return count, (As, ks, "sum of bounded multiples missing")
                parts = [E.multiple(a, k) for a, k in zip(As, ks)]
                if s != _fold_join(join, parts):
                    return count, (As, ks, "sum differs from join")
                if cover[s] != m_full:
                    return count, (As, ks, "sharp cover is not the full-multiple sum")
    return count, None


def _sup_bifull_report(E, D, cfg):
    """(ok, witness, bounded) with a size-bounded fallback past the cutoff."""
    try:
        res = is_sup_bifull(E, D, cutoff=cfg.bifull_cutoff)
        return res.ok, res.witness, False
    except ValueError:
        pass
    os = order_structure(E)
    up = os.up_masks
    dmask = 0
    for d in D:
        dmask |= 1 << int(d)
    full = (1 << E.n) - 1

    def least(mask):
        m = mask
        while m:
            low = m & -m
            z = low.bit_length() - 1
            if mask & ~up[z] == 0:
                return z
            m ^= low
        return None

    for size in range(1, cfg.family_bound + 1):
        for xs in itertools.combinations(sorted(D), size):
            ub = full
            for x in xs:
                ub &= up[x]
            j_e = least(ub)
            j_d = least(ub & dmask)
            if (j_e is None) != (j_d is None) or j_e != j_d:
                return False, tuple(xs), True
    return True, None, True


def _check_l11(E, cfg):
    os = order_structure(E)
    count = 0
    bounded = False
    for blk in blocks(E).blocks:
        M, emb = restrict(E, blk)
        osM = order_structure(M)
        mea = meager_elements(M)
        coverM = _sharp_cover_table(M)
        for x in mea.members:
            for y in range(M.n):
                count += 1
                if osM.meet[x, y] == M.zero and osM.meet[coverM[x], y] != M.zero:
                    return count, (tuple(blk), "hat does not preserve disjointness",
                                   emb[x], emb[y]), bounded
        ok, wit, bnd = _sup_bifull_report(M, mea.members, cfg)
        bounded = bounded or bnd
        if not ok:
            return count, (tuple(blk), "meager set is not join-bifull", wit), bounded
        mset = set(mea.members)
        for x in mea.members:
            for y in range(M.n):
                count += 1
                if M.leq[y, x] and y not in mset:
                    return count, (tuple(blk), "meager set is not a down-set"), bounded
            for y in mea.members:
                if osM.join[x, y] not in mset:
                    return count, (tuple(blk), "meager set is not join-closed"), bounded
    return count, None, bounded


def _check_l12(E, cfg):
    mea = set(meager_elements(E).members)
    D = sorted(mea & set(compatibility_center(E)))
    ok, wit, bounded = _sup_bifull_report(E, D, cfg)
    if not ok:
        return len(D), (tuple(D), wit), bounded
    return len(D), None, bounded


def _check_l13(E, cfg):
    meaE = set(meager_elements(E).members)
    count = 0
    for blk in blocks(E).blocks:
        M, emb = restrict(E, blk)
        meaM = {emb[i] for i in meager_elements(M).members}
        count += len(meaM)
        if not meaM <= meaE:
            return count, (tuple(blk), tuple(sorted(meaM - meaE)))
    return count, None


def _check_l14(E, cfg):
    C = compatibility_matrix(E)
    masks = []
    for blk in blocks(E).blocks:
        m = 0
        for i in blk:
            m |= 1 << i
        masks.append(m)
    count = 0
    for x in range(E.n):
        for y in range(x, E.n):
            if not C[x, y]:
                continue
            count += 1
            want = (1 << x) | (1 << y)
            if not any(m & want == want for m in masks):
                return count, (x, y)
    return count, None


def _sub_poset_atomic(E, D):
    """Every nonzero member of D dominates a minimal nonzero member of D."""
    dd = sorted(int(d) for d in D)
    nz = [d for d in dd if d != E.zero]
    ats = [
        d for d in nz
        if not any(E.leq[e, d] and e != d for e in nz)
    ]
    return all(any(E.leq[a, d] for a in ats) for d in nz)


def _check_l15(E, cfg):
    B = compatibility_center(E)
    Cm = center(E).members
    rb = is_bifull(E, B, cutoff=cfg.bifull_cutoff)
    rc = is_bifull(E, Cm, cutoff=cfg.bifull_cutoff)
    if rb.ok != rc.ok:
        return 2, (rb.ok, rc.ok)
    return 2, None


def _check_l16(E, cfg):
    B = compatibility_center(E)
    Cm = center(E).members
    ab = _sub_poset_atomic(E, B)
    ac = _sub_poset_atomic(E, Cm)
    if ab != ac:
        return 2, (ab, ac)
    return 2, None


def _check_l17(E, cfg):
    B = compatibility_center(E)
    ok = _sub_poset_atomic(E, B) and is_bifull(E, B, cutoff=cfg.bifull_cutoff).ok
    if not ok:
        return 1, ("compatibility center not atomic-and-bifull",)
    return 1, None


_PLAIN_CHECKERS = {
    "L1": _check_l1,
    "L2": _check_l2,
    "L3": _check_l3,
    "L4": _check_l4,
    "L5": _check_l5,
    "L6": _check_l6,
    "L7": _check_l7,
    "L8": _check_l8,
    "L9": _check_l9,
    "L10": _check_l10,
    "L13": _check_l13,
    "L14": _check_l14,
    "L15": _check_l15,
    "L16": _check_l16,
    "L17": _check_l17,
}

_BOUNDED_CHECKERS = {
    "L11": _check_l11,
    "L12": _check_l12,
}

_STATEMENTS = {
    "L1": "an element compatible with every member of a family is compatible "
          "with the family's join, and its meets distribute over that join",
    "L2": "x/\\y=0 and x<=y' holds iff kx/\\ly=0 and kx<=(ly)' for all defined multiples",
    "L3": "(\\/ b_i) - a = \\/ (b_i - a) when a lies below every b_i",
    "L4": "\\/ {b+a : a in A} = b + \\/A when every b+a is defined",
    "L5": "(x+y)/\\z = (x/\\z)+(y/\\z) for central z",
    "L6": "b + \\/A = (b \\/ \\/A) + \\/{b/\\a : a in A} when every b+a is defined",
    "L7": "every nonzero element is an orthogonal sum of distinct atom multiples "
          "equal to their join, and is sharp iff every multiplicity is maximal",
    "L8": "blocks cover the carrier, intersect to the compatibility center, and "
          "their sharp/central parts tile the sharp set and the center",
    "L9": "pairwise disjoint-and-orthogonal tuples are exactly those whose "
          "multiples sum orthogonally, agree with joins, and split across partitions",
    "L10": "bounded multiples of pairwise compatible distinct atoms sum to their "
           "join, and the full multiples give the smallest sharp cover",
    "L11": "per block: sharp covers preserve disjointness, and the meager set is "
           "join-bifull, a down-set, and join-closed",
    "L12": "the meager part of the compatibility center is a join-bifull sub-poset",
    "L13": "each block's meager set is contained in the meager set of the whole algebra",
    "L14": "every compatible pair lies in a common block",
    "L15": "the compatibility center is bifull iff the center is bifull",
    "L16": "the compatibility center is atomic iff the center is atomic",
    "L17": "a finite center forces the compatibility center to be atomic and bifull",
}

LAW_IDS = tuple(f"L{i}" for i in range(1, 18))

LAWS = {
    law_id: Law(law_id, _STATEMENTS[law_id],
                _PLAIN_CHECKERS.get(law_id) or _BOUNDED_CHECKERS[law_id])
    for law_id in LAW_IDS
}


def check_law(E: EffectAlgebra, law_id: str, config: LawConfig | None = None) -> LawReport:
    """Run one law; requires a lattice effect algebra."""
    if law_id not in LAWS:
        raise KeyError(f"unknown law id {law_id!r}")
    require_lattice(E)
    cfg = config or LawConfig()
    law = LAWS[law_id]
    if law_id in _BOUNDED_CHECKERS:
        count, witness, bounded = law.checker(E, cfg)
        note = "subset scan bounded by family size" if bounded else ""
        if witness is not None:
            return LawReport(law_id, law.statement, count, "fail", witness, bounded, note)
        return LawReport(law_id, law.statement, count, "pass", None, bounded, note)
    count, witness = law.checker(E, cfg)
    if witness is not None:
        return LawReport(law_id, law.statement, count, "fail", witness)
    return LawReport(law_id, law.statement, count, "pass")


def check_all(E: EffectAlgebra, config: LawConfig | None = None):
    """Run the whole registry in id order."""
    return [check_law(E, law_id, config) for law_id in LAW_IDS]
