"""Standard constructions, exhaustive small enumeration, isomorphism testing.

Constructors: truncated chains, finite Boolean algebras, horizontal sums of
squares (the classic MO family), direct products and horizontal sums of
arbitrary built algebras.  The enumerator completes partial sum tables by
backtracking with axiom pruning and emits one representative per isomorphism
class in a deterministic canonical order, which makes its output usable as a
regression snapshot and as a brute-force oracle for the rest of the suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import UNDEFINED, EffectAlgebra, SumTable, check_axioms, validate

_ATOM_LETTERS = "pqrstuvwxy"

#: specs for the standard verification population (~50 instances, all <= 64
#: elements); labels are in the surface grammar accepted by parse_genspec.
SUITE_SPECS = (
    *(f"chain:{n}" for n in range(2, 17)),
    *(f"boolean:{k}" for k in range(1, 5)),
    *(f"mo:{n}" for n in range(1, 4)),
    "product(chain:3,chain:2)",
    "product(chain:3,chain:3)",
    "product(chain:4,chain:3)",
    "product(chain:4,chain:4)",
    "product(chain:5,chain:4)",
    "product(chain:6,chain:6)",
    "product(chain:8,chain:8)",
    "product(chain:16,chain:4)",
    "product(chain:16,chain:2)",
    "product(chain:2,chain:2,chain:2)",
    "product(chain:3,chain:3,chain:3)",
    "product(chain:4,chain:3,chain:2)",
    "product(boolean:2,chain:3)",
    "product(boolean:2,boolean:2)",
    "product(mo:2,chain:2)",
    "product(mo:2,mo:2)",
    "product(hsum(chain:3,chain:3),chain:3)",
    "hsum(chain:3,chain:3)",
    "hsum(chain:4,chain:3)",
    "hsum(chain:4,chain:4)",
    "hsum(chain:5,chain:5)",
    "hsum(boolean:2,chain:3)",
    "hsum(boolean:3,chain:4)",
    "hsum(chain:3,chain:3,chain:3)",
    "hsum(chain:3,chain:3,chain:3,chain:3)",
    "hsum(boolean:3,boolean:3)",
    "hsum(product(chain:3,chain:2),chain:4)",
    "hsum(chain:16,chain:16)",
    "hsum(boolean:4,chain:6)",
    "hsum(product(chain:4,chain:4),boolean:2)",
)


class GenSpecError(ValueError):
    """Malformed construction spec."""


@dataclass(frozen=True)
class GenSpec:
    """Constructor name with integer or nested-spec arguments."""

    kind: str
    args: tuple

    def __post_init__(self):
        if self.kind in ("chain", "boolean", "mo"):
            if len(self.args) != 1 or not isinstance(self.args[0], int):
                raise GenSpecError(f"{self.kind} takes one integer argument")
            low = 2 if self.kind == "chain" else 1
            if self.args[0] < low:
                raise GenSpecError(f"{self.kind} argument must be >= {low}")
        elif self.kind in ("product", "hsum"):
            if len(self.args) < 2:
                raise GenSpecError(f"{self.kind} needs arity >= 2")
            if not all(isinstance(a, GenSpec) for a in self.args):
                raise GenSpecError(f"{self.kind} arguments must be specs")
        else:
            raise GenSpecError(f"unknown constructor {self.kind!r}")

    def __str__(self):
        if self.kind in ("chain", "boolean", "mo"):
            return f"{self.kind}:{self.args[0]}"
        return f"{self.kind}({','.join(str(a) for a in self.args)})"


def parse_genspec(text: str) -> GenSpec:
    """Parse the surface grammar: ``chain:3``, ``boolean:2``, ``mo:2``,
    ``product(<spec>,<spec>,...)``, ``hsum(<spec>,<spec>,...)``."""
    s = "".join(text.split())

    def parse(i):
        j = i
        while j < len(s) and s[j].isalpha():
            j += 1
        kind = s[i:j]
        if not kind:
            raise GenSpecError(f"expected a constructor name at position {i}")
        if j < len(s) and s[j] == ":":
            j += 1
            k = j
            while k < len(s) and s[k].isdigit():
                k += 1
            if k == j:
                raise GenSpecError(f"expected an integer after ':' at position {j}")
            return GenSpec(kind, (int(s[j:k]),)), k
        if j < len(s) and s[j] == "(":
            args = []
            j += 1
            while True:
                sub, j = parse(j)
                args.append(sub)
                if j >= len(s):
                    raise GenSpecError("unterminated argument list")
                if s[j] == ",":
                    j += 1
                    continue
                if s[j] == ")":
                    return GenSpec(kind, tuple(args)), j + 1
                raise GenSpecError(f"expected ',' or ')' at position {j}")
        raise GenSpecError(f"expected ':' or '(' after {kind!r}")

    spec, end = parse(0)
    if end != len(s):
        raise GenSpecError(f"trailing input at position {end}")
    return spec


def chain(n: int) -> EffectAlgebra:
    """Truncated chain 0 < a < 2a < ... < 1 where sums add multiplicities."""
    if n < 2:
        raise GenSpecError("chain needs at least 2 elements")
    names = ["0"]
    names += ["a"] if n > 2 else []
    names += [f"{k}a" for k in range(2, n - 1)]
    names += ["1"]
    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for i in range(n):
        for j in range(n):
            if i + j <= n - 1:
                arr[i, j] = i + j
    return validate(SumTable(names, 0, n - 1, arr))


def boolean_algebra(k: int) -> EffectAlgebra:
    """Powerset of k atoms with disjoint union as the sum."""
    if not 1 <= k <= len(_ATOM_LETTERS):
        raise GenSpecError(f"boolean supports 1..{len(_ATOM_LETTERS)} atoms")
    subsets = sorted(range(1 << k), key=lambda m: (m.bit_count(), m))
    pos = {m: i for i, m in enumerate(subsets)}
    full = (1 << k) - 1

    def label(m):
        if m == 0:
            return "0"
        if m == full:
            return "1"
        return "".join(_ATOM_LETTERS[i] for i in range(k) if (m >> i) & 1)

    n = len(subsets)
    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for i, mi in enumerate(subsets):
        for j, mj in enumerate(subsets):
            if mi & mj == 0:
                arr[i, j] = pos[mi | mj]
    return validate(SumTable([label(m) for m in subsets], 0, pos[full], arr))


def product(*algebras: EffectAlgebra) -> EffectAlgebra:
    """Direct product: componentwise sums, defined iff every component is."""
    if len(algebras) < 2:
        raise GenSpecError("product needs arity >= 2")
    dims = [A.n for A in algebras]
    combos = list(itertools.product(*(range(d) for d in dims)))
    pos = {c: i for i, c in enumerate(combos)}
    n = len(combos)
    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for i, ci in enumerate(combos):
        for j, cj in enumerate(combos):
            out = []
            for A, x, y in zip(algebras, ci, cj):
                v = A.sum(x, y)
                if v is None:
                    break
                out.append(v)
            else:
                arr[i, j] = pos[tuple(out)]
    names = [
        "(" + ",".join(A.names[x] for A, x in zip(algebras, c)) + ")"
        for c in combos
    ]
    zero = pos[tuple(A.zero for A in algebras)]
    unit = pos[tuple(A.unit for A in algebras)]
    return validate(SumTable(names, zero, unit, arr))


def hsum(*algebras: EffectAlgebra) -> EffectAlgebra:
    """Horizontal sum: identify all zeros and all units, keep each summand's
    sums, and leave every cross-summand sum of nonzero elements undefined."""
    if len(algebras) < 2:
        raise GenSpecError("hsum needs arity >= 2")
    names = ["0"]
    owner = []          # (summand index, local index) per middle element
    gidx = {}           # (summand, local) -> global
    for si, A in enumerate(algebras, start=1):
        for x in range(A.n):
            if x in (A.zero, A.unit):
                continue
            gidx[(si, x)] = len(names)
            owner.append((si, x))
            names.append(f"{A.names[x]}.{si}")
    unit = len(names)
    names.append("1")
    n = len(names)

    def glob(si, x, A):
        if x == A.zero:
            return 0
        if x == A.unit:
            return unit
        return gidx[(si, x)]

    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for g in range(n):
        arr[0, g] = arr[g, 0] = g
    for si, A in enumerate(algebras, start=1):
        for x in range(A.n):
            for y in range(A.n):
                v = A.sum(x, y)
                if v is not None:
                    arr[glob(si, x, A), glob(si, y, A)] = glob(si, v, A)
    return validate(SumTable(names, 0, unit, arr))


def mo(n: int) -> EffectAlgebra:
    """Horizontal sum of n squares: n complementary pairs sharing 0 and 1."""
    if n < 1:
        raise GenSpecError("mo needs at least one square")
    if n == 1:
        return boolean_algebra(2)
    return hsum(*(boolean_algebra(2) for _ in range(n)))


def generate(spec) -> EffectAlgebra:
    """Build the algebra described by a GenSpec or surface-grammar string."""
    if isinstance(spec, str):
        spec = parse_genspec(spec)
    if spec.kind == "chain":
        return chain(spec.args[0])
    if spec.kind == "boolean":
        return boolean_algebra(spec.args[0])
    if spec.kind == "mo":
        return mo(spec.args[0])
    subs = [generate(a) for a in spec.args]
    if spec.kind == "product":
        return product(*subs)
    return hsum(*subs)


def standard_suite():
    """The named verification population: list of (label, algebra)."""
    return [(s, generate(s)) for s in SUITE_SPECS]


def mutate_table(t: SumTable, rng):
    """One random single-cell mutation: any cell, any different content
    (including defining an undefined cell or erasing a defined one).

    Returns (mutated table, (i, j, old, new)).
    """
    i = rng.randrange(t.n)
    j = rng.randrange(t.n)
    current = t.cell(i, j)
    choices = [v for v in range(UNDEFINED, t.n) if v != current]
    v = rng.choice(choices)
    return t.with_cell(i, j, v), (i, j, current, v)


# -- exhaustive enumeration up to isomorphism -------------------------------


def _partial_assoc_violation(T, known, n):
    """Three-valued associativity scan over all triples.

    Returns True as soon as some triple has both sides determined (defined
    value or definitely-undefined) and disagreeing; unknown cells never
    trigger.  Sound for pruning: no completion of a violating partial table
    can satisfy the axiom.
    """
    for x in range(n):
        Tx = T[x]
        Kx = known[x]
        for y in range(n):
            s1 = Tx[y]
            k1 = Kx[y]
            for z in range(n):
                # lhs = (x+y)+z
                if not k1:
                    lhs_known = False
                    lhs = UNDEFINED
                elif s1 == UNDEFINED:
                    lhs_known, lhs = True, UNDEFINED
                elif known[s1][z]:
                    lhs_known, lhs = True, T[s1][z]
                else:
                    lhs_known, lhs = False, UNDEFINED
                if not lhs_known:
                    continue
                # rhs = x+(y+z)
                if not known[y][z]:
                    continue
                s2 = T[y][z]
                if s2 == UNDEFINED:
                    rhs_known, rhs = True, UNDEFINED
                elif known[x][s2]:
                    rhs_known, rhs = True, T[x][s2]
                else:
                    rhs_known, rhs = False, UNDEFINED
                if rhs_known and lhs != rhs:
                    return True
    return False


def _canonical_encoding(T, n):
    """Upper-triangle encoding of the middle block, identity labelling."""
    mids = range(1, n - 1)
    return tuple(T[i][j] for i in mids for j in mids if i <= j)


def _is_canonical(T, n):
    """True iff the table is the lex-least relabelling over middle perms."""
    mids = list(range(1, n - 1))
    base = _canonical_encoding(T, n)
    for perm in itertools.permutations(mids):
        if list(perm) == mids:
            continue
        sigma = {0: 0, n - 1: n - 1}
        sigma.update(dict(zip(mids, perm)))
        inv = {v: k for k, v in sigma.items()}

        def relabel(v):
            return UNDEFINED if v == UNDEFINED else sigma[v]

        enc = tuple(
            relabel(T[inv[i]][inv[j]])
            for i in mids
            for j in mids
            if i <= j
        )
        if enc < base:
            return False
    return True


def _enumerate_order(n):
    zero, unit = 0, n - 1
    names = ["0"] + [f"x{i}" for i in range(1, n - 1)] + ["1"]
    T = [[UNDEFINED] * n for _ in range(n)]
    known = [[True] * n for _ in range(n)]
    for x in range(n):
        T[0][x] = T[x][0] = x
    mids = list(range(1, n - 1))
    cells = [(i, j) for i in mids for j in mids if i <= j]
    for i, j in cells:
        known[i][j] = known[j][i] = False
    comp = [None] * n
    comp[zero], comp[unit] = unit, zero
    row_vals = [set() for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if known[x][y] and T[x][y] != UNDEFINED:
                row_vals[x].add(T[x][y])

    found = []

    def complement_reachable(k):
        pending = [i for i in mids if comp[i] is None]
        if not pending:
            return True
        rest = cells[k:]
        for w in pending:
            ok = any(
                (i == w or j == w)
                and (comp[i if j == w else j] is None or i == j)
                for i, j in rest
            )
            if not ok:
                return False
        return True

    def dfs(k):
        if k == len(cells):
            if any(comp[i] is None for i in mids):
                return
            if not _is_canonical(T, n):
                return
            t = SumTable(names, zero, unit, T)
            if check_axioms(t, fail_fast=True):
                return
            found.append(validate(t))
            return
        if not complement_reachable(k):
            return
        i, j = cells[k]
        allowed = [UNDEFINED] + [
            v for v in range(1, n) if v != i and v != j
        ]
        for v in allowed:
            if v != UNDEFINED:
                if v in row_vals[i] or (i != j and v in row_vals[j]):
                    continue
                if v == unit and (
                    comp[i] is not None or (i != j and comp[j] is not None)
                ):
                    continue
            T[i][j] = T[j][i] = v
            known[i][j] = known[j][i] = True
            if v != UNDEFINED:
                row_vals[i].add(v)
                if i != j:
                    row_vals[j].add(v)
                if v == unit:
                    comp[i] = j
                    comp[j] = i
            if not _partial_assoc_violation(T, known, n):
                dfs(k + 1)
            if v != UNDEFINED:
                row_vals[i].discard(v)
                if i != j:
                    row_vals[j].discard(v)
                if v == unit:
                    comp[i] = comp[j] = None
            T[i][j] = T[j][i] = UNDEFINED
            known[i][j] = known[j][i] = False

    dfs(0)
    return found


def enumerate_small(max_order: int, cap: int = 7):
    """All effect algebras with 2..max_order elements, one representative per
    isomorphism class, in a deterministic canonical order.

    Non-lattice instances are included (the validator and order code must
    handle them); callers filter by latticehood.  The hard cap keeps the
    backtracking search at desk scale.
    """
    if max_order > cap:
        raise ValueError(f"max_order {max_order} exceeds the cap {cap}")
    for n in range(2, max_order + 1):
        yield from _enumerate_order(n)


# -- isomorphism -------------------------------------------------------------


def _signatures(E: EffectAlgebra):
    sigs = []
    for x in range(E.n):
        ordx = 0 if x == E.zero else E.isotropic_index(x)
        deg = int((E.table[x] != UNDEFINED).sum())
        below = int(E.leq[:, x].sum())
        above = int(E.leq[x].sum())
        selfc = E.comp[x] == x
        sigs.append((x == E.zero, x == E.unit, ordx, deg, below, above, bool(selfc)))
    return sigs


def are_isomorphic(E1: EffectAlgebra, E2: EffectAlgebra):
    """Permutation search fixing zero and unit, pruned by per-element
    invariants; returns (True, mapping) with a sum-preserving bijection or
    (False, None)."""
    if E1.n != E2.n:
        return False, None
    s1 = _signatures(E1)
    s2 = _signatures(E2)
    if sorted(s1) != sorted(s2):
        return False, None
    by_sig = {}
    for y, sig in enumerate(s2):
        by_sig.setdefault(sig, []).append(y)
    order = sorted(range(E1.n), key=lambda x: (len(by_sig[s1[x]]), x))
    mapping = [None] * E1.n
    used = [False] * E2.n

    def consistent(x, y):
        for w in range(E1.n):
            mw = mapping[w]
            if mw is None:
                continue
            for a, b, am, bm in ((x, w, y, mw), (w, x, mw, y)):
                v1 = E1.table[a, b]
                v2 = E2.table[am, bm]
                if (v1 == UNDEFINED) != (v2 == UNDEFINED):
                    return False
                if v1 != UNDEFINED:
                    mv = mapping[v1]
                    if mv is not None and mv != v2:
                        return False
        v1 = E1.table[x, x]
        v2 = E2.table[y, y]
        if (v1 == UNDEFINED) != (v2 == UNDEFINED):
            return False
        if v1 != UNDEFINED:
            mv = mapping[v1]
            if mv is not None and mv != v2:
                return False
        return True

    def dfs(k):
        if k == len(order):
            return True
        x = order[k]
        for y in by_sig[s1[x]]:
            if used[y]:
                continue
            if (x == E1.zero) != (y == E2.zero) or (x == E1.unit) != (y == E2.unit):
                continue
            if not consistent(x, y):
                continue
            mapping[x] = y
            used[y] = True
            if dfs(k + 1):
                return True
            mapping[x] = None
            used[y] = False
        return False

    if dfs(0):
        full = [
            (E1.names[x], E2.names[mapping[x]]) for x in range(E1.n)
        ]
        # final exactness sweep over every pair
        for x in range(E1.n):
            for y in range(E1.n):
                v1 = E1.table[x, y]
                v2 = E2.table[mapping[x], mapping[y]]
                if (v1 == UNDEFINED) != (v2 == UNDEFINED):
                    return False, None
                if v1 != UNDEFINED and mapping[v1] != v2:
                    return False, None
        return True, tuple(full)
    return False, None
