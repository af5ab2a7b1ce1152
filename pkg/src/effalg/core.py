"""Finite partial algebras (E; +, 0, 1): tables, axiom checking, derived order.

The ground object is a partial Cayley table over named elements.  ``validate``
checks the four defining axioms exhaustively and, on success, returns an
:class:`EffectAlgebra` with the orthosupplement map, the derived order and the
partial difference already populated.  Everything downstream treats a
validated algebra as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: sentinel for "x + y is not defined" in all integer tables.
UNDEFINED = -1

#: cap on materialized witnesses per axiom (checking is still exhaustive).
_WITNESS_CAP = 1000


class StructureError(ValueError):
    """Malformed table: bad shape, bad index, duplicate names, zero == unit."""


class InternalInconsistencyError(RuntimeError):
    """Derived structure contradicts itself.  Indicates a bug, not bad input."""


class TheoremViolationError(RuntimeError):
    """A property that must hold on every validated instance failed to hold."""


@dataclass(frozen=True)
class AxiomViolation:
    """One violated axiom instance with a concrete witness tuple (names)."""

    axiom: str          # "Ei" | "Eii" | "Eiii" | "Eiv"
    witness: tuple
    message: str

    def __str__(self) -> str:
        return f"({self.axiom}) {self.message}"


class ValidationError(Exception):
    """Raised by :func:`validate`; carries the complete violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:4])
        more = len(self.violations) - 4
        if more > 0:
            head += f" (+{more} more)"
        super().__init__(f"{len(self.violations)} axiom violation(s): {head}")

    def axioms(self):
        """Sorted set of axiom labels that were violated."""
        return sorted({v.axiom for v in self.violations})


class SumTable:
    """A partial sum table: ``n`` named elements, zero/unit indices, n x n cells.

    Cells hold element indices or :data:`UNDEFINED`.  The table is stored in
    full; no symmetry is assumed or enforced here (the axiom checker reports
    asymmetric cells as (Ei) violations, and the text-format parser is the
    place where one-sided entries get symmetrized).
    """

    __slots__ = ("names", "zero", "unit", "table", "n")

    def __init__(self, names, zero, unit, table):
        names = tuple(str(s) for s in names)
        n = len(names)
        if n < 2:
            raise StructureError("need at least two elements (zero and unit)")
        if len(set(names)) != n:
            raise StructureError("element names must be distinct")
        if any(not s for s in names):
            raise StructureError("element names must be non-empty")
        for label, idx in (("zero", zero), ("unit", unit)):
            if not isinstance(idx, (int, np.integer)) or not 0 <= idx < n:
                raise StructureError(f"{label} index {idx!r} out of range")
        if zero == unit:
            raise StructureError("zero and unit must be distinct elements")
        arr = np.array(table, dtype=np.int16)
        if arr.shape != (n, n):
            raise StructureError(f"table must be {n}x{n}, got {arr.shape}")
        if arr.min() < UNDEFINED or arr.max() >= n:
            bad = int(arr[(arr < UNDEFINED) | (arr >= n)][0])
            raise StructureError(f"cell value {bad} is not an element index")
        arr.setflags(write=False)
        self.names = names
        self.zero = int(zero)
        self.unit = int(unit)
        self.table = arr
        self.n = n

    @classmethod
    def from_triples(cls, names, zero, unit, triples):
        """Build a table from ``(x, y, z)`` index triples, symmetrizing.

        Conflicting assignments to the same unordered cell raise
        :class:`StructureError`.
        """
        n = len(names)
        arr = np.full((n, n), UNDEFINED, dtype=np.int16)
        for x, y, z in triples:
            for i, j in ((x, y), (y, x)):
                if arr[i, j] != UNDEFINED and arr[i, j] != z:
                    raise StructureError(
                        f"conflicting cells: {names[x]}+{names[y]} set to both "
                        f"{names[arr[i, j]]} and {names[z]}"
                    )
                arr[i, j] = z
        return cls(names, zero, unit, arr)

    def cell(self, x, y):
        """Raw cell value: element index or UNDEFINED."""
        return int(self.table[x, y])

    def defined(self, x, y):
        return self.table[x, y] != UNDEFINED

    def index(self, name):
        return self.names.index(name)

    def name(self, i):
        return self.names[i]

    def with_cell(self, x, y, value):
        """Copy of this table with the single cell (x, y) replaced."""
        arr = np.array(self.table)
        arr[x, y] = value
        return SumTable(self.names, self.zero, self.unit, arr)

    def __eq__(self, other):
        return (
            isinstance(other, SumTable)
            and self.names == other.names
            and self.zero == other.zero
            and self.unit == other.unit
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.names, self.zero, self.unit, self.table.tobytes()))

    def __repr__(self):
        return f"SumTable(n={self.n}, zero={self.names[self.zero]!r}, unit={self.names[self.unit]!r})"


def _pad(table):
    """(n+1)x(n+1) copy whose -1 row/column is all UNDEFINED.

    Indexing the padded array with UNDEFINED (-1) then lands on that row or
    column, so partial-sum compositions propagate undefinedness for free.
    """
    n = table.shape[0]
    out = np.full((n + 1, n + 1), UNDEFINED, dtype=np.int16)
    out[:n, :n] = table
    return out


def check_axioms(t: SumTable, fail_fast: bool = False):
    """Exhaustively check (Ei)-(Eiv); returns the list of violations.

    With ``fail_fast`` the scan stops at the first violated axiom (used by
    mutation sweeps); otherwise every axiom is checked so callers can assert
    the exact violation set.
    """
    T = t.table
    n = t.n
    names = t.names
    out = []

    # (Ei) commutativity, including definedness.
    asym = np.argwhere(T != T.T)
    for x, y in asym[: _WITNESS_CAP]:
        if x < y:
            out.append(
                AxiomViolation(
                    "Ei",
                    (names[x], names[y]),
                    f"{names[x]}+{names[y]} and {names[y]}+{names[x]} disagree",
                )
            )
    if fail_fast and out:
        return out

    # (Eiv) the unit sums only with zero.
    for x in range(n):
        if x != t.zero and T[t.unit, x] != UNDEFINED:
            out.append(
                AxiomViolation(
                    "Eiv",
                    (names[x],),
                    f"{names[t.unit]}+{names[x]} is defined but {names[x]} is not {names[t.zero]}",
                )
            )
    if fail_fast and out:
        return out

    # (Eiii) unique orthosupplement.
    for x in range(n):
        ys = np.flatnonzero(T[x] == t.unit)
        if len(ys) != 1:
            cands = tuple(names[y] for y in ys)
            what = "no y" if len(ys) == 0 else f"multiple y {cands}"
            out.append(
                AxiomViolation(
                    "Eiii",
                    (names[x], cands),
                    f"{what} with {names[x]}+y = {names[t.unit]}",
                )
            )
    if fail_fast and out:
        return out

    # (Eii) associativity with matching definedness, vectorized over triples:
    # lhs[x,y,z] = (x+y)+z and rhs[x,y,z] = x+(y+z), UNDEFINED propagating.
    P = _pad(T)
    zs = np.arange(n)
    lhs = P[T[:, :, None], zs[None, None, :]]
    rhs = P[zs[:, None, None], T[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    for x, y, z in bad[: _WITNESS_CAP]:
        out.append(
            AxiomViolation(
                "Eii",
                (names[x], names[y], names[z]),
                f"({names[x]}+{names[y]})+{names[z]} vs {names[x]}+({names[y]}+{names[z]}): "
                "definedness or value mismatch",
            )
        )
    return out


def derive_order(table):
    """Derive (leq, ominus) from a sum table: x <= y iff some z has x+z = y.

    ``ominus[y, x]`` holds that z (unique by cancellation).  Raises
    :class:`InternalInconsistencyError` if uniqueness or antisymmetry fails,
    which cannot happen on a table that passed :func:`check_axioms`.
    """
    T = table.table if isinstance(table, SumTable) else np.asarray(table)
    n = T.shape[0]
    leq = np.zeros((n, n), dtype=bool)
    om = np.full((n, n), UNDEFINED, dtype=np.int16)
    for x in range(n):
        row = T[x]
        zcols = np.flatnonzero(row != UNDEFINED)
        ys = row[zcols]
        if len(np.unique(ys)) != len(ys):
            raise InternalInconsistencyError(f"cancellation fails in row {x}")
        leq[x, ys] = True
        om[ys, x] = zcols
    if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
        raise InternalInconsistencyError("derived relation is not antisymmetric")
    return leq, om


@dataclass(frozen=True)
class IsotropicProfile:
    """Isotropic indices ord(x) for every element; None encodes the
    unbounded-by-convention index of zero.  Finite carriers are always
    Archimedean; the flag is recorded for report symmetry."""

    ord: dict
    archimedean: bool = True


class EffectAlgebra:
    """A validated effect algebra: sum table plus derived structure.

    Construct through :func:`validate`, never directly.  Instances are
    immutable; all methods are pure reads, safe for concurrent use.
    """

    def __init__(self, t: SumTable, _token=None):
        if _token is not _VALIDATED:
            raise TypeError("use effalg.core.validate() to build an EffectAlgebra")
        self._t = t
        self.names = t.names
        self.zero = t.zero
        self.unit = t.unit
        self.n = t.n
        self.table = t.table

        comp = np.empty(t.n, dtype=np.int16)
        for x in range(t.n):
            comp[x] = int(np.flatnonzero(t.table[x] == t.unit)[0])
        if np.any(comp[comp] != np.arange(t.n)):
            raise InternalInconsistencyError("orthosupplement is not an involution")
        comp.setflags(write=False)
        self.comp = comp

        leq, om = derive_order(t)
        if not leq[t.zero].all() or not leq[:, t.unit].all():
            raise InternalInconsistencyError("derived order lacks bottom/top")
        leq.setflags(write=False)
        om.setflags(write=False)
        self.leq = leq
        self.ominus_table = om

        self._cache = {}

    # -- basic lookups ----------------------------------------------------

    def sum(self, x, y):
        """x + y, or None when undefined."""
        v = int(self.table[x, y])
        return None if v == UNDEFINED else v

    def defined(self, x, y):
        return self.table[x, y] != UNDEFINED

    def complement_of(self, x):
        """The unique y with x + y = 1."""
        return int(self.comp[x])

    def le(self, x, y):
        return bool(self.leq[x, y])

    def ominus(self, y, x):
        """y - x (the z with x + z = y), or None when x is not below y."""
        v = int(self.ominus_table[y, x])
        return None if v == UNDEFINED else v

    def index(self, name):
        return self.names.index(name)

    def name(self, i):
        return self.names[i]

    def sum_table(self) -> SumTable:
        return self._t

    @property
    def elements(self):
        return range(self.n)

    # -- derived operations ------------------------------------------------

    def ortho_sum(self, items):
        """Left fold of + over ``items`` (indices); empty fold gives zero.

        Returns None as soon as an intermediate sum is undefined.  The value
        is independent of ordering on definable multisets (commutativity and
        associativity), which the test suite asserts rather than assumes.
        """
        acc = self.zero
        for x in items:
            acc = int(self.table[acc, x])
            if acc == UNDEFINED:
                return None
        return acc

    def multiple(self, x, k):
        """k-fold sum kx, or None when it does not exist.  0x = 0."""
        acc = self.zero
        for _ in range(k):
            acc = int(self.table[acc, x])
            if acc == UNDEFINED:
                return None
        return acc

    def isotropic_index(self, x):
        """ord(x): greatest k with kx defined.  Rejects x = 0."""
        if x == self.zero:
            raise ValueError("isotropic index of zero is unbounded by convention")
        k = 1
        acc = x
        while True:
            nxt = int(self.table[acc, x])
            if nxt == UNDEFINED:
                return k
            acc = nxt
            k += 1

    def isotropic_profile(self) -> IsotropicProfile:
        ords = {
            x: (None if x == self.zero else self.isotropic_index(x))
            for x in range(self.n)
        }
        return IsotropicProfile(ord=ords)

    def atoms(self):
        """Minimal nonzero elements, as a sorted tuple of indices."""
        key = "atoms"
        if key not in self._cache:
            below_counts = self.leq.sum(axis=0)
            # an atom has exactly zero and itself below it
            ats = tuple(
                x for x in range(self.n) if x != self.zero and below_counts[x] == 2
            )
            self._cache[key] = ats
        return self._cache[key]

    def is_atomic(self):
        """True iff every nonzero element dominates an atom (always true on a
        finite carrier, still computed rather than assumed)."""
        ats = list(self.atoms())
        if not ats:
            return False
        dominated = self.leq[ats].any(axis=0)
        return bool(all(dominated[x] for x in range(self.n) if x != self.zero))

    def __repr__(self):
        return f"EffectAlgebra(n={self.n}, zero={self.names[self.zero]!r}, unit={self.names[self.unit]!r})"


_VALIDATED = object()


def validate(t: SumTable) -> EffectAlgebra:
    """Check all axioms on ``t``; return the validated algebra.

    Raises :class:`ValidationError` carrying the complete list of violations
    (one witness tuple each), or :class:`StructureError` for tables that are
    not structurally well-formed in the first place.
    """
    if not isinstance(t, SumTable):
        raise StructureError("validate() expects a SumTable")
    violations = check_axioms(t)
    if violations:
        raise ValidationError(violations)
    return EffectAlgebra(t, _token=_VALIDATED)


# Module-level aliases mirroring the operation surface; thin wrappers over
# the corresponding methods.

def complement_of(E: EffectAlgebra, x):
    return E.complement_of(x)


def ortho_sum(E: EffectAlgebra, items):
    return E.ortho_sum(items)


def isotropic_index(E: EffectAlgebra, x):
    return E.isotropic_index(x)


def atoms(E: EffectAlgebra):
    return E.atoms()
