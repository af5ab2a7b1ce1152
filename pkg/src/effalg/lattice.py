"""Meets, joins and compatibility over a validated algebra's derived order."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import UNDEFINED, EffectAlgebra


class NotLatticeError(ValueError):
    """The operation needs a lattice order and the algebra does not have one."""


@dataclass
class OrderStructure:
    """Cached meet/join tables (UNDEFINED where a bound is missing) plus the
    latticehood verdict and, when false, a witness pair."""

    meet: np.ndarray
    join: np.ndarray
    is_lattice: bool
    witness: tuple | None
    # bitmask helpers: bit y of down_masks[x] set iff y <= x, dually up_masks
    down_masks: list
    up_masks: list


def _greatest(leq, members):
    """Index of the member dominating all members, or None."""
    if len(members) == 0:
        return None
    sub = leq[np.ix_(members, members)]
    cols = np.flatnonzero(sub.all(axis=0))
    return int(members[cols[0]]) if len(cols) else None


def _least(leq, members):
    if len(members) == 0:
        return None
    sub = leq[np.ix_(members, members)]
    rows = np.flatnonzero(sub.all(axis=1))
    return int(members[rows[0]]) if len(rows) else None


def order_structure(E: EffectAlgebra) -> OrderStructure:
    """Compute (and cache on the algebra) meet/join tables by direct scan.

    Pairwise scan over the full carrier; no Hasse-diagram incrementalism.
    """
    key = "order_structure"
    if key in E._cache:
        return E._cache[key]

    n = E.n
    leq = E.leq
    meet = np.full((n, n), UNDEFINED, dtype=np.int16)
    join = np.full((n, n), UNDEFINED, dtype=np.int16)
    witness = None
    for x in range(n):
        for y in range(x, n):
            lower = np.flatnonzero(leq[:, x] & leq[:, y])
            upper = np.flatnonzero(leq[x] & leq[y])
            g = _greatest(leq, lower)
            l = _least(leq, upper)
            if g is not None:
                meet[x, y] = meet[y, x] = g
            elif witness is None:
                witness = (x, y, "meet")
            if l is not None:
                join[x, y] = join[y, x] = l
            elif witness is None:
                witness = (x, y, "join")

    is_lat = witness is None
    down = [_mask(leq[:, x]) for x in range(n)]
    up = [_mask(leq[x]) for x in range(n)]
    os = OrderStructure(meet, join, is_lat, witness, down, up)
    meet.setflags(write=False)
    join.setflags(write=False)
    E._cache[key] = os
    return os


def _mask(boolvec):
    m = 0
    for i in np.flatnonzero(boolvec):
        m |= 1 << int(i)
    return m


@dataclass
class Bounds:
    """glb/lub of a pair when they exist; otherwise the antichain of maximal
    lower (minimal upper) bounds as a diagnostic."""

    meet: int | None
    join: int | None
    maximal_lower: tuple
    minimal_upper: tuple


def bounds(E: EffectAlgebra, x, y) -> Bounds:
    os = order_structure(E)
    leq = E.leq
    lower = np.flatnonzero(leq[:, x] & leq[:, y])
    upper = np.flatnonzero(leq[x] & leq[y])
    max_lower = tuple(
        int(z) for z in lower
        if not any(leq[z, w] and w != z for w in lower)
    )
    min_upper = tuple(
        int(z) for z in upper
        if not any(leq[w, z] and w != z for w in upper)
    )
    m = os.meet[x, y]
    j = os.join[x, y]
    return Bounds(
        None if m == UNDEFINED else int(m),
        None if j == UNDEFINED else int(j),
        max_lower,
        min_upper,
    )


def is_lattice(E: EffectAlgebra):
    """(True, None) or (False, witness pair lacking a meet or join)."""
    os = order_structure(E)
    if os.is_lattice:
        return True, None
    x, y, kind = os.witness
    return False, (x, y, kind)


def require_lattice(E: EffectAlgebra) -> OrderStructure:
    os = order_structure(E)
    if not os.is_lattice:
        x, y, kind = os.witness
        raise NotLatticeError(
            f"not a lattice: elements {E.names[x]!r}, {E.names[y]!r} have no {kind}"
        )
    return os


def is_compatible(E: EffectAlgebra, x, y) -> bool:
    """x <-> y iff x + (y - (x /\\ y)) is defined and equals x \\/ y."""
    os = require_lattice(E)
    m = os.meet[x, y]
    d = E.ominus_table[y, m]
    s = int(E.table[x, d]) if d != UNDEFINED else UNDEFINED
    return s != UNDEFINED and s == os.join[x, y]


def compatibility_matrix(E: EffectAlgebra) -> np.ndarray:
    """Boolean n x n compatibility relation, cached."""
    key = "compat"
    if key not in E._cache:
        os = require_lattice(E)
        n = E.n
        C = np.zeros((n, n), dtype=bool)
        om = E.ominus_table
        T = E.table
        join = os.join
        meet = os.meet
        for x in range(n):
            for y in range(x, n):
                d = om[y, meet[x, y]]
                ok = d != UNDEFINED and T[x, d] == join[x, y]
                C[x, y] = C[y, x] = ok
        C.setflags(write=False)
        E._cache[key] = C
    return E._cache[key]
