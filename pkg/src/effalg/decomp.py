"""Sharp envelopes, sharply-dominating certificates, basic decompositions.

Every element x of a finite lattice effect algebra has a greatest sharp
element below it and a smallest sharp element above it.  Splitting off the
sharp floor leaves a meager remainder, which in turn is a join (and an
orthogonal sum) of atom multiples; this module computes those pieces and
cross-validates the envelope against the atom-multiplicity formula along a
second, independent code path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    EffectAlgebra,
    InternalInconsistencyError,
    TheoremViolationError,
)
from .lattice import order_structure, require_lattice
from .substructures import meager_elements, sharp_elements


@dataclass(frozen=True)
class SharpEnvelope:
    """Greatest sharp element below x and smallest sharp element above x."""

    x: int
    below: int
    above: int


@dataclass(frozen=True)
class AtomSupport:
    """Pairs (atom, multiplicity) supporting a meager element."""

    pairs: tuple

    def atoms(self):
        return tuple(a for a, _ in self.pairs)


@dataclass(frozen=True)
class Decomposition:
    """x = sharp_part + meager_part with the meager part's atom support."""

    x: int
    sharp_part: int
    meager_part: int
    support: AtomSupport


def sharp_envelope(E: EffectAlgebra, x) -> SharpEnvelope:
    """Scan Sh(E) for the bounds; fold-join below, fold-meet above.

    The folds stay inside Sh(E) because the sharp set is closed under binary
    meet and join; a fold escaping it would be an internal inconsistency.
    """
    os = require_lattice(E)
    sharp = sharp_elements(E).members
    sset = set(sharp)

    below = E.zero
    for s in sharp:
        if E.leq[s, x]:
            below = int(os.join[below, s])
    above = E.unit
    for s in sharp:
        if E.leq[x, s]:
            above = int(os.meet[above, s])

    if below not in sset or not E.leq[below, x]:
        raise InternalInconsistencyError("greatest sharp lower bound escaped Sh(E)")
    if above not in sset or not E.leq[x, above]:
        raise InternalInconsistencyError("smallest sharp upper bound escaped Sh(E)")
    return SharpEnvelope(int(x), below, above)


def is_sharply_dominating(E: EffectAlgebra):
    """Both envelope bounds exist for every element; returns the certificate
    mapping each element to its envelope."""
    cert = {x: sharp_envelope(E, x) for x in range(E.n)}
    return True, cert


def meager_atom_support(E: EffectAlgebra, x) -> AtomSupport:
    """Atoms below a meager x with their maximal multiplicities.

    k_a = max{k : ka <= x}, computed by incremental folding with an order
    check at each step.  Each multiplicity is strictly below the atom's
    isotropic index, and both the orthogonal sum and the join of the
    multiples must reproduce x; failures are theorem violations.
    """
    mea = meager_elements(E)
    if x not in mea:
        raise ValueError(f"{E.names[x]!r} is not a meager element")
    if x == E.zero:
        return AtomSupport(())
    os = order_structure(E)
    pairs = []
    for a in E.atoms():
        if not E.leq[a, x]:
            continue
        k = 0
        acc = E.zero
        while True:
            nxt = E.sum(acc, a)
            if nxt is None or not E.leq[nxt, x]:
                break
            acc = nxt
            k += 1
        if k >= E.isotropic_index(a):
            raise TheoremViolationError(
                f"meager {E.names[x]!r} holds a full multiple of atom {E.names[a]!r}"
            )
        pairs.append((a, k))

    total = E.ortho_sum(
        a for a, k in pairs for _ in range(k)
    )
    joined = E.zero
    for a, k in pairs:
        joined = int(os.join[joined, E.multiple(a, k)])
    if total != x or joined != x:
        raise TheoremViolationError(
            f"atom multiples of {E.names[x]!r} do not reassemble it "
            f"(sum {total}, join {joined})"
        )
    return AtomSupport(tuple(pairs))


def basic_decomposition(E: EffectAlgebra, x) -> Decomposition:
    """x = (greatest sharp below x) + (meager remainder); zero decomposes
    as (0, 0, empty support)."""
    require_lattice(E)
    if x == E.zero:
        return Decomposition(int(x), E.zero, E.zero, AtomSupport(()))
    env = sharp_envelope(E, x)
    xs = env.below
    xm = E.ominus(x, xs)
    if xm is None:
        raise InternalInconsistencyError("sharp floor is not below its element")
    return Decomposition(int(x), xs, xm, meager_atom_support(E, xm))


def hat_via_atoms(E: EffectAlgebra, x) -> int:
    """Smallest sharp element above x, via the atom-multiplicity formula.

    Computes floor(x) + sum of full multiples over the meager remainder's
    support, then checks the result against the direct Sh(E) scan and checks
    the complementary formula for (hat x) - x.  Divergence between the two
    code paths is a hard failure by design.
    """
    dec = basic_decomposition(E, x)
    acc = dec.sharp_part
    for a, _k in dec.support.pairs:
        full = E.multiple(a, E.isotropic_index(a))
        if full is None:
            raise InternalInconsistencyError("full atom multiple vanished")
        nxt = E.sum(acc, full)
        if nxt is None:
            raise TheoremViolationError(
                f"envelope formula sum undefined at atom {E.names[a]!r}"
            )
        acc = nxt

    env = sharp_envelope(E, x)
    if acc != env.above:
        raise TheoremViolationError(
            f"atom formula gives {E.names[acc]!r} but the scan gives "
            f"{E.names[env.above]!r} for the sharp cover of {E.names[x]!r}"
        )

    residue = E.ortho_sum(
        a
        for a, k in dec.support.pairs
        for _ in range(E.isotropic_index(a) - k)
    )
    if residue != E.ominus(env.above, x):
        raise TheoremViolationError(
            f"residual formula mismatch for {E.names[x]!r}"
        )
    return acc
