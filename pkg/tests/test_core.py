import numpy as np
import pytest

import effalg as ea
from effalg.core import UNDEFINED, check_axioms

from conftest import C3_DOC
from oracles import brute_axiom_failures, brute_leq


def as_lists(E):
    return [[int(v) for v in row] for row in E.table]


class TestValidate:
    def test_c3_is_valid(self, c3):
        # oracle: direct exhaustive scan of all 3^3 triples
        assert brute_axiom_failures(c3.names, c3.zero, c3.unit, as_lists(c3)) == set()
        assert check_axioms(c3.sum_table()) == []

    def test_c3_without_self_sum_breaks_orthosupplement(self, c3):
        a = c3.index("a")
        broken = c3.sum_table().with_cell(a, a, UNDEFINED)
        assert brute_axiom_failures(
            broken.names, broken.zero, broken.unit,
            [[int(v) for v in row] for row in broken.table],
        ) == {"Eiii"}
        with pytest.raises(ea.ValidationError) as exc:
            ea.validate(broken)
        assert exc.value.axioms() == ["Eiii"]
        witness_elements = [v.witness[0] for v in exc.value.violations]
        assert "a" in witness_elements

    def test_c3_with_unit_sum_breaks_minimality(self, c3):
        a = c3.index("a")
        broken = c3.sum_table().with_cell(c3.unit, a, a).with_cell(a, c3.unit, a)
        with pytest.raises(ea.ValidationError) as exc:
            ea.validate(broken)
        assert "Eiv" in exc.value.axioms()
        eiv = [v for v in exc.value.violations if v.axiom == "Eiv"]
        assert eiv[0].witness == ("a",)

    def test_one_sided_cell_breaks_commutativity(self, c3):
        a = c3.index("a")
        broken = c3.sum_table().with_cell(a, c3.unit, a)
        with pytest.raises(ea.ValidationError) as exc:
            ea.validate(broken)
        assert "Ei" in exc.value.axioms()

    def test_violations_are_collected_not_fail_fast(self, c3):
        a = c3.index("a")
        broken = (
            c3.sum_table()
            .with_cell(a, a, UNDEFINED)
            .with_cell(c3.unit, a, a)
            .with_cell(a, c3.unit, a)
        )
        with pytest.raises(ea.ValidationError) as exc:
            ea.validate(broken)
        assert set(exc.value.axioms()) >= {"Eiii", "Eiv"}

    def test_structural_errors_are_not_axiom_violations(self):
        with pytest.raises(ea.StructureError):
            ea.SumTable(["0", "1"], 0, 0, [[0, 1], [1, UNDEFINED]])
        with pytest.raises(ea.StructureError):
            ea.SumTable(["0", "0"], 0, 1, [[0, 1], [1, UNDEFINED]])
        with pytest.raises(ea.StructureError):
            ea.SumTable(["0", "1"], 0, 1, [[0, 5], [1, UNDEFINED]])


class TestOrder:
    def test_c3_is_a_chain(self, c3):
        a = c3.index("a")
        assert c3.le(c3.zero, a) and c3.le(a, c3.unit) and not c3.le(c3.unit, a)
        assert brute_leq(c3) == [[bool(v) for v in row] for row in c3.leq]

    def test_hs_middles_incomparable(self, hs):
        a, b = hs.index("a"), hs.index("b")
        assert not hs.le(a, b) and not hs.le(b, a)
        assert hs.le(hs.zero, a) and hs.le(a, hs.unit)
        assert brute_leq(hs) == [[bool(v) for v in row] for row in hs.leq]

    def test_ominus_diagonal_is_zero(self, c3, b4, hs, c5):
        for E in (c3, b4, hs, c5):
            for x in range(E.n):
                assert E.ominus(x, x) == E.zero

    def test_ominus_consistency(self, small_suite):
        for _, E in small_suite:
            for y in range(E.n):
                for x in range(E.n):
                    z = E.ominus(y, x)
                    if z is None:
                        assert not E.le(x, y)
                    else:
                        assert E.sum(x, z) == y


class TestComplement:
    def test_examples(self, c3, b4):
        assert c3.complement_of(c3.index("a")) == c3.index("a")
        assert b4.complement_of(b4.index("p")) == b4.index("q")
        for E in (c3, b4):
            assert E.complement_of(E.zero) == E.unit

    def test_involution(self, small_suite):
        for _, E in small_suite:
            for x in range(E.n):
                assert E.complement_of(E.complement_of(x)) == x


class TestOrthoSum:
    def test_examples(self, c3):
        a = c3.index("a")
        assert c3.ortho_sum([a, a]) == c3.unit
        assert c3.ortho_sum([a, a, a]) is None
        assert c3.ortho_sum([]) == c3.zero

    def test_order_independence(self, small_suite):
        import itertools
        import random

        rng = random.Random(7)
        for _, E in small_suite:
            for _ in range(10):
                ms = [rng.randrange(E.n) for _ in range(rng.randint(2, 4))]
                results = {
                    E.ortho_sum(perm) for perm in itertools.permutations(ms)
                }
                assert len(results) == 1


class TestIsotropicIndex:
    def test_examples(self, c3, b4, c5):
        assert c3.isotropic_index(c3.index("a")) == 2
        assert b4.isotropic_index(b4.index("p")) == 1
        assert c5.isotropic_index(c5.index("a")) == 4

    def test_rejects_zero(self, c3):
        with pytest.raises(ValueError):
            c3.isotropic_index(c3.zero)

    def test_profile_marks_zero_unbounded(self, c5):
        prof = c5.isotropic_profile()
        assert prof.ord[c5.zero] is None
        assert prof.archimedean is True
        assert prof.ord[c5.index("2a")] == 2

    def test_index_brackets_definedness(self, small_suite):
        for _, E in small_suite:
            for x in range(E.n):
                if x == E.zero:
                    continue
                n = E.isotropic_index(x)
                assert E.multiple(x, n) is not None
                assert E.multiple(x, n + 1) is None


class TestAtoms:
    def test_examples(self, c3, b4, hs):
        assert [c3.names[a] for a in c3.atoms()] == ["a"]
        assert [b4.names[a] for a in b4.atoms()] == ["p", "q"]
        assert [hs.names[a] for a in hs.atoms()] == ["a", "b"]

    def test_every_nonzero_dominates_an_atom(self, small_suite):
        for _, E in small_suite:
            assert E.is_atomic()
            ats = E.atoms()
            for x in range(E.n):
                if x != E.zero:
                    assert any(E.le(a, x) for a in ats)


class TestInvariants:
    def test_cancellation(self, small_suite):
        for _, E in small_suite:
            for x in range(E.n):
                seen = {}
                for z in range(E.n):
                    v = E.sum(x, z)
                    if v is not None:
                        assert v not in seen, "cancellation would fail"
                        seen[v] = z

    def test_order_duality(self, small_suite):
        for _, E in small_suite:
            comp = E.comp
            dual = E.leq[np.ix_(comp, comp)].T
            assert np.array_equal(E.leq, dual)

    def test_sum_defined_iff_below_complement(self, small_suite):
        for _, E in small_suite:
            for x in range(E.n):
                for y in range(E.n):
                    assert E.defined(x, y) == E.le(x, E.complement_of(y))


def test_round_trip_of_canonical_doc(c3):
    assert ea.serialize_eat(c3) == C3_DOC
