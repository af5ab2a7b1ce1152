import pytest

import effalg as ea
from effalg.core import UNDEFINED, check_axioms


class TestRegistry:
    def test_stable_ids(self):
        assert ea.LAW_IDS == tuple(f"L{i}" for i in range(1, 18))
        assert set(ea.LAWS) == set(ea.LAW_IDS)
        for law in ea.LAWS.values():
            assert law.statement

    def test_unknown_id(self, c3):
        with pytest.raises(KeyError):
            ea.check_law(c3, "L99")

    def test_requires_lattice(self, hexagon):
        with pytest.raises(ea.NotLatticeError):
            ea.check_all(hexagon)


class TestSingleLaws:
    def test_block_tiling_on_hs(self, hs):
        rep = ea.check_law(hs, "L8")
        assert rep.ok and rep.instances == 2     # two blocks inspected

    def test_atom_decomposition_on_c3(self, c3):
        rep = ea.check_law(c3, "L7")
        assert rep.ok
        # the unit decomposes as the doubled atom, hence sharp
        a = c3.index("a")
        assert c3.multiple(a, c3.isotropic_index(a)) == c3.unit

    def test_central_distributivity_on_b4(self, b4):
        rep = ea.check_law(b4, "L5")
        assert rep.ok
        assert len(ea.center(b4).members) == b4.n   # all elements central

    def test_join_bifull_reports_are_exact_for_small_meager_sets(self, c5):
        rep = ea.check_law(c5, "L11")
        assert rep.ok and not rep.bounded

    def test_equivalences_hold(self, small_suite):
        for _, E in small_suite:
            for law_id in ("L15", "L16", "L17"):
                assert ea.check_law(E, law_id).ok


class TestCheckAll:
    def test_fixtures_pass_everything(self, c3, b4, hs, c5, p6, mo2):
        for E in (c3, b4, hs, c5, p6, mo2):
            reports = ea.check_all(E)
            assert [r.law_id for r in reports] == list(ea.LAW_IDS)
            bad = [r for r in reports if not r.ok]
            assert bad == []

    def test_instances_counted(self, c3):
        for rep in ea.check_all(c3):
            assert rep.instances > 0

    def test_bounds_are_configurable(self, p6):
        cfg = ea.LawConfig(family_bound=2, tuple_bound=2, mult_bound=2)
        reports = ea.check_all(p6, cfg)
        assert all(r.ok for r in reports)
        full = ea.check_all(p6)
        for small, big in zip(reports, full):
            assert small.instances <= big.instances

    def test_all_enumerated_lattice_classes_pass(self):
        for E in ea.enumerate_small(6):
            if ea.is_lattice(E)[0]:
                assert all(r.ok for r in ea.check_all(E))


class TestMutationSensitivity:
    def test_named_corruptions_are_detected(self, c3, b4):
        a = c3.index("a")
        erased = c3.sum_table().with_cell(a, a, UNDEFINED)
        assert {v.axiom for v in check_axioms(erased)} == {"Eiii"}

        p, q = b4.index("p"), b4.index("q")
        rewired = b4.sum_table().with_cell(p, q, p)
        axioms = {v.axiom for v in check_axioms(rewired)}
        assert "Ei" in axioms     # one-sided rewrite breaks commutativity

    def test_random_corruptions_fail_validation_or_are_valid_algebras(self, small_suite):
        # a single-cell change either breaks an axiom or lands on another
        # valid algebra; the acceptance suite quantifies this over the full
        # population
        import random

        rng = random.Random(99)
        for _, E in small_suite:
            t = E.sum_table()
            for _ in range(25):
                mutated, _info = ea.gen.mutate_table(t, rng)
                violations = check_axioms(mutated)
                if violations:
                    assert {v.axiom for v in violations} <= {"Ei", "Eii", "Eiii", "Eiv"}
                else:
                    ea.validate(mutated)     # genuinely a different valid table
