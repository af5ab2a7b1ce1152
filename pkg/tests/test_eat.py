import pytest

import effalg as ea

from conftest import B4_DOC, C3_DOC


class TestParse:
    def test_c3_document(self, c3):
        t = ea.parse_eat(C3_DOC)
        assert t.names == ("0", "a", "1")
        assert (t.zero, t.unit) == (0, 2)
        assert t.cell(1, 1) == 2
        assert t.cell(1, 2) == -1

    def test_sum_lines_symmetrize(self):
        t = ea.parse_eat(C3_DOC)
        assert t.cell(0, 1) == t.cell(1, 0) == 1

    def test_comments_and_blank_lines(self):
        doc = "# header\n\nelements 0 1   # trailing\nzero 0\nunit 1\nsum 0 0 0\nsum 0 1 1\n"
        t = ea.parse_eat(doc)
        assert t.n == 2

    def test_missing_unit(self):
        doc = "elements 0 a 1\nzero 0\nsum a a 1\n"
        with pytest.raises(ea.EATParseError) as exc:
            ea.parse_eat(doc)
        assert any("missing unit" in str(i) for i in exc.value.issues)

    def test_conflicting_cells_cite_both_lines(self):
        doc = C3_DOC + "sum a a 0\n"
        with pytest.raises(ea.EATParseError) as exc:
            ea.parse_eat(doc)
        msg = str(exc.value.issues[0])
        assert "line 8" in msg and "line 7" in msg

    def test_swapped_operand_conflicts_are_caught(self):
        doc = "elements 0 a b 1\nzero 0\nunit 1\nsum a b 1\nsum b a 0\n"
        with pytest.raises(ea.EATParseError):
            ea.parse_eat(doc)

    def test_duplicate_same_value_tolerated(self):
        t = ea.parse_eat(C3_DOC + "sum a a 1\n")
        assert t.cell(1, 1) == 2

    def test_unknown_name_has_position(self):
        doc = "elements 0 1\nzero 0\nunit 1\nsum 0 x 1\n"
        with pytest.raises(ea.EATParseError) as exc:
            ea.parse_eat(doc)
        issue = exc.value.issues[0]
        assert issue.line == 4 and issue.col == 7

    def test_duplicate_elements_and_headers(self):
        doc = "elements 0 a a 1\nzero 0\nzero 0\nunit 1\n"
        with pytest.raises(ea.EATParseError) as exc:
            ea.parse_eat(doc)
        msgs = " | ".join(str(i) for i in exc.value.issues)
        assert "duplicate element name" in msgs and "multiple zero" in msgs

    def test_zero_equals_unit(self):
        doc = "elements 0 1\nzero 0\nunit 0\n"
        with pytest.raises(ea.EATParseError) as exc:
            ea.parse_eat(doc)
        assert any("distinct" in str(i) for i in exc.value.issues)

    def test_unknown_directive(self):
        with pytest.raises(ea.EATParseError):
            ea.parse_eat("elements 0 1\nzero 0\nunit 1\nfrobnicate 0\n")

    def test_errors_are_collected_together(self):
        doc = "elements 0 a 1\nzero 0\nsum 0 x 1\nsum a a\n"
        with pytest.raises(ea.EATParseError) as exc:
            ea.parse_eat(doc)
        assert len(exc.value.issues) >= 3


class TestSerialize:
    def test_canonical_c3(self, c3):
        assert ea.serialize_eat(c3) == C3_DOC

    def test_b4_triangle_once(self, b4):
        text = ea.serialize_eat(b4)
        assert text == B4_DOC
        assert text.count("sum p q 1") == 1
        assert "sum q p" not in text

    def test_round_trip_identity_on_suite(self):
        for label, E in ea.standard_suite():
            again = ea.parse_eat(ea.serialize_eat(E))
            assert again == E.sum_table(), label

    def test_round_trip_identity_on_enumeration(self):
        for E in ea.enumerate_small(5):
            assert ea.parse_eat(ea.serialize_eat(E)) == E.sum_table()

    def test_rejects_unserializable_names(self):
        t = ea.SumTable(("ze ro", "one"), 0, 1, [[0, 1], [1, -1]])
        with pytest.raises(ea.StructureError):
            ea.serialize_eat(t)
