import io
import json

import pytest

import effalg as ea
from effalg.cli import analysis_report, run

from conftest import C3_DOC, HEXAGON_DOC, HS_DOC


def invoke(argv):
    out = io.StringIO()
    err = io.StringIO()
    code = run(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def c3_file(tmp_path):
    path = tmp_path / "c3.eat"
    path.write_text(C3_DOC)
    return str(path)


@pytest.fixture()
def hs_file(tmp_path):
    path = tmp_path / "hs.eat"
    path.write_text(HS_DOC)
    return str(path)


class TestValidateCommand:
    def test_valid_file(self, c3_file):
        code, out, err = invoke(["validate", c3_file])
        assert code == 0 and "valid" in out

    def test_axiom_failure_names_axiom_and_witness(self, tmp_path):
        # unit-minimality mutant: the unit sums with the atom
        doc = C3_DOC + "sum 1 a a\n"
        path = tmp_path / "broken.eat"
        path.write_text(doc)
        code, out, err = invoke(["validate", str(path)])
        assert code == 1
        assert "Eiv" in err and "a" in err

    def test_parse_failure_is_usage_error(self, tmp_path):
        path = tmp_path / "bad.eat"
        path.write_text("elements 0 1\nzero 0\n")
        code, out, err = invoke(["validate", str(path)])
        assert code == 2
        assert out == ""          # no analysis output on parse failure

    def test_missing_file(self):
        code, out, err = invoke(["validate", "/nonexistent/x.eat"])
        assert code == 2


class TestAnalyzeCommand:
    def test_json_fields(self, c3_file):
        code, out, err = invoke(["analyze", c3_file, "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["sharp"] == ["0", "1"]
        assert report["meager"] == ["0", "a"]
        assert report["lattice"] is True
        assert report["atoms"] == ["a"]
        assert report["ord"]["a"] == 2 and report["ord"]["0"] is None
        assert report["blocks"] == [["0", "a", "1"]]
        assert report["center"] == ["0", "1"]
        assert report["decompositions"]["a"] == {
            "sharp_part": "0", "meager_part": "a", "support": [["a", 1]],
        }
        assert report["envelopes"]["a"] == {"below": "0", "above": "1"}

    def test_text_format(self, hs_file):
        code, out, err = invoke(["analyze", hs_file])
        assert code == 0
        assert "lattice: yes" in out and "block 2" in out

    def test_non_lattice_degrades_gracefully(self, tmp_path):
        path = tmp_path / "hex.eat"
        path.write_text(HEXAGON_DOC)
        code, out, err = invoke(["analyze", str(path), "--format", "json"])
        assert code == 0
        report = json.loads(out)
        assert report["lattice"] is False
        assert "sharp" not in report
        assert report["skipped"]["sharp"] == "requires a lattice order"
        assert report["lattice_witness"][2] in ("meet", "join")

    def test_invalid_algebra_no_report(self, tmp_path):
        path = tmp_path / "bad.eat"
        path.write_text(C3_DOC.replace("sum a a 1", ""))
        code, out, err = invoke(["analyze", str(path)])
        assert code == 1 and out == ""


class TestTripleCommand:
    def test_hs_verdict_and_mapping(self, hs_file):
        code, out, err = invoke(["triple", hs_file])
        assert code == 0
        assert "isomorphic: true" in out
        mapping_rows = [l for l in out.splitlines() if "->" in l]
        assert len(mapping_rows) == 4

    def test_non_lattice_is_domain_failure(self, tmp_path):
        path = tmp_path / "hex.eat"
        path.write_text(HEXAGON_DOC)
        code, out, err = invoke(["triple", str(path)])
        assert code == 1


class TestLawsCommand:
    def test_all_pass(self, c3_file):
        code, out, err = invoke(["laws", c3_file])
        assert code == 0
        lines = [l for l in out.splitlines() if l]
        assert len(lines) == 17
        assert all(" pass" in l for l in lines)

    def test_single_law(self, c3_file):
        code, out, err = invoke(["laws", c3_file, "--law", "L7"])
        assert code == 0
        assert out.startswith("L7 pass")

    def test_non_lattice_is_domain_failure(self, tmp_path):
        path = tmp_path / "hex.eat"
        path.write_text(HEXAGON_DOC)
        code, out, err = invoke(["laws", str(path)])
        assert code == 1


class TestGenCommand:
    def test_stdout(self):
        code, out, err = invoke(["gen", "chain:3"])
        assert code == 0
        assert out == C3_DOC

    def test_output_file(self, tmp_path):
        target = tmp_path / "p6.eat"
        code, out, err = invoke(["gen", "product(chain:3,chain:2)", "-o", str(target)])
        assert code == 0
        E = ea.validate(ea.parse_eat(target.read_text()))
        assert E.n == 6

    def test_bad_spec(self):
        code, out, err = invoke(["gen", "chain:one"])
        assert code == 2


class TestEnumerateCommand:
    def test_stream_is_reproducible(self):
        code1, out1, err1 = invoke(["enumerate", "--max-order", "4"])
        code2, out2, err2 = invoke(["enumerate", "--max-order", "4"])
        assert code1 == code2 == 0
        assert out1 == out2
        assert "5 isomorphism classes" in err1

    def test_emit_directory(self, tmp_path):
        target = tmp_path / "classes"
        code, out, err = invoke(["enumerate", "--max-order", "4", "--emit", str(target)])
        assert code == 0
        files = sorted(p.name for p in target.iterdir())
        assert files == [
            "order2_000.eat", "order3_000.eat",
            "order4_000.eat", "order4_001.eat", "order4_002.eat",
        ]
        for p in target.iterdir():
            ea.validate(ea.parse_eat(p.read_text()))

    def test_cap_is_usage_error(self):
        code, out, err = invoke(["enumerate", "--max-order", "9"])
        assert code == 2


class TestReportHelper:
    def test_report_keys_frozen(self, c3):
        report = analysis_report(c3)
        assert set(report) == {
            "elements", "zero", "unit", "conventions", "atoms", "atomic",
            "ord", "less_than", "lattice", "sharp", "meager", "blocks",
            "compatibility_center", "center", "envelopes", "decompositions",
        }
