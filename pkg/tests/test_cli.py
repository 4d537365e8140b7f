"""Command-line interface: exit codes, report documents, determinism.

Exit code contract: 0 when a verdict was reached (either way), 2 when the
window could not support the question, 1 on user error. Reports are JSON
with stable key order; two runs of the same command differ only in the
generated_at stamp.
"""

import json
import subprocess
import sys

import pytest

from locis import textio
from locis.cli import main
from locis.core import Language, Structure


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    doc = json.loads(out) if out.strip() else None
    return code, doc


@pytest.fixture
def sturmian_file(tmp_path, capsys):
    path = str(tmp_path / "sturmian.locis")
    code, _ = run(
        capsys, "gen", "sturmian",
        "--r", "(0+1*sqrt(2))/1", "--s", "0", "--width", "150", "--out", path,
    )
    assert code == 0
    return path


@pytest.fixture
def board_file(tmp_path, capsys):
    path = str(tmp_path / "board.locis")
    code, _ = run(
        capsys, "gen", "grid", "--dims", "6,6", "--mode", "torus",
        "--colors", "checkerboard", "--out", path,
    )
    assert code == 0
    return path


class TestGenAndValidate:
    def test_gen_writes_loadable_window(self, tmp_path, capsys):
        path = str(tmp_path / "w.locis")
        code, doc = run(
            capsys, "gen", "sturmian",
            "--r", "(0+1*sqrt(2))/1", "--s", "1/3", "--width", "40", "--out", path,
        )
        assert code == 0
        assert doc["command"] == "gen"
        assert doc["verdict"] == "holds_up_to_bounds"
        M = textio.load(path)
        assert len(M) == 81
        assert doc["result"]["elements"] == 81

    @pytest.mark.parametrize(
        "argv",
        [
            ("gen", "tree", "--k", "2", "--address", "tm12", "--depth", "12",
             "--halo", "4", "--out", "{out}"),
            ("gen", "hyperbolic", "--address", "tm", "--levels", "6",
             "--half-width", "16", "--support-radius", "3", "--out", "{out}"),
            ("gen", "cayley", "--k", "2", "--radius", "3", "--out", "{out}"),
            ("gen", "grid", "--dims", "5", "--mode", "window", "--out", "{out}"),
        ],
    )
    def test_gen_families(self, tmp_path, capsys, argv):
        path = str(tmp_path / "w.locis")
        argv = [a.format(out=path) for a in argv]
        code, doc = run(capsys, *argv)
        assert code == 0
        assert textio.load(path).tuple_count() > 0

    def test_validate_good_window(self, sturmian_file, capsys):
        code, doc = run(capsys, "validate", sturmian_file)
        assert code == 0
        assert doc["result"]["valid"] is True
        assert doc["result"]["connected"] is True
        assert doc["result"]["ball1_bound"] == 3

    def test_validate_corrupted_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.locis"
        bad.write_text("%locis structure v1\nlanguage:\nE/2\nelements:\n0\ntuples:\nE(0,9)\n")
        code, doc = run(capsys, "validate", str(bad))
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert doc["result"]["valid"] is False

    def test_missing_file_is_an_error(self, capsys):
        code = main(["validate", "/nonexistent/file.locis"])
        assert code == 1


class TestBallAndCensus:
    def test_ball_extraction(self, sturmian_file, tmp_path, capsys):
        out = str(tmp_path / "ball.locis")
        code, doc = run(capsys, "ball", sturmian_file, "--center", "0",
                        "--h", "3", "--out", out)
        assert code == 0
        ball = textio.load(out)
        assert len(ball) == 7
        assert ball.is_closed()

    def test_ball_beyond_depth_is_inconclusive(self, sturmian_file, tmp_path, capsys):
        out = str(tmp_path / "ball.locis")
        code, doc = run(capsys, "ball", sturmian_file, "--center", "149",
                        "--h", "30", "--out", out)
        assert code == 2
        assert doc["verdict"] == "inconclusive"

    def test_census_checkerboard(self, board_file, capsys):
        code, doc = run(capsys, "census", board_file, "--h", "1")
        assert code == 0
        assert doc["result"]["classes"] == 2
        mults = [e["multiplicity"] for e in doc["result"]["entries"]]
        assert sorted(mults) == [18, 18]
        hexes = {e["signature"] for e in doc["result"]["entries"]}
        assert len(hexes) == 2  # distinct classes have distinct digests

    def test_census_column_window(self, sturmian_file, capsys):
        code, doc = run(capsys, "census", sturmian_file, "--h", "4")
        assert code == 0
        assert doc["result"]["classes"] == 10  # 2h+2


class TestLipAndCompare:
    def test_lip_holds_on_columns(self, sturmian_file, capsys):
        code, doc = run(capsys, "lip", sturmian_file, "--h", "1")
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"
        assert doc["result"]["k"] >= 1

    def test_lip_failure_carries_witness(self, tmp_path, capsys):
        lang = Language([("Succ", 2), ("White", 1), ("Black", 1)])
        n = 90
        tuples = [("Succ", (str(i), str(i + 1))) for i in range(n - 1)]
        tuples += [("Black" if i == 2 else "White", (str(i),)) for i in range(n)]
        M = Structure(lang, [str(i) for i in range(n)], tuples,
                      frontier=("0", str(n - 1)))
        path = str(tmp_path / "blemish.locis")
        textio.save(M, path)
        code, doc = run(capsys, "lip", path, "--h", "1")
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert "witness" in doc["result"]

    def test_compare_shifted_intercepts(self, sturmian_file, tmp_path, capsys):
        other = str(tmp_path / "third.locis")
        run(capsys, "gen", "sturmian", "--r", "(0+1*sqrt(2))/1", "--s", "1/3",
            "--width", "150", "--out", other)
        code, doc = run(capsys, "compare", sturmian_file, other, "--h", "3")
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"
        assert doc["result"]["forward"] and doc["result"]["backward"]

    def test_compare_language_mismatch_is_error(self, sturmian_file, board_file, capsys):
        code = main(["compare", sturmian_file, board_file, "--h", "1"])
        assert code == 1


class TestAlgebraCommand:
    def test_equational_tree(self, tmp_path, capsys):
        path = str(tmp_path / "tree.locis")
        run(capsys, "gen", "tree", "--k", "2", "--address", "periodic:122",
            "--depth", "10", "--halo", "4", "--out", path)
        code, doc = run(capsys, "algebra", path, "--check", "equational")
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"

    def test_commutativity_witness_on_cayley(self, tmp_path, capsys):
        path = str(tmp_path / "cayley.locis")
        run(capsys, "gen", "cayley", "--k", "2", "--radius", "5", "--out", path)
        code, doc = run(capsys, "algebra", path, "--check", "commutativity",
                        "--max-len", "4")
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert "witness" in doc["result"]

    def test_regularity_family(self, tmp_path, capsys):
        a = str(tmp_path / "t8.locis")
        b = str(tmp_path / "t6.locis")
        run(capsys, "gen", "grid", "--dims", "8,8", "--mode", "torus", "--out", a)
        run(capsys, "gen", "grid", "--dims", "6,6", "--mode", "torus", "--out", b)
        code, doc = run(capsys, "algebra", a, "--check", "regularity",
                        "--max-len", "6", "--others", b)
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert doc["result"]["witness"]["word"]


class TestSymmetriesCommand:
    def test_mirror_found(self, sturmian_file, capsys):
        code, doc = run(capsys, "symmetries", sturmian_file,
                        "--displacement", "4", "--radius", "50", "--anchor", "0")
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"
        assert doc["result"]["found"]
        for entry in doc["result"]["found"]:
            assert entry["reversed"] is True
            assert entry["certified_layer"] >= 50

    def test_none_found(self, tmp_path, capsys):
        path = str(tmp_path / "quarter.locis")
        run(capsys, "gen", "sturmian", "--r", "(0+1*sqrt(2))/1", "--s", "1/4",
            "--width", "150", "--out", path)
        code, doc = run(capsys, "symmetries", path,
                        "--displacement", "4", "--radius", "50", "--anchor", "0")
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert doc["result"]["max_kill_radius"] <= 50

    def test_shallow_window_inconclusive(self, tmp_path, capsys):
        path = str(tmp_path / "bare.locis")
        run(capsys, "gen", "grid", "--dims", "10", "--mode", "window", "--out", path)
        code, doc = run(capsys, "symmetries", path,
                        "--displacement", "2", "--radius", "50")
        assert code == 2
        assert doc["verdict"] == "inconclusive"
        assert doc["result"]["survivors"]


class TestPeriodsRigidityQuotient:
    def test_periods_checkerboard(self, board_file, capsys):
        code, doc = run(capsys, "periods", board_file, "--rank-bound", "2")
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"
        assert doc["result"]["rank"] == 2
        assert len(doc["result"]["period"]) == 2

    def test_periods_aperiodic(self, sturmian_file, capsys):
        code, doc = run(capsys, "periods", sturmian_file,
                        "--rank-bound", "2", "--radius", "40")
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert doc["result"]["orbit_cover"] == "no_generators"

    def test_rigidity_tree(self, tmp_path, capsys):
        path = str(tmp_path / "tmtree.locis")
        run(capsys, "gen", "tree", "--k", "2", "--address", "tm12",
            "--depth", "200", "--halo", "8", "--out", path)
        code, doc = run(capsys, "rigidity", path, "--radii", "1..3", "--s", "10")
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"
        assert [e["r"] for e in doc["result"]["per_radius"]] == [1, 2, 3]

    def test_rigid_limit_with_trace(self, tmp_path, capsys):
        path = str(tmp_path / "w.locis")
        run(capsys, "gen", "sturmian", "--r", "(0+1*sqrt(2))/1", "--s", "0",
            "--width", "2000", "--out", path)
        trace_dir = str(tmp_path / "trace")
        code, doc = run(capsys, "rigid-limit", path, "--steps", "2",
                        "--seed", "0", "--trace", trace_dir)
        assert code == 0
        assert doc["verdict"] == "holds_up_to_bounds"
        assert len(doc["result"]["steps"]) == 3
        manifest = json.loads((tmp_path / "trace" / "manifest.json").read_text())
        assert len(manifest["steps"]) == 3

    def test_rigid_limit_periodic_fails(self, tmp_path, capsys):
        lang = Language([("Succ", 2), ("White", 1), ("Black", 1)])
        n = 201
        tuples = [("Succ", (str(i), str(i + 1))) for i in range(n - 1)]
        tuples += [("Black" if i % 2 else "White", (str(i),)) for i in range(n)]
        M = Structure(lang, [str(i) for i in range(n)], tuples,
                      frontier=("0", str(n - 1)))
        path = str(tmp_path / "per2.locis")
        textio.save(M, path)
        code, doc = run(capsys, "rigid-limit", path, "--steps", "1", "--seed", "100")
        assert code == 0
        assert doc["verdict"] == "fails_with_witness"
        assert "separation" in doc["result"]["stage"]

    def test_quotient_checkerboard(self, board_file, tmp_path, capsys):
        out = str(tmp_path / "q.locis")
        code, doc = run(capsys, "quotient", board_file,
                        "--displacement", "2", "--out", out)
        assert code == 0
        Q = textio.load(out)
        assert len(Q) == 2  # one orbit per color
        assert doc["result"]["group_size"] == 18  # even sublattice of Z6 x Z6


class TestReportPlumbing:
    def test_reports_are_deterministic(self, board_file, capsys):
        _, doc1 = run(capsys, "census", board_file, "--h", "1")
        _, doc2 = run(capsys, "census", board_file, "--h", "1")
        doc1.pop("generated_at")
        doc2.pop("generated_at")
        assert doc1 == doc2

    def test_report_flag_writes_same_document(self, board_file, tmp_path, capsys):
        rp = str(tmp_path / "report.json")
        code, doc = run(capsys, "census", board_file, "--h", "1", "--report", rp)
        assert code == 0
        stored = json.loads(open(rp).read())
        assert stored == doc

    def test_workers_flag_accepted(self, board_file, capsys):
        code, doc = run(capsys, "--workers", "4", "census", board_file, "--h", "1")
        assert code == 0

    def test_console_script_entry_point(self, tmp_path):
        out = str(tmp_path / "w.locis")
        proc = subprocess.run(
            [sys.executable, "-m", "locis.cli", "gen", "grid", "--dims", "4,4",
             "--mode", "torus", "--out", out],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["command"] == "gen"
