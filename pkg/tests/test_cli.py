import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from psat.cli import Config, UsageError, main


def run(*argv):
    lines = []
    code = main(list(argv), out=lines.append)
    return code, lines


def fx(name):
    return str(FIXTURES / name)


class TestCheck:
    def test_entail_holds(self):
        assert run("check", "--mode", "entail", "--assign", "A1", fx("ex1.fml")) == (0, ["holds"])

    def test_verify_fails(self):
        assert run("check", "--mode", "verify", "--assign", "A1", fx("ex1.fml")) == (1, ["does not hold"])

    def test_verify_ext_and_dual(self):
        assert run("check", "--mode", "verify-ext", "--assign", "A1", fx("ex1.fml"))[0] == 0
        assert run("check", "--mode", "dual", "--assign", "A1", fx("ex1.fml"))[0] == 0

    def test_negative_literal_and_explain(self):
        code, lines = run("check", "--mode", "dual", "--assign=-A1", "--explain", fx("ex1.fml"))
        assert code == 1
        assert lines[0].startswith("countermodel: -A1")

    def test_explain_residual(self):
        code, lines = run("check", "--mode", "verify", "--assign", "A1", "--explain", fx("ex1.fml"))
        assert lines == ["residual: A2 | !A2", "does not hold"]

    def test_exists(self):
        psi = fx("psi.fml")
        assert run("check", "--mode", "entail", "--assign", "A1", "--exists", "B1,B2", psi)[0] == 0
        assert run("check", "--mode", "verify", "--assign", "A1", "--exists", "B1,B2", psi)[0] == 1
        assert run("check", "--mode", "verify", "--assign", "A1,A2", "--exists", "B1,B2", psi)[0] == 0

    def test_exists_on_dimacs(self):
        # psi.cnf numbers B1, B2 as variables 3, 4
        assert run("check", "--mode", "entail", "--assign", "A1", "--exists", "A3,A4", fx("psi.cnf"))[0] == 0

    def test_exists_rejects_bound_in_assignment(self):
        assert run("check", "--mode", "entail", "--assign", "B1", "--exists", "B1,B2", fx("psi.fml"))[0] == 2

    def test_exists_rejects_dual(self):
        assert run("check", "--mode", "dual", "--assign", "A1", "--exists", "B1", fx("psi.fml"))[0] == 2


class TestErrors:
    def test_parse_error(self, tmp_path, capsys):
        p = tmp_path / "bad.fml"
        p.write_text("A1 & (A2 |")
        assert run("check", "--mode", "verify", str(p))[0] == 2
        assert "psat: error:" in capsys.readouterr().err

    def test_missing_file(self):
        assert run("check", "--mode", "verify", "/nonexistent.fml")[0] == 2

    def test_bad_dimacs(self, tmp_path):
        p = tmp_path / "bad.cnf"
        p.write_text("p cnf 2 1\n1 5 0\n")
        assert run("enumerate", str(p))[0] == 2

    def test_expansion_bound(self, capsys):
        code, _ = run("--expansion-bound", "1", "shannon", "--exists", "B1,B2", fx("psi.fml"))
        assert code == 2
        assert "expansion too large" in capsys.readouterr().err

    def test_bad_subcommand(self):
        assert run("frobnicate")[0] == 2

    def test_bound_must_be_positive(self):
        with pytest.raises(UsageError):
            Config(expansion_bound=0)

    def test_env_fallback(self, monkeypatch):
        monkeypatch.setenv("PSAT_EXPANSION_BOUND", "1")
        assert run("shannon", "--exists", "B1,B2", fx("psi.fml"))[0] == 2
        # the flag wins over the environment
        assert run("--expansion-bound", "4", "shannon", "--exists", "B1,B2", fx("psi.fml"))[0] == 0
        monkeypatch.setenv("PSAT_EXPANSION_BOUND", "x")
        assert run("shannon", "--exists", "B1,B2", fx("psi.fml"))[0] == 2

    def test_count_with_overlap(self):
        assert run("enumerate", "--overlap", "--count", fx("phi_star.fml"))[0] == 2


class TestShannon:
    def test_psi(self):
        code, lines = run("shannon", "--exists", "B1,B2", fx("psi.fml"))
        assert code == 0
        assert [l.split("]")[0] + "]" for l in lines] == ["[B1 B2]", "[B1 -B2]", "[-B1 B2]", "[-B1 -B2]"]
        assert lines[3] == "[-B1 -B2] false"


class TestEnumerate:
    def test_phi_star_entail(self):
        assert run("enumerate", "--mode", "entail", fx("phi_star.fml")) == (0, ["A1 -A3"])

    def test_phi_star_verify_count(self):
        code, lines = run("enumerate", "--mode", "verify", "--count", fx("phi_star.fml"))
        assert code == 0 and len(lines) == 5 and lines[-1] == "models 4"

    def test_split_engine(self):
        code, lines = run("enumerate", "--mode", "verify", "--engine", "split", fx("ex1.fml"))
        assert lines == ["A1 A2", "A1 -A2"]
        assert run("enumerate", "--mode", "entail", "--engine", "split", fx("ex1.fml"))[0] == 2

    def test_projected(self):
        assert run("enumerate", "--project", "B1,B2", fx("psi.fml")) == (0, ["A1"])

    def test_valid_formula(self, tmp_path):
        p = tmp_path / "t.fml"
        p.write_text("A | !A")
        assert run("enumerate", "--count", str(p)) == (0, ["true", "models 2"])

    def test_json_schema(self):
        code, lines = run("enumerate", "--json", fx("phi_star.fml"))
        doc = json.loads(lines[0])
        assert set(doc) == {"cubes", "disjoint", "model_count", "stats"}
        assert doc["cubes"] == [["A1", "-A3"]]
        assert doc["model_count"] == 4 and doc["disjoint"] is True
        assert set(doc["stats"]) == {"num_cubes", "sum_cube_sizes", "solver_calls", "wall_ms"}

    def test_json_overlap(self):
        doc = json.loads(run("enumerate", "--json", "--overlap", fx("ex1.fml"))[1][0])
        assert doc["model_count"] is None and doc["disjoint"] is False

    def test_stdin(self, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO("A1 & !A2"))
        assert run("enumerate", "-") == (0, ["A1 -A2"])


class TestCnfize:
    def test_tseitin_to_files(self, tmp_path):
        out = tmp_path / "ex1.cnf"
        assert run("cnfize", "-o", str(out), fx("ex1.fml"))[0] == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "p cnf 4 7"
        amap = (tmp_path / "ex1.cnf.map").read_text().splitlines()
        assert amap == ["atom A1 1", "atom A2 2", "atom _B1 3 fresh", "atom _B2 4 fresh"]

    def test_pg_stdout(self, capsys, tmp_path):
        m = tmp_path / "m"
        assert run("cnfize", "--method", "pg", "--map", str(m), fx("ex1.fml"))[0] == 0
        assert capsys.readouterr().out.splitlines()[0] == "p cnf 4 5"
        assert m.exists()

    def test_round_trip_through_enumerate(self, tmp_path):
        out = tmp_path / "ex1.cnf"
        run("cnfize", "-o", str(out), fx("ex1.fml"))
        # projecting the fresh variables back out gives the original cover
        assert run("enumerate", "--project", "A3,A4", str(out)) == (0, ["A1"])


class TestCompare:
    def test_table(self):
        code, lines = run("compare", fx("phi_star.fml"))
        assert code == 0
        assert lines[0].split() == ["mode", "cubes", "literals", "solver_calls", "models"]
        assert lines[1].split()[:3] == ["verify", "4", "16"]
        assert lines[2].split()[:3] == ["entail", "1", "2"]

    def test_json(self):
        rows = json.loads(run("compare", "--json", fx("phi_star.fml"))[1][0])
        assert [r["mode"] for r in rows] == ["verify", "entail"]
        assert rows[1]["cube_sizes"] == [2]

    @pytest.mark.parametrize("ext", ["png", "svg"])
    def test_figure(self, tmp_path, ext):
        fig = tmp_path / f"cmp.{ext}"
        assert run("compare", "--figure", str(fig), fx("phi_star.fml"))[0] == 0
        assert fig.stat().st_size > 1000


class TestSelftest:
    def test_passes(self):
        code, lines = run("selftest")
        assert code == 0
        assert len(lines) == 7 and all(l.startswith("PASS  ") for l in lines)

    def test_module_entry_point(self):
        r = subprocess.run([sys.executable, "-m", "psat", "selftest"], capture_output=True, text=True)
        assert r.returncode == 0 and r.stdout.count("PASS") == 7
