import json
import subprocess
import sys

import pytest

from nabounds.applications import adjacent_threshold_weight
from nabounds.blackbox import generate, load_problem
from nabounds.certfile import write_certificate
from nabounds.cli import CSV_COLUMNS, fmt_float, main, table_rows
from nabounds.minimax import verify_duality


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def adjacent_cert(tmp_path):
    path = tmp_path / "adjacent.cert"
    write_certificate(adjacent_threshold_weight(generate("ordered_search", 4)), path)
    return path


class TestFormatting:
    @pytest.mark.parametrize("value,text", [(7.0, "7.0"), (0.028595479, "0.0286"),
                                            (0.20016835, "0.2002"), (15 / 4, "3.75")])
    def test_fmt_float(self, value, text):
        assert fmt_float(value) == text


class TestBounds:
    def test_minimax_row(self, capsys):
        code, out, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "8",
                           "--method", "minimax", "--epsilon", "1/3")
        assert code == 0
        assert "minimax_DL 7 7.0 C_eps=0.0286 bound=0.2002" in out.splitlines()

    def test_unweighted_star(self, capsys):
        code, out, _ = run(capsys, "bounds", "--family", "unordered-search", "--size", "4",
                           "--method", "unweighted", "--relation", "star")
        assert code == 0
        assert out.splitlines()[1].startswith("unweighted 4 4.0 ")

    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                           "--method", "minimax", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1] == "ordered_search,4,minimax_DL,3,1,0,1/3,0.0286,0.08579"

    def test_certificate_methods(self, capsys, adjacent_cert):
        code, out, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                           "--method", "direct,weighted,probabilistic",
                           "--certificate", str(adjacent_cert))
        assert code == 0
        kinds = [line.split()[0] for line in out.splitlines()[1:]]
        assert kinds == ["direct_nonadaptive", "weighted_adversary", "probabilistic"]

    def test_method_order_is_canonical(self, capsys):
        _, a, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                      "--method", "adaptive-minimax", "--method", "minimax")
        _, b, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                      "--method", "minimax,adaptive-minimax")
        assert a == b
        assert a.splitlines()[-1].startswith("adaptive_minimax 3 ")

    def test_profile_file(self, capsys, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(json.dumps({"rows": [["1/3", "1/3", "1/3"]] * 8}))
        code, out, _ = run(capsys, "bounds", "--family", "unordered-search", "--size", "3",
                           "--method", "adaptive-minimax", "--profile", str(path))
        assert code == 0 and out.splitlines()[1].startswith("adaptive_minimax 3 3.0 ")

    def test_missing_certificate(self, capsys):
        code, _, err = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                           "--method", "direct")
        assert code == 2 and "certificate" in err

    def test_no_method(self, capsys):
        assert run(capsys, "bounds", "--family", "ordered-search", "--size", "4")[0] == 2

    def test_bad_epsilon(self, capsys):
        code, _, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                         "--method", "minimax", "--epsilon", "1/2")
        assert code == 2

    def test_cap(self, capsys):
        code, _, err = run(capsys, "bounds", "--family", "unordered-search", "--size", "30",
                           "--method", "minimax")
        assert code == 3 and "cap" in err

    def test_pairs_cap(self, capsys):
        code, _, _ = run(capsys, "bounds", "--family", "element-distinctness", "--size", "4",
                         "--method", "minimax", "--pairs-cap", "100")
        assert code == 3

    def test_unreadable_problem(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, _ = run(capsys, "bounds", "--problem", str(bad), "--method", "minimax")
        assert code == 2

    def test_relation_file(self, capsys, tmp_path):
        rel = tmp_path / "rel.txt"
        rel.write_text("0 1\n1 2  # adjacent\n2 3\n")
        code, out, _ = run(capsys, "bounds", "--family", "ordered-search", "--size", "4",
                           "--method", "minimax", "--relation", str(rel))
        assert code == 0 and out.splitlines()[1].startswith("minimax_DL 3 ")

    def test_byte_identical(self, capsys, adjacent_cert):
        argv = ["bounds", "--family", "ordered-search", "--size", "4", "--method",
                "direct,weighted,probabilistic,minimax", "--certificate", str(adjacent_cert),
                "--format", "csv"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


class TestCertify:
    def test_valid(self, capsys, adjacent_cert):
        code, out, _ = run(capsys, "certify", str(adjacent_cert))
        assert code == 0 and out == "valid\n"

    def test_wrong_problem(self, capsys, adjacent_cert):
        code, out, _ = run(capsys, "certify", "--family", "unordered-search", "--size", "4",
                           str(adjacent_cert))
        assert code == 1 and out.strip()

    def test_malformed_fraction(self, capsys, tmp_path):
        path = tmp_path / "bad.cert"
        path.write_text("problem ordered_search 4\n0 1 1/x\n")
        assert run(capsys, "certify", str(path))[0] == 2

    def test_duality_round_trip(self, capsys, tmp_path):
        path = tmp_path / "dual.cert"
        path.write_text(verify_duality(generate("ordered_search", 6)).to_text())
        code, out, _ = run(capsys, "certify", str(path))
        assert code == 0 and out == "valid\n"

    def test_duality_mismatch(self, capsys, tmp_path):
        path = tmp_path / "dual.cert"
        path.write_text("problem ordered_search 4\ndistribution\n0 1/4\n1 1/4\n2 1/4\n3 1/4\n"
                        "weight\n0 1 1\n1 2 1\n2 3 1\n")
        assert run(capsys, "certify", str(path))[0] == 1


class TestGenerateAndTable:
    def test_generate_round_trip(self, capsys, tmp_path):
        out = tmp_path / "p.json"
        assert run(capsys, "generate", "--family", "connectivity", "--size", "6",
                   "-o", str(out))[0] == 0
        assert load_problem(out) == generate("connectivity", 6)

    def test_generate_stdout(self, capsys):
        code, out, _ = run(capsys, "generate", "--family", "ordered-search", "--size", "3")
        assert code == 0 and json.loads(out)["outputs"] == [1, 2, 3]

    def test_table_all_exact(self):
        rows = table_rows("1/3")
        assert all(r.match in ("exact", "-") for r in rows)
        ordered = [r for r in rows if r.problem == "ordered_search" and r.quantity == "DL"]
        assert [(r.size, r.computed) for r in ordered] == [(4, 3), (8, 7), (16, 15)]

    def test_table_csv(self, capsys):
        code, out, _ = run(capsys, "table", "--format", "csv")
        assert code == 0
        assert "connectivity,6,edge identity max/total,96,96,exact,-" in out.splitlines()

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "nabounds", "bounds", "--family",
                              "ordered-search", "--size", "4", "--method", "direct"],
                             capture_output=True, text=True)
        assert res.returncode == 2
