import io
import json
import subprocess
import sys

import pytest

from arithvol.cli import main, parse_n_range


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def tsv_rows(text):
    lines = text.strip().splitlines()
    head = lines[0].split("\t")
    return [dict(zip(head, line.split("\t"))) for line in lines[1:]]


class TestRange:
    def test_forms(self):
        assert parse_n_range("5..11") == [5, 7, 9, 11]
        assert parse_n_range("7") == [7]
        assert parse_n_range("5,9") == [5, 9]

    @pytest.mark.parametrize("text", ["6", "4..10", "x", "5,8"])
    def test_rejects(self, text):
        with pytest.raises(Exception):
            parse_n_range(text)


class TestVolumes:
    def test_table(self):
        code, text = run("volumes", "--n", "5..29", "--case", "both")
        assert code == 0
        rows = tsv_rows(text)
        assert len(rows) == 26
        first = {(r["n"], r["case"]): r for r in rows}
        assert first[("5", "compact")]["volume.decimal"].startswith("1.53")
        assert first[("29", "compact")]["volume.decimal"].endswith("e+163")

    def test_single(self):
        code, text = run("volumes", "--n", "5", "--case", "noncompact", "--prec-digits", "3")
        assert code == 0
        assert tsv_rows(text)[0]["volume.decimal"] == "3.65e-4"

    def test_even_n(self, capsys):
        assert run("volumes", "--n", "6")[0] == 1
        assert "even" in capsys.readouterr().err

    def test_tsv_json_same_numbers(self):
        _, t = run("volumes", "--n", "5..9")
        _, j = run("volumes", "--n", "5..9", "--format", "json")
        rows = json.loads(j)
        for a, b in zip(tsv_rows(t), rows):
            assert a["volume.decimal"] == b["volume"]["decimal"]
            assert float(a["volume.log"]) == b["volume"]["log"]
            assert float(a["volume.rel_err"]) == b["volume"]["rel_err"]
            assert a["index"] == b["index"]

    def test_deterministic(self):
        assert run("volumes", "--n", "5..15", "--format", "json") == \
            run("volumes", "--n", "5..15", "--format", "json")


class TestZeta:
    def test_rational(self):
        code, text = run("zeta", "--field", "Q", "--s", "2")
        assert code == 0
        assert tsv_rows(text)[0]["value.decimal"] == "1.64493e+0"

    def test_k0(self):
        _, text = run("zeta", "--field", "k0", "--s", "2", "--prec-digits", "7")
        assert tsv_rows(text)[0]["value.decimal"] == "1.161671e+0"

    def test_l0_tolerance(self):
        code, text = run("zeta", "--field", "l0", "--s", "3", "--tol", "1e-8", "--format",
                         "json")
        rec = json.loads(text)[0]
        assert code == 0 and rec["value"]["rel_err"] <= 1e-8

    def test_unknown_label(self, capsys):
        assert run("zeta", "--field", "nope", "--s", "2")[0] == 1
        assert "available" in capsys.readouterr().err

    def test_precision_failure(self, capsys):
        assert run("zeta", "--field", "l0", "--s", "2", "--tol", "1e-14")[0] == 2
        assert "precision" in capsys.readouterr().err

    def test_custom_table(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("Q\t1\t1\t0\t1\t1\t0,1\nk\t2\t2\t0\t13\t1\t-3,-1,1\n")
        code, text = run("zeta", "--field", "k", "--s", "4", "--fields", str(path))
        assert code == 0 and tsv_rows(text)[0]["inputs.field"] == "k"

    def test_bad_table(self, tmp_path, capsys):
        path = tmp_path / "t.tsv"
        path.write_text("Q\t1\t1\t0\t1\t1\t0,1\nk\t2\t2\n")
        assert run("zeta", "--field", "k", "--s", "4", "--fields", str(path))[0] == 1
        assert "line 2" in capsys.readouterr().err


class TestBounds:
    @pytest.mark.parametrize("argv,value", [
        (["--case", "compact-odd", "--r", "3", "--d", "4"], "1778"),
        (["--case", "compact-odd", "--r", "3", "--d", "6"], "143195"),
        (["--case", "triality", "--d", "4"], "490"),
    ])
    def test_parity_cutoffs(self, argv, value):
        code, text = run("bounds", *argv, "--parity")
        assert code == 0
        assert tsv_rows(text)[0]["cutoff_int"] == value

    def test_exact_default(self):
        _, text = run("bounds", "--case", "compact-odd", "--r", "3", "--d", "4")
        assert tsv_rows(text)[0]["cutoff_int"] == "1770"

    def test_lower_bound_mode(self):
        _, text = run("bounds", "--case", "compact-odd", "--r", "3", "--dk", "5", "--dl",
                      "275", "--format", "json")
        rec = json.loads(text)[0]
        assert rec["excluded"] is False

    def test_triality_rank(self):
        assert run("bounds", "--case", "triality", "--r", "5")[0] == 1

    def test_missing_rank(self):
        assert run("bounds", "--case", "compact-odd")[0] == 1


class TestSearch:
    def test_expected_survivors(self):
        code, text = run("search", "--case", "compact-odd", "--r", "3", "--builtin",
                         "--expect-paper")
        assert code == 0
        assert "survivors: (k0, l0)" in text

    def test_mismatch_exit(self, capsys):
        code, _ = run("search", "--case", "compact-odd", "--r", "3", "--no-units",
                      "--expect-paper")
        assert code == 3
        assert "differ" in capsys.readouterr().err

    def test_noncompact_even(self):
        _, text = run("search", "--case", "noncompact-even", "--r", "6", "--format", "json")
        assert json.loads(text)["survivors"] == ["(Q, Qs-3)"]

    def test_triality(self):
        code, text = run("search", "--case", "triality", "--r", "4", "--builtin",
                         "--expect-paper", "--format", "tsv")
        assert code == 0
        assert "survivor\t" not in text

    def test_deterministic_json(self):
        argv = ("search", "--case", "compact-even", "--r", "4", "--format", "json")
        assert run(*argv) == run(*argv)


class TestGrowth:
    def test_default_range(self):
        code, text = run("growth")
        rows = tsv_rows(text)
        assert code == 0 and [r["n"] for r in rows] == [str(n) for n in range(29, 60, 2)]
        assert all(r["exceeds_factorial"] == "true" for r in rows)

    def test_small(self):
        _, text = run("growth", "--n", "5,17", "--format", "json")
        rows = json.loads(text)
        assert rows[0]["ratio"]["decimal"].startswith("4.20")
        assert rows[1]["ratio"]["log"] > 43 * 2.302585


def test_format_choices_are_per_command():
    assert run("zeta", "--field", "Q", "--s", "2", "--format", "text")[0] == 1


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "arithvol.cli", "volumes", "--n", "7",
                           "--case", "noncompact", "--prec-digits", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "1.89e-6" in proc.stdout
