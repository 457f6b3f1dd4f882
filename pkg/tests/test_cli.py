"""Command-line surface: wording, exit statuses, pipelines, determinism."""

import subprocess
import sys

import pytest

from hsd.catalog import catalog_get
from hsd.cli import main
from hsd.core import parse_type, verify_design
from hsd.files import parse_design, parse_starter, serialize_design


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- feasible ------------------------------------------------------------------

def test_feasible_yes(capsys):
    code, out, _ = run(capsys, "feasible", "8", "2")
    assert code == 0
    assert out == "feasible, expected 150 blocks\n"


def test_feasible_congruence(capsys):
    code, out, _ = run(capsys, "feasible", "9", "1")
    assert code == 1
    assert out == "infeasible: congruence\n"


def test_feasible_other_failures(capsys):
    code, out, _ = run(capsys, "feasible", "3", "1")
    assert code == 1 and out == "infeasible: needs at least four short holes\n"
    code, out, _ = run(capsys, "feasible", "4", "5")
    assert code == 1 and out == "infeasible: size bound\n"


# --- develop / verify ------------------------------------------------------------

def test_develop_verify_pipeline(tmp_path, capsys):
    starter = tmp_path / "ex21.starter"
    starter.write_text(catalog_get("Ex2.1").text())
    out_file = tmp_path / "ex21.design"

    code, _, err = run(capsys, "develop", str(starter), "-o", str(out_file))
    assert code == 0
    assert "105 blocks" in err

    code, out, _ = run(capsys, "verify", str(out_file))
    assert code == 0
    assert out.startswith("PASS")
    assert "3^7 1^1" in out and "105 blocks" in out


def test_develop_output_round_trips_bit_identically(tmp_path, capsys):
    starter = tmp_path / "a1.starter"
    starter.write_text(catalog_get("A1/3^8 1^1").text())
    out_file = tmp_path / "a1.design"
    run(capsys, "develop", str(starter), "-o", str(out_file))
    text = out_file.read_text()
    assert serialize_design(parse_design(text)) == text


def test_verify_rejects_damaged_design(tmp_path, capsys):
    d = catalog_get("S/1^4").design()
    lines = serialize_design(d).splitlines(keepends=True)
    damaged = "".join(line for line in lines if not line.startswith("block: 0 1 "))
    f = tmp_path / "bad.design"
    f.write_text(damaged)
    code, out, err = run(capsys, "verify", str(f))
    assert code == 1
    assert out.startswith("FAIL")
    assert err  # at least one diagnostic line


def test_verify_many_files_worst_status_wins(tmp_path, capsys):
    good = tmp_path / "good.design"
    good.write_text(serialize_design(catalog_get("S/1^4").design()))
    bad = tmp_path / "bad.design"
    bad.write_text(serialize_design(catalog_get("S/1^4").design()).replace(
        "block: 0 1 2 3\n", "", 1))
    code, out, _ = run(capsys, "verify", str(good), str(bad))
    assert code == 1
    assert out.count("PASS") == 1 and out.count("FAIL") == 1


def test_verify_accepts_starter_files_by_developing(tmp_path, capsys):
    f = tmp_path / "ex22.starter"
    f.write_text(catalog_get("Ex2.2").text())
    code, out, _ = run(capsys, "verify", str(f))
    assert code == 0
    assert "150 blocks" in out


# --- catalog ------------------------------------------------------------------

def test_catalog_list_filter(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--table", "C1")
    assert code == 0
    assert len(out.strip().splitlines()) == 9


def test_catalog_get_roundtrip(capsys):
    code, out, _ = run(capsys, "catalog", "get", "Ex2.1")
    assert code == 0
    assert out == catalog_get("Ex2.1").text()


def test_catalog_get_unknown_key(capsys):
    code, _, err = run(capsys, "catalog", "get", "nope")
    assert code == 3
    assert "error" in err


# --- prove ------------------------------------------------------------------

def test_prove_exists(capsys):
    code, out, _ = run(capsys, "prove", "3^12 4^1", "--materialize")
    assert code == 0
    assert "EXISTS" in out and "R-FILL-A" in out
    assert "materialized: 369 blocks, verified" in out


def test_prove_infeasible(capsys):
    code, out, _ = run(capsys, "prove", "3^6")
    assert code == 1
    assert "INFEASIBLE" in out


def test_prove_unknown(capsys):
    code, out, _ = run(capsys, "prove", "3^29 16^1")
    assert code == 2
    assert "UNKNOWN_HERE" in out


def test_prove_materialize_to_file(tmp_path, capsys):
    f = tmp_path / "got.design"
    code, _, _ = run(capsys, "prove", "3^12 4^1", "--materialize", "-o", str(f))
    assert code == 0
    d = parse_design(f.read_text())
    assert d.type == parse_type("3^12 4^1")
    assert verify_design(d).ok


# --- table ------------------------------------------------------------------

def test_table_text(capsys):
    code, out, err = run(capsys, "table", "--nmax", "8", "--umax", "6")
    assert code == 0
    assert out.splitlines()[0].startswith("type 3^n u^1")
    assert "undecided" not in err


def test_table_csv_deterministic(capsys):
    code1, out1, _ = run(capsys, "table", "--nmax", "8", "--umax", "8", "--csv")
    code2, out2, _ = run(capsys, "table", "--nmax", "8", "--umax", "8", "--csv")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.splitlines()[0] == "n,u,verdict,blocks,rule,witness"


def test_table_csv_to_file(tmp_path, capsys):
    f = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--nmax", "6", "--umax", "4", "--csv", str(f))
    assert code == 0 and out == ""
    assert f.read_text().startswith("n,u,verdict")


# --- search ------------------------------------------------------------------

def test_search_direct_found(capsys):
    code, out, err = run(capsys, "search", "direct", "--type", "3^4")
    assert code == 0
    assert "found" in err
    d = parse_design(out)
    assert verify_design(d).ok


def test_search_direct_none(capsys):
    code, _, err = run(capsys, "search", "direct", "--type", "1^5")
    assert code == 1
    assert "none" in err


def test_search_starter_found(capsys):
    code, out, err = run(capsys, "search", "starter", "--type", "3^5")
    assert code == 0
    ss = parse_starter(out)
    assert ss.type == parse_type("3^5")


def test_search_starter_none(capsys):
    code, _, err = run(capsys, "search", "starter", "--type", "3^4")
    assert code == 1


def test_search_orbits_found(capsys):
    code, out, _ = run(capsys, "search", "orbits", "--type", "3^4 1^1", "--step", "6")
    assert code == 0
    assert parse_starter(out).step == 6


def test_search_climb_timeout(capsys):
    code, _, err = run(capsys, "search", "climb", "--type", "1^5", "--budget", "0.3")
    assert code == 2
    assert "timeout" in err


# --- constructions ------------------------------------------------------------

def test_multiply_command(tmp_path, capsys):
    f = tmp_path / "base.design"
    f.write_text(serialize_design(catalog_get("S/3^4").design()))
    code, out, _ = run(capsys, "multiply", str(f), "3")
    assert code == 0
    d = parse_design(out)
    assert d.type == parse_type("9^4")
    assert len(d.blocks) == 243


def test_fill_command(tmp_path, capsys):
    outer = tmp_path / "outer.design"
    outer.write_text(catalog_get("C1/9^4 1^1").text())
    inner = tmp_path / "inner.design"
    inner.write_text(serialize_design(catalog_get("S/3^4").design()))
    code, out, _ = run(
        capsys, "fill", "a", str(outer), str(inner),
        "--new-points", "3", "--keep", "1",
    )
    assert code == 0
    d = parse_design(out)
    assert d.type == parse_type("3^12 4^1")
    assert len(d.blocks) == 369


def test_convert_quasigroup(tmp_path, capsys):
    f = tmp_path / "q.design"
    f.write_text(serialize_design(catalog_get("S/1^4").design()))
    code, out, err = run(capsys, "convert", "quasigroup", str(f))
    assert code == 0
    assert "frame check: PASS" in err
    grid = [line.split() for line in out.strip().splitlines()]
    assert grid[0][0] == "*"  # header corner, then column labels
    assert grid[1][1] == "."  # hole-interior cells print as dots
    assert grid[1][2] == "2"  # 0 * 1 from the first block


# --- error handling ------------------------------------------------------------

def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 3


def test_missing_argument_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["multiply"])
    assert exc.value.code == 3


def test_missing_file_reports_usage_error(capsys):
    code, _, err = run(capsys, "verify", "/nonexistent/file.design")
    assert code == 3
    assert "error" in err


def test_threads_flag_accepted(capsys):
    code1, out1, _ = run(capsys, "--threads", "1", "table", "--nmax", "6", "--umax", "4")
    code2, out2, _ = run(capsys, "--threads", "4", "table", "--nmax", "6", "--umax", "4")
    assert code1 == code2 == 0
    assert out1 == out2


# --- console script and stdin plumbing -------------------------------------------

def test_console_script_pipeline(tmp_path):
    starter = tmp_path / "p.starter"
    starter.write_text(catalog_get("Ex2.1").text())
    pipeline = f"{sys.executable} -m hsd.cli develop - < {starter} | {sys.executable} -m hsd.cli verify -"
    proc = subprocess.run(
        ["sh", "-c", pipeline], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("PASS")


def test_console_script_entry_point():
    proc = subprocess.run(
        ["hsd", "feasible", "8", "2"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert proc.stdout == "feasible, expected 150 blocks\n"
