import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from expansion_bounds import __version__
from expansion_bounds.cli import main
from expansion_bounds.pairing import read_edge_list, sample_pairing
from expansion_bounds.schemas import BASELINE, BOUND_REPORT, NU_STAR, SAMPLE


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejects
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


# --- nu-star -------------------------------------------------------------------

@pytest.mark.parametrize("delta,text", [(4, "0.4894"), (6, "1.1205"), (8, "1.8130")])
def test_nu_star_text(capsys, delta, text):
    code, out, _ = run(capsys, "nu-star", "--delta", str(delta))
    assert code == 0
    assert out.strip() == text


def test_nu_star_json(capsys):
    code, out, _ = run(capsys, "nu-star", "--delta", "6", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, NU_STAR)
    assert data["nu_star"] == pytest.approx(1.1205070, abs=1e-7)
    assert data["verified"] is True


def test_nu_star_unverified_flag(capsys):
    code, out, _ = run(capsys, "nu-star", "--delta", "10")
    assert code == 0
    assert "unverified" in out


@pytest.mark.parametrize("argv", [
    ["nu-star", "--delta", "5"],
    ["nu-star", "--delta", "two"],
    ["nu-star"],
    ["nu-star", "--delta", "4", "--tol", "1e-20"],
    ["frobnicate"],
])
def test_nu_star_invalid(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


# --- baseline ------------------------------------------------------------------

@pytest.mark.parametrize("delta,text", [(4, "0.4401"), (6, "1.0437"), (8, "1.7160")])
def test_baseline(capsys, delta, text):
    code, out, _ = run(capsys, "baseline", "--delta", str(delta))
    assert code == 0 and out.strip() == text


def test_baseline_json(capsys):
    code, out, _ = run(capsys, "baseline", "--delta", "4", "--json")
    data = json.loads(out)
    jsonschema.validate(data, BASELINE)
    assert data["small_set_floor"] == 0.5


# --- certify -------------------------------------------------------------------

def test_certify_delta4_json(capsys):
    code, out, _ = run(capsys, "certify", "--delta", "4", "--grid", "200", "--json")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, BOUND_REPORT)
    cert = report["certificate"]
    assert cert["negative"] and cert["f_star_upper"] <= -0.009
    assert report["nu_star"] > report["baseline"]["nu_lower"]
    assert cert["worst_cell"]["total"] == cert["f_star_upper"]
    assert report["tool_version"] == __version__
    assert report["seed"] is None


@pytest.mark.parametrize("method", ["corner", "tangent"])
def test_certify_delta6_both_methods(capsys, method):
    code, out, _ = run(capsys, "certify", "--delta", "6", "--grid", "200", "--method", method, "--json")
    assert code == 0
    cert = json.loads(out)["certificate"]
    assert cert["method"] == method and cert["sign_disagreements"] == 0


def test_certify_coarse_grid_fails_with_exit_1(capsys):
    code, out, _ = run(capsys, "certify", "--delta", "8", "--grid", "5")
    assert code == 1
    assert "NOT certified" in out


def test_certify_coarse_grid_json_still_valid(capsys):
    code, out, _ = run(capsys, "certify", "--delta", "8", "--grid", "5", "--json")
    assert code == 1
    report = json.loads(out)
    jsonschema.validate(report, BOUND_REPORT)
    assert report["certificate"]["f_star_upper"] is None


def test_certify_margin_and_explicit_nu(capsys):
    code, out, _ = run(capsys, "certify", "--delta", "4", "--grid", "60", "--margin", "0.01", "--json")
    report = json.loads(out)
    assert report["certificate"]["nu"] == pytest.approx(report["nu_star"] - 0.01)
    code, out, _ = run(capsys, "certify", "--delta", "4", "--grid", "60", "--nu", "0.47", "--json")
    assert json.loads(out)["certificate"]["nu"] == 0.47


def test_certify_thread_count_does_not_change_output(capsys):
    outs = []
    for threads in ("1", "3"):
        code, out, _ = run(capsys, "certify", "--delta", "8", "--grid", "64", "--threads", threads, "--json")
        report = json.loads(out)
        outs.append(report["certificate"])
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [
    ["certify", "--delta", "4", "--method", "simplex"],
    ["certify", "--delta", "4", "--grid", "0"],
    ["certify", "--delta", "4", "--nu", "0.1"],
    ["certify", "--delta", "4", "--margin", "-1"],
    ["certify", "--delta", "4", "--alpha-floor", "0.7"],
    ["certify", "--delta", "4", "--threads", "0"],
])
def test_certify_invalid(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_certify_text_output(capsys):
    code, out, _ = run(capsys, "certify", "--delta", "4")
    assert code == 0
    assert "certified: f* < 0" in out and "worst cell" in out


# --- table ---------------------------------------------------------------------

def test_table_csv_round_trip(capsys):
    code, out, _ = run(capsys, "table", "--csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["delta", "bollobas", "amit_linial", "daneshgar", "ours"]
    assert len(rows) == 4
    assert rows[1] == ["4", "0.4401", "0.4403", "0.4452", "0.4894"]
    assert rows[2] == ["6", "1.0437", "1.0438", "1.0584", "1.1205"]
    assert rows[3] == ["8", "1.7160", "1.7161", "1.7297", "1.8130"]


def test_table_text_has_provenance(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    assert "0.4894" in out and "quoted as-is" in out


def test_table_env_override(capsys, monkeypatch):
    monkeypatch.setenv("EXPANSION_BOUNDS_DELTAS", "4,10")
    code, out, _ = run(capsys, "table", "--csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert [r[0] for r in rows[1:]] == ["4", "10"]
    assert rows[2][2] == rows[2][3] == ""  # no published values for delta = 10


def test_table_env_invalid(capsys, monkeypatch):
    monkeypatch.setenv("EXPANSION_BOUNDS_DELTAS", "4,5")
    code, _, err = run(capsys, "table")
    assert code == 2 and "EXPANSION_BOUNDS_DELTAS" in err


# --- sample --------------------------------------------------------------------

def test_sample_exact_deterministic(capsys):
    first = run(capsys, "sample", "--n", "12", "--delta", "4", "--seed", "1", "--exact", "--json")
    second = run(capsys, "sample", "--n", "12", "--delta", "4", "--seed", "1", "--exact", "--json")
    assert first == second and first[0] == 0
    data = json.loads(first[1])
    jsonschema.validate(data, SAMPLE)
    assert data["iota"] == 1.0
    assert data["witness"] == [0, 1, 4, 5, 7, 10]
    cv = data["configuration_vector"]
    assert cv["k"] == 6 and cv["c"] == 6


def test_sample_local_search(capsys):
    code, out, _ = run(capsys, "sample", "--n", "100", "--delta", "4", "--seed", "1", "--local-search", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, SAMPLE)
    assert data["iota"] >= 0 and data["method"] == "local_search"
    again = run(capsys, "sample", "--n", "100", "--delta", "4", "--seed", "1", "--local-search", "--json")
    assert json.loads(again[1]) == data


def test_sample_emit_round_trip(capsys, tmp_path):
    path = tmp_path / "graph.txt"
    code, out, _ = run(capsys, "sample", "--n", "10", "--delta", "4", "--seed", "3", "--emit", str(path))
    assert code == 0 and path.exists()
    assert read_edge_list(path).adjacency == sample_pairing(10, 4, 3).adjacency


@pytest.mark.parametrize("argv", [
    ["sample", "--n", "7", "--delta", "4"],
    ["sample", "--n", "10", "--delta", "3"],
    ["sample", "--n", "30", "--delta", "4", "--exact"],
    ["sample", "--n", "30", "--delta", "4"],
    ["sample", "--n", "10", "--delta", "4", "--exact", "--local-search"],
])
def test_sample_guards(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


# --- verify --------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "rootbound"],
    ["verify", "--suite", "ordering"],
    ["verify", "--suite", "counting", "--trials", "200000", "--seed", "3"],
])
def test_verify_suites_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    lines = out.strip().splitlines()
    assert all(line.startswith("[PASS]") for line in lines[:-1])


def test_verify_failure_exit_code(capsys, monkeypatch):
    import expansion_bounds.cli as cli
    from expansion_bounds.verification import Check
    monkeypatch.setattr(cli, "run_suite", lambda name, trials, seed: [Check("x", True), Check("y", False, "case 7")])
    code, out, _ = run(capsys, "verify", "--suite", "entropy")
    assert code == 1
    assert "[FAIL] y: case 7" in out


def test_verify_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "everything")
    assert code == 2


# --- process level -------------------------------------------------------------

def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "expansion_bounds", "nu-star", "--delta", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.4894"


def test_module_entry_point_invalid_exit_2():
    proc = subprocess.run([sys.executable, "-m", "expansion_bounds", "nu-star", "--delta", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.strip() == __version__


def test_schema_docs_in_sync():
    import pathlib
    import re
    from expansion_bounds.schemas import SCHEMAS
    text = (pathlib.Path(__file__).parents[1] / "docs" / "schemas.md").read_text()
    blocks = dict(re.findall(r"## (\w+)\n.*?```json\n(.*?)\n```", text, flags=re.S))
    assert set(blocks) == set(SCHEMAS)
    for name, schema in SCHEMAS.items():
        jsonschema.Draft202012Validator.check_schema(schema)
        assert json.loads(blocks[name]) == schema
