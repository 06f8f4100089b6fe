from __future__ import annotations

import json

from btbranch.cli import main
from btbranch.selftest import run_selftest


# the randomised self test


def test_small_run_passes_and_accounts_for_every_pair():
    report = run_selftest(seed=11, tau=1, count=25, radius=6)
    assert report.passing
    assert report.pair_attempted == 25
    assert report.pair_safe == report.pair_matched + report.pair_mismatched
    assert report.pair_attempted == report.pair_safe + report.pair_skipped
    assert report.pair_mismatched == 0
    assert report.branch_attempted > 0 and report.branch_mismatched == 0


def test_fixed_seed_runs_render_identically():
    a = run_selftest(seed=11, tau=1, count=25, radius=6).render()
    b = run_selftest(seed=11, tau=1, count=25, radius=6).render()
    assert a == b
    assert a.splitlines()[0].startswith("selftest seed=11")


def test_report_names_the_sign_convention_that_survived():
    report = run_selftest(seed=11, tau=1, count=40, radius=6)
    text = report.render()
    assert "corrections enter negatively" in text


def test_empty_run_is_trivially_green():
    report = run_selftest(seed=1, count=0)
    assert report.passing
    assert report.pair_attempted == 0
    assert report.defect_checked == 0


# command line: exit codes


def run_cli(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_defect_roundtrip(capsys):
    code, out, _ = run_cli(capsys, ["defect", "as", "t^-1", "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec["ideal"] == "(t^-1)" and rec["ideal_val"] == -1


def test_cli_classify_reports_the_cell(capsys):
    code, out, _ = run_cli(capsys, ["classify", "0", "t", "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec["class"] == "ramified_insep"
    assert rec["cell"] == "B^i" and rec["t"] == 0


def test_cli_branch_describes_the_shape(capsys):
    code, out, _ = run_cli(capsys, ["branch", "[[0,0],[1,1]]",
                                    "--radius", "3", "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec["shape"] == "thick" and rec["stem_kind"] == "maxpath"
    assert sorted(rec["ends"]) == ["0", "1"]


def test_cli_relpos_predicts_a_blob(capsys):
    code, out, _ = run_cli(capsys, ["relpos", "[[0,1],[0,0]]",
                                    "[[t,1],[t^2,t]]", "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec == {"kind": "blob", "diameter": 2, "depth": 1,
                   "stem_is_edge": False}


def test_cli_distance_prints_the_prediction(capsys):
    code, out, _ = run_cli(capsys, ["df", "--lambda", "t^-2",
                                    "--m1", "1,0", "--m2", "1,0"])
    assert code == 0
    assert "stem distance 2" in out


def test_cli_exists_on_the_division_datum(capsys):
    code, out, _ = run_cli(capsys, ["exists", "--lambda", "0",
                                    "--m1", "1,1", "--m2", "0,t",
                                    "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec["exists"] is False and rec["condition"] == "none"


def test_cli_oracle_agrees_on_an_honest_pair(capsys):
    code, out, _ = run_cli(capsys, ["oracle", "[[0,1],[0,0]]",
                                    "[[t,1],[t^2,t]]", "--radius", "6"])
    assert code == 0
    assert "verdict: MATCH" in out


def test_cli_oracle_flags_an_uncertified_window(capsys):
    code, out, _ = run_cli(capsys, ["oracle", "[[0,1],[0,0]]",
                                    "[[t^-2,1],[t^-4,t^-2]]", "--radius", "3"])
    assert code == 1
    assert "MISMATCH" in out


def test_cli_rejects_garbage_input(capsys):
    code, _, err = run_cli(capsys, ["defect", "as", "t^**"])
    assert code == 2
    assert "error" in err


def test_cli_rejects_unknown_subcommands(capsys):
    code, _, _ = run_cli(capsys, ["frobnicate"])
    assert code == 2


def test_cli_reports_insufficient_precision(capsys):
    code, _, err = run_cli(capsys, ["df", "--lambda", "0 (mod t^4)",
                                    "--m1", "0,t", "--m2", "0,t"])
    assert code == 3
    assert "precision" in err


def test_cli_selftest_smoke(capsys):
    code, out, _ = run_cli(capsys, ["selftest", "--count", "5",
                                    "--radius", "6", "--seed", "11"])
    assert code == 0
    assert "pairs:" in out


def test_cli_writes_a_dot_file(tmp_path, capsys):
    target = tmp_path / "window.dot"
    code, _, _ = run_cli(capsys, ["branch", "[[0,t],[0,0]]",
                                  "--radius", "2", "--dot", str(target)])
    assert code == 0
    text = target.read_text()
    assert text.startswith("graph") and "lightblue" in text
