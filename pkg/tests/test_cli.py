import json
import os

import pytest

from aggsep.cli import EXIT_LP, EXIT_OK, EXIT_PARSE, main

from helpers import EXAMPLE1_MPS, corpus_paths


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def test_relax_writes_solution(tmp_path):
    out = tmp_path / "point.sol"
    assert main(["relax", "--instance", EXAMPLE1_MPS, "--out", str(out)]) == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("x1 ")


def test_separate_end_to_end(tmp_path):
    mps, sol = corpus_paths()[0]
    cuts = tmp_path / "cuts.jsonl"
    report = tmp_path / "metrics.report"
    code = main([
        "separate", "--instance", mps, "--solution", sol, "--algo", "both",
        "--start-rows", "all", "--out", str(cuts), "--report", str(report),
    ])
    assert code == EXIT_OK
    for line in cuts.read_text().splitlines():
        rec = json.loads(line)
        assert rec["sense"] == "<="
        assert set(rec) >= {"name", "coefficients", "rhs", "violation", "provenance"}
    text = report.read_text()
    assert "algorithm lasso" in text and "algorithm mw" in text


def test_separate_single_algorithm(tmp_path):
    mps, sol = corpus_paths()[0]
    cuts = tmp_path / "cuts.jsonl"
    code = main([
        "separate", "--instance", mps, "--solution", sol, "--algo", "mw",
        "--start-rows", "top:5", "--out", str(cuts),
    ])
    assert code == EXIT_OK
    for line in cuts.read_text().splitlines():
        assert json.loads(line)["provenance"]["algorithm"] == "mw"


def test_compare_deterministic_bytes(tmp_path, capsys):
    mps, sol = corpus_paths()[0]
    outputs = []
    for tag in ("a", "b"):
        report = tmp_path / ("report_%s" % tag)
        cuts = tmp_path / ("cuts_%s" % tag)
        code = main([
            "compare", "--instance", mps, "--solution", sol,
            "--report", str(report), "--out", str(cuts),
            "--start-rows", "all",
        ])
        assert code == EXIT_OK
        outputs.append((report.read_bytes(), cuts.read_bytes()))
    capsys.readouterr()
    assert outputs[0] == outputs[1]


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.mps"
    _write(str(bad), "ROWS\n L c1\n L c1\nCOLUMNS\n x c1 1.0\n")
    out = tmp_path / "cuts.jsonl"
    code = main(["separate", "--instance", str(bad), "--out", str(out)])
    assert code == EXIT_PARSE


def test_lp_failure_exit_code(tmp_path):
    infeasible = tmp_path / "infeasible.mps"
    _write(
        str(infeasible),
        "NAME infeasible\nROWS\n N obj\n L c1\n G c2\nCOLUMNS\n"
        " x c1 1.0 c2 1.0\nRHS\n rhs c1 0.0 c2 1.0\n",
    )
    out = tmp_path / "cuts.jsonl"
    code = main(["separate", "--instance", str(infeasible), "--out", str(out)])
    assert code == EXIT_LP


def test_console_script_installed():
    import importlib.metadata as md

    eps = md.entry_points(group="console_scripts")
    assert any(ep.name == "aggsep" for ep in eps)
