"""End-to-end tests for the command-line interface."""

import json

import numpy as np
import pytest

from ergofilt import chains
from ergofilt.cli import cli_main


def _parse_metadata(line):
    assert line.startswith("# ")
    pairs = dict(part.split("=") for part in line[2:].strip().split(", "))
    return float(pairs["lambda_low"]), float(pairs["pi_f"])


def test_cycle_walk_stdout(capsys):
    code = cli_main(["cycle-walk", "--paper-defaults"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 22
    lam, pi_f = _parse_metadata(lines[0])
    assert f"{lam:.4f}" == "0.0733"
    assert pi_f == pytest.approx(3.65)
    assert lines[1] == "degree,ergodic,bernstein,chebyshev,legendre"


def test_glauber_stdout_metadata(capsys):
    code = cli_main(["glauber", "--paper-defaults"])
    out = capsys.readouterr().out
    assert code == 0
    lam, _ = _parse_metadata(out.splitlines()[0])
    assert f"{lam:.3f}" == "0.155"
    assert lam == pytest.approx((1.0 - np.tanh(0.4)) / 4.0, abs=1e-10)


def test_explicit_p_k_max_seed(capsys):
    code = cli_main(["cycle-walk", "--p", "5", "--k-max", "3", "--seed", "17"])
    out = capsys.readouterr().out
    assert code == 0
    assert len(out.splitlines()) == 5


def test_even_p_rejected(capsys):
    code = cli_main(["cycle-walk", "--p", "10", "--paper-defaults"])
    captured = capsys.readouterr()
    assert code == 1
    assert "odd" in captured.err


def test_unknown_flag_exits_one(capsys):
    code = cli_main(["cycle-walk", "--paper-defaults", "--frobnicate"])
    captured = capsys.readouterr()
    assert code == 1
    assert "usage" in captured.err


def test_missing_signal_source(capsys):
    code = cli_main(["cycle-walk"])
    captured = capsys.readouterr()
    assert code == 1
    assert "signal" in captured.err


def test_wrong_signal_length(capsys):
    code = cli_main(["cycle-walk", "--signal", "1,2,3"])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_inline_signal(capsys):
    values = ",".join(str(v) for v in range(1, 12))
    code = cli_main(["cycle-walk", "--signal", values, "--k-max", "2"])
    out = capsys.readouterr().out
    assert code == 0
    _, pi_f = _parse_metadata(out.splitlines()[0])
    assert pi_f == pytest.approx(6.0)


def test_file_signal(tmp_path, capsys):
    path = tmp_path / "signal.txt"
    path.write_text("1, 2, 3 4\n5 6,7\n8 9 10 11\n")
    code = cli_main(["cycle-walk", "--signal", f"@{path}", "--k-max", "2"])
    out = capsys.readouterr().out
    assert code == 0
    _, pi_f = _parse_metadata(out.splitlines()[0])
    assert pi_f == pytest.approx(6.0)


def test_out_file_deterministic(tmp_path, capsys):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert cli_main(["glauber", "--paper-defaults", "--k-max", "6", "--out", str(first)]) == 0
    assert cli_main(["glauber", "--paper-defaults", "--k-max", "6", "--out", str(second)]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert first.read_bytes() == second.read_bytes()


def test_json_output(tmp_path):
    path = tmp_path / "table.json"
    code = cli_main(
        ["cycle-walk", "--paper-defaults", "--k-max", "3", "--json", "--out", str(path)]
    )
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["metadata"]["experiment"] == "cycle-walk"
    assert [row["degree"] for row in payload["rows"]] == [1, 2, 3]


def test_multiple_sources_note(capsys):
    code = cli_main(["cycle-walk", "--paper-defaults", "--seed", "5", "--k-max", "2"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.err != ""
    _, pi_f = _parse_metadata(captured.out.splitlines()[0])
    assert pi_f == pytest.approx(3.65)


def test_lambda_low_flag(capsys):
    code = cli_main(
        ["cycle-walk", "--paper-defaults", "--k-max", "2", "--lambda-low", "0.5"]
    )
    out = capsys.readouterr().out
    assert code == 0
    lam, _ = _parse_metadata(out.splitlines()[0])
    assert lam == pytest.approx(0.5)


def test_negative_seed_rejected(capsys):
    code = cli_main(["cycle-walk", "--seed", "-1"])
    captured = capsys.readouterr()
    assert code == 1
    assert "seed" in captured.err


def test_success_stdout_clean(capsys):
    code = cli_main(["cycle-walk", "--paper-defaults", "--k-max", "1"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.err == ""
    assert captured.out.startswith("# lambda_low=")
