from __future__ import annotations

import json

import pytest

from debranges import cli
from debranges.report import Record, from_json, to_json


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _records(out):
    return [from_json(line) for line in out.splitlines()]


def test_criterion_single_zero(capsys):
    code, out, _ = _run(capsys, "criterion", "--fixture", "single-zero", "--zeta", "0",
                        "--order", "0", "--format", "json")
    assert code == 0
    (record,) = _records(out)
    assert record["verdicts"]["total"] == "Finite"
    assert record["values"]["total"] == pytest.approx(1.0)


def test_verify_all_atom_at_one(capsys):
    code, out, _ = _run(capsys, "verify-all", "--fixture", "atom-at-1", "--format", "json")
    assert code == 0
    records = _records(out)
    assert records[-1]["verdicts"]["suite"] == "pass"
    at_one = [r for r in records if r["params"]["check"] == "boundary-point"
              and r["values"]["zeta"] == 0.0 and r["values"]["order"] == 0]
    assert at_one[0]["values"]["criterion"] == "Diverges"
    assert at_one[0]["values"]["probe"] == "divergent"


def test_malformed_spec_exit_one(capsys, tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("zeros: [[0.5, 0]]\natoms:\n  - [0.0, 1.0]\n  - [0.5, -1]\n")
    code, out, err = _run(capsys, "describe", "--spec", str(path))
    assert code == 1 and out == ""
    assert "ParseError" in err and "line 4, atoms[1]" in err


@pytest.mark.parametrize("argv", [
    ("model", "--fixture", "atom-at-1"),
    ("arc", "--fixture", "atom-at-1", "--start", "0.5", "--end", "2.5"),
    ("criterion", "--fixture", "single-zero"),
    ("probe", "--fixture", "single-zero", "--zeta", "0", "--depths", "3,2"),
    ("describe", "--spec", "/nonexistent/spec.yaml"),
])
def test_input_errors_exit_one(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == 1 and err.startswith("error")


def test_consistency_violation_exit_two(capsys, monkeypatch):
    monkeypatch.setattr(cli, "boundary_derivative_sup", lambda spec: 5.0)
    code, out, err = _run(capsys, "verify-all", "--fixture", "single-zero", "--format", "json")
    assert code == 2 and "consistency violation" in err
    assert _records(out)[-1]["verdicts"]["suite"] == "fail"


@pytest.mark.parametrize("argv", [
    ("describe", "--fixture", "tangential-family"),
    ("describe", "--fixture", "outer-half"),
    ("criterion", "--fixture", "tangential-family", "--zeta", "0", "--order", "1"),
    ("probe", "--fixture", "atom-at-1", "--zeta", "1", "--order", "1"),
    ("model", "--fixture", "two-zero-blaschke", "--zeta", "0.5", "--order", "2"),
    ("arc", "--fixture", "atom-at-1", "--start", "1.5", "--end", "0.5"),
    ("transfer", "--fixture", "single-zero"),
    ("bernstein", "--fixture", "atom-at-pi"),
    ("verify-all", "--fixture", "two-zero-blaschke"),
])
def test_json_round_trip(capsys, argv):
    code, out, _ = _run(capsys, *argv, "--format", "json")
    assert code == 0
    for line in out.splitlines():
        assert to_json(from_json(line)) == line
        assert list(json.loads(line)) == sorted(json.loads(line))


def test_text_format(capsys):
    code, out, _ = _run(capsys, "bernstein", "--fixture", "single-zero")
    assert code == 0
    assert out.startswith("== bernstein ==") and "bernstein: Holds" in out


def test_output_is_deterministic(capsys):
    first = _run(capsys, "verify-all", "--fixture", "three-zero-blaschke", "--format", "json")
    second = _run(capsys, "verify-all", "--fixture", "three-zero-blaschke", "--format", "json")
    assert first == second


def test_record_serialisation_of_special_values():
    record = Record("x", {"z": 1 + 2j}, {}, {"nan": float("nan"), "inf": float("inf")}, {})
    assert to_json(record) == ('{"command": "x", "evidence": {}, "params": {"z": [1.0, 2.0]}, '
                               '"values": {"inf": "inf", "nan": null}, "verdicts": {}}')


@pytest.mark.parametrize("name", sorted(cli.FIXTURES))
def test_verify_all_passes_on_every_fixture(capsys, name):
    # outer-half runs closed-form probes near the circle and takes about a minute
    code, out, err = _run(capsys, "verify-all", "--fixture", name, "--format", "json")
    assert code == 0, err
    assert _records(out)[-1]["verdicts"]["suite"] == "pass"
