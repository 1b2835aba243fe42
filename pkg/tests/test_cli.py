import json

import pytest

from lamsep.cli import main, parse_config
from lamsep.errors import ParseError, ValidationError


def write_config(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_parse_minimal_theorem2_fills_defaults(tmp_path):
    path = write_config(tmp_path, {"command": "verify-theorem2", "alpha1": 1,
                                   "alpha2": 1, "nu": 1, "delta": 1})
    cfg = parse_config(path)
    assert cfg.command == "verify-theorem2"
    assert cfg.arc.phase == 0.0
    assert cfg.arc.s_range == (0.0, 0.5)
    assert cfg.params.nu == 1.0


def test_parse_rejects_negative_alpha2(tmp_path):
    path = write_config(tmp_path, {"command": "verify-theorem2", "alpha2": -1})
    with pytest.raises(ValidationError):
        parse_config(path)


def test_parse_rejects_unknown_key(tmp_path):
    path = write_config(tmp_path, {"command": "verify-theorem2", "alpha3": 2.0})
    with pytest.raises(ParseError, match="alpha3"):
        parse_config(path)


def test_parse_reports_all_violations(tmp_path):
    path = write_config(tmp_path, {"command": "verify-theorem1", "alpha1": -1, "nu": -2})
    with pytest.raises(ValidationError) as err:
        parse_config(path)
    assert "alpha1" in str(err.value) and "nu" in str(err.value)


def test_parse_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError, match="line"):
        parse_config(str(path))


def test_flags_override_file(tmp_path):
    path = write_config(tmp_path, {"command": "verify-theorem2", "alpha1": 1.0})
    cfg = parse_config(path, {"alpha1": 3.0})
    assert cfg.params.alpha1 == 3.0


def test_command_conflict(tmp_path):
    path = write_config(tmp_path, {"command": "verify-theorem2"})
    with pytest.raises(ValidationError):
        parse_config(path, command="verify-theorem1")


def test_empty_sweep_axis_rejected(tmp_path):
    path = write_config(tmp_path, {"command": "sweep", "delta_values": []})
    with pytest.raises(ValidationError):
        parse_config(path)


def test_theorem1_run_exit0(tmp_path):
    rc = main(["verify-theorem1", "--out", str(tmp_path / "o")])
    assert rc == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["payload"]["min_mismatch"] > 0
    assert report["erratum_notes"]["pperp_variant_supported_by_fd"] == "corrected"
    lines = (tmp_path / "o" / "data.csv").read_text().splitlines()
    assert lines[0] == "r,lhs,rhs,mismatch"


def test_theorem2_run_exit2_and_adjudication(tmp_path):
    rc = main(["verify-theorem2", "--out", str(tmp_path / "o")])
    assert rc == 2  # printed and derived limits disagree: tracked erratum
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["payload"]["agrees_with"] == "oracle"
    assert report["payload"]["paper_value"] == pytest.approx(-2.0)
    assert report["payload"]["oracle_value"] == pytest.approx(-3.0, rel=1e-6)


def test_classify_laminar_run(tmp_path):
    rc = main(["classify", "--out", str(tmp_path / "o")])
    assert rc == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["payload"]["kind"] == "Parallel"


def test_trace_run(tmp_path):
    rc = main(["trace", "--out", str(tmp_path / "o")])
    assert rc == 0
    lines = (tmp_path / "o" / "data.csv").read_text().splitlines()
    assert lines[0] == "index,x,y,cumlen"
    assert len(lines) > 100


def test_zeta_run(tmp_path):
    cfg = write_config(tmp_path, {"command": "zeta-check", "alpha1": 2.0})
    rc = main(["zeta-check", "--config", cfg, "--out", str(tmp_path / "o")])
    assert rc == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["payload"]["bounds_hold"] is True
    assert report["payload"]["ratio_limit"] == pytest.approx(1.0, abs=1e-3)


def test_simulate_run(tmp_path):
    cfg = write_config(tmp_path, {"command": "simulate", "n_s": 16, "n_r": 16,
                                  "t_end": 0.002})
    rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")])
    assert rc == 0
    assert (tmp_path / "o" / "field.csv").exists()
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert all(entry["ratio"] < 0 for entry in report["payload"]["t0"])


def test_sweep_monotone_and_nu_scaling(tmp_path):
    cfg = write_config(tmp_path, {"command": "sweep", "delta_values": [0.5, 1.0, 2.0],
                                  "nu_values": [1.0, 2.0]})
    rc = main(["sweep", "--config", cfg, "--out", str(tmp_path / "o")])
    assert rc == 0
    lines = (tmp_path / "o" / "data.csv").read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    assert len(rows) == 6
    # |limit| strictly decreasing in delta at fixed nu
    for nu in ("1", "2"):
        limits = [abs(float(r["limit"])) for r in rows if float(r["nu"]) == float(nu)]
        assert limits[0] > limits[1] > limits[2]
    # limit linear in nu at fixed delta
    by_delta = {}
    for r in rows:
        by_delta.setdefault(float(r["delta"]), []).append(float(r["limit"]))
    for d, vals in by_delta.items():
        assert vals[1] == pytest.approx(2.0 * vals[0], rel=1e-9)


def test_determinism_byte_identical(tmp_path):
    for name in ("a", "b"):
        rc = main(["verify-theorem2", "--out", str(tmp_path / name)])
        assert rc == 2
    assert (tmp_path / "a" / "data.csv").read_bytes() == (tmp_path / "b" / "data.csv").read_bytes()


def test_determinism_simulate(tmp_path):
    cfg = write_config(tmp_path, {"command": "simulate", "n_s": 16, "n_r": 16,
                                  "t_end": 0.002})
    for name in ("a", "b"):
        rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / name)])
        assert rc == 0
    assert (tmp_path / "a" / "data.csv").read_bytes() == (tmp_path / "b" / "data.csv").read_bytes()
    assert (tmp_path / "a" / "field.csv").read_bytes() == (tmp_path / "b" / "field.csv").read_bytes()


def test_unknown_command_errors():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_run_reports_wall_clock_only_in_envelope(tmp_path):
    rc = main(["verify-theorem1", "--out", str(tmp_path / "o")])
    assert rc == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert "wall_clock_s" in report
    assert "schema_version" in report
    data = (tmp_path / "o" / "data.csv").read_text()
    assert "wall" not in data


def test_trace_pressure_and_level_kinds(tmp_path):
    for kind in ("pressure", "level"):
        cfg = write_config(tmp_path, {"command": "trace", "kind": kind,
                                      "alpha1": 2.0, "length": 0.05}, f"{kind}.json")
        rc = main(["trace", "--config", cfg, "--out", str(tmp_path / kind)])
        assert rc == 0


def test_zeta_perturbed_command(tmp_path):
    cfg = write_config(tmp_path, {"command": "zeta-check", "alpha1": 2.0,
                                  "pressure": "perturbed", "amp": 0.3})
    rc = main(["zeta-check", "--config", cfg, "--out", str(tmp_path / "o")])
    assert rc == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["payload"]["fitted_c"] > 0
