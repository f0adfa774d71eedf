import csv
import dataclasses
import hashlib
import json
import math

import numpy as np
import pytest

from heraldsim import cli
from heraldsim.cli import (
    ConfigError,
    FilterSpec,
    ScenarioConfig,
    SweepSpec,
    emit,
    load_config,
    main,
    parse_config,
    run_scenario,
    run_sweep,
)
from heraldsim.quadrature import QuadratureError
from heraldsim.rates import heralding_efficiency

from conftest import source, waists


def write(tmp_path, text, name="scenario.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_defaults(tmp_path):
    cfg = load_config(write(tmp_path, "preset: noncollinear-degenerate\n"))
    assert cfg.waists_um == (250.0, 100.0, 100.0)
    assert cfg.signal_nm == 710.0
    assert cfg.exterior_angle_deg == 3.04 and cfg.theta_p_deg is None
    assert cfg.mode_truncation == 10 and cfg.spectrum_points == 2001
    assert load_config(write(tmp_path, "preset: collinear-nondegenerate\n")).signal_nm == 850.0


@pytest.mark.parametrize(
    "text, field",
    [
        ("preset: collinear-degenerate\nwaists_um: [250, -100, 100]\n", "waists_um"),
        ("preset: noncollinear-degenerate\ntheta_p_deg: 141.9\nexterior_angle_deg: 3.04\n", "theta_p_deg"),
        ("preset: collinear-degenerate\npower_mw: 0\n", "power_mw"),
        ("preset: collinear-degenerate\nsignal_nm: 700\n", "signal_nm"),
        ("preset: collinear-degenerate\nfilters: [{kind: top-hat, center_nm: 710, width_nm: -2}]\n", "filters[0].width_nm"),
        ("preset: collinear-degenerate\nsweep: {param: temperature, start: 1, stop: 2, steps: 2}\n", "sweep.param"),
        ("preset: collinear-degenerate\nwaist_um: [1, 2, 3]\n", "waist_um"),
        ("preset: type-ii\n", "preset"),
        ("waists_um: [1, 2, 3]\n", "preset"),
        ("preset: collinear-degenerate\nformat: xml\n", "format"),
    ],
)
def test_validation_names_field(tmp_path, text, field):
    with pytest.raises(ConfigError, match=rf"^{field.replace('[', '.').replace(']', '.')}"):
        load_config(write(tmp_path, text))


def test_yaml_error_has_line(tmp_path):
    with pytest.raises(ConfigError, match="line 3"):
        load_config(write(tmp_path, "preset: collinear-degenerate\nwaists_um: [1, 2\npower_mw: 3\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="nope.yaml"):
        load_config(tmp_path / "nope.yaml")


def test_flag_parsers():
    f = FilterSpec.parse("idler=short-pass:650")
    assert (f.arm, f.kind, f.edge_nm) == ("idler", "short-pass", 650.0)
    assert FilterSpec.parse("top-hat:710:23") == FilterSpec("top-hat", "both", center_nm=710.0, width_nm=23.0)
    assert SweepSpec.parse("pump-waist:100:300:5").values() == [100.0, 150.0, 200.0, 250.0, 300.0]
    for bad in ("top-hat:710", "gaussian:1:2", "left=top-hat:1:2"):
        with pytest.raises(ConfigError):
            FilterSpec.parse(bad)
    with pytest.raises(ConfigError):
        SweepSpec.parse("waist-scale:1:2")


def test_run_scenario_matches_library(tmp_path):
    cfg = parse_config({
        "preset": "noncollinear-degenerate",
        "filters": [{"kind": "top-hat", "center_nm": 710, "width_nm": 23}],
        "out": str(tmp_path / "a"),
    })
    rep = run_scenario(cfg)
    f = cfg.filters[0].build()
    want = heralding_efficiency(source("noncollinear-degenerate"), f, f)
    assert rep.rates.eta == pytest.approx(want.eta, rel=1e-12)
    assert rep.rates.R == pytest.approx(want.R, rel=1e-12)
    assert rep.rates.eta == pytest.approx(0.821, abs=0.04)
    assert rep.geometry["theta_p_deg"] == pytest.approx(141.9, abs=0.3)


def test_outputs_deterministic_and_manifest(tmp_path):
    cfg = ScenarioConfig(preset="noncollinear-nondegenerate", out=str(tmp_path), spectrum_points=301).resolved()
    files = ("spectra.csv", "report.json")
    rep = run_scenario(cfg)
    first = {f: (tmp_path / f).read_bytes() for f in files}
    run_scenario(cfg)
    assert {f: (tmp_path / f).read_bytes() for f in files} == first
    for fname, digest in rep.manifest.items():
        assert hashlib.sha256(first[fname]).hexdigest() == digest
    rows = list(csv.reader(first["spectra.csv"].decode().splitlines()))
    assert tuple(rows[0]) == cli.SPECTRA_COLUMNS and len(rows) == 302


def test_json_report_round_trip(tmp_path):
    cfg = parse_config({
        "preset": "noncollinear-nondegenerate",
        "theta_p_deg": 142.4,
        "waists_um": [200, 90, 80],
        "filters": [
            {"kind": "long-pass", "arm": "signal", "edge_nm": 785},
            {"kind": "short-pass", "arm": "idler", "edge_nm": 650},
        ],
        "format": "json",
        "spectrum_points": 101,
        "out": str(tmp_path),
    })
    run_scenario(cfg)
    doc = json.loads((tmp_path / "report.json").read_text())
    assert parse_config(doc["config"]) == cfg
    spectra = json.loads((tmp_path / "spectra.json").read_text())
    assert sorted(spectra["columns"]) == sorted(cli.SPECTRA_COLUMNS)
    assert spectra["metadata"]["config_sha256"] == cfg.digest()
    assert doc["versions"]["dispersion_sha256"] == source("collinear-degenerate").crystal.dispersion.checksum


def test_single_point_sweep_equals_scenario(tmp_path):
    base = {"preset": "collinear-nondegenerate", "out": str(tmp_path), "spectrum_points": 11}
    rep = run_scenario(parse_config(base), write=False)
    table = run_sweep(parse_config({**base, "sweep": {"param": "waist-scale", "start": 1, "stop": 1, "steps": 1}}))
    (row,) = table.rows
    assert (row["R_hz"], row["Rs_hz"], row["Ri_hz"], row["eta"]) == (rep.rates.R, rep.rates.R_s, rep.rates.R_i, rep.rates.eta)
    with open(tmp_path / "sweep.csv") as fh:
        assert next(csv.reader(fh)) == list(cli.SWEEP_COLUMNS)


def test_sweep_parallel_matches_serial(tmp_path):
    base = {"preset": "noncollinear-degenerate", "sweep": {"param": "filter-width", "start": 5, "stop": 25, "steps": 3}}
    serial = run_sweep(parse_config({**base, "out": str(tmp_path / "s")}))
    par = run_sweep(parse_config({**base, "out": str(tmp_path / "p"), "jobs": 2}))
    assert serial.rows == par.rows
    assert (tmp_path / "s" / "sweep.csv").read_bytes() == (tmp_path / "p" / "sweep.csv").read_bytes()


def test_filter_width_sweep_tight_crosses_090(tmp_path):
    cfg = parse_config({
        "preset": "noncollinear-degenerate", "waists_um": [150, 50, 50], "out": str(tmp_path),
        "sweep": {"param": "filter-width", "start": 5, "stop": 80, "steps": 16},
    })
    eta = np.array([r["eta"] for r in run_sweep(cfg).rows])
    assert eta[0] > 0.9 and eta[-1] < 0.9


def test_nondegenerate_twenty_nm_filter_costs_little_rate(tmp_path):
    base = {"preset": "noncollinear-nondegenerate", "waists_um": [150, 50, 50], "out": str(tmp_path)}
    (row,) = run_sweep(parse_config({**base, "sweep": {"param": "filter-width", "start": 20, "stop": 20, "steps": 1}})).rows
    open_rate = run_scenario(parse_config(base), write=False).rates.R
    assert row["eta"] > 0.9
    assert abs(row["R_hz"] / open_rate - 1) < 0.05


def test_sweep_flags_failed_points(tmp_path, monkeypatch):
    real = cli.heralding_efficiency

    def flaky(src, *a, **kw):
        if src.beams.w_p > 280e-6:
            raise QuadratureError("forced", np.zeros(5), np.ones(5))
        return real(src, *a, **kw)

    monkeypatch.setattr(cli, "heralding_efficiency", flaky)
    cfg = parse_config({"preset": "collinear-nondegenerate", "out": str(tmp_path),
                        "sweep": {"param": "pump-waist", "start": 200, "stop": 300, "steps": 3}})
    rows = run_sweep(cfg).rows
    assert [("error" in r) for r in rows] == [False, False, True]
    assert math.isnan(rows[2]["eta"]) and "QuadratureError" in rows[2]["error"]


def test_emit_reports_path_on_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    table = cli.SweepTable("pump-waist", ({"param": 1.0, "R_hz": 1.0, "Rs_hz": 1.0, "Ri_hz": 1.0, "eta": 1.0},))
    with pytest.raises(OSError, match="file"):
        emit(table, "csv", blocker / "sweep.csv")
    with pytest.raises(ValueError):
        emit(table, "xml", tmp_path / "t.xml")


# ---------------------------------------------------------------- command line


def test_version(capsys):
    assert main(["--version"]) == 0
    out = capsys.readouterr().out
    assert "heraldsim 0.1.0" in out and source("collinear-degenerate").crystal.dispersion.checksum in out


def test_main_success_and_flag_overrides(tmp_path, capsys):
    cfg = write(tmp_path, "preset: noncollinear-degenerate\nexterior_angle_deg: 3.04\nwaists_um: [250, 100, 100]\n")
    rc = main(["--config", str(cfg), "--theta-p-deg", "141.9", "--waists-um", "150,50,50",
               "--filter", "top-hat:710:10", "--out", str(tmp_path / "o"), "--format", "json"])
    assert rc == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    assert doc["config"]["theta_p_deg"] == 141.9 and doc["config"]["exterior_angle_deg"] is None
    assert doc["config"]["waists_um"] == [150.0, 50.0, 50.0]
    assert doc["geometry"]["theta_p_deg"] == pytest.approx(141.9, abs=1e-12)
    assert (tmp_path / "o" / "spectra.json").exists()


def test_main_exit_codes(tmp_path, monkeypatch, capsys):
    out = ["--out", str(tmp_path)]
    assert main(["--preset", "noncollinear-degenerate", "--waists-um=-1,2,3", *out]) == 2
    assert main(["--preset", "noncollinear-degenerate", "--theta-p-deg", "141.9", "--exterior-angle-deg", "3", *out]) == 2
    assert main(["--config", str(tmp_path / "missing.yaml")]) == 2
    assert main([]) == 2
    assert main(["--preset", "noncollinear-degenerate", "--exterior-angle-deg", "60", *out]) == 3
    err = capsys.readouterr().err
    assert "config error" in err and "solver error" in err

    def boom(*a, **kw):
        raise QuadratureError("no convergence", np.zeros(5), np.ones(5))

    monkeypatch.setattr(cli, "heralding_efficiency", boom)
    assert main(["--preset", "collinear-degenerate", *out]) == 4


def test_dispersion_range_is_a_solver_error(tmp_path):
    rc = main(["--config", str(write(tmp_path, "preset: collinear-nondegenerate\nsignal_nm: 3000\n")), "--out", str(tmp_path)])
    assert rc == 3


def test_config_digest_ignores_output_location():
    a = ScenarioConfig("collinear-degenerate").resolved()
    assert a.digest() == dataclasses.replace(a, out="elsewhere", jobs=4).digest()
    assert a.digest() != dataclasses.replace(a, power_mw=2.0).digest()


def test_auto_sweep_filters_share_angular_width():
    from heraldsim.rates import bandwidth_nm_to_angular

    cfg = parse_config({"preset": "noncollinear-nondegenerate",
                        "sweep": {"param": "filter-width", "start": 20, "stop": 20, "steps": 1}})
    fs = cli._apply_sweep(cfg, 20.0).filters
    widths = [bandwidth_nm_to_angular(f.center_nm * 1e-9, f.width_nm * 1e-9) for f in fs]
    assert [f.arm for f in fs] == ["signal", "idler"]
    assert widths[0] == pytest.approx(widths[1], rel=1e-12)
    assert widths[0] == pytest.approx(bandwidth_nm_to_angular(710e-9, 20e-9), rel=1e-12)
