"""Scenario configuration, sweeps and CSV/JSON output.

A scenario is a YAML file (or just ``--preset``) plus flag overrides; flags
win. Wavelengths and waists are given in nm and um, angles in degrees,
power in mW. Everything internal is SI.

Exit codes: 0 success, 2 configuration error, 3 geometry or dispersion
failure, 4 quadrature failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .dispersion import DispersionRangeError, bibo, load_dispersion
from .modeoverlap import BeamConfig
from .phasematch import (
    PRESETS,
    CrystalParams,
    Geometry,
    GeometrySolveError,
    TotalInternalReflection,
    omega_to_wavelength,
    solve_geometry,
    wavelength_to_omega,
)
from .quadrature import QuadratureError
from .rates import (
    RateReport,
    Source,
    SpectralCurve,
    SpectralFilter,
    bandwidth_nm_to_angular,
    heralding_efficiency,
    spectral_curves,
)

__all__ = [
    "ConfigError",
    "FilterSpec",
    "SweepSpec",
    "ScenarioConfig",
    "RunReport",
    "SweepTable",
    "load_config",
    "parse_config",
    "build_source",
    "run_scenario",
    "run_sweep",
    "emit",
    "main",
]

LOOSE_WAISTS_UM = (250.0, 100.0, 100.0)
DEFAULT_EXTERIOR_DEG = {
    "noncollinear-degenerate": 3.04,
    "noncollinear-nondegenerate": 5.62,
}
DEFAULT_SIGNAL_NM = 850.0
SWEEP_PARAMS = ("filter-width", "waist-scale", "pump-waist")
SPECTRA_COLUMNS = ("omega_rad_s", "lambda_nm", "joint_density", "singles_signal_density", "singles_idler_density")
SWEEP_COLUMNS = ("param", "R_hz", "Rs_hz", "Ri_hz", "eta")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_QUAD = 0, 2, 3, 4


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the field."""


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class FilterSpec:
    """A filter on one arm (or both), in wavelength units.

    ``width_nm`` is a full width converted to angular frequency at
    ``center_nm`` to first order.
    """

    kind: str = "top-hat"
    arm: str = "both"
    center_nm: float | None = None
    width_nm: float | None = None
    edge_nm: float | None = None
    peak: float = 1.0

    def validate(self, where: str = "filters") -> None:
        if self.arm not in ("signal", "idler", "both"):
            raise ConfigError(f"{where}.arm: expected signal, idler or both, got {self.arm!r}")
        if not 0.0 <= self.peak <= 1.0:
            raise ConfigError(f"{where}.peak: must lie in [0, 1]")
        if self.kind == "top-hat":
            if self.center_nm is None or not self.center_nm > 0:
                raise ConfigError(f"{where}.center_nm: top-hat needs a positive center")
            if self.width_nm is None or self.width_nm < 0:
                raise ConfigError(f"{where}.width_nm: top-hat width must be non-negative")
        elif self.kind in ("long-pass", "short-pass"):
            if self.edge_nm is None or not self.edge_nm > 0:
                raise ConfigError(f"{where}.edge_nm: {self.kind} needs a positive edge")
        else:
            raise ConfigError(f"{where}.kind: unknown filter kind {self.kind!r}")

    def build(self) -> SpectralFilter:
        if self.kind == "top-hat":
            lam = self.center_nm * 1e-9
            return SpectralFilter.top_hat(
                wavelength_to_omega(lam), bandwidth_nm_to_angular(lam, self.width_nm * 1e-9), self.peak
            )
        edge = float(wavelength_to_omega(self.edge_nm * 1e-9))
        if self.kind == "long-pass":
            return SpectralFilter.long_pass(edge, self.peak)
        return SpectralFilter.short_pass(edge, self.peak)

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        """``[ARM=]top-hat:CENTER_NM:WIDTH_NM`` or ``[ARM=]long-pass:EDGE_NM``."""
        arm, _, body = text.rpartition("=")
        parts = body.split(":")
        try:
            if parts[0] == "top-hat" and len(parts) == 3:
                spec = cls("top-hat", arm or "both", center_nm=float(parts[1]), width_nm=float(parts[2]))
            elif parts[0] in ("long-pass", "short-pass") and len(parts) == 2:
                spec = cls(parts[0], arm or "both", edge_nm=float(parts[1]))
            else:
                raise ValueError
        except ValueError:
            raise ConfigError(
                f"--filter: cannot parse {text!r}; expected [signal=|idler=]top-hat:CENTER_NM:WIDTH_NM "
                "or long-pass:EDGE_NM / short-pass:EDGE_NM"
            ) from None
        spec.validate("--filter")
        return spec


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    steps: int

    def validate(self) -> None:
        if self.param not in SWEEP_PARAMS:
            raise ConfigError(f"sweep.param: expected one of {SWEEP_PARAMS}, got {self.param!r}")
        if self.steps < 1:
            raise ConfigError("sweep.steps: must be >= 1")
        lo = min(self.start, self.stop)
        if self.param == "filter-width" and lo < 0:
            raise ConfigError("sweep.start/stop: filter widths must be non-negative")
        if self.param != "filter-width" and not lo > 0:
            raise ConfigError(f"sweep.start/stop: {self.param} values must be positive")

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        try:
            param, start, stop, steps = text.split(":")
            spec = cls(param, float(start), float(stop), int(steps))
        except ValueError:
            raise ConfigError(f"--sweep: cannot parse {text!r}; expected PARAM:START:STOP:STEPS") from None
        spec.validate()
        return spec


@dataclass(frozen=True)
class ScenarioConfig:
    preset: str
    crystal_file: str | None = None
    theta_p_deg: float | None = None
    exterior_angle_deg: float | None = None
    signal_nm: float | None = None
    pump_nm: float = 355.0
    waists_um: tuple[float, float, float] = LOOSE_WAISTS_UM
    power_mw: float = 1.0
    eta_s: float = 1.0
    eta_i: float = 1.0
    length_um: float = 600.0
    d_eff_pm_v: float = 3.2
    filters: tuple[FilterSpec, ...] = ()
    sweep: SweepSpec | None = None
    mode_truncation: int = 10
    spectrum_points: int = 2001
    out: str = "out"
    format: str = "csv"
    jobs: int = 1

    @property
    def degenerate(self) -> bool:
        return self.preset.endswith("-degenerate") and "nondegenerate" not in self.preset

    @property
    def collinear(self) -> bool:
        return self.preset.startswith("collinear")

    def resolved(self) -> "ScenarioConfig":
        """Fill preset defaults and validate."""
        cfg = self
        if cfg.preset not in PRESETS:
            raise ConfigError(f"preset: unknown preset {cfg.preset!r}; choose from {', '.join(PRESETS)}")
        if cfg.signal_nm is None:
            cfg = dataclasses.replace(cfg, signal_nm=2 * cfg.pump_nm if cfg.degenerate else DEFAULT_SIGNAL_NM)
        if not cfg.collinear:
            if cfg.theta_p_deg is not None and cfg.exterior_angle_deg is not None:
                raise ConfigError("theta_p_deg/exterior_angle_deg: supply at most one for noncollinear presets")
            if cfg.theta_p_deg is None and cfg.exterior_angle_deg is None:
                cfg = dataclasses.replace(cfg, exterior_angle_deg=DEFAULT_EXTERIOR_DEG[cfg.preset])
        cfg._validate()
        return cfg

    def _validate(self) -> None:
        for name in ("pump_nm", "signal_nm", "power_mw", "length_um", "d_eff_pm_v"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name}: must be a positive number, got {v!r}")
        if len(self.waists_um) != 3 or any(not (w > 0 and math.isfinite(w)) for w in self.waists_um):
            raise ConfigError(f"waists_um: need three positive waists (pump, signal, idler), got {self.waists_um!r}")
        for name in ("eta_s", "eta_i"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name}: path efficiency must lie in [0, 1]")
        if not self.signal_nm > self.pump_nm:
            raise ConfigError("signal_nm: must be longer than the pump wavelength")
        if self.degenerate and not math.isclose(self.signal_nm, 2 * self.pump_nm, rel_tol=1e-12):
            raise ConfigError("signal_nm: degenerate presets put the signal at twice the pump wavelength")
        for j, f in enumerate(self.filters):
            f.validate(f"filters[{j}]")
        if self.sweep is not None:
            self.sweep.validate()
        if self.mode_truncation < 0:
            raise ConfigError("mode_truncation: must be >= 0")
        if self.spectrum_points < 2:
            raise ConfigError("spectrum_points: must be >= 2")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: expected csv or json, got {self.format!r}")
        if self.jobs < 1:
            raise ConfigError("jobs: must be >= 1")

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["waists_um"] = list(self.waists_um)
        d["filters"] = [dataclasses.asdict(f) for f in self.filters]
        return d

    def digest(self) -> str:
        """Hash of the physics inputs (output location and job count excluded)."""
        d = self.as_dict()
        for k in ("out", "format", "jobs"):
            d.pop(k)
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()


_FIELDS = {f.name for f in dataclasses.fields(ScenarioConfig)}


def parse_config(doc: dict) -> ScenarioConfig:
    """Build a resolved config from a mapping (YAML or a report's ``config`` block)."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a mapping")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown field")
    if "preset" not in doc:
        raise ConfigError("preset: required")
    kw = dict(doc)
    try:
        if "waists_um" in kw:
            kw["waists_um"] = tuple(float(w) for w in kw["waists_um"])
        kw["filters"] = tuple(FilterSpec(**f) for f in kw.get("filters") or ())
        if kw.get("sweep") is not None:
            kw["sweep"] = SweepSpec(**kw["sweep"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"filters/sweep/waists_um: {exc}") from None
    try:
        cfg = ScenarioConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.resolved()


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"{path}:{where}: {getattr(exc, 'problem', exc)}") from None
    return parse_config(doc or {})


# ---------------------------------------------------------------- runs


def build_source(cfg: ScenarioConfig) -> Source:
    disp = load_dispersion(cfg.crystal_file) if cfg.crystal_file else bibo()
    crystal = CrystalParams(length=cfg.length_um * 1e-6, d_eff=cfg.d_eff_pm_v * 1e-12, dispersion=disp)
    w_p, w_s, w_i = (w * 1e-6 for w in cfg.waists_um)
    beams = BeamConfig(
        w_p=w_p, w_s=w_s, w_i=w_i, power=cfg.power_mw * 1e-3,
        eta_s=cfg.eta_s, eta_i=cfg.eta_i, pump_wavelength=cfg.pump_nm * 1e-9,
    )
    geometry = solve_geometry(
        cfg.preset,
        crystal,
        cfg.signal_nm * 1e-9,
        pump_wavelength=cfg.pump_nm * 1e-9,
        theta_p=None if cfg.theta_p_deg is None else math.radians(cfg.theta_p_deg),
        exterior_angle_s=None if cfg.exterior_angle_deg is None else math.radians(cfg.exterior_angle_deg),
    )
    return Source(crystal, beams, geometry)


def _arm_filters(cfg: ScenarioConfig) -> tuple[SpectralFilter, SpectralFilter]:
    """Combine filter specs per arm. At most one filter per arm is supported."""
    arms = {"signal": [], "idler": []}
    for f in cfg.filters:
        for arm in (("signal", "idler") if f.arm == "both" else (f.arm,)):
            arms[arm].append(f)
    for arm, fs in arms.items():
        if len(fs) > 1:
            raise ConfigError(f"filters: more than one filter on the {arm} arm")
    return tuple(fs[0].build() if fs else SpectralFilter() for fs in arms.values())


def geometry_echo(g: Geometry) -> dict:
    return {
        "preset": g.preset,
        "theta_p_deg": math.degrees(g.theta_p),
        "theta_s_deg": math.degrees(g.theta_s),
        "theta_i_deg": math.degrees(g.theta_i),
        "exterior_s_deg": math.degrees(g.ext_s),
        "exterior_i_deg": math.degrees(g.ext_i),
        "signal_nm": float(omega_to_wavelength(g.omega_s0)) * 1e9,
        "idler_nm": float(omega_to_wavelength(g.omega_i0)) * 1e9,
        "pump_nm": float(omega_to_wavelength(g.omega_p)) * 1e9,
        "alternatives_theta_p_deg": [math.degrees(a.theta_p) for a in g.alternatives],
    }


@dataclass(frozen=True)
class RunReport:
    config: ScenarioConfig
    geometry: dict
    rates: RateReport
    manifest: dict
    versions: dict

    def as_dict(self) -> dict:
        return {
            "config": self.config.as_dict(),
            "geometry": self.geometry,
            "rates": self.rates.as_dict(),
            "manifest": self.manifest,
            "versions": self.versions,
        }


@dataclass(frozen=True)
class SweepTable:
    param: str
    rows: tuple[dict, ...]
    metadata: dict = field(default_factory=dict)


def _versions(cfg: ScenarioConfig, src: Source) -> dict:
    return {
        "tool": __version__,
        "dispersion_sha256": src.crystal.dispersion.checksum,
        "config_sha256": cfg.digest(),
    }


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_scenario(cfg: ScenarioConfig, write: bool = True) -> RunReport:
    """Solve the geometry, compute spectra and rates, and write the outputs."""
    src = build_source(cfg)
    f_s, f_i = _arm_filters(cfg)
    rates = heralding_efficiency(src, f_s, f_i, truncation=cfg.mode_truncation)
    curve = spectral_curves(src, npts=cfg.spectrum_points, window=rates.window, truncation=cfg.mode_truncation)
    curve.metadata["config_sha256"] = cfg.digest()
    versions = _versions(cfg, src)
    manifest = {}
    if write:
        out = Path(cfg.out)
        spectra = out / f"spectra.{cfg.format}"
        emit(curve, cfg.format, spectra)
        manifest[spectra.name] = _sha256(spectra)
    report = RunReport(cfg, geometry_echo(src.geometry), rates, manifest, versions)
    if write:
        emit(report, "json", Path(cfg.out) / "report.json")
    return report


def _sweep_point(args):
    cfg, value = args
    try:
        cfg = _apply_sweep(cfg, value)
        r = heralding_efficiency(build_source(cfg), *_arm_filters(cfg), truncation=cfg.mode_truncation)
        return {"param": value, "R_hz": r.R, "Rs_hz": r.R_s, "Ri_hz": r.R_i, "eta": r.eta}
    except (ValueError, RuntimeError) as exc:
        nan = float("nan")
        return {"param": value, "R_hz": nan, "Rs_hz": nan, "Ri_hz": nan, "eta": nan, "error": f"{type(exc).__name__}: {exc}"}


def _apply_sweep(cfg: ScenarioConfig, value: float) -> ScenarioConfig:
    p = cfg.sweep.param
    if p == "waist-scale":
        return dataclasses.replace(cfg, waists_um=tuple(w * value for w in cfg.waists_um))
    if p == "pump-waist":
        return dataclasses.replace(cfg, waists_um=(value,) + tuple(cfg.waists_um[1:]))
    # filter-width: resize existing top-hats, or place one on each carrier
    tops = [f for f in cfg.filters if f.kind == "top-hat"]
    if tops:
        filters = tuple(dataclasses.replace(f, width_nm=value) if f.kind == "top-hat" else f for f in cfg.filters)
    else:
        # one angular bandwidth on both conjugate arms, quoted in nm at 2*lambda_p
        ref = 2 * cfg.pump_nm
        idler_nm = 1 / (1 / cfg.pump_nm - 1 / cfg.signal_nm)
        filters = tuple(
            FilterSpec("top-hat", arm, center_nm=lam, width_nm=value * (lam / ref) ** 2)
            for arm, lam in (("signal", cfg.signal_nm), ("idler", idler_nm))
        )
    return dataclasses.replace(cfg, filters=filters)


def run_sweep(cfg: ScenarioConfig, write: bool = True) -> SweepTable:
    """One row per sweep value; failed points carry NaNs and an ``error`` entry."""
    if cfg.sweep is None:
        raise ConfigError("sweep: no sweep specified")
    work = [(cfg, v) for v in cfg.sweep.values()]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_point, work))
    else:
        rows = [_sweep_point(w) for w in work]
    table = SweepTable(cfg.sweep.param, tuple(rows), {"config": cfg.as_dict(), "config_sha256": cfg.digest()})
    if write:
        emit(table, cfg.format, Path(cfg.out) / f"sweep.{cfg.format}")
    return table


# ---------------------------------------------------------------- output


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _dumps(obj) -> str:
    # NaN is emitted as null so the files are strict JSON
    return json.dumps(_nan_to_none(obj), indent=2, sort_keys=True, default=_json_default) + "\n"


def _nan_to_none(o):
    if isinstance(o, float) and not math.isfinite(o):
        return None
    if isinstance(o, dict):
        return {k: _nan_to_none(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_nan_to_none(v) for v in o]
    return o


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    return buf.getvalue()


def render(obj, fmt: str) -> str:
    """Serialise a curve, sweep table or report to CSV or JSON text."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, SpectralCurve):
        cols = [obj.omega, obj.wavelength * 1e9, obj.joint, obj.singles_signal, obj.singles_idler]
        if fmt == "csv":
            return _csv_text(SPECTRA_COLUMNS, zip(*cols))
        meta = {k: (list(v) if isinstance(v, tuple) else v) for k, v in obj.metadata.items()}
        return _dumps({"metadata": meta, "columns": {k: np.asarray(v).tolist() for k, v in zip(SPECTRA_COLUMNS, cols)}})
    if isinstance(obj, SweepTable):
        if fmt == "csv":
            return _csv_text(SWEEP_COLUMNS, ([r[k] for k in SWEEP_COLUMNS] for r in obj.rows))
        return _dumps({"metadata": dict(obj.metadata, param=obj.param), "rows": list(obj.rows)})
    if isinstance(obj, (RunReport, RateReport)):
        if fmt == "csv":
            flat = obj.rates.as_dict() if isinstance(obj, RunReport) else obj.as_dict()
            keys = ("R_hz", "Rs_hz", "Ri_hz", "eta")
            return _csv_text(keys, [[flat[k] for k in keys]])
        return _dumps(obj.as_dict())
    raise TypeError(f"cannot emit {type(obj).__name__}")


def emit(obj, fmt: str, path: str | Path) -> Path:
    path = Path(path)
    text = render(obj, fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


# ---------------------------------------------------------------- command line


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="heraldsim",
        description="Spectral rates and heralding efficiency of a thin-crystal Type-I down-conversion source.",
    )
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--config", help="YAML scenario file")
    p.add_argument("--theta-p-deg", type=float)
    p.add_argument("--exterior-angle-deg", type=float)
    p.add_argument("--waists-um", metavar="P,S,I")
    p.add_argument("--filter", action="append", metavar="top-hat:CENTER_NM:WIDTH_NM",
                   help="repeatable; prefix with signal= or idler= to restrict to one arm")
    p.add_argument("--sweep", metavar="PARAM:START:STOP:STEPS", help=f"PARAM in {', '.join(SWEEP_PARAMS)}")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--mode-truncation", type=int, metavar="N")
    p.add_argument("--jobs", type=int)
    p.add_argument("--version", action="store_true", help="print tool version and dispersion checksum")
    return p


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        base = load_config(args.config).as_dict()
    elif args.preset:
        base = {"preset": args.preset}
    else:
        raise ConfigError("preset: give --preset or --config")
    if args.preset:
        base["preset"] = args.preset
    # an angle flag replaces whichever constraint the file supplied
    if args.theta_p_deg is not None or args.exterior_angle_deg is not None:
        base["theta_p_deg"] = args.theta_p_deg
        base["exterior_angle_deg"] = args.exterior_angle_deg
    if args.waists_um:
        try:
            base["waists_um"] = [float(v) for v in args.waists_um.split(",")]
        except ValueError:
            raise ConfigError(f"--waists-um: cannot parse {args.waists_um!r}; expected P,S,I") from None
    if args.filter:
        base["filters"] = [dataclasses.asdict(FilterSpec.parse(t)) for t in args.filter]
    if args.sweep:
        base["sweep"] = dataclasses.asdict(SweepSpec.parse(args.sweep))
    for name in ("out", "format", "mode_truncation", "jobs"):
        v = getattr(args, name)
        if v is not None:
            base[name] = v
    return parse_config(base)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.version:
        d = bibo()
        print(f"heraldsim {__version__}")
        print(f"dispersion {d.material} v{d.version} sha256:{d.checksum}")
        return EXIT_OK
    try:
        cfg = config_from_args(args)
        if cfg.sweep is not None:
            table = run_sweep(cfg)
            for r in table.rows:
                flag = f"  FAILED {r['error']}" if "error" in r else ""
                print(f"{table.param}={r['param']:.6g}  R={r['R_hz']:.6g} Hz  eta={r['eta']:.4f}{flag}")
            return EXIT_SOLVER if any("error" in r for r in table.rows) else EXIT_OK
        report = run_scenario(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GeometrySolveError, TotalInternalReflection, DispersionRangeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except QuadratureError as exc:
        print(f"quadrature error: {exc}", file=sys.stderr)
        return EXIT_QUAD
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    g, r = report.geometry, report.rates
    print(f"{cfg.preset}: theta_p={g['theta_p_deg']:.4f} deg  theta_s={g['theta_s_deg']:.4f} deg")
    print(f"R={r.R:.6g} Hz  R_s={r.R_s:.6g} Hz  R_i={r.R_i:.6g} Hz  eta={r.eta:.5f}")
    print(f"wrote {', '.join(sorted(report.manifest))} and report.json to {cfg.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
