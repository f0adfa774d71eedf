"""Spectral and total rates, spectral filters and heralding efficiency.

All spectral densities are per unit *signal* angular frequency; the idler
sits at ``omega_p - omega_s`` and, with a monochromatic pump,
``|d omega_s| = |d omega_i|``. Idler quantities are therefore reported on
the signal-frequency axis.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c, epsilon_0

from .dispersion import index_pump, index_spdc
from .modeoverlap import BeamConfig, overlap_constants, phi00, x_mode_series, _companion, _y_moments
from .phasematch import (
    CrystalParams,
    Geometry,
    emission_angle_curve,
    omega_to_wavelength,
    phase_mismatch,
    wavelength_to_omega,
)
from .quadrature import QuadratureError, gk15

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "Source",
    "SpectralFilter",
    "SpectralCurve",
    "RateReport",
    "ModeSumWarning",
    "QuadratureError",
    "bandwidth_nm_to_angular",
    "filter_transmission",
    "joint_spectral_rate",
    "singles_spectral_rate",
    "spectral_window",
    "spectral_curves",
    "total_joint_rate",
    "total_singles_rate",
    "heralding_efficiency",
]


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = c
    epsilon_0: float = epsilon_0


CONSTANTS = PhysicalConstants()


class ModeSumWarning(UserWarning):
    """Mode-sum truncation has not converged."""


@dataclass(frozen=True)
class Source:
    """A fully specified down-conversion source."""

    crystal: CrystalParams
    beams: BeamConfig
    geometry: Geometry

    def prefactor(self, omega_s):
        """Joint-rate prefactor without path efficiencies; multiplies |Phi|^2."""
        d, g, b = self.crystal.dispersion, self.geometry, self.beams
        omega_s = np.asarray(omega_s, dtype=float)
        omega_i = g.omega_p - omega_s
        n_s = index_spdc(d, omega_to_wavelength(omega_s), g.theta_p)
        n_i = index_spdc(d, omega_to_wavelength(omega_i), g.theta_p)
        n_p = index_pump(d, omega_to_wavelength(g.omega_p))
        num = b.power * self.crystal.d_eff**2 * b.alpha_s**2 * b.alpha_i**2 * b.alpha_p**2 * omega_s * omega_i
        return num / (math.pi * CONSTANTS.epsilon_0 * CONSTANTS.c**3 * n_s * n_i * n_p)


# ---------------------------------------------------------------- filters


@dataclass(frozen=True)
class SpectralFilter:
    """Intensity transmission of a filter in its own arm's angular frequency.

    ``long-pass`` and ``short-pass`` follow the optics (wavelength)
    convention: a long-pass transmits frequencies at or below ``edge``.
    Top-hat edges are closed.
    """

    kind: str = "none"
    center: float | None = None
    width: float | None = None
    edge: float | None = None
    peak: float = 1.0
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        if self.kind not in ("none", "top-hat", "long-pass", "short-pass", "tabulated"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if not 0.0 <= self.peak <= 1.0:
            raise ValueError("peak transmission must lie in [0, 1]")
        if self.kind == "top-hat" and (self.center is None or self.width is None or self.width < 0):
            raise ValueError("top-hat filter needs a center and a non-negative width")
        if self.kind in ("long-pass", "short-pass") and self.edge is None:
            raise ValueError(f"{self.kind} filter needs an edge")
        if self.kind == "tabulated":
            w, t = (np.asarray(v, dtype=float) for v in self.table)
            if w.size < 2 or w.shape != t.shape or np.any(np.diff(w) <= 0):
                raise ValueError("tabulated filter needs >= 2 strictly increasing samples")
            if np.any(t < 0) or np.any(t > self.peak):
                raise ValueError("tabulated transmission must lie in [0, peak]")

    @classmethod
    def top_hat(cls, center, width, peak=1.0):
        return cls("top-hat", center=float(center), width=float(width), peak=peak)

    @classmethod
    def long_pass(cls, edge, peak=1.0):
        return cls("long-pass", edge=float(edge), peak=peak)

    @classmethod
    def short_pass(cls, edge, peak=1.0):
        return cls("short-pass", edge=float(edge), peak=peak)

    @classmethod
    def tabulated(cls, omegas, transmission, peak=1.0):
        return cls("tabulated", table=(tuple(map(float, omegas)), tuple(map(float, transmission))), peak=peak)

    def __call__(self, omega):
        return filter_transmission(self, omega)

    def support(self) -> tuple[float, float]:
        """Closed interval outside which T vanishes."""
        if self.kind == "top-hat":
            return self.center - self.width / 2, self.center + self.width / 2
        if self.kind == "long-pass":
            return -math.inf, self.edge
        if self.kind == "short-pass":
            return self.edge, math.inf
        if self.kind == "tabulated":
            return self.table[0][0], self.table[0][-1]
        return -math.inf, math.inf

    def breakpoints(self) -> list[float]:
        if self.kind == "tabulated":
            return list(self.table[0])
        return [x for x in self.support() if math.isfinite(x)]


def filter_transmission(f: SpectralFilter, omega):
    w = np.asarray(omega, dtype=float)
    if f.kind == "none":
        return np.full(w.shape, f.peak)
    if f.kind == "tabulated":
        return np.interp(w, f.table[0], f.table[1], left=0.0, right=0.0)
    lo, hi = f.support()
    return np.where((w >= lo) & (w <= hi), f.peak, 0.0)


def bandwidth_nm_to_angular(center_wavelength: float, bandwidth: float) -> float:
    """First-order conversion of a wavelength bandwidth (m) to angular frequency."""
    return 2 * math.pi * c * bandwidth / center_wavelength**2


# ---------------------------------------------------------------- spectra


def joint_spectral_rate(src: Source, omega_s):
    """dR/d omega_s in s^-1 per rad/s."""
    oc = overlap_constants(src.beams, src.geometry)
    dk = phase_mismatch(src.geometry, src.crystal, omega_s)
    phi = phi00(oc, dk, src.crystal.length)
    b = src.beams
    return b.eta_s * b.eta_i * src.prefactor(omega_s) * phi**2


def _mode_partials(src: Source, arm: str, dk, truncations):
    """Mode sums (alpha^(n,m))^2 |Phi^(n,m)|^2 for several truncation orders."""
    b, g = src.beams, src.geometry
    oc = overlap_constants(b, g)
    w, th, side = _companion(arm, b, g)
    nmax = max(truncations)
    Y2 = np.abs(_y_moments(nmax, oc, w, th, side, dk, src.crystal.length)) ** 2
    wts = np.array([1 / (2**m * math.factorial(m)) for m in range(nmax + 1)])
    cum = np.cumsum(wts.reshape((-1,) + (1,) * (Y2.ndim - 1)) * Y2, axis=0)
    out = []
    for n in truncations:
        out.append(2 / (math.pi * w * w) * x_mode_series(n, oc, w) * cum[n])
    return out


def _singles_core(src: Source, arm: str, omega_s, truncations):
    b = src.beams
    dk = phase_mismatch(src.geometry, src.crystal, omega_s)
    eta, alpha_c = (b.eta_s, b.alpha_i) if arm == "signal" else (b.eta_i, b.alpha_s)
    # the companion mode normalisation comes from the mode sum instead
    pref = eta * src.prefactor(omega_s) / alpha_c**2
    return [pref * s for s in _mode_partials(src, arm, dk, truncations)]


def singles_spectral_rate(src: Source, arm: str, omega_s, truncation: int = 10, warn: bool = True):
    """Singles density of ``arm`` (signal or idler) versus signal frequency.

    Only the detected arm's path efficiency enters. Warns
    with :class:`ModeSumWarning` when raising the truncation by two changes
    the result by more than 1 %.
    """
    (s, s2) = _singles_core(src, arm, omega_s, [truncation, truncation + 2])
    if warn:
        s_arr, s2_arr = np.atleast_1d(s), np.atleast_1d(s2)
        big = s2_arr > 1e-3 * np.max(s2_arr, initial=0.0)
        if np.any(np.abs(s2_arr - s_arr)[big] > 0.01 * s2_arr[big]):
            warnings.warn(
                f"{arm} mode sum not converged at truncation {truncation} (>1% change at N+2)",
                ModeSumWarning,
                stacklevel=2,
            )
    return s


def _branch_bounds(src: Source) -> tuple[float, float]:
    g, d = src.geometry, src.crystal.dispersion
    lo_lam, hi_lam = d.valid_range
    w_min, w_max = float(wavelength_to_omega(hi_lam)), float(wavelength_to_omega(lo_lam))
    lo = max(w_min, g.omega_p - w_max) * (1 + 1e-12)
    hi = min(w_max, g.omega_p - w_min) * (1 - 1e-12)
    if not g.degenerate:
        if g.omega_s0 < g.omega_p / 2:
            hi = min(hi, g.omega_p / 2)
        else:
            lo = max(lo, g.omega_p / 2)
    return lo, hi


def spectral_window(src: Source, threshold: float = 1e-8, truncation: int = 10, npts: int = 400):
    """Signal-frequency interval holding the phase-matched branch around the carrier.

    Scans outward from the carrier and keeps everything where the joint or
    either singles density exceeds ``threshold`` times its peak, clipped
    to the dispersion validity range and, for nondegenerate carriers, to
    the carrier's side of the degenerate frequency.
    """
    g = src.geometry
    lo, hi = _branch_bounds(src)
    out = []
    for edge in (lo, hi):
        span = edge - g.omega_s0
        x = g.omega_s0 + span * np.geomspace(1e-4, 1.0, npts)
        vals = [joint_spectral_rate(src, x)]
        vals += _singles_core(src, "signal", x, [truncation])
        vals += _singles_core(src, "idler", x, [truncation])
        carrier = _carrier_vals(src, truncation)
        peaks = [max(float(np.max(v)), float(np.max(f))) for v, f in zip(vals, carrier)]
        above = np.zeros(npts, dtype=bool)
        for v, p in zip(vals, peaks):
            above |= v > threshold * p
        idx = np.nonzero(above)[0]
        j = min(idx[-1] + 1, npts - 1) if idx.size else 0
        out.append(float(x[j]))
    return out[0], out[1]


def _carrier_vals(src, truncation):
    w = np.array([src.geometry.omega_s0])
    return (
        [joint_spectral_rate(src, w)]
        + _singles_core(src, "signal", w, [truncation])
        + _singles_core(src, "idler", w, [truncation])
    )


@dataclass(frozen=True)
class SpectralCurve:
    omega: np.ndarray
    joint: np.ndarray
    singles_signal: np.ndarray
    singles_idler: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def wavelength(self):
        return omega_to_wavelength(self.omega)


def spectral_curves(src: Source, npts: int = 2001, window=None, truncation: int = 10) -> SpectralCurve:
    lo, hi = window if window is not None else spectral_window(src, truncation=truncation)
    w = np.linspace(lo, hi, npts)
    (ss,) = _singles_core(src, "signal", w, [truncation])
    (si,) = _singles_core(src, "idler", w, [truncation])
    return SpectralCurve(
        omega=w,
        joint=joint_spectral_rate(src, w),
        singles_signal=ss,
        singles_idler=si,
        metadata={"truncation": truncation, "window": (lo, hi)},
    )


# ---------------------------------------------------------------- totals


@dataclass(frozen=True)
class RateReport:
    R: float
    R_s: float
    R_i: float
    eta: float
    truncation: int
    errors: dict
    window: tuple[float, float]
    mode_sum_increment: dict = field(default_factory=dict)
    parasitic_branches: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "R_hz": self.R,
            "Rs_hz": self.R_s,
            "Ri_hz": self.R_i,
            "eta": self.eta,
            "truncation": self.truncation,
            "errors": dict(self.errors),
            "window_rad_s": list(self.window),
            "mode_sum_increment": dict(self.mode_sum_increment),
            "parasitic_branches_nm": dict(self.parasitic_branches),
        }


_OPEN = SpectralFilter()


def _integrate(src, f_s, f_i, truncation, rtol, window, initial_panels):
    g = src.geometry
    lo, hi = window if window is not None else spectral_window(src, truncation=truncation)
    s_lo, s_hi = f_s.support()
    i_lo, i_hi = f_i.support()
    # idler filter support mapped onto the signal axis
    i_lo, i_hi = g.omega_p - i_hi, g.omega_p - i_lo
    a, b = max(lo, min(s_lo, i_lo)), min(hi, max(s_hi, i_hi))
    if not a < b:
        return np.zeros(5), np.zeros(5), (lo, hi)
    bps = [a, b, g.omega_s0] + f_s.breakpoints() + [g.omega_p - x for x in f_i.breakpoints()]
    bps = [x for x in bps if a <= x <= b]
    trunc = [truncation, truncation + 2]

    def integrand(w):
        Ts = filter_transmission(f_s, w)
        Ti = filter_transmission(f_i, g.omega_p - w)
        (ss, ss2) = _singles_core(src, "signal", w, trunc)
        (si, si2) = _singles_core(src, "idler", w, trunc)
        jt = joint_spectral_rate(src, w)
        return np.vstack([Ts * Ti * jt, Ts * ss, Ti * si, Ts * ss2, Ti * si2])

    # absolute floor keeps all-zero components (e.g. a blocked arm) from stalling
    scale = float(np.max(_carrier_vals(src, truncation))) * (b - a)
    res = gk15(integrand, bps, rtol=rtol, atol=1e-14 * scale, initial_panels=initial_panels)
    return res.value, res.error, (lo, hi)


def _parasitic(src: Source) -> dict:
    """Second phase-matched wavelength (nm) seen in each arm's direction."""
    g = src.geometry
    if g.degenerate:
        return {}
    lam_p = float(omega_to_wavelength(g.omega_p))
    curve = emission_angle_curve(g.theta_p, src.crystal, _lam_grid(src), lam_p)
    roots_collinear = curve.collinear_pair() if g.collinear else None
    out = {}
    for arm, ang, own in (("signal", g.ext_s, g.omega_s0), ("idler", g.ext_i, g.omega_i0)):
        roots = roots_collinear if g.collinear else curve.crossings(ang)
        own_lam = float(omega_to_wavelength(own))
        others = [r for r in roots if abs(r - own_lam) > 1e-3 * own_lam]
        if others:
            out[arm] = min(others, key=lambda r: abs(r - own_lam)) * 1e9
    return out


def _lam_grid(src: Source, npts: int = 4001):
    """Signal wavelengths for which signal and idler both lie in the valid range."""
    lo_v, hi_v = src.crystal.dispersion.valid_range
    lam_p = float(omega_to_wavelength(src.geometry.omega_p))
    lo = max(lo_v, 1 / (1 / lam_p - 1 / hi_v))
    hi = hi_v if 1 / lam_p <= 1 / lo_v else min(hi_v, 1 / (1 / lam_p - 1 / lo_v))
    return np.linspace(lo * (1 + 1e-9), hi * (1 - 1e-9), npts)


def heralding_efficiency(
    src: Source,
    f_s: SpectralFilter = _OPEN,
    f_i: SpectralFilter = _OPEN,
    *,
    truncation: int = 10,
    rtol: float = 1e-7,
    window=None,
    initial_panels: int = 8,
) -> RateReport:
    """R, R_s, R_i and eta = R / sqrt(R_s R_i) in one adaptive quadrature pass."""
    val, err, win = _integrate(src, f_s, f_i, truncation, rtol, window, initial_panels)
    R, R_s, R_i, R_s2, R_i2 = (float(v) for v in val)
    eta = R / math.sqrt(R_s * R_i) if R_s > 0 and R_i > 0 else 0.0
    inc = {
        "signal": abs(R_s2 - R_s) / R_s2 if R_s2 > 0 else 0.0,
        "idler": abs(R_i2 - R_i) / R_i2 if R_i2 > 0 else 0.0,
    }
    for arm, v in inc.items():
        if v > 0.01:
            warnings.warn(f"{arm} singles rate mode sum changes by {v:.2%} from N={truncation} to N+2", ModeSumWarning, stacklevel=2)
    errors = {"R": float(err[0]), "R_s": float(err[1]), "R_i": float(err[2])}
    return RateReport(R, R_s, R_i, eta, truncation, errors, win, inc, _parasitic(src))


def total_joint_rate(src: Source, f_s: SpectralFilter = _OPEN, f_i: SpectralFilter = _OPEN, **kw) -> float:
    return heralding_efficiency(src, f_s, f_i, **kw).R


def total_singles_rate(src: Source, arm: str, f: SpectralFilter = _OPEN, **kw) -> float:
    if arm == "signal":
        return heralding_efficiency(src, f, _OPEN, **kw).R_s
    if arm == "idler":
        return heralding_efficiency(src, _OPEN, f, **kw).R_i
    raise ValueError(f"arm must be 'signal' or 'idler', got {arm!r}")
