"""Carrier phase matching, emission angles and phase mismatch.

Conventions: the pump propagates along +z inside the crystal at polar angle
``theta_p`` to the first in-plane dielectric axis. Signal and idler travel
in the y-z plane on opposite sides of the pump at interior angles
``theta_s`` and ``theta_i`` (stored as magnitudes). Down-converted indices
are evaluated at the pump propagation angle for both beams, so a
frequency-degenerate source has identical signal and idler indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c
from scipy.optimize import brentq

from .dispersion import DispersionSet, bibo, dispersion_sample, index_pump, index_spdc

__all__ = [
    "PRESETS",
    "CrystalParams",
    "Geometry",
    "PhaseMismatch",
    "GeometrySolveError",
    "TotalInternalReflection",
    "EmissionCurve",
    "wavelength_to_omega",
    "omega_to_wavelength",
    "exterior_angle",
    "interior_angle",
    "wavevectors",
    "phase_mismatch",
    "taylor_mismatch_degenerate",
    "solve_geometry",
    "emission_angle_curve",
]

PRESETS = (
    "collinear-degenerate",
    "noncollinear-degenerate",
    "collinear-nondegenerate",
    "noncollinear-nondegenerate",
)

SCAN_DEG = (130.0, 155.0)


def wavelength_to_omega(lam):
    return 2 * np.pi * c / np.asarray(lam, dtype=float)


def omega_to_wavelength(omega):
    return 2 * np.pi * c / np.asarray(omega, dtype=float)


@dataclass(frozen=True)
class CrystalParams:
    length: float = 600e-6
    d_eff: float = 3.2e-12
    dispersion: DispersionSet = field(default_factory=bibo)

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("crystal length must be positive")
        if not self.d_eff > 0:
            raise ValueError("d_eff must be positive")


@dataclass(frozen=True)
class Geometry:
    theta_p: float
    theta_s: float
    theta_i: float
    ext_s: float
    ext_i: float
    omega_s0: float
    omega_i0: float
    omega_p: float
    preset: str = ""
    alternatives: tuple = ()

    @property
    def degenerate(self) -> bool:
        return math.isclose(self.omega_s0, self.omega_i0, rel_tol=1e-12)

    @property
    def collinear(self) -> bool:
        return self.theta_s == 0.0 and self.theta_i == 0.0

    def mirrored(self) -> "Geometry":
        """Swap the signal and idler labels."""
        return replace(
            self,
            theta_s=self.theta_i,
            theta_i=self.theta_s,
            ext_s=self.ext_i,
            ext_i=self.ext_s,
            omega_s0=self.omega_i0,
            omega_i0=self.omega_s0,
            alternatives=(),
        )


@dataclass(frozen=True)
class PhaseMismatch:
    dk_y: np.ndarray | float
    dk_z: np.ndarray | float


class GeometrySolveError(RuntimeError):
    pass


class TotalInternalReflection(ValueError):
    pass


def exterior_angle(theta, n):
    """Snell refraction from inside (index ``n``) to air."""
    s = n * np.sin(theta)
    if np.any(np.abs(s) > 1):
        raise TotalInternalReflection(f"sin argument {np.max(np.abs(s)):.6g} > 1")
    return np.arcsin(s)


def interior_angle(theta_ext, n):
    s = np.sin(theta_ext) / n
    if np.any(np.abs(s) > 1):
        raise TotalInternalReflection(f"sin argument {np.max(np.abs(s)):.6g} > 1")
    return np.arcsin(s)


def wavevectors(g_theta_p, crystal: CrystalParams, omega_s, omega_p):
    """Magnitudes (k_p, k_s, k_i) for signal frequency ``omega_s``."""
    d = crystal.dispersion
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = omega_p - omega_s
    k_p = index_pump(d, omega_to_wavelength(omega_p)) * omega_p / c
    k_s = index_spdc(d, omega_to_wavelength(omega_s), g_theta_p) * omega_s / c
    k_i = index_spdc(d, omega_to_wavelength(omega_i), g_theta_p) * omega_i / c
    return k_p, k_s, k_i


def phase_mismatch(g: Geometry, crystal: CrystalParams, omega_s) -> PhaseMismatch:
    k_p, k_s, k_i = wavevectors(g.theta_p, crystal, omega_s, g.omega_p)
    dk_z = k_p - k_s * np.cos(g.theta_s) - k_i * np.cos(g.theta_i)
    dk_y = k_s * np.sin(g.theta_s) - k_i * np.sin(g.theta_i)
    return PhaseMismatch(dk_y=dk_y, dk_z=dk_z)


def taylor_mismatch_degenerate(g: Geometry, crystal: CrystalParams, omega_s) -> PhaseMismatch:
    """Second-order expansion of the mismatch about omega_p/2."""
    if not g.degenerate:
        raise ValueError("Taylor form applies to frequency-degenerate geometries only")
    s = dispersion_sample(crystal.dispersion, omega_to_wavelength(g.omega_s0), g.theta_p)
    det = np.asarray(omega_s, dtype=float) - g.omega_p / 2
    dk_z = -s.k2 * np.cos(g.theta_s) * det**2
    dk_y = 2 * s.n_g * np.sin(g.theta_s) * det / c
    return PhaseMismatch(dk_y=dk_y, dk_z=dk_z)


def _roots(f, lo, hi, npts=251, xtol=1e-14):
    """All sign-change roots of ``f`` on a uniform scan of [lo, hi]."""
    xs = np.linspace(lo, hi, npts)
    fs = np.array([f(x) for x in xs])
    out = []
    for a, b, fa, fb in zip(xs[:-1], xs[1:], fs[:-1], fs[1:]):
        if fa == 0.0:
            out.append(a)
        elif np.isfinite(fa) and np.isfinite(fb) and fa * fb < 0:
            out.append(brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200))
    if fs[-1] == 0.0:
        out.append(hi)
    return out


def _build(theta_p, theta_s, theta_i, omega_s0, omega_i0, omega_p, crystal, preset):
    d = crystal.dispersion
    n_s = index_spdc(d, omega_to_wavelength(omega_s0), theta_p)
    n_i = index_spdc(d, omega_to_wavelength(omega_i0), theta_p)
    return Geometry(
        theta_p=float(theta_p),
        theta_s=float(theta_s),
        theta_i=float(theta_i),
        ext_s=float(exterior_angle(theta_s, n_s)),
        ext_i=float(exterior_angle(theta_i, n_i)),
        omega_s0=float(omega_s0),
        omega_i0=float(omega_i0),
        omega_p=float(omega_p),
        preset=preset,
    )


def solve_geometry(
    preset: str,
    crystal: CrystalParams,
    signal_wavelength: float | None = None,
    *,
    pump_wavelength: float = 355e-9,
    theta_p: float | None = None,
    exterior_angle_s: float | None = None,
    scan: tuple[float, float] = SCAN_DEG,
) -> Geometry:
    """Solve the carrier phase-matching conditions for a preset.

    Degenerate presets put the signal at twice the pump wavelength. The
    nondegenerate presets default to an 850 nm signal. Noncollinear presets
    need exactly one of ``theta_p`` (rad) or ``exterior_angle_s`` (rad,
    signal opening angle outside the crystal). Collinear presets are fully
    determined by the carriers and ignore both.
    """
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {PRESETS}")
    degenerate = preset.endswith("-degenerate") and not preset.endswith("nondegenerate")
    collinear = preset.startswith("collinear")
    omega_p = float(wavelength_to_omega(pump_wavelength))
    if degenerate:
        omega_s0 = omega_p / 2
    else:
        lam_s = 850e-9 if signal_wavelength is None else signal_wavelength
        omega_s0 = float(wavelength_to_omega(lam_s))
    omega_i0 = omega_p - omega_s0
    if not (0 < omega_s0 < omega_p):
        raise ValueError("signal frequency must lie between 0 and the pump frequency")

    d = crystal.dispersion
    lam_s0, lam_i0 = omega_to_wavelength(omega_s0), omega_to_wavelength(omega_i0)
    k_p = index_pump(d, pump_wavelength) * omega_p / c
    lo, hi = np.radians(scan)

    def ks_ki(tp):
        return (
            index_spdc(d, lam_s0, tp) * omega_s0 / c,
            index_spdc(d, lam_i0, tp) * omega_i0 / c,
        )

    if collinear:

        def resid(tp):
            k_s, k_i = ks_ki(tp)
            return (k_p - k_s - k_i) * crystal.length

        roots = _roots(resid, lo, hi)
        if not roots:
            raise GeometrySolveError(
                f"no collinear phase-matching angle in [{scan[0]}, {scan[1]}] deg; "
                f"residual at ends {resid(lo):.3g}, {resid(hi):.3g}"
            )
        sols = [_build(r, 0.0, 0.0, omega_s0, omega_i0, omega_p, crystal, preset) for r in roots]
        return replace(sols[0], alternatives=tuple(sols[1:]))

    if (theta_p is None) == (exterior_angle_s is None):
        raise ValueError("noncollinear presets need exactly one of theta_p or exterior_angle_s")

    def idler_angle(tp, th_s):
        k_s, k_i = ks_ki(tp)
        return k_s, k_i, np.arcsin(np.clip(k_s * np.sin(th_s) / k_i, -1, 1))

    if exterior_angle_s is not None:

        def inner(tp):
            n_s = index_spdc(d, lam_s0, tp)
            return interior_angle(exterior_angle_s, n_s)

        def resid(tp):
            th_s = inner(tp)
            k_s, k_i, th_i = idler_angle(tp, th_s)
            return (k_p - k_s * np.cos(th_s) - k_i * np.cos(th_i)) * crystal.length

        roots = _roots(resid, lo, hi)
        if not roots:
            raise GeometrySolveError(
                f"no tilt in [{scan[0]}, {scan[1]}] deg phase-matches exterior angle "
                f"{np.degrees(exterior_angle_s):.4f} deg; residual at ends "
                f"{resid(lo):.3g}, {resid(hi):.3g}"
            )
        sols = []
        for tp in roots:
            th_s = inner(tp)
            th_i = idler_angle(tp, th_s)[2]
            sols.append(_build(tp, th_s, th_i, omega_s0, omega_i0, omega_p, crystal, preset))
        return replace(sols[0], alternatives=tuple(sols[1:]))

    tp = float(theta_p)

    def resid(th_s):
        k_s, k_i, th_i = idler_angle(tp, th_s)
        return (k_p - k_s * np.cos(th_s) - k_i * np.cos(th_i)) * crystal.length

    th_max = np.radians(20.0)
    roots = [r for r in _roots(resid, 0.0, th_max, npts=401) if r > 0]
    if not roots:
        raise GeometrySolveError(
            f"tilt {np.degrees(tp):.4f} deg admits no noncollinear solution in "
            f"[0, 20] deg; residual at ends {resid(0.0):.3g}, {resid(th_max):.3g}"
        )
    sols = []
    for th_s in roots:
        th_i = idler_angle(tp, th_s)[2]
        sols.append(_build(tp, th_s, th_i, omega_s0, omega_i0, omega_p, crystal, preset))
    return replace(sols[0], alternatives=tuple(sols[1:]))


@dataclass(frozen=True)
class EmissionCurve:
    """Exterior signal angle that phase-matches each signal wavelength.

    ``exterior`` is NaN where no real emission angle exists. The signal and
    its conjugate idler leave on opposite sides of the pump.
    """

    theta_p: float
    wavelengths: np.ndarray
    exterior: np.ndarray
    crystal: CrystalParams = field(repr=False)
    pump_wavelength: float = 355e-9

    @property
    def branches(self) -> list[tuple[np.ndarray, np.ndarray]]:
        ok = np.isfinite(self.exterior)
        out, start = [], None
        for j, flag in enumerate(np.append(ok, False)):
            if flag and start is None:
                start = j
            elif not flag and start is not None:
                out.append((self.wavelengths[start:j], self.exterior[start:j]))
                start = None
        return out

    def angle_at(self, lam):
        return _emission_angle(self.theta_p, self.crystal, lam, self.pump_wavelength)

    def crossings(self, target: float) -> list[float]:
        """Wavelengths where the curve equals ``target`` (rad), refined by root finding."""
        out = []
        for lam, ang in self.branches:
            f = ang - target
            for j in range(len(lam) - 1):
                if f[j] == 0:
                    out.append(float(lam[j]))
                elif f[j] * f[j + 1] < 0:
                    g = lambda x: self.angle_at(x) - target  # noqa: E731
                    out.append(brentq(g, lam[j], lam[j + 1], xtol=1e-18, rtol=1e-15))
        return out

    def collinear_pair(self) -> list[float]:
        """Wavelengths where the collinear mismatch vanishes at this tilt."""
        d = self.crystal.dispersion
        omega_p = float(wavelength_to_omega(self.pump_wavelength))
        k_p = index_pump(d, self.pump_wavelength) * omega_p / c

        def g(lam):
            w = float(wavelength_to_omega(lam))
            k_s = index_spdc(d, lam, self.theta_p) * w / c
            k_i = index_spdc(d, omega_to_wavelength(omega_p - w), self.theta_p) * (omega_p - w) / c
            return (k_p - k_s - k_i) * self.crystal.length

        lam = self.wavelengths
        return _roots(g, float(lam[0]), float(lam[-1]), npts=len(lam), xtol=1e-20)


def _emission_angle(theta_p, crystal, lam_s, pump_wavelength):
    d = crystal.dispersion
    lam_s = np.asarray(lam_s, dtype=float)
    omega_p = float(wavelength_to_omega(pump_wavelength))
    w_s = wavelength_to_omega(lam_s)
    w_i = omega_p - w_s
    k_p = index_pump(d, pump_wavelength) * omega_p / c
    n_s = index_spdc(d, lam_s, theta_p)
    k_s = n_s * w_s / c
    k_i = index_spdc(d, omega_to_wavelength(w_i), theta_p) * w_i / c
    # closing the wavevector triangle k_p = k_s + k_i
    cos_s = (k_p**2 + k_s**2 - k_i**2) / (2 * k_p * k_s)
    with np.errstate(invalid="ignore"):
        th = np.where(np.abs(cos_s) <= 1, np.arccos(np.clip(cos_s, -1, 1)), np.nan)
        s = n_s * np.sin(th)
        return np.where(np.abs(s) <= 1, np.arcsin(s), np.nan)


def emission_angle_curve(
    theta_p: float,
    crystal: CrystalParams,
    wavelengths,
    pump_wavelength: float = 355e-9,
) -> EmissionCurve:
    lam = np.asarray(wavelengths, dtype=float)
    return EmissionCurve(
        theta_p=theta_p,
        wavelengths=lam,
        exterior=_emission_angle(theta_p, crystal, lam, pump_wavelength),
        crystal=crystal,
        pump_wavelength=pump_wavelength,
    )
