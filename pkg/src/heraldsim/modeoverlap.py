"""Mode-overlap efficiency functions for thin-crystal SPDC.

The overlap of the pump, a fixed Gaussian target mode and a Hermite-Gauss
(n, m) mode of the companion beam is integrated analytically:

* x: Hermite polynomial against ``exp(-A x^2)`` (zero for odd n);
* y: completing the square moves the integration variable onto the centroid
  of the transverse overlap, ``y = u + D z / (2C)``; the Gaussian in u is
  integrated against the shifted Hermite polynomial;
* z: what remains is a polynomial in z times ``exp(i dk_z z)`` over the
  crystal length, done in closed form through spherical Bessel functions.

Thin-crystal approximation: the z dependence of the overlap envelope (its
Gaussian decay and the centroid's carrier phase) is dropped, which is what
yields the sinc factor of the fundamental overlap.

``arm`` names the detected beam held in its target mode; the companion beam
(the other one) is expanded in Hermite-Gauss modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre
from scipy.special import eval_hermite, spherical_jn

from .phasematch import Geometry, PhaseMismatch

__all__ = [
    "BeamConfig",
    "OverlapConstants",
    "OracleError",
    "overlap_constants",
    "sinc",
    "phi00",
    "phi01",
    "phi20",
    "phi_nm",
    "mode_sum",
    "x_mode_series",
    "numeric_overlap_oracle",
    "focusing_ratio",
]

ARMS = ("signal", "idler")
UNDERFLOW = 700.0


@dataclass(frozen=True)
class BeamConfig:
    """Waists are 1/e field radii in metres; power in watts."""

    w_p: float = 250e-6
    w_s: float = 100e-6
    w_i: float = 100e-6
    power: float = 1e-3
    eta_s: float = 1.0
    eta_i: float = 1.0
    pump_wavelength: float = 355e-9

    def __post_init__(self):
        for name in ("w_p", "w_s", "w_i", "pump_wavelength"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.power < 0:
            raise ValueError("power must be non-negative")
        for name in ("eta_s", "eta_i"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @staticmethod
    def alpha(w: float, n: int = 0, m: int = 0) -> float:
        """Hermite-Gauss normalization for waist ``w``."""
        return math.sqrt(2.0 / (2 ** (n + m) * math.factorial(n) * math.factorial(m) * math.pi * w * w))

    @property
    def alpha_p(self) -> float:
        return self.alpha(self.w_p)

    @property
    def alpha_s(self) -> float:
        return self.alpha(self.w_s)

    @property
    def alpha_i(self) -> float:
        return self.alpha(self.w_i)

    def scaled(self, factor: float) -> "BeamConfig":
        return BeamConfig(
            self.w_p * factor, self.w_s * factor, self.w_i * factor,
            self.power, self.eta_s, self.eta_i, self.pump_wavelength,
        )


@dataclass(frozen=True)
class OverlapConstants:
    A: float
    C: float
    D: float


def overlap_constants(b: BeamConfig, g: Geometry) -> OverlapConstants:
    A = 1 / b.w_p**2 + 1 / b.w_s**2 + 1 / b.w_i**2
    C = 1 / b.w_p**2 + math.cos(g.theta_s) ** 2 / b.w_s**2 + math.cos(g.theta_i) ** 2 / b.w_i**2
    D = math.sin(2 * g.theta_s) / b.w_s**2 - math.sin(2 * g.theta_i) / b.w_i**2
    return OverlapConstants(A=A, C=C, D=D)


def sinc(x):
    """Unnormalized sin(x)/x."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def _gauss_y(dk_y, C):
    arg = np.asarray(dk_y, dtype=float) ** 2 / (4 * C)
    with np.errstate(over="ignore", under="ignore"):
        return np.where(arg > UNDERFLOW, 0.0, np.exp(-np.minimum(arg, UNDERFLOW)))


def phi00(oc: OverlapConstants, dk: PhaseMismatch, L: float):
    return (np.pi * L / math.sqrt(oc.A * oc.C)) * _gauss_y(dk.dk_y, oc.C) * sinc(np.asarray(dk.dk_z) * L / 2)


def _companion(arm: str, b: BeamConfig, g: Geometry):
    """(waist, angle, side sign) of the beam expanded in Hermite-Gauss modes."""
    if arm == "signal":
        return b.w_i, g.theta_i, 1.0
    if arm == "idler":
        return b.w_s, g.theta_s, -1.0
    raise ValueError(f"arm must be one of {ARMS}, got {arm!r}")


def _first_moment(dk_z, L):
    """(L/dk_z) * (sinc(dk_z L/2) - cos(dk_z L/2)), finite at dk_z = 0."""
    dk_z = np.asarray(dk_z, dtype=float)
    x = dk_z * L / 2
    small = np.abs(dk_z * L) < 1e-3
    xs = np.where(small, x, 0.0)
    series = L * L * (xs / 6 - xs**3 / 60 + xs**5 / 1680)
    safe = np.where(small, 1.0, dk_z)
    direct = (L / safe) * (sinc(x) - np.cos(x))
    return np.where(small, series, direct)


def phi01(oc: OverlapConstants, b: BeamConfig, g: Geometry, dk: PhaseMismatch, L: float, arm="signal"):
    """Closed form of the (0, 1) overlap."""
    w, th, side = _companion(arm, b, g)
    A, C, D = oc.A, oc.C, oc.D
    q, kz = np.asarray(dk.dk_y, dtype=float), np.asarray(dk.dk_z, dtype=float)
    pref = 1j * math.pi * math.sqrt(2) * _gauss_y(q, C) / (w * math.sqrt(A) * C**1.5)
    bracket = math.cos(th) * q * L * sinc(kz * L / 2) + (
        math.cos(th) * D + side * 2 * C * math.sin(th)
    ) * _first_moment(kz, L)
    return pref * bracket


def phi20(oc: OverlapConstants, b: BeamConfig, g: Geometry, dk: PhaseMismatch, L: float, arm="signal"):
    """Closed form of the (2, 0) overlap."""
    w = _companion(arm, b, g)[0]
    return (
        2 * math.pi / math.sqrt(oc.A * oc.C) * (2 / (oc.A * w * w) - 1)
        * _gauss_y(dk.dk_y, oc.C) * L * sinc(np.asarray(dk.dk_z) * L / 2)
    )


def _x_moments(nmax: int, A: float, w: float) -> np.ndarray:
    """Integral of H_n(sqrt2 x / w) exp(-A x^2) over x for n = 0..nmax."""
    r = 2 / (A * w * w) - 1
    out = np.zeros(nmax + 1)
    for n in range(0, nmax + 1, 2):
        out[n] = math.sqrt(math.pi / A) * math.factorial(n) / math.factorial(n // 2) * r ** (n // 2)
    return out


def _z_moments(pmax: int, dk_z, L: float) -> np.ndarray:
    """Integral of z^p exp(i dk_z z) over [-L/2, L/2], shape (pmax+1, ...)."""
    a = np.asarray(dk_z, dtype=float) * L / 2
    bess = np.array([spherical_jn(l, a) for l in range(pmax + 1)])
    out = np.empty((pmax + 1,) + a.shape, dtype=complex)
    for p in range(pmax + 1):
        basis = np.zeros(p + 1)
        basis[p] = 1.0
        coef = legendre.poly2leg(basis)
        acc = np.zeros(a.shape, dtype=complex)
        for l, cl in enumerate(coef):
            if cl != 0.0:
                acc = acc + 2 * cl * (1j**l) * bess[l]
        out[p] = (L / 2) ** (p + 1) * acc
    return out


def _y_moments(mmax: int, oc: OverlapConstants, w: float, th: float, side: float, dk: PhaseMismatch, L: float):
    """Y_m for m = 0..mmax; shape (mmax+1, ...)."""
    C, D = oc.C, oc.D
    q = np.asarray(dk.dk_y, dtype=float)
    beta = math.sqrt(2) * math.cos(th) / w
    gamma = math.sqrt(2) / w * (D * math.cos(th) / (2 * C) + side * math.sin(th))
    x = 1j * q * beta / (2 * C)
    mu2 = 1 - beta * beta / C
    # scaled Hermite polynomials mu^k H_k(x / mu), by recurrence (no square root of mu2)
    P = [np.ones_like(x), 2 * x]
    for k in range(1, mmax):
        P.append(2 * x * P[k] - 2 * k * mu2 * P[k - 1])
    Iz = _z_moments(mmax, dk.dk_z, L)
    env = math.sqrt(math.pi / C) * _gauss_y(q, C)
    out = np.empty((mmax + 1,) + np.shape(q * np.asarray(dk.dk_z)), dtype=complex)
    for m in range(mmax + 1):
        acc = 0
        for k in range(m + 1):
            acc = acc + math.comb(m, k) * (2 * gamma) ** (m - k) * P[k] * Iz[m - k]
        out[m] = env * acc
    return out


def phi_nm(n: int, m: int, oc: OverlapConstants, b: BeamConfig, g: Geometry, dk: PhaseMismatch, L: float, arm="signal"):
    """Overlap with the companion beam in Hermite-Gauss mode (n, m).

    n indexes the out-of-plane (x) direction and m the in-plane one.
    """
    if n < 0 or m < 0:
        raise ValueError("mode indices must be non-negative")
    w, th, side = _companion(arm, b, g)
    if n % 2:
        return np.zeros(np.shape(np.asarray(dk.dk_y) * np.asarray(dk.dk_z)), dtype=complex)
    X = _x_moments(n, oc.A, w)[n]
    return X * _y_moments(m, oc, w, th, side, dk, L)[m]


def x_mode_series(nmax: int, oc: OverlapConstants, w: float) -> float:
    """Sum over even n <= nmax of X_n^2 / (2^n n!)."""
    X = _x_moments(nmax, oc.A, w)
    return float(sum(X[n] ** 2 / (2**n * math.factorial(n)) for n in range(0, nmax + 1, 2)))


def mode_sum(oc: OverlapConstants, b: BeamConfig, g: Geometry, dk: PhaseMismatch, L: float, arm="signal", truncation: int = 10):
    """Sum of (alpha^(n,m))^2 |Phi^(n,m)|^2 over n, m <= truncation.

    The x and y parts factorize, so the double sum is a product of two
    single sums.
    """
    if truncation < 0:
        raise ValueError("truncation must be non-negative")
    w, th, side = _companion(arm, b, g)
    sx = x_mode_series(truncation, oc, w)
    Y = _y_moments(truncation, oc, w, th, side, dk, L)
    wts = np.array([1 / (2**m * math.factorial(m)) for m in range(truncation + 1)])
    sy = np.tensordot(wts, np.abs(Y) ** 2, axes=1)
    return 2 / (math.pi * w * w) * sx * sy


class OracleError(RuntimeError):
    def __init__(self, msg, estimates):
        super().__init__(msg)
        self.estimates = estimates


def numeric_overlap_oracle(
    n: int,
    m: int,
    b: BeamConfig,
    g: Geometry,
    dk: PhaseMismatch,
    L: float,
    arm: str = "signal",
    *,
    rtol: float = 1e-10,
    atol: float | None = None,
    radius_factor: float = 6.0,
    nodes: tuple[int, int] = (96, 16),
    max_doublings: int = 6,
    thin: bool = True,
) -> complex:
    """Brute-force tensor Gauss-Legendre quadrature of one overlap integral.

    The integrand is built from the mode functions themselves: pump and
    fixed-arm Gaussians and the companion Hermite-Gauss mode, each in its
    own rotated frame, times ``exp(i dk . r)``. With ``thin=True`` each
    z-slice is evaluated in the frame of the transverse overlap centroid
    and the slice envelope's z-dependent decay and carrier phase are
    divided out; ``thin=False`` integrates the untruncated volume integral.
    Node counts double until successive estimates agree to ``rtol``.
    """
    if radius_factor < 5:
        raise ValueError("truncation radius must be at least 5 waists")
    q, kz = float(dk.dk_y), float(dk.dk_z)
    w_c, th_c, side = _companion(arm, b, g)
    if arm == "signal":
        w_f, th_f, side_f = b.w_s, g.theta_s, -1.0
    else:
        w_f, th_f, side_f = b.w_i, g.theta_i, 1.0
    oc = overlap_constants(b, g)
    E = math.sin(g.theta_s) ** 2 / b.w_s**2 + math.sin(g.theta_i) ** 2 / b.w_i**2
    R = radius_factor * max(b.w_p, b.w_s, b.w_i)
    if atol is None:
        atol = 1e-13 * math.pi * L / math.sqrt(oc.A * oc.C)

    def estimate(nt, nz):
        xt, wt = np.polynomial.legendre.leggauss(nt)
        xz, wz = np.polynomial.legendre.leggauss(nz)
        x, wx = R * xt, R * wt
        t, wtt = R * xt, R * wt
        z, wzz = L / 2 * xz, L / 2 * wz
        T, Z = np.meshgrid(t, z, indexing="ij")
        if thin:
            Y = T + oc.D * Z / (2 * oc.C)
        else:
            Y = T
        yf = Y * math.cos(th_f) + side_f * Z * math.sin(th_f)
        yc = Y * math.cos(th_c) + side * Z * math.sin(th_c)
        # x factorizes out of every mode function
        fx = np.exp(-x**2 * (1 / b.w_p**2 + 1 / w_f**2 + 1 / w_c**2)) * eval_hermite(n, math.sqrt(2) * x / w_c)
        fyz = (
            np.exp(-Y**2 / b.w_p**2 - yf**2 / w_f**2 - yc**2 / w_c**2)
            * eval_hermite(m, math.sqrt(2) * yc / w_c)
            * np.exp(1j * (q * Y + kz * Z))
        )
        if thin:
            shift = oc.D * Z / (2 * oc.C)
            fyz = fyz * np.exp(-(oc.D**2 / (4 * oc.C) - E) * Z**2 - 1j * q * shift)
        return np.dot(wx, fx) * (wtt @ fyz @ wzz)

    nt, nz = nodes
    prev = estimate(nt, nz)
    for _ in range(max_doublings):
        nt, nz = 2 * nt, 2 * nz
        cur = estimate(nt, nz)
        if abs(cur - prev) <= max(rtol * abs(cur), atol):
            return complex(cur)
        prev = cur
    raise OracleError(f"overlap quadrature did not converge after {max_doublings} doublings", (prev, cur))


def focusing_ratio(b: BeamConfig) -> float:
    """|2/(A W_s^2) - 1| for equal target waists, i.e. 1/(1 + 2 W_p^2/W_s^2)."""
    if not math.isclose(b.w_s, b.w_i, rel_tol=1e-12):
        raise ValueError("focusing ratio assumes equal signal and idler waists")
    return 1 / (1 + 2 * b.w_p**2 / b.w_s**2)
