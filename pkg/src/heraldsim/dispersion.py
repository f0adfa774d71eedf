"""Refractive index, group index and GVD of a biaxial crystal.

Indices are evaluated from a Sellmeier data file (see ``data/``). The pump
is polarized along the principal axis perpendicular to the propagation
plane and sees an angle-independent index; the down-converted light is
polarized in the plane and sees the index-ellipse combination of the two
in-plane principal indices,

    1/n(theta)^2 = cos(theta)^2 / n_a^2 + sin(theta)^2 / n_b^2,

with theta the polar angle measured from the first in-plane axis.

Wavelength (vacuum, metres) is the canonical argument. Everything here is
pure and vectorised over numpy arrays.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml
from scipy.constants import c

__all__ = [
    "DispersionSet",
    "DispersionRangeError",
    "IndexSample",
    "load_dispersion",
    "bibo",
    "principal_indices",
    "index_pump",
    "index_spdc",
    "dispersion_sample",
]

BIBO_FILE = "bibo_hellwig2000.yaml"


class DispersionRangeError(ValueError):
    """Wavelength outside the validity window of a dispersion set."""


@dataclass(frozen=True)
class DispersionSet:
    material: str
    coefficients: dict  # axis -> (A, B, C, D)
    valid_range: tuple[float, float]  # metres
    pump_axis: str = "x"
    plane_axes: tuple[str, str] = ("y", "z")
    citation: str = ""
    version: int = 1
    checksum: str = field(default="", compare=False)

    def check(self, wavelength) -> np.ndarray:
        lam = np.asarray(wavelength, dtype=float)
        lo, hi = self.valid_range
        bad = ~((lam >= lo) & (lam <= hi))
        if np.any(bad):
            raise DispersionRangeError(
                f"{self.material}: wavelength {np.ravel(lam[bad])[0] * 1e9:.3f} nm outside "
                f"valid range [{lo * 1e9:.1f}, {hi * 1e9:.1f}] nm"
            )
        return lam


def load_dispersion(path: str | Path) -> DispersionSet:
    """Read a dispersion coefficient file (YAML key/value)."""
    raw = Path(path).read_bytes()
    return _parse(raw)


def bibo() -> DispersionSet:
    """The shipped BiBO coefficient set."""
    raw = resources.files("heraldsim.data").joinpath(BIBO_FILE).read_bytes()
    return _parse(raw)


def _parse(raw: bytes) -> DispersionSet:
    doc = yaml.safe_load(raw)
    try:
        axes = {
            name: tuple(float(v[k]) for k in "ABCD") for name, v in doc["axes"].items()
        }
        lo, hi = (float(x) * 1e-9 for x in doc["valid_range_nm"])
        ds = DispersionSet(
            material=str(doc["material"]),
            coefficients=axes,
            valid_range=(lo, hi),
            pump_axis=str(doc.get("pump_axis", "x")),
            plane_axes=tuple(doc.get("plane_axes", ["y", "z"])),
            citation=str(doc.get("citation", "")),
            version=int(doc.get("version", 1)),
            checksum=hashlib.sha256(raw).hexdigest(),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed dispersion file: {exc}") from exc
    if ds.pump_axis not in axes or any(a not in axes for a in ds.plane_axes):
        raise ValueError("pump_axis/plane_axes must name axes present in 'axes'")
    return ds


def _eps_and_derivs(coef, lam_m):
    """Relative permittivity n^2 and its first two wavelength derivatives (per metre)."""
    A, B, C, D = coef
    lam = lam_m * 1e6
    u = lam * lam
    den = u - C
    f = A + B / den - D * u
    fp = -B / den**2 - D  # d f / d u
    fpp = 2.0 * B / den**3
    d1 = 2.0 * lam * fp
    d2 = 2.0 * fp + 4.0 * u * fpp
    return f, d1 * 1e6, d2 * 1e12


def _ellipse(ea, eb, theta):
    """Combine in-plane permittivities (value, d1, d2) along polar angle theta."""
    ca, sb = np.cos(theta) ** 2, np.sin(theta) ** 2
    a0, a1, a2 = ea
    b0, b1, b2 = eb
    g0 = ca / a0 + sb / b0
    g1 = -(ca * a1 / a0**2 + sb * b1 / b0**2)
    g2 = -(ca * (a2 / a0**2 - 2 * a1**2 / a0**3) + sb * (b2 / b0**2 - 2 * b1**2 / b0**3))
    e0 = 1.0 / g0
    e1 = -g1 / g0**2
    e2 = -g2 / g0**2 + 2 * g1**2 / g0**3
    return e0, e1, e2


def principal_indices(d: DispersionSet, wavelength):
    """Principal indices ``(n_x, n_y, n_z)`` at vacuum wavelength(s) in metres."""
    lam = d.check(wavelength)
    return tuple(np.sqrt(_eps_and_derivs(d.coefficients[a], lam)[0]) for a in ("x", "y", "z"))


def _eps(d: DispersionSet, lam, theta, pol):
    if pol == "pump":
        return _eps_and_derivs(d.coefficients[d.pump_axis], lam)
    if pol == "spdc":
        a, b = d.plane_axes
        return _ellipse(
            _eps_and_derivs(d.coefficients[a], lam),
            _eps_and_derivs(d.coefficients[b], lam),
            theta,
        )
    raise ValueError(f"unknown polarization {pol!r}; expected 'pump' or 'spdc'")


def index_pump(d: DispersionSet, wavelength):
    lam = d.check(wavelength)
    return np.sqrt(_eps(d, lam, 0.0, "pump")[0])


def index_spdc(d: DispersionSet, wavelength, theta):
    """Index of the in-plane polarization propagating at polar angle ``theta``."""
    lam = d.check(wavelength)
    return np.sqrt(_eps(d, lam, theta, "spdc")[0])


@dataclass(frozen=True)
class IndexSample:
    """Index data at one frequency: n, group index, GVD k'' [s^2/m], k [rad/m]."""

    n: np.ndarray | float
    n_g: np.ndarray | float
    k2: np.ndarray | float
    k: np.ndarray | float


def dispersion_sample(
    d: DispersionSet, wavelength, theta: float = 0.0, pol: str = "spdc", method: str = "analytic"
) -> IndexSample:
    """n, k, n_g = c dk/domega and k'' = d^2k/domega^2 at fixed angle.

    ``method="numeric"`` differentiates k(omega) by central differences
    instead of the closed-form Sellmeier derivatives.
    """
    lam = d.check(wavelength)
    omega = 2 * np.pi * c / lam
    if method == "analytic":
        e0, e1, e2 = _eps(d, lam, theta, pol)
        n = np.sqrt(e0)
        dn = e1 / (2 * n)
        d2n = e2 / (2 * n) - e1**2 / (4 * n**3)
        n_g = n - lam * dn
        k2 = lam**3 / (2 * np.pi * c**2) * d2n
    elif method == "numeric":
        n = np.sqrt(_eps(d, lam, theta, pol)[0])
        h = omega * 1e-4

        def k_of(w):
            return np.sqrt(_eps(d, 2 * np.pi * c / w, theta, pol)[0]) * w / c

        kp, km = k_of(omega + h), k_of(omega - h)
        k0 = n * omega / c
        n_g = c * (kp - km) / (2 * h)
        k2 = (kp - 2 * k0 + km) / h**2
    else:
        raise ValueError(f"unknown method {method!r}")
    return IndexSample(n=n, n_g=n_g, k2=k2, k=n * omega / c)
