import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c

from heraldsim.dispersion import (
    DispersionRangeError,
    bibo,
    dispersion_sample,
    index_pump,
    index_spdc,
    load_dispersion,
    principal_indices,
)

BIBO = bibo()
# typed in independently of the data file
HELLWIG = {
    "x": (3.0740, 0.0323, 0.0316, 0.01337),
    "y": (3.1685, 0.0373, 0.0346, 0.01750),
    "z": (3.6545, 0.0511, 0.0371, 0.0226),
}

wavelengths = st.floats(400e-9, 2400e-9)
angles = st.floats(0.0, math.pi)


def sellmeier(axis, lam_um):
    A, B, C, D = HELLWIG[axis]
    return math.sqrt(A + B / (lam_um**2 - C) - D * lam_um**2)


def test_pump_index_golden_355():
    # pinned from a hand evaluation of the Sellmeier form at 0.355 um
    assert sellmeier("x", 0.355) == pytest.approx(1.8478055828507043, rel=1e-15)
    assert index_pump(BIBO, 355e-9) == pytest.approx(1.8478055828507043, rel=1e-13)


def test_principal_indices_match_hand_evaluation():
    for lam in (0.355, 0.61, 0.71, 0.85, 1.55):
        got = principal_indices(BIBO, lam * 1e-6)
        want = tuple(sellmeier(a, lam) for a in "xyz")
        np.testing.assert_allclose(got, want, rtol=1e-14)


def test_principal_indices_pure():
    a = principal_indices(BIBO, 710e-9)
    b = principal_indices(BIBO, 710e-9)
    assert all(x == y for x, y in zip(a, b))


@pytest.mark.parametrize("lam", [10e-6, 200e-9, -1.0])
def test_out_of_range_names_interval(lam):
    with pytest.raises(DispersionRangeError, match=r"valid range \[350\.0, 2500\.0\] nm"):
        principal_indices(BIBO, lam)


def test_range_error_propagates_from_every_entry_point():
    for call in (
        lambda: index_pump(BIBO, 3e-6),
        lambda: index_spdc(BIBO, 3e-6, 2.4),
        lambda: dispersion_sample(BIBO, 3e-6, 2.4),
    ):
        with pytest.raises(DispersionRangeError):
            call()


def test_ellipse_endpoints():
    _, ny, nz = principal_indices(BIBO, 710e-9)
    assert index_spdc(BIBO, 710e-9, 0.0) == ny
    assert index_spdc(BIBO, 710e-9, math.pi / 2) == pytest.approx(nz, rel=1e-15)


def test_pump_index_equals_spdc_on_pump_axis():
    # the pump axis is x; an ellipse spanned by x and y collapses onto n_x at theta = 0
    xy = BIBO.__class__(**{**BIBO.__dict__, "plane_axes": ("x", "y")})
    assert index_spdc(xy, 532e-9, 0.0) == index_pump(BIBO, 532e-9)


@given(wavelengths)
def test_indices_real_bounded_and_normal(lam):
    n = np.array(principal_indices(BIBO, lam))
    n2 = np.array(principal_indices(BIBO, lam * 1.01 if lam * 1.01 <= 2500e-9 else lam))
    assert np.all((n > 1) & (n < 4))
    assert np.all(n2 <= n)


@given(wavelengths, angles)
def test_ellipse_symmetry(lam, th):
    n = index_spdc(BIBO, lam, th)
    assert index_spdc(BIBO, lam, math.pi - th) == pytest.approx(n, rel=1e-14)
    assert index_spdc(BIBO, lam, -th) == pytest.approx(n, rel=1e-14)
    assert index_spdc(BIBO, lam, th + math.pi) == pytest.approx(n, rel=1e-14)


@settings(max_examples=60)
@given(wavelengths, angles, st.sampled_from(["spdc", "pump"]))
def test_group_index_matches_finite_difference(lam, th, pol):
    s = dispersion_sample(BIBO, lam, th, pol)
    omega = 2 * math.pi * c / lam
    h = 1e-4 * omega

    def k(w):
        n = index_spdc(BIBO, 2 * math.pi * c / w, th) if pol == "spdc" else index_pump(BIBO, 2 * math.pi * c / w)
        return n * w / c

    fd = c * (k(omega + h) - k(omega - h)) / (2 * h)
    assert abs(s.n_g - fd) / s.n_g < 1e-6
    assert s.k == pytest.approx(s.n * omega / c, rel=1e-15)
    assert s.n_g >= s.n


@settings(max_examples=40)
@given(st.floats(450e-9, 1800e-9), angles)
def test_numeric_path_agrees_with_analytic(lam, th):
    a = dispersion_sample(BIBO, lam, th)
    n = dispersion_sample(BIBO, lam, th, method="numeric")
    assert n.n_g == pytest.approx(a.n_g, rel=1e-7)
    assert n.k2 == pytest.approx(a.k2, rel=1e-5)


def test_gvd_positive_at_710():
    assert dispersion_sample(BIBO, 710e-9, math.radians(142.2)).k2 > 0


def test_degenerate_pair_shares_sample():
    th = math.radians(141.9)
    a, b = dispersion_sample(BIBO, 710e-9, th), dispersion_sample(BIBO, 710e-9, th)
    assert (a.n, a.n_g, a.k2, a.k) == (b.n, b.n_g, b.k2, b.k)


def test_unknown_polarization_and_method():
    with pytest.raises(ValueError, match="polarization"):
        dispersion_sample(BIBO, 710e-9, 0.0, pol="o")
    with pytest.raises(ValueError, match="method"):
        dispersion_sample(BIBO, 710e-9, 0.0, method="spline")


def test_data_file_roundtrip_and_checksum(tmp_path):
    src = tmp_path / "bibo.yaml"
    from importlib import resources

    raw = resources.files("heraldsim.data").joinpath("bibo_hellwig2000.yaml").read_bytes()
    src.write_bytes(raw)
    d = load_dispersion(src)
    assert d == BIBO
    assert d.checksum == BIBO.checksum == "4316b5e95c927218d4c872ca47d328062376564e2ad3f9e7f8aee0aaa29a34b7"
    assert "Hellwig" in d.citation


def test_malformed_data_file(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("material: X\naxes:\n  x: {A: 1}\nvalid_range_nm: [1, 2]\n")
    with pytest.raises(ValueError, match="malformed"):
        load_dispersion(p)
    p.write_text(
        "material: X\nvalid_range_nm: [400, 800]\npump_axis: q\n"
        "axes:\n  x: {A: 2, B: 0, C: 0, D: 0}\n  y: {A: 2, B: 0, C: 0, D: 0}\n  z: {A: 2, B: 0, C: 0, D: 0}\n"
    )
    with pytest.raises(ValueError, match="pump_axis"):
        load_dispersion(p)
