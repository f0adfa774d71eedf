import math

import numpy as np
import pytest

from heraldsim import BeamConfig, CrystalParams, solve_geometry
from heraldsim.rates import Source

LOOSE = BeamConfig(w_p=250e-6, w_s=100e-6, w_i=100e-6)
TIGHT = BeamConfig(w_p=150e-6, w_s=50e-6, w_i=50e-6)

GEOMETRY_ARGS = {
    "collinear-degenerate": {},
    "collinear-nondegenerate": {},
    "noncollinear-degenerate": {"exterior_angle_s": math.radians(3.04)},
    "noncollinear-nondegenerate": {"exterior_angle_s": math.radians(5.62)},
}

_cache = {}


def geometry(preset, crystal=None):
    key = ("g", preset)
    if crystal is not None:
        return solve_geometry(preset, crystal, **GEOMETRY_ARGS[preset])
    if key not in _cache:
        _cache[key] = solve_geometry(preset, CrystalParams(), **GEOMETRY_ARGS[preset])
    return _cache[key]


def source(preset, beams=LOOSE, crystal=None):
    crystal = crystal or CrystalParams()
    return Source(crystal, beams, geometry(preset))


def waists(p, s, i, **kw):
    return BeamConfig(w_p=p * 1e-6, w_s=s * 1e-6, w_i=i * 1e-6, **kw)


def fwhm(x, y):
    y = np.asarray(y)
    idx = np.nonzero(y >= y.max() / 2)[0]
    return x[idx[-1]] - x[idx[0]]


@pytest.fixture(scope="session")
def crystal():
    return CrystalParams()


# ---- acceptance summary: one line per criterion at the end of the run

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, title, failed = ACCEPTANCE[key]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {key}: {title}"
        terminalreporter.write_line(line)
        for f in failed:
            terminalreporter.write_line(f"        {f}")
