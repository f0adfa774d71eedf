#!/usr/bin/env python3
"""Predicted R, R_s, R_i and eta for the reference source configurations."""
import argparse
import json
import math
import sys
import warnings

from heraldsim import (
    BeamConfig,
    CrystalParams,
    SpectralFilter,
    bandwidth_nm_to_angular,
    heralding_efficiency,
    solve_geometry,
    wavelength_to_omega,
)
from heraldsim.rates import ModeSumWarning, Source


def waists(p, s, i):
    return BeamConfig(w_p=p * 1e-6, w_s=s * 1e-6, w_i=i * 1e-6)


def top_hat(lam_nm, width_nm):
    lam = lam_nm * 1e-9
    return SpectralFilter.top_hat(float(wavelength_to_omega(lam)), bandwidth_nm_to_angular(lam, width_nm * 1e-9))


EDGES = (
    SpectralFilter.long_pass(float(wavelength_to_omega(785e-9))),
    SpectralFilter.short_pass(float(wavelength_to_omega(650e-9))),
)

CASES = [
    ("collinear nondegenerate, loose", "collinear-nondegenerate", {}, waists(250, 100, 100), ()),
    ("collinear nondegenerate, tight", "collinear-nondegenerate", {}, waists(150, 50, 50), ()),
    ("collinear nondegenerate, 120/95 um", "collinear-nondegenerate", {}, waists(250, 120, 95), ()),
    ("collinear nondegenerate, 150/67/47 um", "collinear-nondegenerate", {}, waists(150, 67, 47), ()),
    ("noncollinear degenerate, 23 nm", "noncollinear-degenerate", {"exterior_angle_s": math.radians(3.04)},
     waists(250, 100, 100), (top_hat(710, 23),) * 2),
    ("noncollinear nondegenerate, edge filters", "noncollinear-nondegenerate", {"exterior_angle_s": math.radians(5.62)},
     waists(250, 100, 100), EDGES),
]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--d-eff-pm-v", type=float, default=3.2)
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    args = p.parse_args(argv)
    crystal = CrystalParams(d_eff=args.d_eff_pm_v * 1e-12)
    out = []
    for label, preset, kw, beams, filters in CASES:
        g = solve_geometry(preset, crystal, **kw)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ModeSumWarning)
            r = heralding_efficiency(Source(crystal, beams, g), *filters)
        out.append({"case": label, "theta_p_deg": math.degrees(g.theta_p), **r.as_dict()})
    if args.json:
        print(json.dumps(out, indent=2))
        return 0
    print(f"{'case':42s} {'theta_p':>9s} {'R (Hz/mW)':>11s} {'R_s':>11s} {'R_i':>11s} {'eta':>8s}")
    for row in out:
        print(f"{row['case']:42s} {row['theta_p_deg']:9.4f} {row['R_hz']:11.5g} {row['Rs_hz']:11.5g} "
              f"{row['Ri_hz']:11.5g} {row['eta']:8.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
