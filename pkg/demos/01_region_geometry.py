#!/usr/bin/env python3
"""Geometry of the positive / completely positive / entanglement-breaking
regions of the map family

    Phi_{alpha,beta} = (1 - alpha - beta) id + alpha tau0 + beta Delta

on d x d matrices.  The script prints the region polygons, compares the
closed-form areas against shoelace areas of the constructed polygons, and
cross-checks the closed-form membership tests against the eigenvalue/PPT
oracles on a coordinate grid.

Usage:
    python demos/01_region_geometry.py [d] [grid.csv]

With a second argument the closed-form grid classification is written as
CSV (columns alpha,beta,positive,cp,eb) for plotting.
"""

import sys

import numpy as np

from quditmaps import regions

d = int(sys.argv[1]) if len(sys.argv) > 1 else 3

print(f"Region geometry for d = {d}")
print("=" * 60)

for which in regions.REGIONS:
    poly = regions.region_polygon(which, d)
    area = regions.region_area(which, d)
    print(f"\n{which} region: {len(poly.vertices)} vertices (counterclockwise)")
    for alpha, beta in poly.vertices:
        print(f"    ({alpha:+.6f}, {beta:+.6f})")
    print(f"    closed-form area {area.closed_form:.12f}")
    print(f"    shoelace area    {area.shoelace:.12f}")

print("\nArea ratios as d grows (P/CP -> 1, EB/CP -> 0):")
for dd in range(3, 13):
    p = regions.region_area("P", dd).closed_form
    cp = regions.region_area("CP", dd).closed_form
    eb = regions.region_area("EB", dd).closed_form
    print(f"    d={dd:2d}:  P/CP = {p/cp:.4f}   EB/CP = {eb/cp:.4f}")

print("\nClosed form vs oracles on a 41x41 grid (margin filter 1e-6):")
rep = regions.grid_agreement_report(d, n=41, sample_budget=64, seed=42)
for key in ("positive", "cp", "eb"):
    print(f"    {key:8s}: {rep[f'{key}_disagreements']} disagreements "
          f"among {rep[f'{key}_tested']} tested points")
print(f"    nesting violations: {rep['nesting_violations']}")
print(f"    PPT vs EB mismatches inside CP: {rep['ppt_vs_eb_disagreements']}")

print("\nEmpirical lower Schwarz boundary (falsifier-based bisection; NOT a")
print("closed form -- treat as an estimate):")
for alpha, beta in regions.schwarz_boundary_scan(d, n_alpha=6,
                                                 sample_budget=120, seed=42):
    print(f"    alpha = {alpha:.4f}:  beta_Schwarz ~ {beta:+.4f}   "
          f"(CP edge {-alpha/d:+.4f}, positivity edge {-2*alpha/d:+.4f})")

if len(sys.argv) > 2:
    ax = np.linspace(-0.2, d / (d - 1) + 0.2, 101)
    text = regions.grid_csv(d, ax, ax)
    with open(sys.argv[2], "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"\nwrote grid classification to {sys.argv[2]}")
