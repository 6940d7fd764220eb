#!/usr/bin/env python3
"""Eternally non-Markovian and divisible schedules.

Making nu time dependent with kappa = 1 and

    nu(t) = -(d-1)(e^{dt} - 1)/(e^{dt} + d - 1)

saturates the complete-positivity constraint for all times: the trajectory
rides the lower CP boundary beta = -alpha/d forever while nu(t) < 0 for
every t > 0 (an eternally negative rate), and the map converges to the
entanglement-breaking channel E4 instead of the maximally mixed state.

Freezing nu once it reaches -1 (at t_*) keeps the evolution P-divisible;
freezing at -d/(d+2) (at t_S < t_*) keeps it Schwarz-divisible; both then
relax to the completely depolarizing channel.

A second closed-form boundary evolution ("ENM2") has time-local rates
kappa(t) = d/(d - e^{dt}), nu(t) = 1 - e^{dt} that blow up at
t1 = ln(d)/d, yet the map itself stays regular: it passes through E4
exactly at t1 and converges to E3.

Usage:
    python demos/04_eternally_non_markovian.py [d]
"""

import sys

import numpy as np

from quditmaps import dynamics as dy
from quditmaps.channels import named_map

d = int(sys.argv[1]) if len(sys.argv) > 1 else 3

sw = dy.switch_times(d)
print(f"Switch times for d = {d}:  t_S = {sw.t_s:.6f},  t_* = {sw.t_star:.6f}")
print(f"    nu(t_S) = {dy.nu_enm(d, sw.t_s):+.12f}   (Schwarz threshold "
      f"{-d/(d+2):+.12f})")
if np.isfinite(sw.t_star):
    print(f"    nu(t_*) = {dy.nu_enm(d, sw.t_star):+.12f}   (positivity threshold -1)")

print("\nBoundary riding of the optimal schedule (Choi minimum eigenvalue):")
s_enm = dy.OptimalENM(d)
for t in (0.5, 2.0, 8.0, 20.0):
    m = dy.map_at(s_enm, t)
    alpha, beta = dy.alpha_beta_at(s_enm, t)
    ev = np.linalg.eigvalsh(m.choi)[0]
    print(f"    t = {t:5.1f}:  beta + alpha/d = {beta + alpha/d:+.2e},  "
          f"min eig Choi = {ev:+.2e},  nu(t) = {dy.nu_enm(d, t):+.6f}")

e4, _ = named_map("E4", d)
gap = np.abs(dy.asymptotic_map(s_enm).transfer - e4.transfer).max()
print(f"    asymptotic map equals E4 (max transfer deviation {gap:.2e})")

print("\nAsymptotics of the divisible schedules:")
for name, sched in (("P-divisible", dy.PDivisible(d)),
                    ("Schwarz-divisible", dy.SchwarzDivisible(d))):
    far = dy.map_at(sched, 40.0)
    asym = dy.asymptotic_map(sched)
    gap = np.abs(far.transfer - asym.transfer).max()
    rho = np.diag(np.arange(1, d + 1, dtype=float))
    rho /= np.trace(rho)
    out = asym(rho)
    print(f"    {name:18s}: map(40) vs limit deviation {gap:.2e}; "
          f"limit sends a test state to diag {np.round(np.diag(out).real, 4)}")

print("\nENM2 milestones:")
s2 = dy.ENM2(d)
t1 = np.log(d) / d
for label, t, target in (("t1 = ln(d)/d", t1, "E4"), ("t = 30", 30.0, "E3")):
    m = dy.map_at(s2, t)
    tgt, _ = named_map(target, d)
    print(f"    {label:12s}: max deviation from {target} = "
          f"{np.abs(m.transfer - tgt.transfer).max():.2e}")

print("\nTime-local rates of ENM2, extracted numerically vs closed form:")
for t in (0.3 * t1, 0.7 * t1, 1.5 * t1):
    rep = dy.extract_time_local_generator(lambda u: dy.map_at(s2, u), t)
    print(f"    t = {t:.4f}: kappa_fit = {rep.kappa_fit:+9.4f} "
          f"(true {d/(d - np.exp(d*t)):+9.4f}), nu_fit = {rep.nu_fit:+9.4f} "
          f"(true {1 - np.exp(d*t):+9.4f}), residual = {rep.residual:.1e}")
print(f"    at t1 = {t1:.4f} the map is non-invertible; extraction raises")
try:
    dy.extract_time_local_generator(lambda u: dy.map_at(s2, u), t1)
except Exception as exc:
    print(f"    -> {type(exc).__name__}: {exc}")
