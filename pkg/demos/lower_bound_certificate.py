"""Certificates against optimum-chasing mixtures.

A mixture rule spreads probability over dictators, order statistics, and
the exact optimum. For 2k agents at integer exponent p >= 3 the rank roots
a_j pin down four-block profiles that force any truthful mixture to keep
its probability on the optimum below p_opt_bound = 1/(1 + sum 1/a_j), which
in turn floors its approximation ratio. The floor rises toward the median's
ceiling 2^(1-1/p) as k grows.
"""

import numpy as np

from lpfacility import LocationProfile, mixture_bound_certificate, optimal_location

print("p=3 sweep (closed form available: a_j = (j-1) + sqrt((j-1)^2 + k))")
print(f"{'k':>6} {'sum 1/a_j':>12} {'p_opt_bound':>12} {'ratio_floor':>12}")
for k in (2, 5, 10, 50, 200, 1000):
    cert = mixture_bound_certificate(3, k)
    js = np.arange(1, k + 1, dtype=float)
    closed = (js - 1.0) + np.sqrt((js - 1.0) ** 2 + k)
    drift = float(np.max(np.abs(cert.roots - closed) / closed))
    assert drift <= 1e-9, drift
    print(f"{k:>6} {cert.inverse_sum:>12.6f} {cert.p_opt_bound:>12.6f} {cert.ratio_lower_bound:>12.6f}")

print()
print("p=4, k=3: the roots and the profiles they define")
cert = mixture_bound_certificate(4, 3)
for j, a in enumerate(cert.roots.tolist(), start=1):
    counts = (j, cert.k - j, cert.k - j + 1, j - 1)
    points = (-a, 0.0, 1.0, 1.0 + a)
    values = np.repeat(points, counts)
    opt = optimal_location(LocationProfile(values), float(cert.p))
    print(f"  a_{j} = {a:.9f}  profile counts {counts} at {tuple(round(x, 4) for x in points)}")
    print(f"       optimum re-check: location {opt.location:+.2e} (should be ~0)")

print()
print(f"certificate: p_opt_bound = {cert.p_opt_bound:.9f}")
print(f"ratio floor  = {cert.ratio_lower_bound:.9f}  (median's ceiling: {2 ** 0.75:.9f})")
print(f"max |optimum| residual across ranks: {float(cert.opt_residuals.max()):.2e}")
