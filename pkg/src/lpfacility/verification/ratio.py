"""Approximation ratio measurement: single profiles and worst-case search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import (
    FacilityDistribution,
    LocationProfile,
    expected_social_cost,
    validate_pnorm,
)
from ..mechanisms import run
from ..optimizer import _cached_adversarial_roots, optimal_cost
from .reports import RatioReport

__all__ = ["RatioSearchConfig", "ratio", "worst_ratio_search"]


@dataclass(frozen=True)
class RatioSearchConfig:
    """Knobs for the empirical worst-ratio search."""

    trials: int = 200
    hill_iters: int = 200
    seed: int = 42


def _report_for_distribution(
    spec, profile: LocationProfile, p: float, dist: FacilityDistribution
) -> RatioReport:
    mech = expected_social_cost(profile, dist, p)
    opt = optimal_cost(profile, p)
    if opt == 0.0:
        # all agents coincide: any mass off that point is infinitely bad
        value = 1.0 if mech == 0.0 else math.inf
    else:
        value = mech / opt
    return RatioReport(spec, profile, p, mech, opt, value)


def ratio(spec, profile: LocationProfile, p: float) -> RatioReport:
    """Mechanism cost over optimal cost on one profile.

    Convention for a degenerate profile (zero optimal cost): the ratio is 1
    when the mechanism also pays zero, +inf otherwise.
    """
    p = validate_pnorm(p)
    return _report_for_distribution(spec, profile, p, run(spec, profile, p))


def _search_families(n: int, p: float) -> list[LocationProfile]:
    profiles = []
    for m in range(1, n):
        # all two-point 0/1 splits: covers half-half and all-but-one clusters
        profiles.append(LocationProfile([0.0] * (n - m) + [1.0] * m))
    if n % 2 == 0 and not math.isinf(p) and float(p).is_integer() and p >= 3:
        k = n // 2
        for j, a in enumerate(_cached_adversarial_roots(k, int(p)), start=1):
            counts = (j, k - j, k - j + 1, j - 1)
            points = (-a, 0.0, 1.0, 1.0 + a)
            profiles.append(LocationProfile(np.repeat(points, counts)))
    return profiles


def worst_ratio_search(
    spec, p: float, n: int, cfg: RatioSearchConfig = RatioSearchConfig()
) -> RatioReport:
    """Empirically worst ratio over structured families, random profiles, and
    a coordinate-wise perturbation hill climb from the best profile found.

    Degenerate profiles (zero optimal cost) are skipped: the worst case of
    interest is the supremum over profiles the optimum can actually price.
    Deterministic for a fixed config.
    """
    p = validate_pnorm(p)
    if n < 2:
        raise ValueError(f"need at least two agents, got n={n}")
    rng = np.random.default_rng(cfg.seed)
    best: RatioReport | None = None
    for prof in _search_families(n, p):
        report = ratio(spec, prof, p)
        if report.opt_cost == 0.0:
            continue
        if best is None or report.ratio > best.ratio:
            best = report
    for _ in range(cfg.trials):
        prof = LocationProfile(rng.uniform(0.0, 1.0, size=n))
        report = ratio(spec, prof, p)
        if report.opt_cost == 0.0:
            continue
        if best is None or report.ratio > best.ratio:
            best = report
    if best is None:
        raise ValueError("no nondegenerate profile was scanned")
    current = best.profile.values.copy()
    span = max(best.profile.span, 1.0)
    for it in range(cfg.hill_iters):
        idx = it % n
        step = span * 0.5 ** (1.0 + 4.0 * it / max(cfg.hill_iters, 1))
        proposal = current.copy()
        proposal[idx] += step * float(rng.uniform(-1.0, 1.0))
        prof = LocationProfile(proposal)
        report = ratio(spec, prof, p)
        if report.opt_cost > 0.0 and report.ratio > best.ratio:
            best = report
            current = proposal
    return best
