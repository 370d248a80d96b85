"""Optimal facility location and the root finding behind lower-bound
certificates.

The social cost y -> (sum_i |x_i - y|^p)^(1/p) is minimized in closed form
for p in {1, 2, inf} (lower median, mean, midrange) and by bisection on the
monotone derivative of sum_i |x_i - y|^p otherwise. The same weighted
bisection engine serves single profiles, batched deviation curves, and the
certificate's four-point profiles.

Root finding: `smallest_positive_root` locates the leftmost sign change of a
scalar function by linear scan plus bisection; `adversarial_root` applies it
to the rank root function

    g(a) = j * a^(p-1) - (k - j + 1) - (j - 1) * (1 + a)^(p-1)

whose smallest positive root a_j prices, for rank j among 2k agents, the
stretch at which pulling the facility toward a distant block stops paying.
`adversarial_roots` computes all k of them in one sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import LocationProfile, social_cost, validate_pnorm

__all__ = [
    "OptResult",
    "NoRootFound",
    "optimal_location",
    "optimal_cost",
    "smallest_positive_root",
    "adversarial_root",
    "adversarial_roots",
]

# Interior bisection stops once the bracket is this narrow (relative to span).
BRACKET_TOL = 1e-12
# Default width target for refined root brackets, relative to 1 + root.
ROOT_TOL = 1e-12
_MAX_BISECT = 200
_ROOT_RETRIES = 8
_SWEEP_CHUNK = 1 << 16


class NoRootFound(RuntimeError):
    """No sign change found on the scanned interval."""


@dataclass(frozen=True)
class OptResult:
    """Minimizer of the social cost, its cost, and the method used.

    method is one of "closed_form_median", "closed_form_mean",
    "closed_form_midrange", "derivative_bisection".
    """

    location: float
    cost: float
    method: str


def optimal_location(profile: LocationProfile, p: float) -> OptResult:
    """Facility location minimizing the L_p social cost.

    p = 1 returns the lower median (the left endpoint of the median
    interval, which is all optimal); p = 2 the mean; p = inf the midrange.
    Other finite p have a unique minimizer by strict convexity, bracketed to
    width 1e-12 * (1 + span) by derivative bisection. The result always lies
    in [low, high].
    """
    p = validate_pnorm(p)
    xs = profile.sorted_values
    n = xs.size
    if p == 1.0:
        loc = float(xs[(n + 1) // 2 - 1])
        method = "closed_form_median"
    elif p == 2.0:
        loc = float(xs.mean())
        method = "closed_form_mean"
    elif math.isinf(p):
        loc = 0.5 * (float(xs[0]) + float(xs[-1]))
        method = "closed_form_midrange"
    else:
        loc = float(_bisect_rows(xs[None, :], None, p)[0])
        method = "derivative_bisection"
    return OptResult(loc, social_cost(profile, loc, p), method)


def optimal_cost(profile: LocationProfile, p: float) -> float:
    """Minimum achievable L_p social cost on the profile."""
    return optimal_location(profile, p).cost


def _bisect_rows(points: np.ndarray, weights, p: float) -> np.ndarray:
    """Row-wise derivative bisection for 1 < p < inf.

    Returns, per row, the minimizer of sum_j w_j |y - x_j|^p. The bracket
    keeps D(lo) <= 0 <= D(hi) for the nondecreasing derivative
    D(y) = sum_j w_j sign(y - x_j) |y - x_j|^(p-1) and stops once narrower
    than BRACKET_TOL * (1 + row span) or floats cannot split it further.
    """
    pts = np.asarray(points, dtype=float)
    lo = pts.min(axis=1)
    hi = pts.max(axis=1)
    tol = BRACKET_TOL * (1.0 + (hi - lo))
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        active = ((hi - lo) > tol) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        diff = mid[:, None] - pts
        terms = np.sign(diff) * np.abs(diff) ** (p - 1.0)
        if weights is not None:
            terms = terms * weights
        downhill = terms.sum(axis=1) <= 0.0
        lo = np.where(active & downhill, mid, lo)
        hi = np.where(active & ~downhill, mid, hi)
    return 0.5 * (lo + hi)


def smallest_positive_root(f, scan_step: float, max_bound: float, tol: float = ROOT_TOL) -> float:
    """Leftmost sign change of f on (0, max_bound], by scan plus bisection.

    Requires f(0) < 0 and f continuous. The scan visits t = step, 2*step,
    ... (the last point capped at max_bound exactly) and brackets the first
    t with f(t) >= 0; bisection then shrinks the bracket below
    tol * (1 + root). Sign changes finer than the scan resolution are
    invisible by design. Raises NoRootFound if f stays negative over the
    whole range so callers can enlarge max_bound and rescan.
    """
    if not scan_step > 0.0:
        raise ValueError(f"scan_step must be positive, got {scan_step!r}")
    if not max_bound > 0.0:
        raise ValueError(f"max_bound must be positive, got {max_bound!r}")
    value0 = float(f(0.0))
    if not value0 < 0.0:
        raise ValueError(f"f(0) must be negative, got {value0!r}")
    left = 0.0
    i = 1
    while left < max_bound:
        t = min(i * scan_step, max_bound)
        if float(f(t)) >= 0.0:
            return _refine_bracket(f, left, t, tol)
        left = t
        i += 1
    raise NoRootFound(
        f"no sign change in (0, {max_bound!r}] at scan step {scan_step!r}"
    )


def _refine_bracket(f, lo: float, hi: float, tol: float) -> float:
    # invariant: f(lo) < 0 <= f(hi)
    while hi - lo > tol * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if float(f(mid)) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _validate_rank_query(j: int, k: int, p: int) -> tuple[int, int, int]:
    for name, value in (("j", j), ("k", k), ("p", p)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            if isinstance(value, float) and float(value).is_integer():
                continue
            raise TypeError(f"{name} must be an integer, got {value!r}")
    j, k, p = int(j), int(k), int(p)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 1 <= j <= 2 * k:
        raise ValueError(f"rank j must lie in [1, {2 * k}], got {j}")
    if p < 3:
        raise ValueError(f"rank roots need integer p >= 3, got {p}")
    return j, k, p


def _rank_root_function(j: int, k: int, p: int):
    block = float(k - j + 1)
    shifted = float(j - 1)
    e = p - 1

    def g(a: float) -> float:
        return j * a**e - block - shifted * (1.0 + a) ** e

    return g


def _rank_scan_step(k: int, p: int) -> float:
    return max(1e-3, k ** (1.0 / (p - 1)) / 1e3)


def adversarial_root(j: int, k: int, p: int, tol: float = ROOT_TOL) -> float:
    """Smallest positive root a_j of the rank root function for 2k agents.

    Ranks above k fold symmetrically: a_j = a_(2k-j+1). The scan step is
    max(1e-3, k^(1/(p-1))/1e3) and the initial bound 2^(p-1) * k, doubled on
    failure up to a retry cap before giving up with diagnostics.
    """
    j, k, p = _validate_rank_query(j, k, p)
    if j > k:
        j = 2 * k - j + 1
    g = _rank_root_function(j, k, p)
    step = _rank_scan_step(k, p)
    bound = 2.0 ** (p - 1) * k
    for _ in range(_ROOT_RETRIES):
        try:
            return smallest_positive_root(g, step, bound, tol)
        except NoRootFound:
            bound *= 2.0
    raise NoRootFound(
        f"no rank root for j={j}, k={k}, p={p} scanned up to {bound!r}"
    )


def _powi(x: np.ndarray, e: int) -> np.ndarray:
    """x**e for integer e >= 1 by repeated squaring."""
    result = None
    base = x
    while e:
        if e & 1:
            result = base.copy() if result is None else result * base
        e >>= 1
        if e:
            base = base * base
    return result


def adversarial_roots(k: int, p: int, tol: float = ROOT_TOL) -> np.ndarray:
    """All rank roots a_1..a_k at the same scan resolution as adversarial_root.

    One left-to-right sweep brackets every rank at once: writing
    g_j(a) = j * u(a) + v(a) with u(a) = a^(p-1) + 1 - (1+a)^(p-1), which is
    strictly negative for a > 0 once p > 2, the ranks nonnegative at a scan
    point are exactly j <= (k + 1 - (1+a)^(p-1)) / u(a), so a running
    maximum of that threshold resolves each rank's first crossing cell in a
    single pass. Brackets are re-verified against the direct g_j sign and
    refined by row-wise bisection.
    """
    _, k, p = _validate_rank_query(1, k, p)
    step = _rank_scan_step(k, p)
    bound = 2.0 ** (p - 1) * k
    for _ in range(_ROOT_RETRIES):
        brackets = _sweep_rank_brackets(k, p, step, bound)
        if brackets is not None:
            lo, hi = brackets
            break
        bound *= 2.0
    else:
        raise NoRootFound(f"rank root sweep exhausted bound {bound!r} for k={k}, p={p}")
    _realign_rank_brackets(k, p, step, lo, hi)
    return _refine_rank_brackets(k, p, lo, hi, tol)


def _sweep_rank_brackets(k: int, p: int, step: float, bound: float):
    e = p - 1
    lo = np.zeros(k)
    hi = np.zeros(k)
    resolved = 0
    running_max = -math.inf
    prev_t = 0.0
    start = 1
    while prev_t < bound:
        idx = np.arange(start, start + _SWEEP_CHUNK)
        ts = np.minimum(idx * step, bound)
        # trim indices past the capped endpoint
        past = np.nonzero(ts >= bound)[0]
        if past.size:
            ts = ts[: past[0] + 1]
            idx = idx[: past[0] + 1]
        grown = _powi(1.0 + ts, e)
        u = _powi(ts, e) + 1.0 - grown
        with np.errstate(divide="ignore", invalid="ignore"):
            threshold = np.where(u < 0.0, (k + 1.0 - grown) / u, math.inf)
        threshold = np.maximum.accumulate(threshold)
        threshold = np.maximum(threshold, running_max)
        top = float(threshold[-1])
        new_max = k if top >= k else int(top)
        if new_max > resolved:
            ranks = np.arange(resolved + 1, new_max + 1, dtype=float)
            cells = np.searchsorted(threshold, ranks, side="left")
            hi[resolved:new_max] = ts[cells]
            lo[resolved:new_max] = np.where(
                cells > 0, ts[np.maximum(cells - 1, 0)], prev_t
            )
            resolved = new_max
            if resolved == k:
                return lo, hi
        running_max = top
        prev_t = float(ts[-1])
        start += ts.size
    return None


def _realign_rank_brackets(k: int, p: int, step: float, lo, hi) -> None:
    # The threshold form and the direct sign can disagree by an ulp at a cell
    # edge; walk each bracket until it holds under direct evaluation.
    for j in range(1, k + 1):
        g = _rank_root_function(j, k, p)
        a, b = float(lo[j - 1]), float(hi[j - 1])
        guard = 0
        while g(b) < 0.0:
            a, b = b, b + step
            guard += 1
            if guard > 10_000:
                raise NoRootFound(f"bracket realignment ran away for rank {j}")
        while a > 0.0 and g(a) >= 0.0:
            b, a = a, max(0.0, a - step)
            guard += 1
            if guard > 10_000:
                raise NoRootFound(f"bracket realignment ran away for rank {j}")
        lo[j - 1], hi[j - 1] = a, b


def _refine_rank_brackets(k: int, p: int, lo, hi, tol: float) -> np.ndarray:
    e = p - 1
    js = np.arange(1, k + 1, dtype=float)
    blocks = k - js + 1.0
    shifted = js - 1.0
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        active = ((hi - lo) > tol * (1.0 + hi)) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        values = js * _powi(mid, e) - blocks - shifted * _powi(1.0 + mid, e)
        negative = values < 0.0
        lo = np.where(active & negative, mid, lo)
        hi = np.where(active & ~negative, mid, hi)
    roots = 0.5 * (lo + hi)
    roots.flags.writeable = False
    return roots


@lru_cache(maxsize=64)
def _cached_adversarial_roots(k: int, p: int) -> tuple[float, ...]:
    return tuple(adversarial_roots(k, p).tolist())
