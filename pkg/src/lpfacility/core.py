"""Profiles, facility distributions, and L_p social cost on the line.

The model: n agents report locations on the real line, a mechanism picks a
facility location y (or a finite distribution over locations), and an agent
at x pays the distance |x - y|. The planner aggregates the distance vector
with an L_p norm, p in [1, inf], where p = inf means the maximum distance.

Conventions used throughout the package:

* agents are numbered 1..n by reporting position;
* the cost exponent p is a plain float, with math.inf selecting the max
  objective (a large finite number is NOT treated as infinity);
* randomized outcomes are finite distributions, and their social cost is the
  expectation of the norm, never the norm of the expected distances.

Everything in this module is a pure function of immutable values.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "ATOM_MASS_TOL",
    "LocationProfile",
    "FacilityDistribution",
    "point_mass",
    "validate_pnorm",
    "parse_pnorm",
    "format_pnorm",
    "agent_cost",
    "expected_agent_cost",
    "social_cost",
    "expected_social_cost",
    "order_statistic",
    "reflect",
]

# Total probability mass must match 1 this tightly at construction.
ATOM_MASS_TOL = 1e-12


def validate_pnorm(p: float) -> float:
    """Return the cost exponent as a float, math.inf included.

    Rejects NaN and anything below 1. Infinity must arrive as the IEEE
    infinity (math.inf, np.inf, float("inf")).
    """
    q = float(p)
    if math.isnan(q) or q < 1.0:
        raise ValueError(f"cost exponent must be >= 1 or inf, got {p!r}")
    return q


def parse_pnorm(text: str) -> float:
    """Parse "1", "2.5", or "inf" into a validated cost exponent."""
    try:
        q = float(text)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"unparseable cost exponent {text!r}") from exc
    return validate_pnorm(q)


def format_pnorm(p: float) -> str:
    """Inverse of parse_pnorm: "inf" for the max norm, repr otherwise."""
    q = validate_pnorm(p)
    return "inf" if math.isinf(q) else repr(q)


class LocationProfile:
    """Reported agent locations, in reporting order.

    Keeps the original order (dictatorships and per-agent deviation reports
    need agent identity) alongside an ascending sorted view (rank-based rules
    need order statistics). Instances are immutable; the arrays are
    read-only.
    """

    __slots__ = ("values", "sorted_values", "order")

    def __init__(self, locations):
        values = np.array(locations, dtype=float)
        if values.ndim != 1:
            raise ValueError("profile must be a one-dimensional sequence")
        if values.size < 2:
            raise ValueError(f"profile needs at least two agents, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile locations must be finite")
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        for arr in (values, sorted_values, order):
            arr.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sorted_values", sorted_values)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("LocationProfile is immutable")

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def low(self) -> float:
        return float(self.sorted_values[0])

    @property
    def high(self) -> float:
        return float(self.sorted_values[-1])

    @property
    def span(self) -> float:
        return self.high - self.low

    def with_report(self, agent: int, report: float) -> "LocationProfile":
        """Copy of the profile with one agent's report replaced (1-based)."""
        _check_agent(agent, self.n)
        vals = self.values.copy()
        vals[agent - 1] = float(report)
        return LocationProfile(vals)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocationProfile):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.all(self.values == other.values)
        )

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"LocationProfile({self.values.tolist()!r})"


def _check_agent(agent: int, n: int) -> int:
    if not isinstance(agent, (int, np.integer)) or isinstance(agent, bool):
        raise TypeError(f"agent index must be an integer, got {agent!r}")
    if not 1 <= agent <= n:
        raise IndexError(f"agent {agent} out of range for {n} agents")
    return int(agent)


class FacilityDistribution:
    """Finite probability distribution over facility locations.

    Atoms at exactly equal locations are merged and zero-mass atoms are
    dropped at construction, so two distributions are equal iff their
    location and probability arrays are equal. Locations are stored sorted
    ascending; -0.0 is normalized to +0.0. Probabilities must be nonnegative
    and sum to 1 within ATOM_MASS_TOL.
    """

    __slots__ = ("locations", "probabilities")

    def __init__(self, atoms):
        pairs = list(atoms)
        if not pairs:
            raise ValueError("distribution needs at least one atom")
        locations = np.array([pair[0] for pair in pairs], dtype=float) + 0.0
        probabilities = np.array([pair[1] for pair in pairs], dtype=float)
        if not np.all(np.isfinite(locations)):
            raise ValueError("atom locations must be finite")
        if not np.all(np.isfinite(probabilities)) or np.any(probabilities < 0.0):
            raise ValueError("atom probabilities must be finite and nonnegative")
        total = float(probabilities.sum())
        if abs(total - 1.0) > ATOM_MASS_TOL:
            raise ValueError(f"atom probabilities sum to {total!r}, not 1")
        unique, inverse = np.unique(locations, return_inverse=True)
        merged = np.zeros(unique.size)
        np.add.at(merged, inverse, probabilities)
        keep = merged > 0.0
        locs = unique[keep]
        probs = merged[keep]
        for arr in (locs, probs):
            arr.flags.writeable = False
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "probabilities", probs)

    def __setattr__(self, name, value):
        raise AttributeError("FacilityDistribution is immutable")

    def atoms(self) -> list[tuple[float, float]]:
        """The (location, probability) pairs, locations ascending."""
        return list(zip(self.locations.tolist(), self.probabilities.tolist()))

    @property
    def is_deterministic(self) -> bool:
        return self.locations.size == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, FacilityDistribution):
            return NotImplemented
        return (
            self.locations.shape == other.locations.shape
            and bool(np.all(self.locations == other.locations))
            and bool(np.all(self.probabilities == other.probabilities))
        )

    def __hash__(self):
        return hash((self.locations.tobytes(), self.probabilities.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join(f"{l!r}: {p!r}" for l, p in self.atoms())
        return f"FacilityDistribution({{{body}}})"


def point_mass(location: float) -> FacilityDistribution:
    """The deterministic outcome: all mass on one location."""
    return FacilityDistribution(((location, 1.0),))


def agent_cost(x: float, y: float) -> float:
    """Distance cost |x - y| of an agent at x for a facility at y."""
    return abs(float(x) - float(y))


def expected_agent_cost(x: float, dist: FacilityDistribution) -> float:
    """Expected distance from x to a facility drawn from dist."""
    return float(np.abs(float(x) - dist.locations) @ dist.probabilities)


def _lp_norm(distances: np.ndarray, p: float) -> float:
    """L_p norm of a nonnegative 1-D array, max-factored for overflow safety."""
    if math.isinf(p):
        return float(distances.max())
    peak = float(distances.max())
    if peak == 0.0:
        return 0.0
    if p == 1.0:
        return float(distances.sum())
    # factor out the peak so every power stays in [0, 1]
    scaled = distances / peak
    return peak * float(np.sum(scaled**p)) ** (1.0 / p)


def social_cost(profile: LocationProfile, y: float, p: float) -> float:
    """L_p norm of the agent distance vector to y (max distance at p=inf)."""
    p = validate_pnorm(p)
    return _lp_norm(np.abs(profile.values - float(y)), p)


def expected_social_cost(
    profile: LocationProfile, dist: FacilityDistribution, p: float
) -> float:
    """Expectation over facility draws of the L_p social cost.

    Each atom's cost is computed in full and then averaged with the atom
    weights (expectation of the norm). For a one-atom distribution this
    equals social_cost exactly.
    """
    p = validate_pnorm(p)
    return float(
        sum(
            w * social_cost(profile, y, p)
            for y, w in zip(dist.locations.tolist(), dist.probabilities.tolist())
        )
    )


def order_statistic(profile: LocationProfile, j: int) -> float:
    """The j-th smallest reported location, 1-based; ties keep multiplicity."""
    if not isinstance(j, (int, np.integer)) or isinstance(j, bool):
        raise TypeError(f"order statistic index must be an integer, got {j!r}")
    if not 1 <= j <= profile.n:
        raise IndexError(f"order statistic {j} out of range for {profile.n} agents")
    return float(profile.sorted_values[j - 1])


def reflect(profile: LocationProfile) -> LocationProfile:
    """The profile reflected about the midpoint of its range.

    Agent order is preserved: agent i moves to low + high - x_i.
    """
    t = profile.low + profile.high
    return LocationProfile(t - profile.values)
