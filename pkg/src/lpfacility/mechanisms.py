"""Mechanism catalog: rules mapping reported profiles to facility outcomes.

Specs are small immutable values describing a rule; `run` is the single
dispatcher applying one to a profile. Randomized rules return their full
finite distribution rather than samples, so downstream cost computations are
exact expectations.

Text round-trip: `parse_mechanism` / `format_mechanism` speak a canonical
grammar used by the command line and by serialized reports:

    median | order:J | dictator:I | opt | opt:P | lrm | threepoint:Q
    | mixture:{dict:[w1,...],order:[w1,...],opt:W} (optionally ,p:P)
    | mirror(SPEC) | symmetrize(SPEC)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    FacilityDistribution,
    LocationProfile,
    format_pnorm,
    order_statistic,
    parse_pnorm,
    point_mass,
    validate_pnorm,
)
from .optimizer import optimal_location

__all__ = [
    "ArityMismatch",
    "InvalidWeight",
    "Median",
    "OrderStatistic",
    "Dictator",
    "Optimal",
    "LRM",
    "ThreePoint",
    "Mixture",
    "Mirror",
    "Symmetrized",
    "MechanismSpec",
    "run",
    "median_location",
    "lrm_distribution",
    "three_point_distribution",
    "parse_mechanism",
    "format_mechanism",
]

WEIGHT_TOL = 1e-12


class ArityMismatch(ValueError):
    """Mechanism applied to a profile size it is not defined for."""


class InvalidWeight(ValueError):
    """Probability weights that are negative or do not sum to one."""


def _check_positive_index(value, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{label} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{label} must be >= 1, got {value}")
    return int(value)


@dataclass(frozen=True)
class Median:
    """Lower median: the ceil(n/2)-th smallest report."""


@dataclass(frozen=True)
class OrderStatistic:
    """The rank-th smallest report (rank is 1-based)."""

    rank: int

    def __post_init__(self):
        object.__setattr__(self, "rank", _check_positive_index(self.rank, "rank"))


@dataclass(frozen=True)
class Dictator:
    """Agent's own report, by reporting position (1-based)."""

    agent: int

    def __post_init__(self):
        object.__setattr__(self, "agent", _check_positive_index(self.agent, "agent"))


@dataclass(frozen=True)
class Optimal:
    """The cost-minimizing location; p=None ties it to the evaluation norm."""

    p: float | None = None

    def __post_init__(self):
        if self.p is not None:
            object.__setattr__(self, "p", validate_pnorm(self.p))


@dataclass(frozen=True)
class LRM:
    """Two agents: mass 1/4 on each report and 1/2 on their midpoint."""


@dataclass(frozen=True)
class ThreePoint:
    """Two agents: mass q_end on each report, 1 - 2*q_end on the midpoint."""

    q_end: float

    def __post_init__(self):
        q = float(self.q_end)
        if not 0.0 <= q <= 0.5:
            raise InvalidWeight(f"q_end must lie in [0, 1/2], got {self.q_end!r}")
        object.__setattr__(self, "q_end", q)


@dataclass(frozen=True)
class Mixture:
    """Lottery over dictators, order statistics, and the optimal location.

    dictator_weights and order_weights are each either empty (all zero) or
    one weight per agent; together with opt_weight they must be nonnegative
    and sum to 1. p=None ties the optimal component to the evaluation norm.
    """

    dictator_weights: tuple[float, ...] = ()
    order_weights: tuple[float, ...] = ()
    opt_weight: float = 0.0
    p: float | None = None

    def __post_init__(self):
        dw = tuple(float(w) for w in self.dictator_weights)
        ow = tuple(float(w) for w in self.order_weights)
        opt = float(self.opt_weight)
        weights = dw + ow + (opt,)
        if any(not math.isfinite(w) or w < 0.0 for w in weights):
            raise InvalidWeight(f"mixture weights must be finite and nonnegative: {weights!r}")
        total = math.fsum(weights)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvalidWeight(f"mixture weights sum to {total!r}, not 1")
        object.__setattr__(self, "dictator_weights", dw)
        object.__setattr__(self, "order_weights", ow)
        object.__setattr__(self, "opt_weight", opt)
        if self.p is not None:
            object.__setattr__(self, "p", validate_pnorm(self.p))


@dataclass(frozen=True)
class Mirror:
    """Two agents: the inner rule's outcome reflected about the midpoint."""

    inner: "MechanismSpec"


@dataclass(frozen=True)
class Symmetrized:
    """Two agents: half the inner rule, half its mirror image."""

    inner: "MechanismSpec"


MechanismSpec = Union[
    Median,
    OrderStatistic,
    Dictator,
    Optimal,
    LRM,
    ThreePoint,
    Mixture,
    Mirror,
    Symmetrized,
]


def median_location(profile: LocationProfile) -> float:
    """The lower-median report: the ceil(n/2)-th smallest."""
    return order_statistic(profile, (profile.n + 1) // 2)


def _require_two(profile: LocationProfile, label: str) -> None:
    if profile.n != 2:
        raise ArityMismatch(f"{label} is a two-agent rule, profile has {profile.n}")


def lrm_distribution(profile: LocationProfile) -> FacilityDistribution:
    """Quarter mass on each extreme report, half on their midpoint."""
    _require_two(profile, "lrm")
    a, b = profile.low, profile.high
    return FacilityDistribution(((a, 0.25), (0.5 * (a + b), 0.5), (b, 0.25)))


def three_point_distribution(profile: LocationProfile, q_end: float) -> FacilityDistribution:
    """Mass q_end on each extreme report, 1 - 2*q_end on their midpoint."""
    _require_two(profile, "threepoint")
    q = float(q_end)
    if not 0.0 <= q <= 0.5:
        raise InvalidWeight(f"q_end must lie in [0, 1/2], got {q_end!r}")
    a, b = profile.low, profile.high
    return FacilityDistribution(((a, q), (0.5 * (a + b), 1.0 - 2.0 * q), (b, q)))


def run(spec: MechanismSpec, reported: LocationProfile, p: float) -> FacilityDistribution:
    """Apply a mechanism to a reported profile.

    The evaluation norm p is forwarded to optimum-based components that do
    not carry their own. Raises ArityMismatch when the spec does not fit the
    profile size (two-agent rules, out-of-range ranks or dictators).
    """
    p = validate_pnorm(p)
    return _dispatch(spec, reported, p)


def _dispatch(spec, profile, p):
    if isinstance(spec, Median):
        return point_mass(median_location(profile))
    if isinstance(spec, OrderStatistic):
        if spec.rank > profile.n:
            raise ArityMismatch(
                f"order statistic {spec.rank} needs {spec.rank} agents, profile has {profile.n}"
            )
        return point_mass(order_statistic(profile, spec.rank))
    if isinstance(spec, Dictator):
        if spec.agent > profile.n:
            raise ArityMismatch(
                f"dictator {spec.agent} needs {spec.agent} agents, profile has {profile.n}"
            )
        return point_mass(float(profile.values[spec.agent - 1]))
    if isinstance(spec, Optimal):
        return point_mass(optimal_location(profile, p if spec.p is None else spec.p).location)
    if isinstance(spec, LRM):
        return lrm_distribution(profile)
    if isinstance(spec, ThreePoint):
        return three_point_distribution(profile, spec.q_end)
    if isinstance(spec, Mixture):
        return _run_mixture(spec, profile, p)
    if isinstance(spec, Mirror):
        _require_two(profile, "mirror")
        return _mirror_distribution(_dispatch(spec.inner, profile, p), profile)
    if isinstance(spec, Symmetrized):
        _require_two(profile, "symmetrize")
        inner = _dispatch(spec.inner, profile, p)
        mirrored = _mirror_distribution(inner, profile)
        halves = [(l, 0.5 * w) for l, w in inner.atoms()]
        halves += [(l, 0.5 * w) for l, w in mirrored.atoms()]
        return FacilityDistribution(halves)
    raise TypeError(f"unknown mechanism spec {spec!r}")


def _mirror_distribution(dist: FacilityDistribution, profile: LocationProfile) -> FacilityDistribution:
    t = profile.low + profile.high
    return FacilityDistribution(zip((t - dist.locations).tolist(), dist.probabilities.tolist()))


def _expand_weights(weights, n: int, label: str) -> np.ndarray:
    if len(weights) == 0:
        return np.zeros(n)
    if len(weights) != n:
        raise ArityMismatch(f"{label} weights sized {len(weights)} for {n} agents")
    return np.asarray(weights, dtype=float)


def _run_mixture(spec: Mixture, profile: LocationProfile, p: float) -> FacilityDistribution:
    n = profile.n
    dict_w = _expand_weights(spec.dictator_weights, n, "dictator")
    order_w = _expand_weights(spec.order_weights, n, "order")
    atoms = list(zip(profile.values.tolist(), dict_w.tolist()))
    atoms += list(zip(profile.sorted_values.tolist(), order_w.tolist()))
    if spec.opt_weight > 0.0:
        y = optimal_location(profile, p if spec.p is None else spec.p).location
        atoms.append((y, spec.opt_weight))
    return FacilityDistribution(atoms)


def format_mechanism(spec: MechanismSpec) -> str:
    """Canonical text form; parse_mechanism(format_mechanism(s)) == s."""
    if isinstance(spec, Median):
        return "median"
    if isinstance(spec, OrderStatistic):
        return f"order:{spec.rank}"
    if isinstance(spec, Dictator):
        return f"dictator:{spec.agent}"
    if isinstance(spec, Optimal):
        return "opt" if spec.p is None else f"opt:{format_pnorm(spec.p)}"
    if isinstance(spec, LRM):
        return "lrm"
    if isinstance(spec, ThreePoint):
        return f"threepoint:{spec.q_end!r}"
    if isinstance(spec, Mixture):
        dict_w = ",".join(repr(w) for w in spec.dictator_weights)
        order_w = ",".join(repr(w) for w in spec.order_weights)
        body = f"dict:[{dict_w}],order:[{order_w}],opt:{spec.opt_weight!r}"
        if spec.p is not None:
            body += f",p:{format_pnorm(spec.p)}"
        return f"mixture:{{{body}}}"
    if isinstance(spec, Mirror):
        return f"mirror({format_mechanism(spec.inner)})"
    if isinstance(spec, Symmetrized):
        return f"symmetrize({format_mechanism(spec.inner)})"
    raise TypeError(f"unknown mechanism spec {spec!r}")


def parse_mechanism(text: str) -> MechanismSpec:
    """Parse the canonical text form of a mechanism spec.

    Raises ValueError (or a subclass) on malformed input.
    """
    if not isinstance(text, str):
        raise ValueError(f"mechanism spec must be a string, got {text!r}")
    s = text.strip()
    if s == "median":
        return Median()
    if s == "lrm":
        return LRM()
    if s == "opt":
        return Optimal()
    for wrapper, cls in (("mirror(", Mirror), ("symmetrize(", Symmetrized)):
        if s.startswith(wrapper):
            if not s.endswith(")"):
                raise ValueError(f"unbalanced parentheses in mechanism spec {text!r}")
            return cls(parse_mechanism(s[len(wrapper) : -1]))
    head, sep, tail = s.partition(":")
    if not sep or not tail:
        raise ValueError(f"unrecognized mechanism spec {text!r}")
    if head == "order":
        return OrderStatistic(_parse_int(tail, text))
    if head == "dictator":
        return Dictator(_parse_int(tail, text))
    if head == "opt":
        return Optimal(parse_pnorm(tail))
    if head == "threepoint":
        return ThreePoint(_parse_float(tail, text))
    if head == "mixture":
        return _parse_mixture(tail, text)
    raise ValueError(f"unrecognized mechanism spec {text!r}")


def _parse_int(token: str, context: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise ValueError(f"expected an integer in {context!r}, got {token!r}") from exc


def _parse_float(token: str, context: str) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise ValueError(f"expected a number in {context!r}, got {token!r}") from exc


def _parse_weight_list(token: str, context: str) -> tuple[float, ...]:
    if not (token.startswith("[") and token.endswith("]")):
        raise ValueError(f"expected a [w1,...] list in {context!r}, got {token!r}")
    body = token[1:-1].strip()
    if not body:
        return ()
    return tuple(_parse_float(part.strip(), context) for part in body.split(","))


def _split_top_level(body: str) -> list[str]:
    parts = []
    depth = 0
    current = []
    for ch in body:
        if ch in "[{(":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _parse_mixture(token: str, context: str) -> Mixture:
    if not (token.startswith("{") and token.endswith("}")):
        raise ValueError(f"expected mixture:{{...}} in {context!r}")
    fields: dict[str, str] = {}
    for part in _split_top_level(token[1:-1]):
        key, sep, value = part.strip().partition(":")
        if not sep:
            raise ValueError(f"malformed mixture field {part!r} in {context!r}")
        key = key.strip()
        if key in fields:
            raise ValueError(f"duplicate mixture field {key!r} in {context!r}")
        fields[key] = value.strip()
    unknown = set(fields) - {"dict", "order", "opt", "p"}
    if unknown:
        raise ValueError(f"unknown mixture fields {sorted(unknown)!r} in {context!r}")
    for required in ("dict", "order", "opt"):
        if required not in fields:
            raise ValueError(f"mixture is missing field {required!r} in {context!r}")
    return Mixture(
        dictator_weights=_parse_weight_list(fields["dict"], context),
        order_weights=_parse_weight_list(fields["order"], context),
        opt_weight=_parse_float(fields["opt"], context),
        p=parse_pnorm(fields["p"]) if "p" in fields else None,
    )
