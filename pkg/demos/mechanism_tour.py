"""Tour of the mechanism catalog: run each rule on a small profile, show the
output lottery, and price it against the optimal location."""

import math

from lpfacility import (
    LRM,
    Dictator,
    LocationProfile,
    Median,
    Mirror,
    Mixture,
    Optimal,
    OrderStatistic,
    Symmetrized,
    ThreePoint,
    format_mechanism,
    optimal_location,
    ratio,
    run,
)

P = 2.0


def show(spec, profile):
    dist = run(spec, profile, P)
    rep = ratio(spec, profile, P)
    atoms = "  ".join(f"{loc:+.3f}@{w:.3f}" for loc, w in dist.atoms())
    print(f"{format_mechanism(spec):<34} {atoms:<42} ratio {rep.ratio:.6f}")


crowd = LocationProfile([0.2, 0.9, 0.4, 0.65, 0.3])
pair = LocationProfile([0.1, 0.8])

opt = optimal_location(crowd, P)
print(f"five agents at {crowd.values.tolist()}")
print(f"optimum for p={P}: location {opt.location:.6f}, cost {opt.cost:.6f}\n")

for spec in (
    Median(),
    OrderStatistic(2),
    Dictator(3),
    Optimal(),
    Mixture(dictator_weights=(0.2, 0.2, 0.2, 0.2, 0.2)),
    Mixture(order_weights=(0.0, 0.25, 0.5, 0.25, 0.0)),
):
    show(spec, crowd)

print(f"\ntwo agents at {pair.values.tolist()}")
for spec in (
    Median(),
    LRM(),
    ThreePoint(0.25),
    ThreePoint(0.4),
    Mirror(Dictator(1)),
    Symmetrized(Dictator(1)),
):
    show(spec, pair)

print("\nthe max-norm favors the midrange:")
for p in (1.0, 2.0, 8.0, math.inf):
    opt = optimal_location(crowd, p)
    print(f"  p={p:<4} optimal location {opt.location:.6f}  ({opt.method})")
