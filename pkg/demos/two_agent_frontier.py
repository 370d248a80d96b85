"""The two-agent three-point family, from manipulable to truthful.

ThreePoint(q) puts mass q on each report and 1-2q on the midpoint. Small q
chases the optimum and is manipulable by exaggeration; q = 1/4 is the first
truthful member and also the cheapest one, which makes it the natural
two-agent choice (it is exactly the quarter-half-quarter rule).
"""

import math

from lpfacility import (
    LocationProfile,
    SPViolation,
    ThreePoint,
    adversarial_deterministic_test,
    best_deviation,
    ratio,
    run,
    symmetric_sp_margin,
    violation_threshold,
)


def main() -> None:
    profile = LocationProfile([0.0, 1.0])
    threshold = violation_threshold(profile)

    print(f"{'q':>6} {'sp_margin':>10} {'truthful':>9} {'ratio':>9}  best stretch found")
    for i in range(0, 21, 2):
        q = i / 40.0
        spec = ThreePoint(q)
        margin = symmetric_sp_margin(run(spec, profile, 2.0), 1.0)
        dev = max(
            (best_deviation(spec, profile, 2.0, agent) for agent in (1, 2)),
            key=lambda r: r.gain,
        )
        truthful = dev.gain <= threshold
        rep = ratio(spec, profile, 2.0)
        note = "-" if truthful else f"report {dev.best_misreport:+.3f} gains {dev.gain:.4f}"
        print(f"{q:>6.3f} {margin:>10.4f} {str(truthful):>9} {rep.ratio:>9.6f}  {note}")

    print()
    print("any deterministic two-agent rule loses one way or the other:")
    for name, oracle in (
        ("midpoint", lambda prof: 0.5 * (prof.low + prof.high)),
        ("left report", lambda prof: prof.low),
    ):
        verdict = adversarial_deterministic_test(oracle, 2.0)
        if isinstance(verdict, SPViolation):
            rep = verdict.report
            print(
                f"  {name}: manipulable, agent {rep.agent} at {rep.true_profile.values.tolist()}"
                f" gains {rep.gain:.4f} by reporting {rep.best_misreport:g}"
            )
        else:
            print(
                f"  {name}: ratio witness {verdict.profile.values.tolist()}"
                f" with ratio {verdict.ratio:.6f} (>= sqrt(2) = {math.sqrt(2):.6f})"
            )


if __name__ == "__main__":
    main()
