"""How close does the median get to its worst case?

Sweeps the cost exponent, runs the empirical worst-ratio search at several
population sizes, and prints the measured worst ratio next to the proven
ceiling 2^(1-1/p). The half-half profile attains the ceiling, so the search
should sit on it for every p.
"""

import math

from lpfacility import Median, RatioSearchConfig, sp_scan, worst_ratio_search


def bound(p: float) -> float:
    return 2.0 if math.isinf(p) else 2.0 ** (1.0 - 1.0 / p)


def main() -> None:
    p_values = (1.0, 1.5, 2.0, 3.0, 5.0, 8.0, math.inf)
    sizes = (2, 5, 10)
    cfg = RatioSearchConfig(trials=150, hill_iters=150, seed=7)

    header = "p".ljust(6) + "".join(f"n={n}".rjust(12) for n in sizes) + "ceiling".rjust(12)
    print(header)
    print("-" * len(header))
    for p in p_values:
        cells = []
        for n in sizes:
            report = worst_ratio_search(Median(), p, n, cfg)
            cells.append(f"{report.ratio:.7f}".rjust(12))
        label = "inf" if math.isinf(p) else f"{p:g}"
        print(label.ljust(6) + "".join(cells) + f"{bound(p):.7f}".rjust(12))

    print()
    print("misreport scan (should stay at zero gain; the median is truthful):")
    for p in (2.0, 8.0):
        report = sp_scan(Median(), p, n=6, trials=300, seed=11)
        print(f"  p={p:g}: worst gain {report.gain:.2e} (agent {report.agent})")


if __name__ == "__main__":
    main()
