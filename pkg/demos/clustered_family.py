"""Local counting on vertical clusters: j*i paired with j*i + gap(j).

With gap(j) = exp(-j) the log term log(j / exp(-j)) = j + log j is divided
by the height j, so the per-point values level off near 5 instead of
growing. A gap of exp(-j**2) makes them grow like j.
"""

import math

import numpy as np

from bernstein_interp import local_counting_check
from bernstein_interp.sequences import DiscreteSequence


def values_at_heights(gap, n):
    pts = []
    for j in range(1, n + 1):
        pts += [j * 1j, j * 1j + gap(j)]
    res = local_counting_check(DiscreteSequence.from_points(pts))
    return [float(res.values[np.flatnonzero(res.points == j * 1j)[0]]) for j in range(1, n + 1)]


def main():
    for label, gap, n in (("exp(-j)", lambda j: math.exp(-j), 12),
                          ("exp(-j**2)", lambda j: math.exp(-(j**2)), 8)):
        vals = values_at_heights(gap, n)
        print(f"gap {label}:")
        print("  " + " ".join(f"{v:6.3f}" for v in vals))


if __name__ == "__main__":
    main()
