"""Condition checks on the horizontal lattice Z + i.

The lattice is the model interpolation sequence: its balayage and pairwise
sums have closed forms, so the truncated numbers can be compared directly.
"""

import math

import numpy as np

from bernstein_interp import carleson_pairwise, local_counting_check, poisson_balayage
from bernstein_interp.sequences import check_weak_separation, lattice


def main():
    seq = lattice(imag_offset=1.0, spacing=1.0, half_width=10_000)
    print(f"{len(seq)} points, complete inside |z| <= {seq.truncation_radius:.4f}")

    bal = poisson_balayage(seq, np.linspace(-0.5, 0.5, 101))
    exact = math.pi / math.tanh(math.pi)
    print(f"balayage sup   {bal.sup:.7f} at x = {bal.argmax:+.3f}")
    print(f"closed form    {exact:.7f}  (gap {exact - bal.sup:.2e}, tail bound {bal.tail_bound:.2e})")

    pair = carleson_pairwise(seq)
    print(f"pairwise sup   {pair.sup:.7f} at {pair.argmax}")
    print(f"closed form    {math.pi / (2 * math.tanh(2 * math.pi)) - 0.25:.7f}")

    local = local_counting_check(lattice(1.0, 1.0, 100))
    print(f"local counting constant {local.constant} ({len(local.skipped)} end points skipped)")

    for eps in (0.4, 0.6):
        prof = check_weak_separation(seq, eps, 0.1)
        lam, lam2, slack = prof.witnesses[0]
        print(f"eps={eps}: separated={prof.feasible}, tightest pair {lam}, {lam2} slack {slack:+.4f}")


if __name__ == "__main__":
    main()
