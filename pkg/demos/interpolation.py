"""Interpolate three value families on Z + i with the weighted sine series."""

import numpy as np

from bernstein_interp import GeneratingFunction, Interpolant, interpolant_eval
from bernstein_interp.sequences import lattice
from bernstein_interp.verification import interpolation_report


def main():
    seq = lattice(1.0, 1.0, 50)
    F = GeneratingFunction.shifted_sine(1j)
    k = np.arange(-50, 51)
    rng = np.random.default_rng(0)
    families = {
        "constant": np.ones(k.size),
        "alternating": (-1.0) ** k,
        "random": np.exp(2j * np.pi * rng.uniform(size=k.size)),
    }
    for name, values in families.items():
        itp = Interpolant(F, seq, values)
        rep = interpolation_report(itp)
        value, tail, r_cut = interpolant_eval(itp, 0.5 + 1j)
        print(f"{name:12s} node residual {rep.max_node_residual:.1e}  "
              f"stability {rep.growth_constant:.4e}  type {rep.type_estimate.sigma_hat:.2f}")
        print(f"{'':12s} f(0.5+i) = {value:.5f}  (cut {r_cut:.0f}, tail <= {tail:.1e})")


if __name__ == "__main__":
    main()
