"""Move the zeros of sin(pi z) away from a sequence that crowds the integers."""

import math

import numpy as np

from bernstein_interp import build_perturbed_sine
from bernstein_interp.sequences import DiscreteSequence
from bernstein_interp.verification import estimate_exponential_type, jensen_check


def main():
    rng = np.random.default_rng(7)
    near = np.array([-7, -3, 2, 5, 11]) + 0.01 * np.exp(2j * np.pi * rng.uniform(size=5))
    far = rng.uniform(-12, 12, size=10) + 1j * rng.uniform(0.5, 2, size=10)
    seq = DiscreteSequence.from_points(np.concatenate([near, far]))

    delta = 0.02
    F = build_perturbed_sine(seq, delta)
    print("perturbed zeros (k, eps_k):")
    for k, eps in F.perturbed_indices:
        print(f"  {k:+3d}  {eps:.3f}")

    cert = F.certificate
    print(f"certified lower bound eps = {cert.epsilon:.4e}")
    print(f"smallest |F| on the sequence = {cert.min_abs_on_target:.4e}")
    print(f"closest zero to the sequence = {cert.min_zero_distance:.4f} (delta = {delta})")

    est = estimate_exponential_type(F.log_abs, 10.0, [5, 10, 20, 40], log_space=True)
    print(f"fitted type {est.sigma_hat:.5f} vs pi = {math.pi:.5f}")

    center, radius = 2.3 + 0.2j, 1.4
    zeros = F.zeros(center.real - radius, center.real + radius)
    zeros = zeros[np.abs(zeros - center) < radius]
    print(f"Jensen residual on D({center}, {radius}): {jensen_check(F, zeros, center, radius):.2e}")


if __name__ == "__main__":
    main()
