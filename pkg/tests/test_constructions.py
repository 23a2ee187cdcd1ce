import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernstein_interp import constructions as cons
from bernstein_interp.constructions import (
    ConstructionError,
    GeneratingFunction,
    GeneratorError,
    Interpolant,
    WeightParameters,
    assemble_vanishing_function,
    blaschke_eval,
    build_perturbed_sine,
    interpolant_eval,
    peak_function_eval,
    weight_bound,
    weight_eval,
)
from bernstein_interp.sequences import DiscreteSequence, lattice

PARAMS = WeightParameters()
# sup_x |peak(x)| (1 + |x|**3) for Lambda = Z + i, node i, M = 8: measured 2.0016e-3
PEAK_DECAY_BOUND = 2.1e-3


def random_near_integer_sequence(rng, n=50, near=10, delta=0.02):
    """n points, ``near`` of them within delta of distinct integers, the rest
    kept at least 0.25 away from every integer."""
    ks = rng.choice(np.arange(-30, 31), size=near, replace=False)
    close = ks + delta * 0.9 * np.exp(2j * np.pi * rng.uniform(size=near))
    close = close.real + 1j * np.where(np.abs(close.imag) < 1e-3, 1e-3, close.imag)
    far = []
    while len(far) < n - near:
        x = rng.uniform(-30, 30)
        if abs(x - round(x)) >= 0.25:
            far.append(complex(x, rng.choice([-1, 1]) * rng.uniform(0.3, 3)))
    return DiscreteSequence.from_points(np.concatenate([close, far]))


class TestWeight:
    def test_unit_at_node(self):
        for lam in (1j, -2j, 3 + 0.5j):
            assert weight_eval(lam, PARAMS, lam) == 1

    def test_vanishes_a_half_period_away(self):
        for M in (6.5, 8, 20):
            assert abs(weight_eval(1j, WeightParameters(M=M), 1j + math.pi)) < 1e-15

    def test_sign_convention(self):
        assert cons.weight_sign(2j) == -1 and cons.weight_sign(-2j) == 1
        with pytest.raises(ValueError):
            weight_eval(1.0 + 0j, PARAMS, 0.5)

    def test_parameter_invariant(self):
        with pytest.raises(ValueError):
            WeightParameters(M=6.0, B=1.0)
        WeightParameters(M=6.5, B=1.0)

    @pytest.mark.parametrize("lam", [1j, -2j, 0.5 + 3j, -0.3 - 0.1j])
    def test_growth_bound_on_grid(self, lam):
        X, Y = np.meshgrid(np.linspace(-20, 20, 401), np.linspace(-5, 5, 201))
        z = X + lam.real + 1j * Y
        assert np.all(np.abs(weight_eval(lam, PARAMS, z)) <= weight_bound(lam, PARAMS, z))

    def test_branches_agree_at_switch(self):
        for direction in (1, 1j, np.exp(0.7j)):
            for r in (1e-4 - 1e-9, 1e-4 + 1e-9):
                u = np.complex128(r * direction)
                series = cons._sinc_series(u)
                direct = cons._sinc_direct(u)
                assert abs(series - direct) < 1e-12

    def test_continuous_across_switch(self):
        lam = 1j
        a = weight_eval(lam, PARAMS, lam + 1e-4 - 1e-9)
        b = weight_eval(lam, PARAMS, lam + 1e-4 + 1e-9)
        # derivative of the weight near the node is about M
        assert abs(a - b) < PARAMS.M * 2e-9 + 1e-12


class TestBlaschke:
    def test_one_factor(self):
        assert blaschke_eval(DiscreteSequence.from_points([2j]), 1j) == pytest.approx(-1 / 3)

    def test_vanishes_on_zeros(self, rng):
        pts = rng.normal(size=8) + 1j * rng.uniform(0.1, 2, size=8)
        seq = DiscreteSequence.from_points(pts)
        assert np.all(np.abs(blaschke_eval(seq, pts)) == 0)

    def test_modulus_at_most_one(self, rng):
        pts = rng.normal(scale=3, size=20) + 1j * rng.uniform(0.05, 3, size=20)
        z = rng.normal(scale=10, size=10_000) + 1j * rng.exponential(2, size=10_000)
        mod = np.abs(blaschke_eval(DiscreteSequence.from_points(pts), z))
        assert np.all(mod <= 1)

    def test_unimodular_on_real_line(self):
        seq = DiscreteSequence.from_points([1j, 2 + 0.5j, -3 + 4j])
        x = np.linspace(-10, 10, 101)
        assert np.allclose(np.abs(blaschke_eval(seq, x)), 1, atol=1e-14)

    def test_rejects_lower_points_and_lower_z(self):
        with pytest.raises(ValueError):
            blaschke_eval(DiscreteSequence.from_points([1j, -1j]), 2j)
        with pytest.raises(ValueError):
            blaschke_eval(DiscreteSequence.from_points([1j]), -2j)


class TestGeneratingFunction:
    def test_plain_sine_values(self):
        F = GeneratingFunction.shifted_sine()
        assert F(0.5) == 1
        x = np.linspace(-40, 40, 1001) + 0.3j
        assert np.allclose(F(x), np.sin(np.pi * x), rtol=1e-12)

    def test_shifted_sine_derivative(self):
        F = GeneratingFunction.shifted_sine(1j)
        for k in range(-5, 6):
            assert F.derivative_at_zero(k + 1j) == pytest.approx(math.pi * (-1) ** k, rel=1e-15)

    def test_finite_product_derivative(self):
        F = GeneratingFunction.finite_product([1j, -1j])
        assert F.derivative_at_zero(1j) == 2j
        assert not F.in_bernstein_algebra

    def test_non_zero_rejected(self):
        with pytest.raises(GeneratorError):
            GeneratingFunction.shifted_sine(1j).derivative_at_zero(0.5 + 1j)
        with pytest.raises(GeneratorError):
            GeneratingFunction.finite_product([1j]).derivative_at_zero(2j)

    def test_asymmetric_perturbation_rejected(self):
        with pytest.raises(ValueError, match="eps_-1"):
            GeneratingFunction("perturbed_sine", perturbed_indices=((1, 0.1), (-1, 0.2)))

    def test_log_abs_agrees_and_survives_large_heights(self):
        F = GeneratingFunction("perturbed_sine", perturbed_indices=((2, 0.05), (-2, 0.05)))
        z = np.array([0.3 + 0.2j, -4.1 + 3j, 2.2 - 5j, 1.7 + 10j])
        assert np.allclose(F.log_abs(z), np.log(np.abs(F(z))), rtol=1e-12)
        # |sin(pi z)| = exp(pi y)/2 up to exp(-2 pi y); the grouped factor stays O(1)
        zz = 0.25 + 400j
        p2, pm2 = complex(2, 0.05), complex(-2, 0.05)
        factor = (zz - p2) * (zz - pm2) / ((zz - 2) * (zz + 2)) * (-4) / (p2 * pm2)
        expected = math.pi * zz.imag - math.log(2) + math.log(abs(factor))
        assert F.log_abs(zz) == pytest.approx(expected, rel=1e-14)


class TestPerturbedSine:
    def test_nothing_to_perturb(self, lattice100):
        F = build_perturbed_sine(lattice100, 0.05)
        assert F.perturbed_indices == ()
        z = np.linspace(-5, 5, 21) + 0.7j
        assert np.allclose(F(z), np.sin(np.pi * z), rtol=1e-13)

    def test_scan_picks_three_half_delta(self):
        F = build_perturbed_sine(DiscreteSequence.from_points([1 + 1e-3j]), 1e-2)
        assert F.perturbed_indices == ((-1, 0.015), (1, 0.015))

    def test_vanishes_at_zero_and_perturbed_zeros(self):
        F = build_perturbed_sine(DiscreteSequence.from_points([1 + 1e-3j, -3 - 2e-3j]), 1e-2)
        assert F(0) == 0
        for k, e in F.perturbed_indices:
            assert abs(F(complex(k, e))) < 1e-15

    def test_random_sequence_certificate(self, rng):
        seq = random_near_integer_sequence(rng)
        F = build_perturbed_sine(seq, 0.02)
        cert = F.certificate
        assert len(F.perturbed_indices) >= 10
        eps = dict(F.perturbed_indices)
        assert all(eps[-k] == e for k, e in eps.items())
        assert all(0 < e <= 5 * 0.02 for e in eps.values())
        vals = np.abs(F(seq.points))
        r = np.abs(seq.points)
        assert cert.epsilon > 0
        assert np.all(np.where(r >= 0.02, vals, vals / r) >= cert.epsilon)
        zeros = F.zeros(-40, 40)
        zeros = zeros[zeros != 0]
        d = np.abs(zeros[:, None] - seq.points[None, :])
        assert d.min() >= 0.02

    def test_delta_too_large(self):
        seq = DiscreteSequence.from_points([0.5j, 1 + 0.5j])
        with pytest.raises(ValueError, match="tenth"):
            build_perturbed_sine(seq, 0.2)

    def test_scan_exhaustion_names_index(self):
        # four points cover every scan value 0.125, 0.25, ..., 1.25 for k = 2
        seq = DiscreteSequence.from_points([2 + 0.1j, -2 + 0.55j, 2 + 1.0j, 2 + 1.4j])
        with pytest.raises(ConstructionError, match="index 2"):
            build_perturbed_sine(seq, 0.25)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 30), st.floats(1e-3, 0.5))
    def test_paired_factor_identity(self, k, eps):
        rng = np.random.default_rng(k)
        z = rng.normal(scale=10, size=100) + 1j * rng.normal(scale=3, size=100)
        F = GeneratingFunction("perturbed_sine", perturbed_indices=((k, eps), (-k, eps)))
        grouped = F._factor(z, k, eps)
        pk, pmk = complex(k, eps), complex(-k, eps)
        direct = (z - pk) * (z - pmk) / ((z - k) * (z + k)) * (-(k**2)) / (pk * pmk)
        assert np.allclose(grouped, direct, rtol=1e-12, atol=0)

    def test_derivative_matches_central_difference(self, rng):
        seq = random_near_integer_sequence(rng)
        F = build_perturbed_sine(seq, 0.02)
        zeros = F.zeros(-35, 35)
        h = 1e-6
        for z0 in zeros:
            exact = F.derivative_at_zero(z0)
            fd = (F(z0 + h) - F(z0 - h)) / (2 * h)
            assert abs(fd - exact) / abs(exact) < 1e-8

    def test_joint_evaluation_is_smooth_near_unperturbed_integer(self):
        F = GeneratingFunction("perturbed_sine", perturbed_indices=((3, 0.05), (-3, 0.05)))
        inside = F(3 + (1e-4 - 1e-9))
        outside = F(3 + (1e-4 + 1e-9))
        slope = F.derivative_at_zero(3 + 0.05j)  # order of magnitude of F' there
        assert abs(inside - outside) < 10 * abs(slope) * 2e-9

    def test_type_preserved_along_imaginary_axis(self):
        F = build_perturbed_sine(DiscreteSequence.from_points([1 + 1e-3j, 4 - 5e-3j]), 1e-2)
        ratios = [math.exp(F.log_abs(1j * y) - math.pi * y) for y in (10, 20, 40, 80)]
        # the grouped factors approach 1 like eps/y, so the drift halves per doubling
        steps = np.abs(np.diff(ratios))
        assert np.all(steps[1:] < steps[:-1])
        assert ratios[2] == pytest.approx(ratios[3], rel=1e-3)
        assert ratios[-1] == pytest.approx(0.5, rel=1e-3)


class TestPeakFunction:
    def test_unit_at_node_zero_elsewhere(self):
        F = GeneratingFunction.shifted_sine(1j)
        assert peak_function_eval(F, 1j, PARAMS, 1j) == pytest.approx(1, abs=1e-15)
        others = np.arange(-10, 11)[np.arange(-10, 11) != 0] + 1j
        assert np.all(np.abs(peak_function_eval(F, 1j, PARAMS, others)) < 1e-15)

    def test_decay_on_real_line(self):
        F = GeneratingFunction.shifted_sine(1j)
        x = np.linspace(-200, 200, 40001)
        v = np.abs(peak_function_eval(F, 1j, PARAMS, x))
        assert np.max(v * (1 + np.abs(x) ** 3)) <= PEAK_DECAY_BOUND

    def test_series_branch_matches_direct_quotient(self):
        F = GeneratingFunction.shifted_sine(1j)
        node = 1j
        fp = F.derivative_at_zero(node)
        taylor = cons._node_taylor(F, node)
        for d in (1e-4 - 1e-9, (1e-4 - 1e-9) * 1j, -(1e-4 - 1e-9)):
            z = np.array([node + d])
            near = cons._divided(F, F(z), z, node, fp, taylor)[0]
            direct = complex(F(z)[0] / d)
            assert abs(near - direct) / abs(direct) < 1e-10

    def test_zero_derivative_rejected(self):
        F = GeneratingFunction.shifted_sine()
        with pytest.raises(GeneratorError):
            peak_function_eval(F, 0j, PARAMS, 0.3, fprime=0)


def lattice_interpolant(values, half_width=50):
    seq = lattice(1.0, 1.0, half_width)
    return Interpolant(GeneratingFunction.shifted_sine(1j), seq, values, PARAMS)


class TestInterpolant:
    @pytest.mark.parametrize("family", ["constant", "alternating", "random"])
    def test_node_exactness(self, family, rng):
        k = np.arange(-50, 51)
        values = {
            "constant": np.ones(k.size),
            "alternating": (-1.0) ** k,
            "random": np.exp(2j * np.pi * rng.uniform(size=k.size)) * rng.uniform(size=k.size),
        }[family]
        itp = lattice_interpolant(values)
        lam = itp.nodes.points
        got = itp(lam)
        assert np.max(np.abs(got - itp.values)) <= 1e-8 * np.max(np.abs(values))
        for i in (0, 37, 50, 100):
            v, tail, _ = interpolant_eval(itp, lam[i])
            assert abs(v - values[i]) <= 1e-8 * max(abs(values[i]), 1e-300) + 1e-15

    def test_cut_independence(self):
        itp = lattice_interpolant((-1.0) ** np.arange(-50, 51))
        lam = itp.nodes.points[40]
        v1, _, _ = interpolant_eval(itp, lam, r_cut=5.0)
        v2, _, _ = interpolant_eval(itp, lam, r_cut=10.0)
        assert abs(v1 - v2) < 1e-12

    def test_default_cut_tail_meets_target(self):
        itp = lattice_interpolant(np.ones(101))
        value, tail, r_cut = interpolant_eval(itp, 0.5 + 1j)
        assert tail < 1e-10
        full = itp(0.5 + 1j)
        assert abs(value - full) <= tail

    def test_zero_values(self):
        itp = lattice_interpolant(np.zeros(101))
        z = np.linspace(-10, 10, 41) + 0.4j
        assert np.all(itp(z) == 0)
        assert itp.K == 0

    def test_midpoint_modulus_near_one(self):
        itp = lattice_interpolant(np.ones(101))
        assert 0.8 <= abs(itp(0.5 + 1j)) <= 1.2

    def test_misaligned_values(self):
        with pytest.raises(ValueError):
            lattice_interpolant(np.ones(100))

    def test_generator_must_vanish_at_nodes(self):
        seq = DiscreteSequence.from_points([0.5 + 1j, 1 + 1j])
        with pytest.raises(GeneratorError):
            Interpolant(GeneratingFunction.shifted_sine(1j), seq, [1, 1])

    def test_value_bound_constant(self):
        seq = lattice(1.0, 1.0, 5)
        vals = np.exp(0.5 * np.abs(seq.points.imag)) * np.exp(1j * np.arange(11))
        itp = Interpolant(GeneratingFunction.shifted_sine(1j), seq, vals, PARAMS, 0.5)
        assert itp.K == pytest.approx(1.0)


class TestAssembly:
    def setup_method(self):
        F = GeneratingFunction.shifted_sine(1j)
        self.nodes = [k + 1j for k in range(-2, 3)]
        self.peaks = [
            (lam, lambda z, lam=lam: peak_function_eval(F, lam, PARAMS, z)) for lam in self.nodes
        ]

    def test_vanishes_at_nodes(self):
        vals = assemble_vanishing_function(self.peaks, PARAMS, np.array(self.nodes))
        assert np.max(np.abs(vals)) < 1e-8

    def test_unit_derivative_at_nodes(self):
        h = 1e-6
        for lam in self.nodes:
            plus = assemble_vanishing_function(self.peaks, PARAMS, lam + h, verify=False)
            minus = assemble_vanishing_function(self.peaks, PARAMS, lam - h, verify=False)
            assert abs((plus - minus) / (2 * h) - 1) < 1e-6

    def test_single_node_value(self):
        lam, f = self.peaks[2]
        z = lam + math.pi / 2
        got = assemble_vanishing_function([(lam, f)], PARAMS, z)
        assert got == pytest.approx(weight_eval(lam, PARAMS, z) * f(z) ** 2, rel=1e-14)

    def test_rejects_non_peak_family(self):
        bad = [(lam, lambda z: np.ones_like(np.asarray(z, dtype=complex))) for lam in self.nodes]
        with pytest.raises(ValueError, match="misses delta"):
            assemble_vanishing_function(bad, PARAMS, 0.3)
