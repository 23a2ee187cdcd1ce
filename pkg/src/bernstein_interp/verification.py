"""Independent numerical checks of the constructions.

Jensen's formula by periodic trapezoid quadrature, exponential-type fitting
from horizontal sup norms, interpolation residual/stability measurements, and
the consistency check for unions of interpolation sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .conditions import local_counting_check, default_x_grid, poisson_balayage
from .constructions import Interpolant
from .sequences import DiscreteSequence, SeparationProfile, check_weak_separation

NODE_CLEARANCE = 1e-8
MIN_MODULUS = 1e-10


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class JensenTerms:
    circle_mean: float
    log_abs_center: float
    counting_term: float
    nodes: int
    rotated: bool

    @property
    def residual(self) -> float:
        return abs(self.circle_mean - self.log_abs_center - self.counting_term)


def _zero_array(zeros) -> np.ndarray:
    return np.asarray(getattr(zeros, "points", zeros), dtype=complex).reshape(-1)


def _cauchy_coefficient(f, center, m, rho, n=256):
    """Taylor coefficient of order m at ``center`` by trapezoid on |z-c| = rho."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.asarray(f(center + rho * w), dtype=complex)
    return complex(np.mean(vals / (rho * w) ** m))


def jensen_terms(
    f: Callable,
    zeros,
    center: complex,
    radius: float,
    quad_points: int = 64,
    tol: float = 1e-9,
    max_points: int = 1 << 20,
) -> JensenTerms:
    """The three terms of Jensen's formula for ``f`` on D(center, radius).

    ``zeros`` must list every zero of ``f`` in the closed disc (with
    repetition for multiplicity). The circle mean of log|f| is computed with
    the trapezoid rule, doubling the node count until two successive values
    agree within ``tol``.
    """
    zs = _zero_array(zeros)
    dist = np.abs(zs - center)
    at_center = dist <= 1e-12
    m = int(np.count_nonzero(at_center))
    inside = dist[~at_center & (dist < radius)]
    counting = math.fsum(np.log(radius / inside)) + m * math.log(radius)

    if m == 0:
        fc = complex(f(center))
        if fc == 0:
            raise ValueError("f vanishes at the centre; list that zero in `zeros`")
        log_center = math.log(abs(fc))
    else:
        others = dist[~at_center]
        rho = 0.5 * min(radius, float(others.min()) if others.size else radius)
        log_center = math.log(abs(_cauchy_coefficient(f, center, m, rho)))

    def circle_mean(n, phase):
        theta = 2 * np.pi * (np.arange(n) + phase) / n
        pts = center + radius * np.exp(1j * theta)
        if zs.size and np.min(np.abs(pts[:, None] - zs[None, :])) < NODE_CLEARANCE:
            return None
        vals = np.abs(np.asarray(f(pts), dtype=complex))
        if np.min(vals) <= MIN_MODULUS:
            raise QuadratureError(
                f"|f| = {np.min(vals):.3g} on the circle; f must not vanish there"
            )
        return math.fsum(np.log(vals)) / n

    phase = 0.0
    n = quad_points
    prev = circle_mean(n, phase)
    if prev is None:
        phase = 0.5
        prev = circle_mean(n, phase)
    while True:
        if prev is None:
            raise QuadratureError("quadrature node within 1e-8 of a zero of f")
        n *= 2
        if n > max_points:
            raise QuadratureError(f"trapezoid rule did not settle below {max_points} nodes")
        cur = circle_mean(n, phase)
        if cur is None:
            raise QuadratureError("quadrature node within 1e-8 of a zero of f")
        if abs(cur - prev) < tol:
            return JensenTerms(cur, log_center, counting, n, phase != 0.0)
        prev = cur


def jensen_check(
    f: Callable, zeros, center: complex, radius: float, quad_points: int = 64
) -> float:
    """|mean log|f| on the circle - log|f(center)| - N(center, radius)|."""
    return jensen_terms(f, zeros, center, radius, quad_points).residual


@dataclass(frozen=True)
class ExponentialTypeEstimate:
    A_hat: float
    sigma_hat: float
    residual: float
    heights_used: list[float]


def estimate_exponential_type(
    f: Callable,
    half_width: float,
    heights: Sequence[float],
    log_space: bool = False,
    n_grid: int = 1024,
) -> ExponentialTypeEstimate:
    """Fit max_{|x| <= half_width} log|f(x +- iy)| ~ A_hat + sigma_hat * y.

    The value at each height is the larger of the two segments at +y and -y,
    the sup-norm proxy for ``log|f(z)| <= A + B|Im z|``. Pass
    ``log_space=True`` when ``f`` already returns log|f|. Polynomial
    (``finite_product``) generators are rejected.
    """
    owner = getattr(f, "__self__", f)
    if getattr(owner, "kind", None) == "finite_product":
        raise ValueError("polynomials have no exponential type; refusing to fit")
    hs = np.asarray(heights, dtype=float)
    if hs.size < 4:
        raise ValueError("need at least four heights")
    if np.any(hs < 1) or np.any(np.diff(hs) <= 0):
        raise ValueError("heights must be increasing and >= 1")
    xs = np.linspace(-half_width, half_width, n_grid)
    m = np.empty(hs.size)
    for i, y in enumerate(hs):
        best = -math.inf
        for sgn in (1, -1):
            z = xs + 1j * sgn * y
            if log_space:
                vals = np.asarray(f(z), dtype=float)
            else:
                vals = np.abs(np.asarray(f(z), dtype=complex))
                if not np.all(np.isfinite(vals)):
                    raise OverflowError(f"|f| overflows at height {y}; use log_space")
                with np.errstate(divide="ignore"):
                    vals = np.log(vals)
            if np.any(np.isnan(vals)) or np.any(vals == math.inf):
                raise OverflowError(f"log|f| not finite at height {y}")
            best = max(best, float(np.max(vals)))
        m[i] = best
    design = np.column_stack([np.ones_like(hs), hs])
    (a, s), *_ = np.linalg.lstsq(design, m, rcond=None)
    residual = float(np.max(np.abs(m - (a + s * hs))))
    return ExponentialTypeEstimate(float(a), max(float(s), 0.0), residual, hs.tolist())


@dataclass(frozen=True)
class InterpolationReport:
    max_node_residual: float
    growth_constant: float
    type_estimate: ExponentialTypeEstimate
    min_abs_derivative: float


def default_probe_grid(itp: Interpolant, heights=(-4, -2, -1, -0.5, 0, 0.5, 1, 2, 4)):
    re = itp.nodes.points.real
    xs = np.linspace(re.min() - 2, re.max() + 2, 401)
    return (xs[None, :] + 1j * np.asarray(heights, dtype=float)[:, None]).ravel()


def interpolation_report(
    itp: Interpolant,
    probe_grid: Sequence[complex] | None = None,
    heights: Sequence[float] = (1, 2, 4, 8),
) -> InterpolationReport:
    """Node residual, measured stability constant and fitted type of an interpolant.

    The stability constant is ``sup_probe |f(z)| exp(-sigma_hat |Im z|)``
    divided by ``sup_lam |v_lam| exp(-C |Im lam|)``; it is 0 when all values
    vanish.
    """
    lam = itp.nodes.points
    residual = float(np.max(np.abs(itp(lam) - itp.values), initial=0.0))
    half_width = float(np.max(np.abs(lam.real), initial=1.0)) + 2.0
    est = estimate_exponential_type(itp, half_width, heights)
    probe = default_probe_grid(itp) if probe_grid is None else np.asarray(probe_grid, dtype=complex)
    if itp.K == 0:
        growth = 0.0
    else:
        weighted = np.abs(itp(probe)) * np.exp(-est.sigma_hat * np.abs(probe.imag))
        growth = float(np.max(weighted)) / itp.K
    min_d = float(np.min(np.abs(itp.derivatives), initial=math.inf))
    return InterpolationReport(residual, growth, est, min_d)


@dataclass(frozen=True)
class UnionReport:
    separation: SeparationProfile
    local_constants: tuple[float, float, float]
    cross_term: float
    local_bounded: bool
    balayage_sups: tuple[float, float, float]
    balayage_additivity_error: float


def _cross_counting(points: np.ndarray, other: DiscreteSequence, R: float) -> np.ndarray:
    """N_other(lam, |Im lam|) / |Im lam| for each lam (other has no point at lam)."""
    out = []
    for lam in points:
        h = abs(lam.imag)
        if abs(lam) + h > R:
            continue
        d = np.abs(other.points - lam)
        d = d[d <= h]
        out.append(math.fsum(np.log(h / d)) / h)
    return np.asarray(out)


def union_interpolation_check(
    seq1: DiscreteSequence,
    seq2: DiscreteSequence,
    epsilon: float,
    alpha: float,
    x_grid: Sequence[float] | None = None,
) -> UnionReport:
    """Compare the condition constants of a union with those of its parts.

    The local-counting quantity is additive over disjoint sequences, so the
    union's constant is bounded by the parts' constants plus the largest
    cross contribution one part makes at the points of the other; the
    balayage is exactly additive.
    """
    union = seq1.union(seq2)
    sep = check_weak_separation(union, epsilon, alpha)
    c1 = local_counting_check(seq1).constant
    c2 = local_counting_check(seq2).constant
    cu = local_counting_check(union).constant
    R = union.truncation_radius
    cross = np.concatenate(
        [_cross_counting(seq1.points, seq2, R), _cross_counting(seq2.points, seq1, R)]
    )
    cross_max = float(np.max(cross, initial=0.0))
    bounded = cu <= c1 + c2 + cross_max + 1e-12 * max(1.0, cu)

    xs = default_x_grid(union) if x_grid is None else np.asarray(x_grid, dtype=float)
    b1 = poisson_balayage(seq1, xs).values
    b2 = poisson_balayage(seq2, xs).values
    bu = poisson_balayage(union, xs).values
    scale = max(float(np.max(np.abs(bu))), np.finfo(float).tiny)
    err = float(np.max(np.abs(bu - (b1 + b2)))) / scale
    return UnionReport(
        sep,
        (c1, c2, cu),
        cross_max,
        bool(bounded),
        (float(b1.max()), float(b2.max()), float(bu.max())),
        err,
    )
