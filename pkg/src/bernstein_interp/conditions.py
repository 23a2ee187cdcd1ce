"""Numerical diagnostics for zero sets and interpolation sequences.

Nothing here returns a bare yes/no: asymptotic conditions cannot be decided
from a finite truncation, so every checker reports the estimated constant, the
point where it is attained and the per-point table behind it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels
from .sequences import (
    DiscreteSequence,
    SeparationProfile,
    TruncationError,
    counting_function,
)

DEFAULT_UNIFORM_POINTS = 512
REAL_PART_OFFSET = 1e-6


@dataclass
class ConditionReport:
    # zero-set diagnostics
    reciprocal_partial_sums: list[tuple[float, complex]] = field(default_factory=list)
    linear_density: float | None = None
    increment_diagnostic: list[tuple[float, float]] = field(default_factory=list)
    balance_base_point: float | None = None
    balance_integral_sup: float | None = None
    balance_integral_argmax: float | None = None
    # interpolation diagnostics
    local_counting_constant: float | None = None
    local_counting_argmax: complex | None = None
    local_counting_skipped: list[complex] = field(default_factory=list)
    balayage_sup: float | None = None
    balayage_argmax: float | None = None
    balayage_tail_bound: float | None = None
    carleson_pairwise_sup: float | None = None
    carleson_pairwise_argmax: complex | None = None
    kernel_samples: list[tuple[complex, float, float]] = field(default_factory=list)
    separation: SeparationProfile | None = None


class LocalCounting(NamedTuple):
    constant: float
    argmax: complex | None
    points: np.ndarray
    values: np.ndarray
    skipped: list[complex]


class Balayage(NamedTuple):
    sup: float
    argmax: float
    x_grid: np.ndarray
    values: np.ndarray
    tail_bound: float | None


class PairwiseSums(NamedTuple):
    sup: float
    argmax: complex | None
    upper_points: np.ndarray
    upper_values: np.ndarray
    lower_points: np.ndarray
    lower_values: np.ndarray


def poisson_kernel(lam, x):
    """P(lam, x) = |Im lam| / |x - lam|**2, the half-plane Poisson kernel."""
    lam = np.asarray(lam, dtype=complex)
    return np.abs(lam.imag) / np.abs(np.asarray(x) - lam) ** 2


def default_x_grid(seq: DiscreteSequence, n_uniform: int = DEFAULT_UNIFORM_POINTS):
    """Candidate abscissae for the sup of the balayage.

    Midpoints between consecutive distinct real parts, every real part nudged
    by +-1e-6, and a uniform grid over the span of the real parts.
    """
    re = np.unique(seq.points.real)
    if re.size == 0:
        return np.zeros(1)
    mids = 0.5 * (re[1:] + re[:-1])
    lo, hi = re[0], re[-1]
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    uniform = np.linspace(lo, hi, n_uniform)
    grid = np.concatenate(
        [mids, re - REAL_PART_OFFSET, re + REAL_PART_OFFSET, uniform]
    )
    return np.unique(grid)


def _lattice_tail(meta, xs: np.ndarray) -> float | None:
    """Bound on the Poisson sum over lattice points omitted by the truncation."""
    try:
        off = abs(meta["imag_offset"])
        s = meta["spacing"]
        k_min, k_max = meta["k_min"], meta["k_max"]
        ro = meta.get("real_offset", 0.0)
    except KeyError:
        return None
    worst = 0.0
    for x in xs:
        total = 0.0
        # right tail k > k_max, then the mirrored left tail k < k_min
        for a in (k_max * s + ro - x, x - (k_min * s + ro)):
            if a >= 0:
                total += (math.pi / 2 - math.atan(a / off)) / s
            else:
                total += math.pi / s + 1.0 / off
        worst = max(worst, total)
    return worst


def poisson_balayage(
    seq: DiscreteSequence,
    x_grid: Sequence[float] | None = None,
    threads: int = 1,
) -> Balayage:
    """Evaluate sum over the truncation of |Im lam| / |x - lam|**2 on a grid of x.

    For lattice families with known metadata, ``tail_bound`` bounds the
    contribution of the omitted lattice points at the argmax abscissa.
    """
    xs = default_x_grid(seq) if x_grid is None else np.asarray(x_grid, dtype=float)
    if xs.size == 0:
        raise ValueError("x_grid must be nonempty")
    px = np.ascontiguousarray(seq.points.real)
    py = np.ascontiguousarray(np.abs(seq.points.imag))
    xs = np.ascontiguousarray(xs, dtype=float)
    if threads > 1 and xs.size > threads:
        chunks = np.array_split(xs, threads)
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda c: _kernels.poisson_sums(px, py, c), chunks))
        values = np.concatenate(parts)
    else:
        values = _kernels.poisson_sums(px, py, xs)
    k = int(np.argmax(values))
    tail = None
    if seq.family_tag == "lattice":
        tail = _lattice_tail(seq.metadata, xs[k : k + 1])
    return Balayage(float(values[k]), float(xs[k]), xs, values, tail)


def carleson_pairwise(seq: DiscreteSequence) -> PairwiseSums:
    """Per point, sum over same-half-plane lam2 != lam of |Im lam2| / |lam - conj(lam2)|**2."""
    out = []
    for half in (seq.upper, seq.lower):
        pts = half.points
        if pts.size < 2:
            out.append((pts, np.zeros(pts.size)))
            continue
        vals = _kernels.reflected_pair_sums(
            np.ascontiguousarray(pts.real), np.ascontiguousarray(np.abs(pts.imag))
        )
        out.append((pts, vals))
    (up, upv), (lo, lov) = out
    pts = np.concatenate([up, lo])
    vals = np.concatenate([upv, lov])
    if vals.size == 0:
        return PairwiseSums(0.0, None, up, upv, lo, lov)
    k = int(np.argmax(vals))
    return PairwiseSums(float(vals[k]), complex(pts[k]), up, upv, lo, lov)


def local_counting_check(seq: DiscreteSequence) -> LocalCounting:
    """max over lam of N(lam, |Im lam|) / |Im lam|, with the per-point table.

    Points whose disc D(lam, |Im lam|) is not covered by the truncation are
    skipped and listed rather than evaluated on incomplete data.
    """
    pts = seq.points
    h = np.abs(pts.imag)
    ok = np.abs(pts) + h <= seq.truncation_radius
    skipped = [complex(p) for p in pts[~ok]]
    idx = np.flatnonzero(ok)
    values = np.zeros(idx.size)
    if pts.size:
        tree = cKDTree(np.column_stack([pts.real, pts.imag]))
        # slight inflation, then filter with the exact closed-disc test below
        hits = tree.query_ball_point(
            np.column_stack([pts.real[idx], pts.imag[idx]]), h[idx] * (1 + 1e-9)
        )
        for n, (i, nbrs) in enumerate(zip(idx, hits)):
            r = h[i]
            d = np.abs(pts[np.sort(nbrs)] - pts[i])
            d = d[(d > 0) & (d <= r)]
            values[n] = (math.fsum(np.log(r / d)) + math.log(r)) / r
    if values.size == 0:
        return LocalCounting(0.0, None, pts[idx], values, skipped)
    k = int(np.argmax(values))
    return LocalCounting(float(values[k]), complex(pts[idx[k]]), pts[idx], values, skipped)


def _default_radii(seq: DiscreteSequence, count: int = 20) -> np.ndarray:
    far = float(np.max(np.abs(seq.points))) if len(seq) else 1.0
    top = min(far, seq.truncation_radius)
    return np.linspace(top / count, top, count)


def default_base_point(seq: DiscreteSequence) -> float:
    """Real part of the centroid; moved off the sequence if it happens to hit it."""
    b = float(np.mean(seq.points.real)) if len(seq) else 0.0
    while np.any(seq.points == b):  # unreachable for non-real points, kept for safety
        b = float(np.nextafter(b, math.inf))
    return b


def balance_integral(seq: DiscreteSequence, b: float, xs) -> np.ndarray:
    """int_0^inf [n(b,t) - n(x,t)] dt/t for each x, as sum log|lam - x| - log|lam - b|.

    The integrand is a step function that vanishes once t exceeds the spread
    of the truncation, which makes the integral a finite sum of logarithms.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    pts = seq.points
    for v in (b, *xs):
        if np.any(pts == v):
            raise ValueError(f"base/probe point {v!r} coincides with a sequence point")
    ref = math.fsum(np.log(np.abs(pts - b)))
    out = np.empty(xs.size)
    for i, x in enumerate(xs):
        out[i] = math.fsum(np.log(np.abs(pts - x))) - ref
    return out


def zero_set_report(
    seq: DiscreteSequence,
    b: float | None = None,
    x_grid: Sequence[float] | None = None,
    radii: Sequence[float] | None = None,
) -> ConditionReport:
    """Diagnostics for the four zero-set conditions on a truncation.

    (a) partial sums of 1/lam over the open discs |lam| < R;
    (b) max of n(0,t)/t over the sampled radii;
    (c) the increments [n(0,t+1) - n(0,t)]/t, where t+1 stays in the truncation;
    (d) the balance integral against base point ``b`` over ``x_grid`` and its sup.
    """
    radii = _default_radii(seq) if radii is None else np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0) or np.any(radii <= 0):
        raise ValueError("radii must be positive and increasing")
    if radii[-1] > seq.truncation_radius:
        raise TruncationError(
            f"radius {radii[-1]!r} exceeds truncation radius {seq.truncation_radius!r}"
        )
    b = default_base_point(seq) if b is None else float(b)
    if x_grid is None:
        xs = default_x_grid(seq, DEFAULT_UNIFORM_POINTS)
        xs = np.linspace(xs[0], xs[-1], DEFAULT_UNIFORM_POINTS)
    else:
        xs = np.asarray(x_grid, dtype=float)

    pts = seq.points
    mod = np.abs(pts)
    partial = []
    for R in radii:
        inv = 1.0 / pts[(mod < R) & (pts != 0)]
        partial.append((float(R), complex(math.fsum(inv.real), math.fsum(inv.imag))))
    density = max(counting_function(seq, 0, t) / t for t in radii)
    increments = [
        (float(t), (counting_function(seq, 0, t + 1) - counting_function(seq, 0, t)) / t)
        for t in radii
        if t + 1 <= seq.truncation_radius
    ]
    bal = balance_integral(seq, b, xs)
    k = int(np.argmax(bal))
    return ConditionReport(
        reciprocal_partial_sums=partial,
        linear_density=float(density),
        increment_diagnostic=increments,
        balance_base_point=b,
        balance_integral_sup=float(bal[k]),
        balance_integral_argmax=float(xs[k]),
    )


def analyze(
    seq: DiscreteSequence,
    b: float | None = None,
    x_grid: Sequence[float] | None = None,
    radii: Sequence[float] | None = None,
    separation: SeparationProfile | None = None,
    threads: int = 1,
    n_kernel_samples: int = 10,
) -> ConditionReport:
    """Run every checker and collect the results in one report."""
    report = zero_set_report(seq, b=b, x_grid=x_grid, radii=radii)
    local = local_counting_check(seq)
    report.local_counting_constant = local.constant
    report.local_counting_argmax = local.argmax
    report.local_counting_skipped = local.skipped

    bal = poisson_balayage(seq, x_grid, threads=threads)
    report.balayage_sup = bal.sup
    report.balayage_argmax = bal.argmax
    report.balayage_tail_bound = bal.tail_bound
    kern = poisson_kernel(seq.points, bal.argmax)
    top = np.argsort(-kern, kind="stable")[:n_kernel_samples]
    report.kernel_samples = [
        (complex(seq.points[i]), bal.argmax, float(kern[i])) for i in top
    ]

    pair = carleson_pairwise(seq)
    report.carleson_pairwise_sup = pair.sup
    report.carleson_pairwise_argmax = pair.argmax
    report.separation = separation
    return report
