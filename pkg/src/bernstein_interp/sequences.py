"""Finite truncations of discrete sequences in the plane and their geometry.

A :class:`DiscreteSequence` is a finite set of distinct, non-real complex
points together with a *truncation radius*: the radius of the closed disc
about the origin inside which the finite list is claimed to coincide with the
underlying (possibly infinite) sequence. Quantities that would need points
beyond that disc raise :class:`TruncationError` instead of silently
under-counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import numpy as np
from scipy.spatial import cKDTree


class SequenceError(ValueError):
    """Raised when a point set violates the sequence invariants."""


class TruncationError(ValueError):
    """Raised when a query reaches beyond the declared truncation radius."""


@dataclass(frozen=True)
class DiscreteSequence:
    points: np.ndarray
    family_tag: str | None = None
    truncation_radius: float = math.inf
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(pts)):
            raise SequenceError("sequence contains non-finite points")
        on_axis = np.flatnonzero(pts.imag == 0)
        if on_axis.size:
            p = pts[on_axis[0]]
            raise SequenceError(
                f"point {p.real!r} lies on the real axis; points must avoid the "
                "reference line (pass line_shift=c to measure heights from Im z = c)"
            )
        if np.unique(pts).size != pts.size:
            _, idx, counts = np.unique(pts, return_index=True, return_counts=True)
            dup = pts[idx[counts > 1][0]]
            raise SequenceError(f"duplicate point {dup!r}")
        radius = float(self.truncation_radius)
        if not radius > 0:
            raise SequenceError("truncation_radius must be positive")
        if pts.size and np.max(np.abs(pts)) > radius:
            far = pts[np.argmax(np.abs(pts))]
            raise SequenceError(
                f"point {far!r} lies outside the truncation radius {radius!r}"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "truncation_radius", radius)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self) -> int:
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    @classmethod
    def from_points(
        cls,
        points: Iterable[complex],
        family_tag: str | None = "custom",
        truncation_radius: float = math.inf,
        line_shift: float = 0.0,
    ) -> "DiscreteSequence":
        """Build a sequence, measuring heights from the line ``Im z = line_shift``."""
        pts = np.asarray(list(points), dtype=complex) - 1j * line_shift
        meta = {"line_shift": line_shift} if line_shift else {}
        return cls(pts, family_tag, truncation_radius, meta)

    @property
    def upper(self) -> "DiscreteSequence":
        return self._restrict(self.points.imag > 0)

    @property
    def lower(self) -> "DiscreteSequence":
        return self._restrict(self.points.imag < 0)

    def _restrict(self, mask) -> "DiscreteSequence":
        return DiscreteSequence(
            self.points[mask], self.family_tag, self.truncation_radius, self.metadata
        )

    def translate(self, a: complex) -> "DiscreteSequence":
        """Shift every point by ``a``; the completeness disc shrinks by ``|a|``."""
        radius = self.truncation_radius - abs(a)
        pts = self.points + a
        if radius <= 0 or (pts.size and np.max(np.abs(pts)) > radius):
            raise TruncationError("translated points leave the completeness disc")
        return DiscreteSequence(pts, self.family_tag, radius)

    def union(self, other: "DiscreteSequence") -> "DiscreteSequence":
        common = np.intersect1d(self.points, other.points)
        if common.size:
            raise SequenceError(f"sequences share the point {common[0]!r}")
        return DiscreteSequence(
            np.concatenate([self.points, other.points]),
            "union",
            min(self.truncation_radius, other.truncation_radius),
        )


def lattice(
    imag_offset: float = 1.0,
    spacing: float = 1.0,
    half_width: int = 100,
    real_offset: float = 0.0,
) -> DiscreteSequence:
    """The truncation ``{k*spacing + real_offset + i*imag_offset : |k| <= half_width}``.

    The truncation radius is the largest radius whose closed disc meets no
    omitted lattice point. With a nonzero ``real_offset`` an end point can
    be as far from the origin as the first omitted point; such points are
    dropped so the declared radius stays honest. ``metadata`` records the
    index range ``k_min..k_max`` actually kept.
    """
    if half_width < 0 or not spacing > 0:
        raise SequenceError("need half_width >= 0 and spacing > 0")
    k = np.arange(-half_width, half_width + 1)
    pts = k * spacing + real_offset + 1j * imag_offset
    first_missing = min(
        abs(complex((half_width + 1) * spacing + real_offset, imag_offset)),
        abs(complex(-(half_width + 1) * spacing + real_offset, imag_offset)),
    )
    keep = np.abs(pts) < first_missing
    if not keep.any():
        raise SequenceError(
            "real_offset moves the window so far that no point lies closer to "
            "the origin than the first omitted point"
        )
    k, pts = k[keep], pts[keep]
    radius = float(np.nextafter(first_missing, 0.0))
    meta = {
        "imag_offset": float(imag_offset),
        "spacing": float(spacing),
        "half_width": int(half_width),
        "real_offset": float(real_offset),
        "k_min": int(k[0]),
        "k_max": int(k[-1]),
    }
    return DiscreteSequence(pts, "lattice", radius, meta)


def counting_function(seq: DiscreteSequence, z: complex, t: float) -> int:
    """Number of points of ``seq`` in the closed disc of radius ``t`` about ``z``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return int(np.count_nonzero(np.abs(seq.points - z) <= t))


def _check_reach(seq: DiscreteSequence, z: complex, r: float) -> None:
    if r > seq.truncation_radius - abs(z):
        raise TruncationError(
            f"disc D({z!r}, {r!r}) leaves the completeness radius "
            f"{seq.truncation_radius!r}"
        )


def integrated_counting(seq: DiscreteSequence, z: complex, r: float) -> float:
    """Closed form of N(z, r) = int_0^r (n(z,t) - n(z,0))/t dt + n(z,0) log r.

    Each point at distance ``0 < d <= r`` contributes ``log(r/d)``; points
    sitting at ``z`` contribute ``log r``.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    _check_reach(seq, z, r)
    d = np.abs(seq.points - z)
    inside = d[(d > 0) & (d <= r)]
    n0 = int(np.count_nonzero(d == 0))
    return math.fsum(np.log(r / inside)) + n0 * math.log(r)


def nearest_distance(seq: DiscreteSequence, z: complex) -> float:
    if len(seq) == 0:
        raise SequenceError("empty sequence has no nearest point")
    return float(np.min(np.abs(seq.points - z)))


@dataclass(frozen=True)
class CountingProfile:
    center: complex
    n_at_zero: int
    samples: list[tuple[float, int]]
    integrated: dict[float, float]


def counting_profile(
    seq: DiscreteSequence, z: complex, radii: Iterable[float]
) -> CountingProfile:
    radii = sorted(float(r) for r in radii)
    samples = [(r, counting_function(seq, z, r)) for r in radii]
    integrated = {r: integrated_counting(seq, z, r) for r in radii if r > 0}
    return CountingProfile(z, counting_function(seq, z, 0.0), samples, integrated)


@dataclass(frozen=True)
class SeparationProfile:
    """Outcome of a weak-separation test.

    ``witnesses`` holds the tightest pair as ``(lam, lam2, slack)`` where
    slack is the distance minus the sum of the two disc radii; it is empty
    for sequences with fewer than two points.
    """

    epsilon: float
    alpha: float
    feasible: bool
    witnesses: list[tuple[complex, complex, float]]

    @property
    def violation(self) -> tuple[complex, complex] | None:
        if self.feasible:
            return None
        lam, lam2, _ = self.witnesses[0]
        return lam, lam2


def separation_radii(seq: DiscreteSequence, epsilon: float, alpha: float) -> np.ndarray:
    return epsilon * np.exp(-alpha * np.abs(seq.points.imag))


def check_weak_separation(
    seq: DiscreteSequence, epsilon: float, alpha: float
) -> SeparationProfile:
    """Test pairwise disjointness of the discs D(lam, epsilon*exp(-alpha*|Im lam|)).

    A pair passes when ``|lam - lam2| >= r(lam) + r(lam2)``.
    """
    if not (epsilon > 0 and alpha > 0):
        raise ValueError("epsilon and alpha must be positive")
    pts = seq.points
    if pts.size < 2:
        return SeparationProfile(epsilon, alpha, True, [])
    radii = separation_radii(seq, epsilon, alpha)
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    # radii never exceed epsilon, so only pairs closer than 2*epsilon can touch
    pairs = tree.query_pairs(2 * epsilon, output_type="ndarray")
    if pairs.size == 0:
        # nothing can touch; report the tightest nearest-neighbour pair instead
        _, nn = tree.query(tree.data, k=2)
        pairs = np.column_stack([np.arange(pts.size), nn[:, 1]])
        pairs = np.unique(np.sort(pairs, axis=1), axis=0)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    i, j = pairs[:, 0], pairs[:, 1]
    slack = np.abs(pts[i] - pts[j]) - (radii[i] + radii[j])
    w = int(np.argmin(slack))
    witness = (complex(pts[i[w]]), complex(pts[j[w]]), float(slack[w]))
    return SeparationProfile(epsilon, alpha, bool(slack[w] >= 0), [witness])


def largest_separation_epsilon(seq: DiscreteSequence, alpha: float) -> float:
    """Supremum of the epsilons for which the weak-separation discs are disjoint."""
    pts = seq.points
    if pts.size < 2:
        return math.inf
    decay = np.exp(-alpha * np.abs(pts.imag))
    xy = np.column_stack([pts.real, pts.imag])
    tree = cKDTree(xy)
    dist, nn = tree.query(xy, k=2)
    bound = float(np.min(dist[:, 1] / (decay + decay[nn[:, 1]])))
    # a pair farther apart than 2*bound cannot beat the nearest-neighbour bound
    pairs = tree.query_pairs(2 * bound * (1 + 1e-12), output_type="ndarray")
    if pairs.size == 0:
        return bound
    i, j = pairs[:, 0], pairs[:, 1]
    ratio = np.abs(pts[i] - pts[j]) / (decay[i] + decay[j])
    return float(min(bound, np.min(ratio)))
