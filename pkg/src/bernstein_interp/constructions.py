"""Explicit function constructions: weights, Blaschke products, sine-type
generating functions, peak functions and the interpolation series.

All evaluators accept scalars or numpy arrays of complex ``z`` and return an
array of the same shape (a Python complex for scalar input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .sequences import DiscreteSequence

# Below this distance from a node, removable singularities are evaluated by series.
TAYLOR_RADIUS = 1e-4
# Step of the centred stencil used for higher derivatives at a node.
STENCIL_STEP = 1e-2
ZERO_TOLERANCE = 1e-12
# |sin(u)/u|**3 * |exp(i*sigma*M*u)| * (1 + |u|**3) <= WEIGHT_BOUND * growth factors
WEIGHT_BOUND = 8.0
PEAK_TOLERANCE = 1e-8

KINDS = ("shifted_sine", "perturbed_sine", "finite_product")


class ConstructionError(RuntimeError):
    """A construction could not satisfy its constraints."""


class GeneratorError(ValueError):
    """A point was used as a zero of a generator that does not vanish there."""


def _scalar_out(z_in, out):
    return complex(out) if np.ndim(z_in) == 0 else out


@dataclass(frozen=True)
class WeightParameters:
    """Constants of the peak-function family and the weight exponent ``M``.

    ``A``, ``B``, ``C`` bound the peak functions as
    ``sup |f_lam(z)| exp(-C|Im z|) <= A exp(B|Im lam|)``; ``M`` must exceed
    ``2B + 4`` so the weighted series converges.
    """

    M: float = 8.0
    A: float = 1.0
    B: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        if min(self.A, self.B, self.C) < 0:
            raise ValueError("A, B, C must be nonnegative")
        if not self.M > 2 * self.B + 4:
            raise ValueError(f"M={self.M} must exceed 2B+4={2 * self.B + 4}")


def weight_sign(lam: complex) -> int:
    """+1 below the real axis, -1 above it."""
    im = complex(lam).imag
    if im == 0:
        raise ValueError(f"weight centre {lam!r} lies on the real axis")
    return 1 if im < 0 else -1


def _sinc_series(u):
    u2 = u * u
    return 1 - u2 / 6 + u2 * u2 / 120 - u2 * u2 * u2 / 5040


def _sinc_direct(u):
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.sin(u) / u


def sinc(u):
    """sin(u)/u for complex u, by its order-6 Taylor polynomial when |u| < 1e-4."""
    u = np.asarray(u, dtype=complex)
    return np.where(np.abs(u) < TAYLOR_RADIUS, _sinc_series(u), _sinc_direct(u))


def weight_eval(lam: complex, params: WeightParameters, z):
    """w_lam(z) = (sin(z-lam)/(z-lam))**3 * exp(i*sigma*M*(z-lam)); w_lam(lam) = 1."""
    sigma = weight_sign(lam)
    u = np.asarray(z, dtype=complex) - lam
    out = sinc(u) ** 3 * np.exp(1j * sigma * params.M * u)
    return _scalar_out(z, out)


def weight_bound(lam: complex, params: WeightParameters, z):
    """Majorant 8 exp((M+3)|Im z|) exp(-(M-3)|Im lam|) / (1 + |z-lam|**3)."""
    z = np.asarray(z, dtype=complex)
    M = params.M
    return (
        WEIGHT_BOUND
        * np.exp((M + 3) * np.abs(z.imag) - (M - 3) * abs(complex(lam).imag))
        / (1 + np.abs(z - lam) ** 3)
    )


def blaschke_eval(upper_points: DiscreteSequence, z):
    """Finite Blaschke product prod (z - lam)/(z - conj(lam)) over the upper points.

    Factors are multiplied in increasing order of |lam|.
    """
    pts = np.asarray(getattr(upper_points, "points", upper_points), dtype=complex)
    if np.any(pts.imag <= 0):
        raise ValueError("Blaschke zeros must lie in the open upper half-plane")
    zz = np.asarray(z, dtype=complex)
    if np.any(zz.imag < 0):
        raise ValueError("Blaschke product is evaluated on the closed upper half-plane")
    out = np.ones_like(zz)
    for lam in pts[np.argsort(np.abs(pts), kind="stable")]:
        out = out * ((zz - lam) / (zz - np.conj(lam)))
    return _scalar_out(z, out)


# --- sine-type generating functions -------------------------------------------


def _parity(n):
    return 1.0 - 2.0 * (np.abs(n) % 2)


def sin_pi(u):
    """sin(pi*u) with the integer part of Re u removed before scaling by pi."""
    u = np.asarray(u, dtype=complex)
    n = np.rint(u.real)
    return _parity(n) * np.sin(np.pi * (u - n))


def cos_pi(u):
    u = np.asarray(u, dtype=complex)
    n = np.rint(u.real)
    return _parity(n) * np.cos(np.pi * (u - n))


def log_abs_sin_pi(u):
    """log|sin(pi*u)|, asymptotically exact for |Im u| > 20 where sin overflows."""
    u = np.asarray(u, dtype=complex)
    y = u.imag
    big = np.abs(y) > 20
    out = np.empty(u.shape)
    with np.errstate(divide="ignore"):
        out[~big] = np.log(np.abs(sin_pi(u[~big])))
    if big.any():
        ub, yb = u[big], y[big]
        q = np.exp(2j * np.pi * ub * np.sign(yb))
        out[big] = np.pi * np.abs(yb) - math.log(2) + np.log(np.abs(1 - q))
    return out


@dataclass(frozen=True)
class LowerBoundCertificate:
    """Lower bounds met by a perturbed sine on the sequence it was built for.

    ``epsilon`` satisfies ``|F(lam)| >= epsilon`` when ``|lam - c| >= delta``
    and ``|F(lam)| >= epsilon |lam - c|`` otherwise (``c`` the build centre).
    ``min_zero_distance`` excludes the zero forced at the centre.
    """

    delta: float
    epsilon: float
    min_abs_on_target: float
    min_zero_distance: float


@dataclass(frozen=True)
class GeneratingFunction:
    """A structured entire function with known zeros.

    * ``shifted_sine``: ``sin(pi (z - shift)/spacing)``.
    * ``perturbed_sine``: ``sin(pi u) prod_{k in I} (1 - u/p_k)/(1 - u/k)`` with
      ``u = (z - shift)/spacing`` and ``p_k = k + i eps_k``, ``eps_{-k} = eps_k``.
    * ``finite_product``: ``prod (z - zeta)``. Diagnostic only: polynomials are
      not of bounded type on the real line.
    """

    kind: str
    shift: complex = 0j
    spacing: float = 1.0
    perturbed_indices: tuple[tuple[int, float], ...] = ()
    finite_zeros: tuple[complex, ...] = ()
    delta: float | None = None
    certificate: LowerBoundCertificate | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        pairs = tuple(sorted((int(k), float(e)) for k, e in self.perturbed_indices))
        table = dict(pairs)
        if len(table) != len(pairs):
            raise ValueError("repeated perturbed index")
        for k, e in pairs:
            if k == 0:
                raise ValueError("index 0 cannot be perturbed")
            if not e > 0:
                raise ValueError(f"eps_{k} must be positive")
            if table.get(-k) != e:
                raise ValueError(f"eps_{-k} must equal eps_{k}")
            if self.delta is not None and e > 5 * self.delta * (1 + 1e-12):
                raise ValueError(f"eps_{k}={e} exceeds 5*delta")
        if pairs and self.kind != "perturbed_sine":
            raise ValueError("perturbed indices only apply to perturbed_sine")
        object.__setattr__(self, "perturbed_indices", pairs)
        zeros = tuple(complex(w) for w in self.finite_zeros)
        if self.kind == "finite_product":
            if self.shift != 0 or self.spacing != 1.0:
                raise ValueError("finite_product takes no shift/spacing")
            zeros = tuple(sorted(zeros, key=abs))
        object.__setattr__(self, "finite_zeros", zeros)
        object.__setattr__(self, "shift", complex(self.shift))

    # constructors
    @classmethod
    def shifted_sine(cls, shift: complex = 0j, spacing: float = 1.0):
        return cls("shifted_sine", shift=shift, spacing=spacing)

    @classmethod
    def finite_product(cls, zeros: Sequence[complex]):
        return cls("finite_product", finite_zeros=tuple(zeros))

    @property
    def in_bernstein_algebra(self) -> bool:
        return self.kind != "finite_product"

    @property
    def _positive(self) -> list[tuple[int, float]]:
        return [(k, e) for k, e in self.perturbed_indices if k > 0]

    def _u(self, z):
        return (np.asarray(z, dtype=complex) - self.shift) / self.spacing

    def _factor(self, u, k, eps):
        scale = 1.0 / (1.0 + eps * eps / (k * k))
        with np.errstate(invalid="ignore", divide="ignore"):
            return (1 - eps * (eps + 2j * u) / (u * u - k * k)) * scale

    def _perturbed_core(self, u, log: bool):
        shape = np.shape(u)
        u = np.atleast_1d(u)
        n = np.rint(u.real)
        ks = np.array([k for k, _ in self._positive])
        joint = (np.abs(u - n) < TAYLOR_RADIUS) & np.isin(np.abs(n), ks)
        # at u = +-k the sine zero cancels the pole of the paired factor
        near = _parity(n[joint]) * np.pi * sinc(np.pi * (u[joint] - n[joint]))
        if log:
            acc = log_abs_sin_pi(u)
            acc[joint] = np.log(np.abs(near))
        else:
            acc = sin_pi(u)
            acc[joint] = near
        for k, eps in self._positive:
            f = self._factor(u, k, eps)
            jk = joint & (np.abs(n) == k)
            if jk.any():
                uj = u[jk]
                f[jk] = ((uj - 1j * eps) ** 2 - k * k) / (uj + n[jk]) / (
                    1 + eps * eps / (k * k)
                )
            if log:
                with np.errstate(divide="ignore"):
                    acc = acc + np.log(np.abs(f))
            else:
                acc = acc * f
        return acc.reshape(shape)

    def __call__(self, z):
        return generating_eval(self, z)

    def log_abs(self, z):
        return generating_log_abs(self, z)

    def derivative_at_zero(self, z0: complex) -> complex:
        return generating_derivative_at_zero(self, z0)

    def zeros(self, xmin: float, xmax: float) -> np.ndarray:
        """Registered zeros with real part in [xmin, xmax]."""
        if self.kind == "finite_product":
            w = np.array(self.finite_zeros, dtype=complex)
            return w[(w.real >= xmin) & (w.real <= xmax)]
        s, h = self.spacing, self.shift
        lo = math.floor((xmin - h.real) / s) - 1
        hi = math.ceil((xmax - h.real) / s) + 1
        n = np.arange(lo, hi + 1)
        perturbed = {k for k, _ in self.perturbed_indices}
        u = [complex(k) for k in n if int(k) not in perturbed]
        for k, e in self.perturbed_indices:
            u.append(complex(k, e))
        w = np.array(u, dtype=complex) * s + h
        w = w[(w.real >= xmin) & (w.real <= xmax)]
        return np.sort_complex(w)


def generating_eval(F: GeneratingFunction, z):
    """Evaluate a generating function, using the paired form of the perturbation."""
    if F.kind == "finite_product":
        zz = np.asarray(z, dtype=complex)
        out = np.ones_like(zz)
        for w in F.finite_zeros:
            out = out * (zz - w)
        return _scalar_out(z, out)
    u = F._u(z)
    if F.kind == "shifted_sine":
        return _scalar_out(z, sin_pi(u))
    return _scalar_out(z, F._perturbed_core(u, log=False))


def generating_log_abs(F: GeneratingFunction, z):
    """log|F(z)| accumulated as a sum of logarithms (no overflow at large |Im z|)."""
    if F.kind == "finite_product":
        zz = np.asarray(z, dtype=complex)
        out = np.zeros(zz.shape)
        with np.errstate(divide="ignore"):
            for w in F.finite_zeros:
                out = out + np.log(np.abs(zz - w))
        return float(out) if np.ndim(z) == 0 else out
    u = F._u(z)
    if F.kind == "shifted_sine":
        out = log_abs_sin_pi(u)
    else:
        out = F._perturbed_core(u, log=True)
    return float(out) if np.ndim(z) == 0 else out


def generating_derivative_at_zero(F: GeneratingFunction, z0: complex) -> complex:
    """F'(z0) at a registered zero, from the product with the vanishing factor dropped."""
    z0 = complex(z0)
    if F.kind == "finite_product":
        w = np.array(F.finite_zeros, dtype=complex)
        hit = np.abs(w - z0) <= ZERO_TOLERANCE
        if hit.sum() != 1:
            raise GeneratorError(f"{z0!r} is not a simple registered zero")
        out = 1 + 0j
        for v in w[~hit]:
            out *= z0 - v
        return out
    u0 = complex(F._u(z0))
    n = round(u0.real)
    if F.kind == "shifted_sine":
        if abs(u0 - n) > ZERO_TOLERANCE:
            raise GeneratorError(f"{z0!r} is not a zero of the shifted sine")
        return (-1) ** (n % 2) * math.pi / F.spacing + 0j
    perturbed = dict(F.perturbed_indices)
    if abs(u0 - n) <= ZERO_TOLERANCE and n not in perturbed:
        out = (-1) ** (n % 2) * math.pi + 0j
        for k, eps in F._positive:
            out *= complex(F._factor(np.complex128(n), k, eps))
        return out / F.spacing
    for k, eps in F._positive:
        for p, other in ((complex(k, eps), complex(-k, eps)), (complex(-k, eps), complex(k, eps))):
            if abs(u0 - p) <= ZERO_TOLERANCE:
                scale = 1.0 / (1.0 + eps * eps / (k * k))
                out = complex(sin_pi(p)) * (p - other) / (p * p - k * k) * scale
                for k2, e2 in F._positive:
                    if k2 != k:
                        out *= complex(F._factor(np.complex128(p), k2, e2))
                return out / F.spacing
    raise GeneratorError(f"{z0!r} is not a registered zero of the perturbed sine")


def _min_gap(points: np.ndarray) -> float:
    if points.size < 2:
        return math.inf
    xy = np.column_stack([points.real, points.imag])
    d, _ = cKDTree(xy).query(xy, k=2)
    return float(np.min(d[:, 1]))


def build_perturbed_sine(
    seq: DiscreteSequence, delta: float, center: complex = 0j
) -> GeneratingFunction:
    """Perturb the zeros of sin(pi(z - center)) away from ``seq``.

    Every index k > 0 with a sequence point within ``delta`` of ``center + k``
    or ``center - k`` is replaced by the pair ``p_{+-k} = +-k + i eps_k``,
    where ``eps_k`` is the first of delta/2, delta, ..., 5 delta that keeps
    both ``p_k`` and ``p_{-k}`` at distance >= delta from every point.

    Raises ``ValueError`` when ``delta`` exceeds a tenth of the smallest gap
    among points with |Im| < 1, and :class:`ConstructionError` when the scan
    finds no admissible ``eps_k``.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    pts = np.asarray(seq.points, dtype=complex) - center
    gap = _min_gap(pts[np.abs(pts.imag) < 1])
    if delta > gap / 10:
        raise ValueError(f"delta={delta} exceeds one tenth of the minimal gap {gap}")

    indices: set[int] = set()
    for lam in pts:
        for n in range(math.floor(lam.real - delta), math.ceil(lam.real + delta) + 1):
            if n != 0 and abs(lam - n) < delta:
                indices.add(abs(n))

    chosen = []
    for k in sorted(indices):
        for j in range(1, 11):
            eps = j * delta / 2
            d = min(
                np.min(np.abs(complex(k, eps) - pts)),
                np.min(np.abs(complex(-k, eps) - pts)),
            )
            if d >= delta:
                chosen += [(k, eps), (-k, eps)]
                break
        else:
            near = pts[(np.abs(pts - k) < 6 * delta) | (np.abs(pts + k) < 6 * delta)]
            raise ConstructionError(
                f"no eps in (0, 5*delta] clears index {k}; nearby points "
                f"{[complex(p + center) for p in near]}"
            )

    F = GeneratingFunction(
        "perturbed_sine", shift=center, perturbed_indices=tuple(chosen), delta=delta
    )
    cert = _certify(F, pts, delta)
    return GeneratingFunction(
        "perturbed_sine",
        shift=center,
        perturbed_indices=F.perturbed_indices,
        delta=delta,
        certificate=cert,
    )


def _certify(F: GeneratingFunction, rel: np.ndarray, delta: float) -> LowerBoundCertificate:
    if rel.size == 0:
        return LowerBoundCertificate(delta, math.inf, math.inf, math.inf)
    vals = np.abs(F(rel + F.shift))
    r = np.abs(rel)
    far = r >= delta
    parts = []
    if far.any():
        parts.append(np.min(vals[far]))
    if (~far).any():
        parts.append(np.min(vals[~far] / r[~far]))
    eps = float(min(parts))

    zeros = F.zeros(float(rel.real.min()) - 2, float(rel.real.max()) + 2) - F.shift
    zeros = zeros[zeros != 0]
    zdist = math.inf
    if zeros.size:
        zdist = float(np.min(np.abs(zeros[:, None] - rel[None, :])))
    if zdist < delta * (1 - 1e-12):
        raise ConstructionError(f"a zero lies {zdist} < delta from the sequence")
    if not eps > 0:
        raise ConstructionError("lower bound vanished on the sequence")
    return LowerBoundCertificate(delta, eps, float(vals.min()), zdist)


# --- peak functions and the interpolation series ------------------------------


def _node_taylor(F: Callable, node: complex) -> tuple[complex, complex]:
    """F''(node), F'''(node) from F(node +- s), F(node +- 2s), using F(node) = 0."""
    s = STENCIL_STEP
    f1, fm1 = complex(F(node + s)), complex(F(node - s))
    f2, fm2 = complex(F(node + 2 * s)), complex(F(node - 2 * s))
    d2 = (-f2 + 16 * f1 + 16 * fm1 - fm2) / (12 * s * s)
    d3 = (f2 - 2 * f1 + 2 * fm1 - fm2) / (2 * s**3)
    return d2, d3


def _divided(F, Fz, z, node, fprime, taylor=None):
    """F(z)/(z - node), continued through the node by its Taylor polynomial."""
    h = z - node
    near = np.abs(h) < TAYLOR_RADIUS
    with np.errstate(invalid="ignore", divide="ignore"):
        out = Fz / h
    if near.any():
        d2, d3 = taylor if taylor is not None else _node_taylor(F, node)
        hn = h[near]
        out[near] = fprime + hn * d2 / 2 + hn * hn * d3 / 6
    return out


def peak_function_eval(
    F: GeneratingFunction, node: complex, params: WeightParameters, z, fprime=None
):
    """w_node(z) F(z) / (F'(node)(z - node)): 1 at ``node``, 0 at the other zeros of F."""
    fp = F.derivative_at_zero(node) if fprime is None else complex(fprime)
    if fp == 0:
        raise GeneratorError(f"F'({node!r}) vanishes")
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    ratio = _divided(F, np.asarray(F(zz)), zz, node, fp)
    out = weight_eval(node, params, zz) * ratio / fp
    return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))


@dataclass(frozen=True)
class Interpolant:
    """f(z) = sum v_lam w_lam(z) F(z) / (F'(lam)(z - lam)) over the nodes.

    ``value_exponent`` is the C of the admissible value class
    ``|v_lam| <= K exp(C |Im lam|)``; ``K`` is computed on construction.
    """

    generator: GeneratingFunction
    nodes: DiscreteSequence
    values: np.ndarray
    params: WeightParameters = WeightParameters()
    value_exponent: float = 0.0
    K: float = field(init=False)
    derivatives: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).reshape(-1)
        if v.size != len(self.nodes):
            raise ValueError(f"{v.size} values for {len(self.nodes)} nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        derivs = np.empty(v.size, dtype=complex)
        for i, lam in enumerate(self.nodes.points):
            try:
                derivs[i] = self.generator.derivative_at_zero(lam)
            except GeneratorError as exc:
                raise GeneratorError(f"node {complex(lam)!r}: {exc}") from None
        if np.any(derivs == 0):
            raise GeneratorError("generator has a multiple zero at a node")
        v.setflags(write=False)
        derivs.setflags(write=False)
        K = float(np.max(np.abs(v) * np.exp(-self.value_exponent * np.abs(self.nodes.points.imag)), initial=0.0))
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "derivatives", derivs)
        object.__setattr__(self, "K", K)

    def terms(self, z) -> np.ndarray:
        """Matrix of v_lam * peak_lam(z), one row per node, in node order."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex)).reshape(-1)
        Fz = np.asarray(self.generator(zz))
        out = np.zeros((len(self.nodes), zz.size), dtype=complex)
        for i, (lam, fp, v) in enumerate(zip(self.nodes.points, self.derivatives, self.values)):
            if v == 0:
                continue
            ratio = _divided(self.generator, Fz, zz, lam, fp)
            out[i] = v * weight_eval(lam, self.params, zz) * ratio / fp
        return out

    def __call__(self, z):
        out = self.terms(z).sum(axis=0)
        return complex(out[0]) if np.ndim(z) == 0 else out.reshape(np.shape(z))

    def term_bounds(self, z: complex) -> np.ndarray:
        """Per-node majorant of |v_lam peak_lam(z)|, from the weight bound."""
        lam = self.nodes.points
        Fz = abs(complex(self.generator(z)))
        dist = np.abs(z - lam)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0, Fz / (np.abs(self.derivatives) * dist), np.inf)
        w = np.array([weight_bound(l, self.params, z) for l in lam])
        return np.abs(self.values) * w * ratio


def interpolant_eval(
    itp: Interpolant, z: complex, r_cut: float | None = None, rel_tail: float = 1e-10
) -> tuple[complex, float, float]:
    """Evaluate the series at ``z`` over nodes with |Re(z - lam)| <= r_cut.

    Returns ``(value, tail_bound, r_cut)``. ``tail_bound`` majorizes the
    omitted terms. With ``r_cut=None`` the cut is the smallest one whose tail
    bound stays below ``rel_tail * max|v|``.
    """
    z = complex(z)
    lam = itp.nodes.points
    if lam.size == 0:
        return 0j, 0.0, 0.0
    horiz = np.abs(z.real - lam.real)
    bounds = itp.term_bounds(z)
    if r_cut is None:
        vmax = float(np.max(np.abs(itp.values)))
        order = np.argsort(horiz, kind="stable")
        b_sorted = bounds[order]
        # tail[j] = total bound of the nodes after position j
        tail = np.concatenate([np.cumsum(b_sorted[::-1])[::-1][1:], [0.0]])
        d_sorted = horiz[order]
        ok = tail < rel_tail * vmax if vmax > 0 else np.ones(lam.size, bool)
        # never cut between nodes at the same horizontal distance
        ok &= np.append(d_sorted[1:] > d_sorted[:-1], True)
        j = int(np.argmax(ok))
        r_cut = float(d_sorted[j])
    keep = horiz <= r_cut
    terms = itp.terms(z)[:, 0]
    value = complex(np.sum(terms[keep]))
    tail_bound = float(np.sum(bounds[~keep]))
    return value, tail_bound, float(r_cut)


def assemble_vanishing_function(
    peaks: Sequence[tuple[complex, Callable]],
    params: WeightParameters,
    z,
    verify: bool = True,
):
    """sum_lam w_lam(z) f_lam(z)**2 sin(z - lam) for a peak family ``(lam, f_lam)``.

    The result vanishes on the nodes and has derivative 1 at each of them.
    With ``verify`` the family is checked for f_lam(lam2) = delta(lam, lam2)
    to within 1e-8 first.
    """
    nodes = [complex(lam) for lam, _ in peaks]
    if verify:
        for i, (lam, f) in enumerate(peaks):
            vals = np.atleast_1d(np.asarray(f(np.array(nodes)), dtype=complex))
            target = np.zeros(len(nodes))
            target[i] = 1.0
            err = np.max(np.abs(vals - target))
            if err > PEAK_TOLERANCE:
                raise ValueError(f"peak function at {lam!r} misses delta by {err:.3g}")
    zz = np.asarray(z, dtype=complex)
    out = np.zeros(zz.shape, dtype=complex)
    for lam, f in peaks:
        fz = np.asarray(f(zz), dtype=complex)
        out = out + weight_eval(lam, params, zz) * fz * fz * np.sin(zz - lam)
    return _scalar_out(z, out)
