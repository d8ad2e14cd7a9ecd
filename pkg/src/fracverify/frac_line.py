"""Fractional calculus on the real line for compactly supported profiles.

Pointwise operator:

    (-Δ)^s u(x) = C_{1,s} PV ∫ (u(x) - u(y)) / |x - y|^{1+2s} dy.

Two-point calculus: d_s f(x, y) = (f(x) - f(y)) / |x - y|^s and

    div_s F[φ] = ∬ F(x, y) d_s φ(x, y) dx dy / |x - y|,

so that (-Δ)^s u = (C_{1,s}/2) div_s d_s u.

Quadrature is panel-based Gauss rules. Panels that touch a weak singularity
(the evaluation point, or a square-root edge) use Gauss-Jacobi rules with the
matching power weight, and panels that come close to a singular point are
bisected until their width does not exceed their distance from it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Protocol

import numpy as np
from numpy.typing import ArrayLike
from scipy.interpolate import CubicSpline
from scipy.special import roots_jacobi, roots_legendre

from .kernels import navot_correction, riesz_constant

GAUSS_NODES = 16
WINDOW_CELLS = 4
MIN_BOUNDARY_CELLS = 2


class LineProfile(Protocol):
    """Anything the line quadratures can integrate: zero outside [a, b]."""

    a: float
    b: float

    @property
    def m(self) -> int: ...

    @property
    def h(self) -> float: ...

    @property
    def knots(self) -> np.ndarray: ...

    @property
    def edge_exponents(self) -> tuple[float, float]: ...

    def evaluate(self, y: ArrayLike) -> np.ndarray: ...


@dataclass(frozen=True)
class SampledLineFunction:
    """Samples u(a + i h), i = 0..n, of a function vanishing outside [a, b].

    Between nodes the function is u = ω q with ω = (y-a)^{p_a} (b-y)^{p_b} and
    q a cubic spline. ``edge="auto"`` picks p = 1/2 on a side whose samples
    grow like √dist and p = 0 otherwise; "sqrt" and "plain" force the choice.
    """

    a: float
    b: float
    samples: np.ndarray
    edge: str = "auto"
    _spline: CubicSpline = field(init=False, repr=False, compare=False)
    _exps: tuple[float, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("need a < b")
        vals = np.array(self.samples, dtype=float, copy=True)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape[0] < 5:
            raise ValueError("need at least 4 intervals")
        if not (np.all(np.isfinite(vals[0])) and np.all(np.isfinite(vals[-1]))):
            raise ValueError("end samples must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "samples", vals)
        exps = self._edge_exponents(vals)
        x = self.x
        lo = 1 if exps[0] > 0 else 0
        hi = len(x) - 1 if exps[1] > 0 else len(x)
        q = vals[lo:hi] / self._omega(x[lo:hi], exps)[:, None]
        object.__setattr__(self, "_spline", CubicSpline(x[lo:hi], q, axis=0, extrapolate=True))
        object.__setattr__(self, "_exps", exps)

    def _edge_exponents(self, vals: np.ndarray) -> tuple[float, float]:
        if self.edge == "sqrt":
            return (0.5, 0.5)
        if self.edge == "plain":
            return (0.0, 0.0)
        if self.edge != "auto":
            raise ValueError(f"unknown edge mode {self.edge!r}")
        norms = np.linalg.norm(vals, axis=1)
        scale = max(norms.max(), np.finfo(float).tiny)

        def side(n0: float, n1: float, n2: float) -> float:
            if n0 > 1e-14 * scale or n1 == 0.0 or n2 == 0.0:
                return 0.0
            return 0.5 if np.log2(n2 / n1) < 0.75 else 0.0

        return side(norms[0], norms[1], norms[2]), side(norms[-1], norms[-2], norms[-3])

    def _omega(self, y: np.ndarray, exps: tuple[float, float] | None = None) -> np.ndarray:
        pa, pb = self._exps if exps is None else exps
        return np.clip(y - self.a, 0.0, None) ** pa * np.clip(self.b - y, 0.0, None) ** pb

    @property
    def n(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def m(self) -> int:
        return self.samples.shape[1]

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.n + 1)

    @property
    def knots(self) -> np.ndarray:
        return self.x

    @property
    def edge_exponents(self) -> tuple[float, float]:
        return self._exps

    def evaluate(self, y: ArrayLike) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        inside = (y >= self.a) & (y <= self.b)
        out = np.zeros((y.size, self.m))
        yi = y[inside]
        out[inside] = self._omega(yi)[:, None] * self._spline(yi)
        return out

    def derivative(self, y: ArrayLike) -> np.ndarray:
        """u'(y) for a < y < b."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        pa, pb = self._exps
        om = self._omega(y)
        dom = om * (pa / (y - self.a) - pb / (self.b - y)) if (pa or pb) else np.zeros_like(y)
        return dom[:, None] * self._spline(y) + om[:, None] * self._spline(y, 1)

    def padded(self, A: float, B: float) -> "SampledLineFunction":
        """Same function on a larger grid [A, B] ⊇ [a, b] with the same step."""
        h = self.h
        left = int(round((self.a - A) / h))
        right = int(round((B - self.b) / h))
        if left < 0 or right < 0:
            raise ValueError("padding interval must contain [a, b]")
        vals = np.pad(self.samples, ((left, right), (0, 0)))
        return SampledLineFunction(self.a - left * h, self.b + right * h, vals, edge=self.edge)

    def to_json(self) -> str:
        return json.dumps(
            {"a": self.a, "b": self.b, "h": self.h, "m": self.m, "samples": self.samples.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "SampledLineFunction":
        d = json.loads(text)
        samples = np.array(d["samples"], dtype=float).reshape(-1, d["m"])
        f = cls(d["a"], d["b"], samples)
        if not np.isclose(f.h, d["h"], rtol=1e-12, atol=0.0):
            raise ValueError("declared h does not match (b - a) / intervals")
        return f

    def to_csv(self) -> str:
        header = ",".join(["x"] + [f"u_{j + 1}" for j in range(self.m)])
        rows = [",".join(f"{v:.17g}" for v in (xi, *row)) for xi, row in zip(self.x, self.samples)]
        return "\n".join([header, *rows]) + "\n"

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int, edge: str = "auto") -> "SampledLineFunction":
        x = a + (b - a) * np.arange(n + 1) / n
        return cls(a, b, np.asarray(f(x), dtype=float), edge=edge)


@dataclass(frozen=True)
class TestFunction:
    """Smooth bump A exp(1 - 1/(1 - r²)), r = (x - c)/ρ, supported in [c-ρ, c+ρ]."""

    __test__ = False  # not a pytest class

    center: float
    radius: float
    amplitude: float = 1.0

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        r = (np.asarray(x, dtype=float) - self.center) / self.radius
        out = np.zeros_like(r)
        inside = np.abs(r) < 1.0
        out[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
        return out

    def derivative(self, x: ArrayLike) -> np.ndarray:
        r = (np.asarray(x, dtype=float) - self.center) / self.radius
        out = np.zeros_like(r)
        inside = np.abs(r) < 1.0
        ri = r[inside]
        out[inside] = self.evaluate(np.asarray(x)[inside]) * (-2.0 * ri / (1.0 - ri**2) ** 2) / self.radius
        return out

    def sampled(self, a: float, b: float, n: int) -> SampledLineFunction:
        return SampledLineFunction.from_callable(self.evaluate, a, b, n, edge="plain")


# ---------------------------------------------------------------- quadrature


@lru_cache(maxsize=64)
def _rule(alpha: float, beta: float, n: int = GAUSS_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on [-1, 1] and weights for ∫ g(ξ) (1-ξ)^α (1+ξ)^β dξ."""
    if alpha == 0.0 and beta == 0.0:
        return roots_legendre(n)
    return roots_jacobi(n, alpha, beta)


def _refine(breaks: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Bisect panels whose distance to any point is smaller than their width."""
    breaks = np.unique(breaks)
    if points.size == 0:
        return breaks
    for _ in range(80):
        lo, hi = breaks[:-1], breaks[1:]
        d = np.min(np.maximum(np.maximum(lo[:, None] - points[None], points[None] - hi[:, None]), 0.0), axis=1)
        bad = (d > 0.0) & (d < hi - lo)
        if not bad.any():
            return breaks
        breaks = np.unique(np.concatenate([breaks, 0.5 * (lo[bad] + hi[bad])]))
    return breaks


def _merge_close(breaks: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Sorted unique breaks with near-coincident points merged (ends kept)."""
    breaks = np.unique(breaks)
    tol = rel * (breaks[-1] - breaks[0])
    keep = np.ones(breaks.size, dtype=bool)
    last = breaks[0]
    for i in range(1, breaks.size - 1):
        if breaks[i] - last <= tol or breaks[-1] - breaks[i] <= tol:
            keep[i] = False
        else:
            last = breaks[i]
    return breaks[keep]


def panel_rule(breaks: np.ndarray, anchors: dict[float, float] | None = None, near: ArrayLike = ()) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss rule over consecutive ``breaks``.

    ``anchors`` maps a break point to an exponent p: panels ending there use a
    Gauss-Jacobi rule exact for |y - point|^p times a polynomial. The returned
    weights act on the raw integrand. ``near`` lists points outside the range
    that the integrand is singular at; panels close to them are refined.
    """
    anchors = anchors or {}
    breaks = _merge_close(np.asarray(breaks, dtype=float))
    breaks = _refine(breaks, np.atleast_1d(np.asarray(near, dtype=float)))
    lo, hi = breaks[:-1], breaks[1:]
    eL = np.array([anchors.get(float(v), 0.0) for v in lo]) if anchors else np.zeros(lo.size)
    eR = np.array([anchors.get(float(v), 0.0) for v in hi]) if anchors else np.zeros(hi.size)
    nodes, weights = [], []
    for (el, er) in {(float(p), float(q)) for p, q in zip(eL, eR)}:
        sel = (eL == el) & (eR == er)
        xi, wi = _rule(er, el)
        half = 0.5 * (hi[sel] - lo[sel])
        y = lo[sel][:, None] + half[:, None] * (1.0 + xi)[None, :]
        w = half[:, None] * (wi / ((1.0 + xi) ** el * (1.0 - xi) ** er))[None, :]
        nodes.append(y.ravel())
        weights.append(w.ravel())
    y = np.concatenate(nodes)
    order = np.argsort(y, kind="stable")
    return y[order], np.concatenate(weights)[order]


def _knots_between(u: LineProfile, lo: float, hi: float) -> np.ndarray:
    k = u.knots
    return np.concatenate([[lo], k[(k > lo) & (k < hi)], [hi]])


def _exterior_tail(x: float, a: float, b: float, p: float) -> float:
    """∫_{ℝ∖[a,b]} |x - y|^{-1-p} dy for a < x < b."""
    return ((x - a) ** (-p) + (b - x) ** (-p)) / p


def fraclap_line_pv(u: LineProfile, s: float, x: float, window: float | None = None) -> np.ndarray:
    """(-Δ)^s u(x) by principal-value quadrature; returns an m-vector.

    For interior x the integral splits into a symmetric window |y - x| < w,
    whose even integrand (2u(x) - u(x+t) - u(x-t)) t^{-1-2s} is integrated with
    a t^{1-2s} Gauss-Jacobi rule, the rest of [a, b], and the exterior of
    [a, b], where u vanishes and the integral is closed form.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    a, b, h = u.a, u.b, u.h
    pa, pb = u.edge_exponents
    C = riesz_constant(s)
    if a < x < b:
        D = min(x - a, b - x)
        if D <= MIN_BOUNDARY_CELLS * h and s >= 0.5:
            raise ValueError(f"x = {x} lies within {MIN_BOUNDARY_CELLS}h of the boundary; singularity unresolved")
        w = min(WINDOW_CELLS * h, 0.5 * D) if window is None else window
        ux = u.evaluate([x])[0]
        # symmetric window
        offs = np.abs(u.knots - x)
        tb = np.concatenate([[0.0], np.sort(offs[(offs > 1e-6 * h) & (offs < w)]), [w]])
        t, wt = panel_rule(tb, {0.0: 1.0 - 2.0 * s})
        even = 2.0 * ux[None, :] - u.evaluate(x + t) - u.evaluate(x - t)
        near_part = wt @ (even * t[:, None] ** (-1.0 - 2.0 * s))
        # rest of [a, b]
        anchors = {a: pa, b: pb}
        far = np.zeros(u.m)
        for lo, hi in ((a, x - w), (x + w, b)):
            if hi > lo:
                y, wy = panel_rule(_knots_between(u, lo, hi), anchors, near=[x])
                far += wy @ (u.evaluate(y) * np.abs(x - y)[:, None] ** (-1.0 - 2.0 * s))
        outside = ux * 2.0 * w ** (-2.0 * s) / (2.0 * s)
        return C * (near_part + outside - far)
    if x == a or x == b:
        if s >= 0.5:
            raise ValueError("operator is singular at the boundary for s >= 1/2")
    y, wy = panel_rule(_knots_between(u, a, b), {a: pa, b: pb}, near=[x])
    keep = y != x
    return -C * (wy[keep] @ (u.evaluate(y[keep]) * np.abs(x - y[keep])[:, None] ** (-1.0 - 2.0 * s)))


def leibniz_defect_integral(u: LineProfile, v: LineProfile, s: float, x: float) -> np.ndarray:
    """∫ (u(x) - u(y)) (v(x) - v(y)) / |x - y|^{1+2s} dy, componentwise.

    The integrand is absolutely integrable, so panels meet at y = x with a
    |y - x|^{1-2s} Gauss-Jacobi weight on both sides.
    """
    if (u.a, u.b) != (v.a, v.b):
        raise ValueError("profiles must share the support interval")
    a, b = u.a, u.b
    ux, vx = u.evaluate([x])[0], v.evaluate([x])[0]
    knots = np.union1d(u.knots, v.knots)
    br = np.union1d(knots[(knots > a) & (knots < b)], [a, b, x]) if a < x < b else np.union1d(knots, [a, b])
    br = br[(br >= a) & (br <= b)]
    y, wy = panel_rule(br, {float(x): 1.0 - 2.0 * s}, near=[x])
    keep = y != x
    y, wy = y[keep], wy[keep]
    g = (ux - u.evaluate(y)) * (vx - v.evaluate(y)) * np.abs(x - y)[:, None] ** (-1.0 - 2.0 * s)
    total = wy @ g
    if a < x < b:
        total = total + ux * vx * _exterior_tail(x, a, b, 2.0 * s)
    return total


# ------------------------------------------------------- two-point fields


@dataclass(frozen=True)
class OffDiagonalField:
    """Two-point field F(x_i, x_j) on a uniform grid; ``values`` has shape (n, n, m).

    When ``source`` is set the field is d_s of that profile, which fixes F
    outside the grid as u(x) / |x - y|^s; quadratures then add the exterior
    contribution in closed form.
    """

    x: np.ndarray
    values: np.ndarray
    s: float
    source: SampledLineFunction | None = field(default=None, repr=False)

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    def antisymmetrized(self) -> "OffDiagonalField":
        return OffDiagonalField(self.x, 0.5 * (self.values - self.values.transpose(1, 0, 2)), self.s, self.source)

    def scaled(self, c: float) -> "OffDiagonalField":
        src = self.source
        if src is not None:
            src = SampledLineFunction(src.a, src.b, c * src.samples, edge=src.edge)
        return OffDiagonalField(self.x, c * self.values, self.s, src)

    def divided_by_distance(self, t: float) -> "OffDiagonalField":
        """F / |x - y|^t, the field whose L²(∧) norm is [F]_{Ḣ^t(∧)}."""
        dist = _distance(self.x)
        with np.errstate(divide="ignore"):
            fac = np.where(dist > 0, dist ** (-t), 0.0)
        return OffDiagonalField(self.x, self.values * fac[..., None], self.s + t, self.source)


def _distance(x: np.ndarray) -> np.ndarray:
    return np.abs(x[:, None] - x[None, :])


def frac_gradient(u: SampledLineFunction, s: float) -> OffDiagonalField:
    """d_s u(x_i, x_j) = (u_i - u_j) / |x_i - x_j|^s on the sample grid, diagonal 0."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    x = u.x
    dist = _distance(x)
    with np.errstate(divide="ignore"):
        fac = np.where(dist > 0, dist ** (-s), 0.0)
    diff = u.samples[:, None, :] - u.samples[None, :, :]
    return OffDiagonalField(x, diff * fac[..., None], s, u)


def _offset_sums(I: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """G(k h) = h Σ_i I[i, i+k] for k = 1..n-1 (I symmetric, so G is even)."""
    n = I.shape[0]
    k = np.arange(1, n)
    G = np.array([h * np.trace(I, offset=int(j)) for j in k])
    return k * h, G


def _gregory(n: int) -> np.ndarray:
    """Relative weights of the fourth-order Gregory rule on n nodes."""
    c = np.ones(n)
    ends = np.array([3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0])
    c[:3] = ends
    c[-3:] = ends[::-1]
    return c


def _diagonal_corrected_sum(I: np.ndarray, h: float, beta: float) -> float:
    """∬ I(x, y) dx dy over the grid square for I ~ |x - y|^β near the diagonal.

    Tensor Gregory weights handle the square's edges, where the integrand need
    not vanish; the node-excluding diagonal defect is removed as on the circle.
    """
    if not np.all(np.isfinite(I)):
        raise FloatingPointError("non-finite integrand in off-diagonal quadrature")
    c = _gregory(I.shape[0])
    I = I * c[:, None] * c[None, :]
    t, G = _offset_sums(I, h)
    trap = 2.0 * h * G.sum()
    J = min(4, G.size)
    S = G[:J] / t[:J] ** beta
    return float(trap - navot_correction(S, beta, h))


def _check_support(x: np.ndarray, phi: TestFunction) -> None:
    lo, hi = phi.support
    if lo < x[0] or hi > x[-1]:
        raise ValueError("test function support must lie inside the field grid")


def frac_divergence_pair(F: OffDiagonalField, s: float, phi: TestFunction) -> float | np.ndarray:
    """div_s F[φ] = ∬ F d_s φ dx dy / |x - y| for the antisymmetric part of F."""
    _check_support(F.x, phi)
    Fa = F.antisymmetrized()
    x, h = F.x, F.h
    dist = _distance(x)
    P = phi.evaluate(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        dphi = np.where(dist > 0, (P[:, None] - P[None, :]) * dist ** (-1.0 - s), 0.0)
    beta = 1.0 - F.s - s
    out = np.array([_diagonal_corrected_sum(Fa.values[..., c] * dphi, h, beta) for c in range(Fa.values.shape[2])])
    if F.source is not None:
        U = F.source.evaluate(x)
        out = out + 2.0 * h * _tail_sum(x, U * P[:, None], F.s + s)
    return float(out[0]) if out.size == 1 else out


def _tail_sum(x: np.ndarray, g: np.ndarray, p: float) -> np.ndarray:
    """Σ_i g_i ∫_{ℝ∖[x_0, x_n]} |x_i - y|^{-1-p} dy over nodes where g ≠ 0."""
    xi = x[1:-1]
    T = _exterior_tail(xi, x[0], x[-1], p)
    return ((g[1:-1] * _gregory(x.size)[1:-1, None]) * T[:, None]).sum(axis=0)


def offdiag_norm(F: OffDiagonalField, p: float = 2.0) -> float:
    """(∬ |F|^p dx dy / |x - y|)^{1/p} with |·| the Euclidean norm over components."""
    if p < 1.0:
        raise ValueError("p must be at least 1")
    x, h = F.x, F.h
    dist = _distance(x)
    mag = np.linalg.norm(F.values, axis=2) ** p
    if not np.any(mag):
        return 0.0
    with np.errstate(divide="ignore"):
        I = np.where(dist > 0, mag / np.where(dist > 0, dist, 1.0), 0.0)
    total = _diagonal_corrected_sum(I, h, p * (1.0 - F.s) - 1.0)
    if F.source is not None:
        U = np.linalg.norm(F.source.evaluate(x), axis=1) ** p
        total += 2.0 * h * float(_tail_sum(x, U[:, None], p * F.s)[0])
    return max(total, 0.0) ** (1.0 / p)


def gagliardo_seminorm_line(u: SampledLineFunction, sigma: float, p: float = 2.0) -> float:
    """[u]_{Ẇ^{σ,p}} = (∬ |u(x) - u(y)|^p / |x - y|^{1+σp} dx dy)^{1/p} from samples."""
    x, h = u.x, u.h
    dist = _distance(x)
    diff = np.linalg.norm(u.samples[:, None, :] - u.samples[None, :, :], axis=2) ** p
    with np.errstate(divide="ignore"):
        I = np.where(dist > 0, diff / np.where(dist > 0, dist, 1.0) ** (1.0 + sigma * p), 0.0)
    total = _diagonal_corrected_sum(I, h, p * (1.0 - sigma) - 1.0)
    U = np.linalg.norm(u.samples, axis=1) ** p
    total += 2.0 * h * float(_tail_sum(x, U[:, None], sigma * p)[0])
    return total ** (1.0 / p)


def fourier_pairing(u: SampledLineFunction, phi: TestFunction | SampledLineFunction, s: float, xi_max: float | None = None) -> float:
    """∫ |ξ|^{2s} û(ξ) conj(φ̂(ξ)) dξ with the unitary transform, from samples.

    Independent of every real-space quadrature above; used as an oracle for
    ⟨(-Δ)^s u, φ⟩ and for (C_{1,s}/2)[u]²_{Ẇ^{s,2}}.
    """
    x, h = u.x, u.h
    U = u.samples[:, 0]
    Ph = phi.evaluate(x)
    Ph = Ph[:, 0] if np.ndim(Ph) == 2 else Ph
    xi_max = (np.pi / h) if xi_max is None else xi_max
    # substitute ξ = τ² so the |ξ|^{2s} cusp becomes smooth
    tb = np.sqrt(np.linspace(0.0, xi_max, 513))
    tau, wt = panel_rule(tb)
    xi = tau**2
    total = 0.0
    for sl in np.array_split(np.arange(xi.size), max(1, xi.size // 256)):
        ph = np.exp(-1j * np.outer(xi[sl], x))
        fu, fp = ph @ U, ph @ Ph
        total += np.sum(wt[sl] * 2.0 * tau[sl] * xi[sl] ** (2 * s) * (fu * np.conj(fp)).real)
    # 2∫_0^∞ by evenness; (2π)^{-1} and h² from the two transforms
    return float(2.0 * total * h * h / (2.0 * np.pi))


@dataclass(frozen=True)
class DivGradReport:
    lhs: float
    rhs: float
    residual: float
    relative: float
    s: float
    resolution: int


def check_div_grad_identity(u: SampledLineFunction, phi: TestFunction, s: float, lhs_nodes: int = 128) -> DivGradReport:
    """Compare ⟨(-Δ)^s u, φ⟩ (pointwise PV, then Gauss in x) with (C_{1,s}/2) div_s d_s u[φ]."""
    lo, hi = phi.support
    # margin keeps probe points clear of the padded edges
    margin = (MIN_BOUNDARY_CELLS + 2) * u.h
    A, B = min(u.a, lo - margin), max(u.b, hi + margin)
    A = u.a - np.ceil((u.a - A) / u.h) * u.h
    B = u.b + np.ceil((B - u.b) / u.h) * u.h
    grid_u = u.padded(A, B) if (A, B) != (u.a, u.b) else u
    xq, wq = panel_rule(np.linspace(lo, hi, lhs_nodes // GAUSS_NODES + 1))
    vals = np.array([fraclap_line_pv(grid_u, s, xx)[0] for xx in xq])
    lhs = float(wq @ (vals * phi.evaluate(xq)))
    div = frac_divergence_pair(frac_gradient(grid_u, s), s, phi)
    rhs = 0.5 * riesz_constant(s) * float(np.atleast_1d(div)[0])
    res = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    return DivGradReport(lhs, rhs, res, res / scale if scale > 0 else 0.0, s, grid_u.n + 1)
