"""Noether currents of the half Dirichlet energy for maps S¹ → 𝕊^{m-1}.

For a sphere-valued u the rotation symmetry yields the two-point currents

    Ω_ik(x, y) = u^k(x) d u^i(x, y) - u^i(x) d u^k(x, y),
    Λ_ik(x, y) = (A u^k(x) - A u^k(y)) u^i(y) - (A u^i(x) - A u^i(y)) u^k(y),

with d u(x, y) = (u(x) - u(y)) / |2 sin((x - y)/2)|^{1/2} (chord distance)
and A = (-Δ)^{1/4}. Critical points satisfy u ∧ (-Δ)^{1/2} u = 0, which is
what the spectral residuals below measure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .kernels import TWO_PI, half_kernel
from .spectral_circle import (
    CircleFunction,
    dot,
    fractional_laplacian_circle,
    inner,
    multiply,
    stack,
    synthesize,
    uniform_grid,
)

DEFAULT_ETA = 1e-8
DEFAULT_FIELD_RESOLUTION = 256
DEFAULT_PV_RESOLUTION = 4096


@dataclass(frozen=True)
class VerificationReport:
    """One named residual with its tolerance and verdict."""

    check: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    resolution: int

    def to_dict(self) -> dict:
        res = self.residual if np.isfinite(self.residual) else None
        return {
            "check": self.check,
            "params": self.params,
            "residual": res,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "resolution": self.resolution,
        }

    @classmethod
    def judge(cls, check: str, params: dict, residual: float, tolerance: float, resolution: int) -> "VerificationReport":
        residual = float(residual)
        ok = bool(np.isfinite(residual) and residual <= tolerance)
        return cls(check, params, residual, float(tolerance), ok, int(resolution))


class SphereConstraintError(ValueError):
    """The map leaves the unit sphere by more than the declared tolerance."""


@dataclass(frozen=True)
class SphereValuedCircleFunction:
    """A CircleFunction validated to satisfy |u|² ∈ [1 - η, 1 + η] on a grid."""

    u: CircleFunction
    eta: float = DEFAULT_ETA

    def __post_init__(self) -> None:
        if self.u.m < 2:
            raise ValueError("sphere targets need at least two components")
        P = max(64, 8 * self.u.N + 16)
        sq = np.sum(synthesize(self.u, P) ** 2, axis=1)
        worst = float(np.max(np.abs(sq - 1.0)))
        if worst > self.eta:
            raise SphereConstraintError(f"| |u|² - 1 | reaches {worst:.3e} > η = {self.eta:g}")

    @property
    def m(self) -> int:
        return self.u.m


def _as_circle(u: SphereValuedCircleFunction | CircleFunction) -> CircleFunction:
    return u.u if isinstance(u, SphereValuedCircleFunction) else u


def _check_pair(u: CircleFunction, i: int, k: int) -> None:
    if not (0 <= i < u.m and 0 <= k < u.m):
        raise IndexError(f"indices ({i}, {k}) out of range for {u.m} components")
    if i == k:
        raise IndexError("need i ≠ k")


def index_pairs(m: int) -> list[tuple[int, int]]:
    """Pairs (i, k), i < k, in the component order used by wedge residuals."""
    return list(combinations(range(m), 2))


@dataclass(frozen=True)
class NoetherCurrent:
    """Two-point current on the grid θ_j = 2πj/P; ``values[x, y]``."""

    i: int
    k: int
    kind: str
    grid: np.ndarray
    values: np.ndarray
    source: CircleFunction = field(repr=False)


def _chord(grid: np.ndarray) -> np.ndarray:
    return np.abs(2.0 * np.sin(0.5 * (grid[:, None] - grid[None, :])))


def omega_field(u: SphereValuedCircleFunction, i: int, k: int, resolution: int = DEFAULT_FIELD_RESOLUTION) -> NoetherCurrent:
    """Ω_ik on the product grid, diagonal set to 0 (indices are 0-based)."""
    v = _as_circle(u)
    _check_pair(v, i, k)
    grid = uniform_grid(resolution)
    U = synthesize(v, resolution)
    dist = _chord(grid)
    with np.errstate(divide="ignore"):
        inv = np.where(dist > 0, dist ** -0.5, 0.0)
    du = lambda c: (U[:, c][:, None] - U[:, c][None, :]) * inv  # noqa: E731
    vals = U[:, k][:, None] * du(i) - U[:, i][:, None] * du(k)
    return NoetherCurrent(i, k, "omega", grid, vals, v)


def lambda_field(u: SphereValuedCircleFunction, i: int, k: int, resolution: int = DEFAULT_FIELD_RESOLUTION) -> NoetherCurrent:
    """Λ_ik on the product grid with (-Δ)^{1/4} applied spectrally."""
    v = _as_circle(u)
    _check_pair(v, i, k)
    grid = uniform_grid(resolution)
    U = synthesize(v, resolution)
    Q = synthesize(fractional_laplacian_circle(v, 0.25), resolution)
    dq = lambda c: Q[:, c][:, None] - Q[:, c][None, :]  # noqa: E731
    vals = dq(k) * U[:, i][None, :] - dq(i) * U[:, k][None, :]
    return NoetherCurrent(i, k, "lambda", grid, vals, v)


def wedge_el_residual(u: SphereValuedCircleFunction | CircleFunction) -> CircleFunction:
    """r_ik = u^i (-Δ)^{1/2} u^k - u^k (-Δ)^{1/2} u^i, one component per pair of :func:`index_pairs`."""
    v = _as_circle(u)
    lap = fractional_laplacian_circle(v, 0.5)
    parts = []
    for i, k in index_pairs(v.m):
        parts.append(multiply(v.component(i), lap.component(k)) - multiply(v.component(k), lap.component(i)))
    return stack(parts)


def sup_norm(u: CircleFunction, oversample: int = 16) -> float:
    """Max |u| over a grid of oversample·(2N+1) points."""
    P = oversample * (2 * u.N + 1)
    return float(np.max(np.abs(synthesize(u, P))))


def sphere_representation_residual(u: SphereValuedCircleFunction, resolution: int = DEFAULT_PV_RESOLUTION) -> float:
    """sup_θ |(-Δ)^{1/2}u(θ) - u(θ) · ½∫ |u(θ) - u(y)|² K^{1/2}(θ - y) dy|.

    The inner integrand is a trig polynomial in y whose diagonal value is
    |u'(θ)|²/π, so the trapezoid sum with that node is exact at this resolution.
    """
    v = _as_circle(u)
    P = int(resolution)
    h = TWO_PI / P
    U = synthesize(v, P)
    D = synthesize(v.derivative(), P)
    acc = np.sum(D**2, axis=1) / np.pi
    for j in range(1, P):
        acc += np.sum((np.roll(U, -j, axis=0) - U) ** 2, axis=1) * half_kernel(j * h)
    factor = 0.5 * h * acc
    lap = synthesize(fractional_laplacian_circle(v, 0.5), P)
    return float(np.max(np.abs(lap - U * factor[:, None])))


def noether_divergence_residual(u: SphereValuedCircleFunction, i: int, k: int, phi: CircleFunction) -> float:
    """2 ∫ (u^i (-Δ)^{1/2} u^k - u^k (-Δ)^{1/2} u^i) φ dθ, on coefficients."""
    v = _as_circle(u)
    _check_pair(v, i, k)
    lap = fractional_laplacian_circle(v, 0.5)
    r = multiply(v.component(i), lap.component(k)) - multiply(v.component(k), lap.component(i))
    return 2.0 * inner(r, phi)


def current_divergence_quadrature(current: NoetherCurrent, phi: CircleFunction) -> float:
    """∬ F(x, y) d φ(x, y) dx dy / |2 sin((x - y)/2)| for F = Ω_ik by trapezoid.

    The diagonal carries the limit -(u^i u^k' - u^k u^i') φ' of the integrand.
    In this chord normalisation div d u[φ] = 2π ⟨(-Δ)^{1/2} u, φ⟩, matching
    the line convention (C_{1,1/2}/2) div d = (-Δ)^{1/2}.
    """
    if current.kind != "omega":
        raise ValueError("quadrature is implemented for Ω currents")
    grid = current.grid
    P = grid.size
    h = TWO_PI / P
    F = synthesize(phi, P)[:, 0]
    dist = _chord(grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(dist > 0, (F[:, None] - F[None, :]) * dist**-1.5, 0.0)
    off = float(np.sum(current.values * w))
    v, i, k = current.source, current.i, current.k
    U = synthesize(v, P)
    D = synthesize(v.derivative(), P)
    dphi = synthesize(phi.derivative(), P)[:, 0]
    diag = -np.sum((U[:, i] * D[:, k] - U[:, k] * D[:, i]) * dphi)
    return (off + diag) * h * h


def stationarity_functional_A(u: CircleFunction, X: CircleFunction) -> float:
    """A_u[X] = 2 ∫ ((-Δ)^{1/2} u · u') X dθ."""
    if X.m != 1:
        raise ValueError("X must be scalar")
    lap = fractional_laplacian_circle(u, 0.5)
    return 2.0 * inner(dot(lap, u.derivative()), X)
