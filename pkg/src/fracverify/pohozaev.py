"""Half-Laplacian Dirichlet problem on an interval and its Pohozaev identities.

Problem: (-Δ)^{1/2} u = f(u) in (a, b), u = 0 outside. With
x = m + L t, L = (b - a)/2, the weighted Chebyshev functions
w_n(t) = √(1 - t²) U_n(t) = sin((n+1)θ), t = cos θ, satisfy

    (-Δ)^{1/2} w_n = (n + 1) U_n / L   inside the interval.

This relation is not taken on faith: :func:`validate_eigenrelation` checks it
against the independent principal-value quadrature before any solve.

For solutions with u² ∈ C²([a, b]) and boundary limits
ℓ_a = lim u²/(x - a), ℓ_b = lim u²/(b - x):

    ∫ u' (-Δ)^{1/2} u dx   = (π/8) (ℓ_a - ℓ_b),
    ∫ x u' (-Δ)^{1/2} u dx = (π/8) (ℓ_a a - ℓ_b b).
"""
from __future__ import annotations

import ast
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike
from scipy.special import eval_chebyu, roots_legendre

from .frac_line import SampledLineFunction, fraclap_line_pv, panel_rule
from .spectral_circle import (
    CircleFunction,
    dot,
    fractional_laplacian_circle,
    inner,
    trig,
)

log = logging.getLogger(__name__)

GATE_MAX_DEGREE = 8
GATE_PROBES = 10
GATE_TOL = 1e-3
LAYER_CELLS = 10


class EigenrelationError(RuntimeError):
    """The weighted Chebyshev eigenrelation failed its quadrature check."""


class ConvergenceError(RuntimeError):
    """Newton iteration or boundary extrapolation did not converge."""


# ------------------------------------------------------------- nonlinearity


_ALIASES = {"const1": "1", "affine": "1 + 0.1*u"}


def _to_poly(node: ast.AST) -> Polynomial:
    if isinstance(node, ast.Expression):
        return _to_poly(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return Polynomial([float(node.value)])
    if isinstance(node, ast.Name) and node.id == "u":
        return Polynomial([0.0, 1.0])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        p = _to_poly(node.operand)
        return -p if isinstance(node.op, ast.USub) else p
    if isinstance(node, ast.BinOp):
        left, right = _to_poly(node.left), _to_poly(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Pow) and right.degree() == 0 and float(right.coef[0]).is_integer():
            return left ** int(right.coef[0])
    raise ValueError(f"unsupported expression element: {ast.dump(node)}")


@dataclass(frozen=True)
class Nonlinearity:
    """Polynomial right-hand side f(u) given as an expression in ``u``."""

    expression: str
    poly: Polynomial = field(repr=False, compare=False)

    @classmethod
    def parse(cls, expression: str) -> "Nonlinearity":
        expr = _ALIASES.get(expression.strip(), expression.strip())
        return cls(expression.strip(), _to_poly(ast.parse(expr, mode="eval")))

    def __call__(self, u: ArrayLike) -> np.ndarray:
        return self.poly(np.asarray(u, dtype=float))

    def derivative(self, u: ArrayLike) -> np.ndarray:
        return self.poly.deriv()(np.asarray(u, dtype=float))


# ---------------------------------------------------------------- solution


@dataclass(frozen=True)
class ChebyshevSolution:
    """u(x) = Σ c_n √(1 - t²) U_n(t), t = (x - mid)/L, zero outside [a, b]."""

    a: float
    b: float
    coeffs: np.ndarray
    f: Nonlinearity | None = None
    panels: int = 64

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=float, copy=True).ravel()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def M(self) -> int:
        return self.coeffs.size

    @property
    def L(self) -> float:
        return 0.5 * (self.b - self.a)

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    # LineProfile interface
    m = 1

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.panels

    @property
    def knots(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.panels + 1)

    @property
    def edge_exponents(self) -> tuple[float, float]:
        return (0.5, 0.5)

    def _theta(self, y: np.ndarray) -> np.ndarray:
        return np.arccos(np.clip((y - self.mid) / self.L, -1.0, 1.0))

    def evaluate(self, y: ArrayLike) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros((y.size, 1))
        inside = (y > self.a) & (y < self.b)
        th = self._theta(y[inside])
        n1 = np.arange(1, self.M + 1)
        out[inside, 0] = np.sin(np.outer(th, n1)) @ self.coeffs
        return out

    def derivative(self, y: ArrayLike) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        th = self._theta(y)
        n1 = np.arange(1, self.M + 1)
        du_dtheta = np.cos(np.outer(th, n1)) @ (n1 * self.coeffs)
        return (-du_dtheta / (self.L * np.sin(th)))[:, None]

    def half_laplacian_inside(self, y: ArrayLike) -> np.ndarray:
        """(-Δ)^{1/2} u on (a, b) from the eigenrelation."""
        t = (np.atleast_1d(np.asarray(y, dtype=float)) - self.mid) / self.L
        n = np.arange(self.M)
        U = eval_chebyu(n[None, :], t[:, None])
        return (U @ ((n + 1) * self.coeffs) / self.L)[:, None]

    def shifted(self, d: float) -> "ChebyshevSolution":
        """x ↦ u(x + d), supported on [a - d, b - d]."""
        return ChebyshevSolution(self.a - d, self.b - d, self.coeffs, self.f, self.panels)

    def boundary_limits_exact(self) -> tuple[float, float]:
        """Closed form ℓ_a = 2 S_a²/L, ℓ_b = 2 S_b²/L with S = Σ c_n U_n(∓1)."""
        n = np.arange(self.M)
        Sa = np.sum(self.coeffs * (-1.0) ** n * (n + 1))
        Sb = np.sum(self.coeffs * (n + 1))
        return 2.0 * Sa**2 / self.L, 2.0 * Sb**2 / self.L

    def to_json(self) -> str:
        return json.dumps(
            {"a": self.a, "b": self.b, "M": self.M, "coeffs": self.coeffs.tolist(), "f": self.f.expression if self.f else None}
        )

    @classmethod
    def from_json(cls, text: str) -> "ChebyshevSolution":
        d = json.loads(text)
        if len(d["coeffs"]) != d["M"]:
            raise ValueError("coefficient count does not match M")
        f = Nonlinearity.parse(d["f"]) if d.get("f") else None
        return cls(d["a"], d["b"], np.array(d["coeffs"], dtype=float), f)


def basis_function(n: int, a: float = -1.0, b: float = 1.0) -> ChebyshevSolution:
    c = np.zeros(n + 1)
    c[n] = 1.0
    return ChebyshevSolution(a, b, c)


@dataclass(frozen=True)
class GateReport:
    max_error: float
    passed: bool
    degrees: int
    probes: np.ndarray


@lru_cache(maxsize=1)
def validate_eigenrelation(max_degree: int = GATE_MAX_DEGREE, probes: int = GATE_PROBES, tol: float = GATE_TOL) -> GateReport:
    """PV quadrature of (-Δ)^{1/2} w_n against (n + 1) U_n at interior probes."""
    t = np.linspace(-0.9, 0.9, probes)
    worst = 0.0
    for n in range(max_degree + 1):
        w = basis_function(n)
        pv = np.array([fraclap_line_pv(w, 0.5, ti)[0] for ti in t])
        worst = max(worst, float(np.max(np.abs(pv - (n + 1) * eval_chebyu(n, t)))))
    return GateReport(worst, worst <= tol, max_degree, t)


def chebyshev_solve(
    f: Nonlinearity | str,
    a: float,
    b: float,
    M: int = 32,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> ChebyshevSolution:
    """Newton collocation at t_j = cos((2j+1)π/2M) using the analytic f'."""
    if M < 4:
        raise ValueError("M must be at least 4")
    if not a < b:
        raise ValueError("need a < b")
    f = Nonlinearity.parse(f) if isinstance(f, str) else f
    gate = validate_eigenrelation()
    if not gate.passed:
        raise EigenrelationError(f"eigenrelation check failed: max error {gate.max_error:.3e}")
    L = 0.5 * (b - a)
    theta = (2 * np.arange(M) + 1) * np.pi / (2 * M)
    n = np.arange(M)
    S = np.sin(np.outer(theta, n + 1))
    Lap = eval_chebyu(n[None, :], np.cos(theta)[:, None]) * (n + 1) / L
    c = np.zeros(M)
    for _ in range(max_iter):
        u = S @ c
        R = Lap @ c - f(u)
        if np.max(np.abs(R)) <= tol:
            return ChebyshevSolution(a, b, c, f)
        Jac = Lap - f.derivative(u)[:, None] * S
        c = c - np.linalg.solve(Jac, R)
    u = S @ c
    if np.max(np.abs(Lap @ c - f(u))) <= tol:
        return ChebyshevSolution(a, b, c, f)
    raise ConvergenceError(f"Newton did not reach {tol:g} within {max_iter} iterations")


def collocation_residual(sol: ChebyshevSolution, x: ArrayLike) -> np.ndarray:
    """(-Δ)^{1/2} u - f(u) with the operator from independent PV quadrature."""
    if sol.f is None:
        raise ValueError("solution carries no nonlinearity")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pv = np.array([fraclap_line_pv(sol, 0.5, xi)[0] for xi in x])
    return pv - sol.f(sol.evaluate(x)[:, 0])


# ---------------------------------------------------------- boundary data


@dataclass(frozen=True)
class BoundaryLimits:
    ell_a: float
    ell_b: float
    alpha_a: float
    alpha_b: float
    spread_a: float
    spread_b: float


def _richardson(tau: np.ndarray, g: np.ndarray) -> tuple[float, float]:
    """Extrapolate g(τ) = ℓ + c₁τ + c₂τ² + ... to τ = 0 along τ_j = τ_0 2^{±j}."""
    order = np.argsort(-tau)
    g = g[order]
    ratio = tau[order][0] / tau[order][1]
    T = [g.copy()]
    for k in range(1, g.size):
        prev = T[-1]
        fac = ratio**k
        T.append((fac * prev[1:] - prev[:-1]) / (fac - 1.0))
    best = float(T[-1][0])
    spread = abs(best - float(T[-2][-1])) if len(T) > 1 else 0.0
    return best, spread


def boundary_limits(u: SampledLineFunction | ChebyshevSolution, levels: int = 5, threshold: float = 1e-6) -> BoundaryLimits:
    """ℓ_a, ℓ_b by Richardson extrapolation of u²/dist along dist = τ_0 2^{-j}."""
    if isinstance(u, SampledLineFunction):
        tau = u.h * 2.0 ** np.arange(levels)
        if tau[-1] >= 0.5 * (u.b - u.a):
            raise ValueError("grid too coarse for the requested extrapolation levels")
        idx = (2 ** np.arange(levels)).astype(int)
        ua = np.linalg.norm(u.samples[idx], axis=1)
        ub = np.linalg.norm(u.samples[u.n - idx], axis=1)
    else:
        # edge resolution of a degree-M expansion scales like L/M²
        tau = (u.b - u.a) / (2.0 * max(16, u.M) ** 2) * 2.0 ** -np.arange(levels + 1.0)
        ua = np.abs(u.evaluate(u.a + tau)[:, 0])
        ub = np.abs(u.evaluate(u.b - tau)[:, 0])
    la, sa = _richardson(tau, ua**2 / tau)
    lb, sb = _richardson(tau, ub**2 / tau)
    scale = max(1.0, abs(la), abs(lb))
    if max(sa, sb) > threshold * scale:
        raise ConvergenceError(f"boundary extrapolation spread {max(sa, sb):.3e} exceeds threshold; u² may not be C² up to the boundary")
    la, lb = max(la, 0.0), max(lb, 0.0)
    return BoundaryLimits(la, lb, float(np.sqrt(la)), float(np.sqrt(lb)), sa, sb)


@dataclass(frozen=True)
class ExteriorAsymptotics:
    side: str
    alpha: float
    remainder_sup: float
    fit_residual: float
    window: tuple[float, float]
    log_growth: bool
    log_coefficient: float


def exterior_asymptotics(
    u: SampledLineFunction | ChebyshevSolution,
    side: str = "b",
    window: tuple[float, float] = (1e-4, 1e-2),
    points: int = 12,
    threshold: float = 1e-2,
) -> ExteriorAsymptotics:
    """Fit (-Δ)^{1/2} u(x) ≈ -(α/2) dist^{-1/2} + δ(x) just outside the interval.

    The product g dist^{1/2} is fitted by c₀ + c₁ ε^{1/2} + c₂ ε + c₃ ε^{3/2},
    giving α = -2c₀. A competing fit g ≈ C log ε + d₀ + d₁ ε log ε + d₂ ε
    detects the logarithmic regime that appears when (u²)' vanishes at the
    endpoint; the flag is raised when it fits a hundred times better.
    """
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    eps = np.geomspace(window[0], window[1], points)
    x = u.b + eps if side == "b" else u.a - eps
    g = np.array([fraclap_line_pv(u, 0.5, xi)[0] for xi in x])
    scale = float(np.max(np.abs(g)))
    if scale == 0.0:
        return ExteriorAsymptotics(side, 0.0, 0.0, 0.0, window, False, 0.0)
    re = np.sqrt(eps)
    A = np.column_stack([np.ones_like(eps), re, eps, eps * re])
    cA, *_ = np.linalg.lstsq(A, g * re, rcond=None)
    resA = float(np.sqrt(np.mean((A @ cA - g * re) ** 2)) / np.max(np.abs(g * re)))
    B = np.column_stack([np.log(eps), np.ones_like(eps), eps * np.log(eps), eps])
    cB, *_ = np.linalg.lstsq(B, g, rcond=None)
    resB = float(np.sqrt(np.mean((B @ cB - g) ** 2)) / scale)
    alpha = float(-2.0 * cA[0])
    remainder = float(np.max(np.abs(g + 0.5 * alpha / re)))
    log_growth = resB < 1e-2 * resA
    if log_growth:
        log.warning("logarithmic growth of the half-Laplacian near side %s (coefficient %.6g)", side, cB[0])
    if min(resA, resB) > threshold:
        raise ConvergenceError(f"exterior fit residual {min(resA, resB):.3e} exceeds {threshold:g}")
    return ExteriorAsymptotics(side, alpha, remainder, resA, window, bool(log_growth), float(cB[0]))


# ------------------------------------------------------ Pohozaev identities


@dataclass(frozen=True)
class PohozaevReport:
    kind: str
    lhs: float
    rhs: float
    residual: float
    method: str
    layer: float


def _check_interval(u, a: float | None, b: float | None) -> None:
    if a is not None and not np.isclose(a, u.a, rtol=0, atol=1e-14):
        raise ValueError("interval does not match the profile support")
    if b is not None and not np.isclose(b, u.b, rtol=0, atol=1e-14):
        raise ValueError("interval does not match the profile support")


def _lhs_spectral(u: ChebyshevSolution, weight_power: int) -> float:
    """∫ x^p u' (-Δ)^{1/2} u dx in θ, where the integrand is a trig polynomial."""
    nq = 2 * u.M + 16
    xi, wi = roots_legendre(nq)
    th = 0.5 * np.pi * (xi + 1.0)
    wt = 0.5 * np.pi * wi
    n1 = np.arange(1, u.M + 1)
    du_dth = np.cos(np.outer(th, n1)) @ (n1 * u.coeffs)
    x = u.mid + u.L * np.cos(th)
    lap = u.half_laplacian_inside(x)[:, 0]
    # dx = -L sin θ dθ and u' = -(du/dθ)/(L sin θ), so u' dx = du/dθ dθ with θ running π → 0
    return float(-np.sum(wt * du_dth * lap * x**weight_power))


def _sqrt_series_integral(coef: dict[float, float], delta: float) -> float:
    """∫_0^δ Σ c_p τ^p dτ for exponents p > -1."""
    return float(sum(c * delta ** (p + 1.0) / (p + 1.0) for p, c in coef.items()))


def _layer_contribution(u, side: str, delta: float, weight_power: int) -> float:
    """Boundary-layer part of ∫ x^p u' (-Δ)^{1/2} u from fitted √dist expansions."""
    h = u.h
    tau_u = np.linspace(0.5 * delta, delta, 9) if isinstance(u, ChebyshevSolution) else h * np.arange(1, LAYER_CELLS + 1)
    x_u = u.a + tau_u if side == "a" else u.b - tau_u
    vals = u.evaluate(x_u)[:, 0]
    Au = np.column_stack([tau_u**0.5, tau_u**1.5, tau_u**2.5])
    (al, be, ga), *_ = np.linalg.lstsq(Au, vals, rcond=None)
    tau_g = np.linspace(MIN_PV_CELLS * h, delta, 6)
    x_g = u.a + tau_g if side == "a" else u.b - tau_g
    gv = np.array([fraclap_line_pv(u, 0.5, xi)[0] for xi in x_g])
    Ag = np.column_stack([np.ones_like(tau_g), tau_g**0.5, tau_g])
    (g0, g1, g2), *_ = np.linalg.lstsq(Ag, gv, rcond=None)
    # du/dτ; u' = ± du/dτ depending on the side
    sgn = 1.0 if side == "a" else -1.0
    du = {-0.5: 0.5 * al, 0.5: 1.5 * be, 1.5: 2.5 * ga}
    gg = {0.0: g0, 0.5: g1, 1.0: g2}
    x0 = u.a if side == "a" else u.b
    xw = {0.0: x0**weight_power} if weight_power == 0 else {0.0: x0, 1.0: sgn}
    prod: dict[float, float] = {}
    for p1, c1 in du.items():
        for p2, c2 in gg.items():
            for p3, c3 in xw.items():
                prod[p1 + p2 + p3] = prod.get(p1 + p2 + p3, 0.0) + c1 * c2 * c3
    return sgn * _sqrt_series_integral(prod, delta)


MIN_PV_CELLS = 3


def _lhs_layer(u, weight_power: int) -> tuple[float, float]:
    """Interior Gauss panels graded toward the layer edges, plus both layers."""
    delta = LAYER_CELLS * u.h
    lo, hi = u.a + delta, u.b - delta
    if hi <= lo:
        raise ValueError("interval too short for the boundary layer")
    half = 0.5 * (hi - lo)
    grade = delta * 2.0 ** np.arange(0, 60)
    grade = grade[grade < half]
    br = np.unique(np.concatenate([lo + grade - delta, hi - grade + delta, np.linspace(lo, hi, 9)]))
    br = br[(br >= lo) & (br <= hi)]
    x, w = panel_rule(br)
    du = u.derivative(x)[:, 0]
    g = np.array([fraclap_line_pv(u, 0.5, xi)[0] for xi in x])
    interior = float(np.sum(w * du * g * x**weight_power))
    if not np.isfinite(interior):
        raise FloatingPointError("non-finite interior quadrature")
    total = interior + _layer_contribution(u, "a", delta, weight_power) + _layer_contribution(u, "b", delta, weight_power)
    return total, delta


def _pohozaev(u, a, b, weight_power: int, method: str) -> PohozaevReport:
    _check_interval(u, a, b)
    if method == "auto":
        method = "spectral" if isinstance(u, ChebyshevSolution) else "layer"
    if method == "spectral":
        if not isinstance(u, ChebyshevSolution):
            raise ValueError("spectral route needs a ChebyshevSolution")
        lhs, layer = _lhs_spectral(u, weight_power), 0.0
    elif method == "layer":
        if np.max(np.abs(u.evaluate(np.linspace(u.a, u.b, 65)))) == 0.0:
            lhs, layer = 0.0, LAYER_CELLS * u.h
        else:
            lhs, layer = _lhs_layer(u, weight_power)
    else:
        raise ValueError(f"unknown method {method!r}")
    lim = boundary_limits(u)
    if weight_power == 0:
        rhs = np.pi / 8.0 * (lim.ell_a - lim.ell_b)
    else:
        rhs = np.pi / 8.0 * (lim.ell_a * u.a - lim.ell_b * u.b)
    kind = "translation" if weight_power == 0 else "dilation"
    return PohozaevReport(kind, float(lhs), float(rhs), float(abs(lhs - rhs)), method, float(layer))


def pohozaev_dilation_residual(u, a: float | None = None, b: float | None = None, method: str = "auto") -> PohozaevReport:
    """∫ x u' (-Δ)^{1/2} u against (π/8)(ℓ_a a - ℓ_b b)."""
    return _pohozaev(u, a, b, 1, method)


def pohozaev_translation_residual(u, a: float | None = None, b: float | None = None, method: str = "auto") -> PohozaevReport:
    """∫ u' (-Δ)^{1/2} u against (π/8)(ℓ_a - ℓ_b)."""
    return _pohozaev(u, a, b, 0, method)


def circle_pohozaev_residuals(u: CircleFunction, delta: float) -> tuple[float, float]:
    """∫ u'·(-Δ)^{1/2}u and ∫ u'·(-Δ)^{1/2}u sin(x - δ) over S¹, spectrally."""
    p = dot(u.derivative(), fractional_laplacian_circle(u, 0.5))
    w = trig(cos={1: -np.sin(delta)}, sin={1: np.cos(delta)})
    return inner(p, trig(const=1.0)), inner(p, w)
