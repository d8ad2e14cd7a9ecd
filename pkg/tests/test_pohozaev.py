from __future__ import annotations

import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import eval_chebyu

from fracverify.frac_line import SampledLineFunction, fraclap_line_pv
from fracverify.pohozaev import (
    ChebyshevSolution,
    ConvergenceError,
    Nonlinearity,
    basis_function,
    boundary_limits,
    chebyshev_solve,
    circle_pohozaev_residuals,
    collocation_residual,
    exterior_asymptotics,
    pohozaev_dilation_residual,
    pohozaev_translation_residual,
    validate_eigenrelation,
)
from fracverify.spectral_circle import random_trig_polynomial, seminorm

from .strategies import angles, trig_polys

PROBES = np.linspace(-0.9, 0.9, 7)


def semicircle(a: float = -1.0, b: float = 1.0, n: int = 256) -> SampledLineFunction:
    return SampledLineFunction.from_callable(lambda x: np.sqrt(np.clip((x - a) * (b - x), 0.0, None)), a, b, n)


@pytest.fixture(scope="module")
def const_solution() -> ChebyshevSolution:
    return chebyshev_solve("const1", -1.0, 1.0, M=16)


@pytest.fixture(scope="module")
def affine_solution() -> ChebyshevSolution:
    return chebyshev_solve("1 + 0.1*u", -1.0, 1.0, M=64)


# ------------------------------------------------------------ nonlinearity


@pytest.mark.parametrize(
    "expr,u,want",
    [("const1", 3.0, 1.0), ("affine", 2.0, 1.2), ("u**3 - 2*u", 2.0, 4.0), ("-(u - 1)*(u + 1)", 0.5, 0.75)],
)
def test_nonlinearity_parse(expr, u, want):
    assert Nonlinearity.parse(expr)(u) == pytest.approx(want)


def test_nonlinearity_derivative():
    f = Nonlinearity.parse("u**3 - 2*u")
    assert f.derivative(2.0) == pytest.approx(10.0)


@pytest.mark.parametrize("expr", ["sin(u)", "u**0.5", "x + 1", "u / 2", "__import__('os')"])
def test_nonlinearity_rejects(expr):
    with pytest.raises((ValueError, SyntaxError)):
        Nonlinearity.parse(expr)


# --------------------------------------------------------- eigenrelation


def test_gate_passes():
    gate = validate_eigenrelation()
    assert gate.passed and gate.max_error < 1e-6


@pytest.mark.parametrize("n", [0, 3, 7])
def test_basis_eigenrelation_shifted_interval(n):
    w = basis_function(n, 1.0, 3.0)
    x = np.array([1.3, 2.0, 2.6])
    pv = np.array([fraclap_line_pv(w, 0.5, xi)[0] for xi in x])
    assert np.allclose(pv, w.half_laplacian_inside(x)[:, 0], atol=1e-6)
    assert np.allclose(pv, (n + 1) * eval_chebyu(n, x - 2.0), atol=1e-6)


# ----------------------------------------------------------------- solve


@pytest.mark.parametrize("a,b", [(-1.0, 1.0), (1.0, 3.0)])
def test_const_solution_is_semicircle(a, b):
    sol = chebyshev_solve("const1", a, b, M=16)
    x = np.linspace(a, b, 9)
    assert np.allclose(sol.evaluate(x)[:, 0], np.sqrt(np.clip((x - a) * (b - x), 0, None)), atol=1e-12)
    assert np.abs(collocation_residual(sol, np.linspace(a + 0.1, b - 0.1, 7))).max() < 1e-6


def test_affine_collocation(affine_solution):
    # algebraic convergence in M: the true profile is not a finite expansion
    assert np.abs(collocation_residual(affine_solution, PROBES)).max() < 1e-5


def test_affine_positive_and_even(affine_solution):
    x = np.linspace(-0.95, 0.95, 11)
    u = affine_solution.evaluate(x)[:, 0]
    assert np.all(u > 0) and np.allclose(u, u[::-1], atol=1e-12)


def test_solve_argument_checks():
    with pytest.raises(ValueError):
        chebyshev_solve("const1", 1.0, -1.0)
    with pytest.raises(ValueError):
        chebyshev_solve("const1", -1.0, 1.0, M=2)


def test_collocation_requires_f():
    with pytest.raises(ValueError):
        collocation_residual(basis_function(0), [0.0])


def test_json_round_trip(affine_solution):
    back = ChebyshevSolution.from_json(affine_solution.to_json())
    assert np.array_equal(back.coeffs, affine_solution.coeffs)
    assert back.f.expression == affine_solution.f.expression and (back.a, back.b) == (-1.0, 1.0)


# ------------------------------------------------------- boundary limits


def test_boundary_limits_chebyshev(const_solution, affine_solution):
    lim = boundary_limits(const_solution)
    assert lim.ell_a == pytest.approx(2.0, abs=1e-4) and lim.ell_b == pytest.approx(2.0, abs=1e-4)
    la, lb = affine_solution.boundary_limits_exact()
    lim = boundary_limits(affine_solution)
    assert lim.ell_a == pytest.approx(la, rel=1e-8) and lim.ell_b == pytest.approx(lb, rel=1e-8)


def test_boundary_limits_sampled():
    lim = boundary_limits(semicircle())
    assert lim.ell_a == pytest.approx(2.0, abs=1e-4) and lim.ell_b == pytest.approx(2.0, abs=1e-4)
    assert lim.alpha_a == pytest.approx(np.sqrt(2.0), abs=1e-4)


def test_boundary_limits_zero():
    z = SampledLineFunction(-1.0, 1.0, np.zeros(257), edge="plain")
    lim = boundary_limits(z)
    assert lim.ell_a == 0.0 and lim.ell_b == 0.0


def test_boundary_limits_rough_profile():
    # u = (1 - x²)^{1/4}: u² is not C² at the ends, u²/dist blows up
    u = SampledLineFunction.from_callable(lambda x: np.clip(1 - x * x, 0, None) ** 0.25, -1.0, 1.0, 256)
    with pytest.raises(ConvergenceError):
        boundary_limits(u)


# --------------------------------------------------- exterior asymptotics


@pytest.mark.parametrize("side", ["a", "b"])
def test_exterior_alpha(const_solution, side):
    ext = exterior_asymptotics(const_solution, side)
    assert ext.alpha == pytest.approx(np.sqrt(2.0), abs=1e-3)
    assert not ext.log_growth


def test_exterior_alpha_sampled():
    assert exterior_asymptotics(semicircle()).alpha == pytest.approx(np.sqrt(2.0), abs=1e-3)


def test_exterior_zero():
    z = SampledLineFunction(-1.0, 1.0, np.zeros(65), edge="plain")
    assert exterior_asymptotics(z).alpha == 0.0


def test_exterior_log_regime(caplog):
    u = SampledLineFunction.from_callable(lambda x: np.clip(1 - x * x, 0, None), -1.0, 1.0, 256)
    with caplog.at_level(logging.WARNING):
        ext = exterior_asymptotics(u)
    assert ext.log_growth
    # (-Δ)^{1/2}(1 - x²)_+ ≈ (2/π) log ε near the end
    assert ext.log_coefficient == pytest.approx(2 / np.pi, rel=1e-3)
    assert "logarithmic" in caplog.text


def test_exterior_side_check(const_solution):
    with pytest.raises(ValueError):
        exterior_asymptotics(const_solution, "c")


# ------------------------------------------------------------ identities


@pytest.mark.parametrize("method", ["spectral", "layer"])
def test_pohozaev_const(const_solution, method):
    dil = pohozaev_dilation_residual(const_solution, -1.0, 1.0, method=method)
    tr = pohozaev_translation_residual(const_solution, -1.0, 1.0, method=method)
    assert dil.rhs == pytest.approx(-np.pi / 2, abs=1e-10)
    assert dil.lhs == pytest.approx(-np.pi / 2, abs=1e-5)
    assert abs(tr.rhs) < 1e-10 and abs(tr.lhs) < 1e-5
    assert dil.method == method


def test_pohozaev_sampled():
    u = semicircle()
    assert pohozaev_dilation_residual(u).residual < 1e-6
    assert pohozaev_translation_residual(u).residual < 1e-6


def test_pohozaev_shifted_interval():
    sol = chebyshev_solve("const1", 1.0, 3.0, M=16)
    dil = pohozaev_dilation_residual(sol, 1.0, 3.0)
    # (π/8)(2·1 - 2·3) = -π/2
    assert dil.rhs == pytest.approx(-np.pi / 2, abs=1e-10) and dil.residual < 1e-10
    assert pohozaev_translation_residual(sol).residual < 1e-10


@pytest.mark.parametrize("d", [-0.7, 0.4, 2.0])
def test_shift_relation(affine_solution, d):
    base_d = pohozaev_dilation_residual(affine_solution)
    base_t = pohozaev_translation_residual(affine_solution)
    shifted = pohozaev_dilation_residual(affine_solution.shifted(d))
    assert shifted.rhs == pytest.approx(base_d.rhs - d * base_t.rhs, abs=1e-6)
    assert shifted.residual < 1e-8


def test_pohozaev_affine(affine_solution):
    assert pohozaev_dilation_residual(affine_solution).residual < 1e-8
    assert pohozaev_translation_residual(affine_solution).residual < 1e-8


def test_pohozaev_interval_mismatch(const_solution):
    with pytest.raises(ValueError):
        pohozaev_dilation_residual(const_solution, 0.0, 1.0)
    with pytest.raises(ValueError):
        pohozaev_dilation_residual(semicircle(), method="spectral")
    with pytest.raises(ValueError):
        pohozaev_dilation_residual(const_solution, method="nope")


def test_pohozaev_zero_profile():
    z = SampledLineFunction(-1.0, 1.0, np.zeros(257), edge="plain")
    rep = pohozaev_dilation_residual(z)
    assert rep.lhs == 0.0 and rep.rhs == 0.0


# ---------------------------------------------------------------- circle


@given(trig_polys(), angles)
def test_circle_pohozaev(u, delta):
    scale = max(1.0, seminorm(u, "sobolev", 0.5).value ** 2)
    t, d = circle_pohozaev_residuals(u, delta)
    assert abs(t) <= 1e-10 * scale and abs(d) <= 1e-10 * scale


def test_circle_pohozaev_random(rng):
    for _ in range(200):
        u = random_trig_polynomial(rng, int(rng.integers(1, 9)), m=int(rng.integers(1, 4)))
        scale = max(1.0, seminorm(u, "sobolev", 0.5).value ** 2)
        t, d = circle_pohozaev_residuals(u, float(rng.uniform(0, 2 * np.pi)))
        assert max(abs(t), abs(d)) <= 1e-10 * scale


@given(st.floats(-2, 2))
def test_nonlinearity_vectorized(c):
    f = Nonlinearity.parse("1 + 0.1*u")
    x = np.array([c, 2 * c])
    assert np.allclose(f(x), 1 + 0.1 * x)
