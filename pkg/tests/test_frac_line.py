from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracverify.frac_line import (
    OffDiagonalField,
    SampledLineFunction,
    TestFunction,
    check_div_grad_identity,
    fourier_pairing,
    frac_divergence_pair,
    frac_gradient,
    fraclap_line_pv,
    gagliardo_seminorm_line,
    leibniz_defect_integral,
    offdiag_norm,
)
from fracverify.kernels import riesz_constant


def semicircle(n: int = 256, a: float = -1.0, b: float = 1.0) -> SampledLineFunction:
    return SampledLineFunction.from_callable(lambda x: np.sqrt(np.clip((x - a) * (b - x), 0.0, None)), a, b, n)


BUMP = TestFunction(0.0, 1.0)


@pytest.fixture(scope="module")
def bump_u() -> SampledLineFunction:
    return BUMP.sampled(-1.0, 1.0, 128)


# ------------------------------------------------------------ sampled type


def test_sampled_invariants():
    u = semicircle(64)
    assert u.h * u.n == pytest.approx(u.b - u.a, abs=1e-15)
    assert u.edge_exponents == (0.5, 0.5)
    assert BUMP.sampled(-1.0, 1.0, 64).edge_exponents == (0.0, 0.0)
    assert np.all(u.evaluate([-3.0, 1.5]) == 0.0)


def test_sampled_rejects_bad_input():
    with pytest.raises(ValueError):
        SampledLineFunction(1.0, 0.0, np.zeros(10))
    with pytest.raises(ValueError):
        SampledLineFunction(0.0, 1.0, np.zeros(3))
    with pytest.raises(ValueError):
        SampledLineFunction(0.0, 1.0, np.array([np.nan, 0, 0, 0, 0, 0]))


def test_sampled_interpolates_sqrt_profile():
    u = semicircle(64)
    y = np.array([-0.999, -0.9, 0.3, 0.9999])
    assert np.allclose(u.evaluate(y)[:, 0], np.sqrt(1 - y**2), atol=1e-6)


def test_json_round_trip():
    u = semicircle(32)
    d = json.loads(u.to_json())
    assert set(d) == {"a", "b", "h", "m", "samples"}
    v = SampledLineFunction.from_json(u.to_json())
    assert np.array_equal(v.samples, u.samples) and (v.a, v.b) == (u.a, u.b)


def test_json_inconsistent_h():
    d = json.loads(semicircle(32).to_json())
    d["h"] = 0.5
    with pytest.raises(ValueError):
        SampledLineFunction.from_json(json.dumps(d))


def test_csv_export():
    lines = semicircle(8).to_csv().strip().split("\n")
    assert lines[0] == "x,u_1" and len(lines) == 10


def test_test_function_support():
    phi = TestFunction(0.5, 0.25)
    x = np.linspace(-1, 2, 301)
    v = phi.evaluate(x)
    assert np.all(v[(x <= 0.25) | (x >= 0.75)] == 0.0)
    assert phi.evaluate(0.5) == pytest.approx(1.0)
    d = phi.derivative(np.array([0.6]))[0]
    fd = (phi.evaluate(0.6 + 1e-6) - phi.evaluate(0.6 - 1e-6)) / 2e-6
    assert d == pytest.approx(fd, rel=1e-6)


# ------------------------------------------------------------ PV operator


@pytest.mark.parametrize("x", [0.0, 0.5, -0.9, 0.9])
def test_half_laplacian_of_semicircle(x):
    assert fraclap_line_pv(semicircle(), 0.5, x)[0] == pytest.approx(1.0, abs=1e-4)


def test_zero_function():
    z = SampledLineFunction(-1.0, 1.0, np.zeros(33))
    for x in (-2.0, 0.0, 0.3, 4.0):
        assert fraclap_line_pv(z, 0.5, x)[0] == 0.0


@pytest.mark.parametrize("x", [1.5, 2.0, 5.0])
def test_exterior_values(x):
    val = fraclap_line_pv(semicircle(), 0.5, x)[0]
    exact = 1.0 - x / np.sqrt(x * x - 1.0)
    assert val < 0.0
    assert val == pytest.approx(exact, abs=1e-6)
    # Hölder bound with [u]_{C^{1/2}} = √2
    bound = 2.0 / np.pi * np.sqrt(2.0) * abs((x - 1.0) ** -0.5 - (x + 1.0) ** -0.5)
    assert abs(val) <= bound


def test_exterior_decays():
    u = semicircle()
    vals = [abs(fraclap_line_pv(u, 0.5, x)[0]) for x in (2.0, 4.0, 8.0)]
    assert vals[0] > vals[1] > vals[2]


def test_boundary_too_close_raises():
    u = semicircle(64)
    with pytest.raises(ValueError):
        fraclap_line_pv(u, 0.5, 1.0 - u.h)
    with pytest.raises(ValueError):
        fraclap_line_pv(u, 0.5, 1.0)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_pv_against_fourier_oracle(bump_u, s):
    phi = TestFunction(0.2, 0.5)
    from fracverify.frac_line import panel_rule

    xq, wq = panel_rule(np.linspace(-0.3, 0.7, 9))
    vals = np.array([fraclap_line_pv(bump_u, s, x)[0] for x in xq])
    lhs = float(wq @ (vals * phi.evaluate(xq)))
    assert lhs == pytest.approx(fourier_pairing(bump_u, phi, s), rel=1e-5)


@pytest.mark.parametrize("s", [0.25, 0.5])
def test_homogeneity(s):
    lam = 2.0
    u = BUMP.sampled(-1.0, 1.0, 256)
    ul = TestFunction(0.0, 1.0 / lam).sampled(-1.0 / lam, 1.0 / lam, 256)
    for x in (0.0, 0.1, -0.2):
        a = fraclap_line_pv(ul, s, x)[0]
        b = lam ** (2 * s) * fraclap_line_pv(u, s, lam * x)[0]
        assert a == pytest.approx(b, rel=1e-6)


@pytest.mark.parametrize("s", [0.25, 0.5])
@pytest.mark.parametrize("x", [-0.3, 0.1, 0.45])
def test_leibniz_rule(s, x):
    u = BUMP.sampled(-1.0, 1.0, 256)
    v = TestFunction(0.1, 0.8).sampled(-1.0, 1.0, 256)
    uv = SampledLineFunction(-1.0, 1.0, u.samples * v.samples, edge="plain")
    ux, vx = u.evaluate([x])[0, 0], v.evaluate([x])[0, 0]
    lhs = fraclap_line_pv(uv, s, x)[0] - ux * fraclap_line_pv(v, s, x)[0] - vx * fraclap_line_pv(u, s, x)[0]
    rhs = -riesz_constant(s) * leibniz_defect_integral(u, v, s, x)[0]
    assert abs(lhs - rhs) < 1e-3


# ------------------------------------------------------- two-point calculus


def test_gradient_of_constant_is_zero():
    c = SampledLineFunction(0.0, 1.0, np.ones(17), edge="plain")
    assert np.all(frac_gradient(c, 0.3).values == 0.0)


@given(st.integers(0, 2**31), st.floats(0.0, 1.0))
def test_gradient_antisymmetric(seed, s):
    u = SampledLineFunction(0.0, 1.0, np.random.default_rng(seed).standard_normal(12), edge="plain")
    F = frac_gradient(u, s).values[..., 0]
    assert np.array_equal(F, -F.T)
    assert np.all(np.diag(F) == 0.0)


def test_gradient_s_domain(bump_u):
    with pytest.raises(ValueError):
        frac_gradient(bump_u, 1.5)


def test_norm_identity(bump_u):
    # [d_{1/4} u]_{Ḣ^{1/4}(∧)} = [u]_{Ẇ^{1/2,2}}
    lhs = offdiag_norm(frac_gradient(bump_u, 0.25).divided_by_distance(0.25), 2.0)
    rhs = gagliardo_seminorm_line(bump_u, 0.5)
    assert lhs == pytest.approx(rhs, rel=1e-3)
    fourier = np.sqrt(2.0 / riesz_constant(0.5) * fourier_pairing(bump_u, bump_u, 0.5))
    assert rhs == pytest.approx(fourier, rel=1e-6)


def test_offdiag_norm_examples(bump_u):
    F = frac_gradient(bump_u, 0.5)
    assert offdiag_norm(F.scaled(0.0)) == 0.0
    assert offdiag_norm(F.scaled(-3.0), 2.0) == pytest.approx(3.0 * offdiag_norm(F, 2.0), rel=1e-12)
    assert offdiag_norm(F, 2.0) == pytest.approx(gagliardo_seminorm_line(bump_u, 0.5), rel=1e-6)
    with pytest.raises(ValueError):
        offdiag_norm(F, 0.5)


def test_divergence_of_zero_field(bump_u):
    Z = OffDiagonalField(bump_u.x, np.zeros((bump_u.n + 1, bump_u.n + 1, 1)), 0.5)
    assert frac_divergence_pair(Z, 0.5, TestFunction(0.0, 0.5)) == 0.0


def test_divergence_of_symmetric_product_vanishes(bump_u):
    x = bump_u.x
    a = BUMP.evaluate(x)
    dist = np.abs(x[:, None] - x[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(dist > 0, a[:, None] * a[None, :] / dist**0.5, 0.0)
    F = OffDiagonalField(x, vals[..., None], 0.5)
    assert frac_divergence_pair(F, 0.5, TestFunction(0.2, 0.5)) == 0.0


def test_divergence_requires_support_inside(bump_u):
    with pytest.raises(ValueError):
        frac_divergence_pair(frac_gradient(bump_u, 0.5), 0.5, TestFunction(0.9, 0.5))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergence_nonfinite_detected(bump_u):
    vals = frac_gradient(bump_u, 0.5).values.copy()
    vals[3, 5, 0] = np.inf
    F = OffDiagonalField(bump_u.x, vals, 0.5)
    with pytest.raises(FloatingPointError):
        frac_divergence_pair(F, 0.5, TestFunction(0.0, 0.5))


def test_divergence_matches_half_laplacian(bump_u):
    phi = TestFunction(0.1, 0.6)
    div = frac_divergence_pair(frac_gradient(bump_u, 0.5), 0.5, phi)
    oracle = 2.0 / riesz_constant(0.5) * fourier_pairing(bump_u, phi, 0.5)
    assert div == pytest.approx(oracle, rel=1e-3)


@pytest.mark.parametrize("s", [0.25, 0.5])
@pytest.mark.parametrize("phi", [TestFunction(1.6, 0.4), TestFunction(0.2, 0.6)], ids=["disjoint", "overlap"])
def test_div_grad_identity(bump_u, s, phi):
    rep = check_div_grad_identity(bump_u, phi, s)
    assert rep.relative < 1e-3
    assert rep.s == s and rep.resolution > bump_u.n


def test_div_grad_zero_function():
    z = SampledLineFunction(-1.0, 1.0, np.zeros(65), edge="plain")
    rep = check_div_grad_identity(z, TestFunction(0.0, 0.5), 0.5)
    assert rep.residual == 0.0 and rep.lhs == 0.0
