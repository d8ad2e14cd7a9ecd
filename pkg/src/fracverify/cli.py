"""Command-line entry point: ``fracverify verify <suite>`` and ``fracverify describe <suite>``.

Every flag can also be set through an environment variable named
FRACVERIFY_<FLAG> (for example FRACVERIFY_SEED=3); explicit flags win.
Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .frac_div_circle import commutator_G, commutator_G_quadrature, div_extended_pair, div_s_product
from .frac_line import SampledLineFunction, TestFunction, check_div_grad_identity, fraclap_line_pv
from .hopf import conformality_report, hopf_bound, hopf_coefficients, hopf_hminus3_norm, is_stationary
from .kernels import TWO_PI, riesz_constant
from .noether import (
    SphereValuedCircleFunction,
    VerificationReport,
    index_pairs,
    noether_divergence_residual,
    sphere_representation_residual,
    stationarity_functional_A,
    sup_norm,
    wedge_el_residual,
)
from .pohozaev import (
    ChebyshevSolution,
    ConvergenceError,
    Nonlinearity,
    boundary_limits,
    chebyshev_solve,
    circle_pohozaev_residuals,
    exterior_asymptotics,
    pohozaev_dilation_residual,
    pohozaev_translation_residual,
    validate_eigenrelation,
)
from .spectral_circle import (
    CircleFunction,
    analyze,
    fractional_laplacian_circle,
    gagliardo_seminorm_quadrature,
    hilbert_transform,
    integrate,
    multiply,
    pv_fraclap_circle,
    random_trig_polynomial,
    seminorm,
    stack,
    synthesize,
    trig,
    uniform_grid,
)

ENV_PREFIX = "FRACVERIFY_"
MAPS = ("circle-identity", "z2", "cos", "perturbed")


class UsageError(ValueError):
    """Bad configuration; maps to exit code 2."""


@dataclass
class SuiteConfig:
    suite: str
    resolution: int | None = None
    tolerance: float | None = None
    seed: int = 0
    out: Path | None = None
    fmt: str = "json"
    map_name: str = "circle-identity"
    pairs: str = "all"
    f: str = "const1"
    interval: tuple[float, float] = (-1.0, 1.0)
    input: Path | None = None

    def res(self, default: int) -> int:
        return int(self.resolution) if self.resolution is not None else default

    def tol(self, default: float) -> float:
        return float(self.tolerance) if self.tolerance is not None else default


@dataclass
class SuiteResult:
    reports: list[VerificationReport] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)

    def add(self, cfg: SuiteConfig, check: str, params: dict, residual: float, tolerance: float, resolution: int) -> None:
        self.reports.append(VerificationReport.judge(check, params, residual, cfg.tol(tolerance), resolution))


# ------------------------------------------------------------------ maps


def build_map(name: str) -> CircleFunction:
    if name == "circle-identity":
        return stack([trig(cos={1: 1.0}), trig(sin={1: 1.0})])
    if name == "z2":
        return stack([trig(cos={2: 1.0}), trig(sin={2: 1.0})])
    if name == "cos":
        return trig(cos={1: 1.0})
    if name == "perturbed":
        th = uniform_grid(256)
        ph = th + 0.3 * np.sin(th)
        return analyze(np.column_stack([np.cos(ph), np.sin(ph)]), 32)
    raise UsageError(f"unknown map {name!r}; choose from {', '.join(MAPS)}")


def _read_input(cfg: SuiteConfig, loader):
    try:
        return loader(cfg.input.read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load {str(cfg.input)!r}: {exc}") from exc


def load_map(cfg: SuiteConfig) -> tuple[CircleFunction, str]:
    """The map from --input (CircleFunction JSON) if given, else the named map."""
    if cfg.input is None:
        return build_map(cfg.map_name), cfg.map_name
    return _read_input(cfg, CircleFunction.from_json), cfg.input.name


def _mode_family(N: int) -> list[tuple[str, CircleFunction]]:
    """Real basis 1, cos kθ, sin kθ for k ≤ N."""
    fam = [("1", trig(const=1.0))]
    for k in range(1, N + 1):
        fam.append((f"cos{k}", trig(cos={k: 1.0})))
        fam.append((f"sin{k}", trig(sin={k: 1.0})))
    return fam


def _pairs(cfg: SuiteConfig, m: int) -> list[tuple[int, int]]:
    if cfg.pairs == "all":
        return index_pairs(m)
    try:
        i, k = (int(t) for t in cfg.pairs.split(","))
    except ValueError as exc:
        raise UsageError(f"--pairs expects 'all' or 'i,k', got {cfg.pairs!r}") from exc
    if not (0 <= i < m and 0 <= k < m and i != k):
        raise UsageError(f"pair ({i}, {k}) invalid for {m} components")
    return [(i, k)]


# ---------------------------------------------------------------- suites


def suite_spectral(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    x = uniform_grid(64)
    for s in (0.25, 0.5, 1.0):
        worst = 0.0
        for k in range(1, 9):
            got = synthesize(fractional_laplacian_circle(trig(cos={k: 1.0}, sin={k: 0.5}), s), 64)[:, 0]
            want = float(k) ** (2 * s) * (np.cos(k * x) + 0.5 * np.sin(k * x))
            worst = max(worst, float(np.max(np.abs(got - want)) / np.max(np.abs(want))))
        out.add(cfg, "pure_mode_multiplier", {"s": s, "modes": "1..8"}, worst, 1e-12, 64)
    rng = np.random.default_rng(cfg.seed)
    u = random_trig_polynomial(rng, 8)
    mean = float(integrate(u)[0]) / TWO_PI
    hh = hilbert_transform(hilbert_transform(u))
    res = float(np.max(np.abs(synthesize(hh, 64)[:, 0] + synthesize(u, 64)[:, 0] - mean)))
    out.add(cfg, "hilbert_square", {"seed": cfg.seed, "degree": 8}, res, 1e-12, 64)
    lhs = hilbert_transform(u.derivative())
    res = max(sup_norm(lhs - hilbert_transform(u).derivative()), sup_norm(lhs - fractional_laplacian_circle(u, 0.5)))
    out.add(cfg, "hilbert_derivative", {"seed": cfg.seed, "degree": 8}, res, 1e-12, 64)
    P = cfg.res(4096)
    angles = uniform_grid(16) + 0.1
    for s in (0.25, 0.5, 0.75):
        w = random_trig_polynomial(rng, 8)
        lap = fractional_laplacian_circle(w, s).evaluate(angles)[:, 0]
        pv = np.array([pv_fraclap_circle(w, s, a, P).value[0] for a in angles])
        out.add(cfg, "pv_vs_multiplier", {"s": s, "degree": 8, "seed": cfg.seed}, float(np.max(np.abs(pv - lap))), 1e-6, P)
    return out


def suite_gagliardo(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    rng = np.random.default_rng(cfg.seed)
    P = cfg.res(1024)
    worst = 0.0
    for _ in range(20):
        u = random_trig_polynomial(rng, int(rng.integers(1, 9)), m=int(rng.integers(1, 4)))
        quad = gagliardo_seminorm_quadrature(u, P).value
        four = seminorm(u, "sobolev", 0.5).value ** 2
        worst = max(worst, abs(quad - four) / four)
    out.add(cfg, "gagliardo_fourier", {"samples": 20, "seed": cfg.seed}, worst, 1e-5, P)
    return out


def suite_divgrad(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    n = cfg.res(256)
    u = TestFunction(0.0, 1.0).sampled(-1.0, 1.0, n)
    phi = TestFunction(0.2, 0.6)
    for s in (0.25, 0.5):
        rep = check_div_grad_identity(u, phi, s)
        out.add(cfg, "div_grad_identity", {"s": s, "u": "bump(0,1)", "phi": "bump(0.2,0.6)"}, rep.relative, 1e-3, rep.resolution)
    out.add(cfg, "riesz_constant_half", {"s": 0.5}, abs(riesz_constant(0.5) - 1.0 / np.pi), 1e-12, 0)
    w = SampledLineFunction.from_callable(lambda x: np.sqrt(np.clip(1.0 - x**2, 0.0, None)), -1.0, 1.0, n)
    xs = np.linspace(-0.9, 0.9, 19)
    pv = np.array([fraclap_line_pv(w, 0.5, x)[0] for x in xs])
    out.add(cfg, "explicit_half_laplacian", {"u": "sqrt(1-x^2)", "x": "[-0.9,0.9]"}, float(np.max(np.abs(pv - 1.0))), 1e-4, n)
    out.artifacts["half_laplacian_sqrt.csv"] = _csv(["x", "value"], zip(xs, pv))
    return out


def suite_commutator(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    a, b = trig(cos={1: 1.0}), trig(sin={2: 1.0})
    phi = multiply(a, b)
    params = {"a": "cos", "b": "sin2", "phi": "cos*sin2", "s": 0.5}
    out.add(cfg, "div_product_example", params, abs(div_s_product(a, b, 0.5, phi) + np.pi / 2), 1e-10, 0)
    out.add(cfg, "div_extended_example", params, abs(div_extended_pair(a, b, 0.5, phi) + np.pi / 2), 1e-10, 0)
    rng = np.random.default_rng(cfg.seed)
    P = cfg.res(4096)
    worst_pair, worst_quad = 0.0, 0.0
    for _ in range(10):
        a, b, f = (random_trig_polynomial(rng, 8) for _ in range(3))
        for s in (0.25, 0.5):
            d1, d2 = div_s_product(a, b, s, f), div_extended_pair(a, b, s, f)
            worst_pair = max(worst_pair, abs(d1 - d2))
            G = synthesize(commutator_G(a, f, s).G, P)[:, 0]
            worst_quad = max(worst_quad, float(np.max(np.abs(commutator_G_quadrature(a, f, s, P) - G))))
    out.add(cfg, "extended_vs_product", {"samples": 10, "seed": cfg.seed, "s": "1/4,1/2"}, worst_pair, 1e-10, 0)
    out.add(cfg, "commutator_kernel_quadrature", {"samples": 10, "seed": cfg.seed, "s": "1/4,1/2"}, worst_quad, 1e-4, P)
    return out


def suite_noether(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    u, name = load_map(cfg)
    try:
        su = SphereValuedCircleFunction(u)
    except ValueError as exc:
        raise UsageError(f"map {name!r} is not sphere valued: {exc}") from exc
    fam = _mode_family(2 * u.N)
    for i, k in _pairs(cfg, u.m):
        worst = max(abs(noether_divergence_residual(su, i, k, phi)) for _, phi in fam)
        out.add(cfg, "noether_divergence", {"map": name, "pair": [i, k], "modes": len(fam)}, worst, 1e-12, 0)
    out.add(cfg, "wedge_residual", {"map": name}, sup_norm(wedge_el_residual(su)), 1e-12, 0)
    P = cfg.res(4096)
    out.add(cfg, "sphere_representation", {"map": name}, sphere_representation_residual(su, P), 1e-4, P)
    out.artifacts["map.csv"] = u.to_csv(256)
    return out


def suite_hopf(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    u, name = load_map(cfg)
    verdict = is_stationary(u)
    out.add(cfg, "hopf_max", {"map": name, "argmax_k": verdict.argmax_k}, verdict.max_abs, verdict.tau, 0)
    H = hopf_coefficients(u)
    out.add(cfg, "hminus3_bound", {"map": name}, max(0.0, hopf_hminus3_norm(H) ** 2 - hopf_bound(u)), 0.0, 0)
    P = cfg.res(64)
    rep = conformality_report(u, np.linspace(0.05, 0.99, 20), uniform_grid(P))
    out.add(cfg, "conformality", {"map": name, "r_max": 0.99}, max(rep.orthogonality, rep.modulus), 1e-8, P)
    worst = max(abs(stationarity_functional_A(u, phi)) for _, phi in _mode_family(2 * u.N))
    out.add(cfg, "stationarity_functional", {"map": name}, worst, 1e-10, 0)
    out.artifacts["hopf.csv"] = H.to_csv()
    return out


def suite_pohozaev(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    gate = validate_eigenrelation()
    out.add(cfg, "eigenrelation_gate", {"max_degree": gate.degrees}, gate.max_error, 1e-3, 0)
    if cfg.input is not None:
        sol = _read_input(cfg, ChebyshevSolution.from_json)
        if sol.f is None:
            raise UsageError(f"{str(cfg.input)!r} carries no nonlinearity")
        a, b, M = sol.a, sol.b, sol.M
    else:
        a, b = cfg.interval
        M = cfg.res(32)
        sol = chebyshev_solve(cfg.f, a, b, M=M)
    params = {"f": sol.f.expression, "interval": [a, b], "M": M}
    dil = pohozaev_dilation_residual(sol)
    tra = pohozaev_translation_residual(sol)
    out.add(cfg, "pohozaev_dilation", {**params, "lhs": dil.lhs, "rhs": dil.rhs}, dil.residual, 1e-3, M)
    out.add(cfg, "pohozaev_translation", {**params, "lhs": tra.lhs, "rhs": tra.rhs}, tra.residual, 1e-3, M)
    la, lb = sol.boundary_limits_exact()
    try:
        lim = boundary_limits(sol, threshold=1e-4)
        res = max(abs(lim.ell_a - la), abs(lim.ell_b - lb))
    except ConvergenceError:
        res = float("inf")
    out.add(cfg, "boundary_limits", {**params, "ell_a": la, "ell_b": lb}, res, 1e-4, M)
    try:
        ext = exterior_asymptotics(sol, "b")
        res = abs(ext.alpha - np.sqrt(lb))
    except ConvergenceError:
        res = float("inf")
    out.add(cfg, "exterior_alpha", {**params, "alpha_b": float(np.sqrt(lb))}, res, 1e-3, M)
    out.artifacts["solution.json"] = sol.to_json() + "\n"
    xs = np.linspace(a, b, 201)
    out.artifacts["solution.csv"] = _csv(["x", "u"], zip(xs, sol.evaluate(xs)[:, 0]))
    return out


def suite_circle_pohozaev(cfg: SuiteConfig) -> SuiteResult:
    out = SuiteResult()
    rng = np.random.default_rng(cfg.seed)
    worst_t, worst_d = 0.0, 0.0
    for _ in range(200):
        u = random_trig_polynomial(rng, int(rng.integers(1, 9)), m=int(rng.integers(1, 4)))
        t, d = circle_pohozaev_residuals(u, float(rng.uniform(0.0, TWO_PI)))
        scale = max(1.0, seminorm(u, "sobolev", 0.5).value ** 2)
        worst_t, worst_d = max(worst_t, abs(t) / scale), max(worst_d, abs(d) / scale)
    out.add(cfg, "circle_translation", {"samples": 200, "seed": cfg.seed}, worst_t, 1e-10, 0)
    out.add(cfg, "circle_conformal", {"samples": 200, "seed": cfg.seed}, worst_d, 1e-10, 0)
    return out


SUITES: dict[str, Callable[[SuiteConfig], SuiteResult]] = {
    "spectral": suite_spectral,
    "gagliardo": suite_gagliardo,
    "divgrad": suite_divgrad,
    "commutator": suite_commutator,
    "noether": suite_noether,
    "hopf": suite_hopf,
    "pohozaev": suite_pohozaev,
    "circle-pohozaev": suite_circle_pohozaev,
}

DESCRIPTIONS: dict[str, str] = {
    "spectral": (
        "Fourier multiplier |k|^{2s} on pure modes for s in {1/4, 1/2, 1} (tol 1e-12 relative);\n"
        "H^2 = -(identity minus mean) and Hu' = (Hu)' = (-Δ)^{1/2}u (tol 1e-12);\n"
        "pointwise principal value vs multiplier, degree 8, 4096 nodes (tol 1e-6)."
    ),
    "gagliardo": (
        "Anchor: circle Gagliardo seminorm with constant \"1/(4(2π)²)\",\n"
        "(1/(4(2π)²)) ∬ |u(x)-u(y)|²/sin²((x-y)/2) dx dy = Σ_k |k| |û(k)|², checked on 20 random\n"
        "trig polynomials at 1024 nodes (tol 1e-5 relative)."
    ),
    "divgrad": (
        "Anchor: \"the constant introduced in\", (-Δ)^s u = (C_{1,s}/2) div_s d_s u on the line,\n"
        "s in {1/4, 1/2} on smooth bumps (tol 1e-3 relative); C_{1,1/2} = 1/π (tol 1e-12);\n"
        "explicit (-Δ)^{1/2} sqrt(1-x²) = 1 for |x| <= 0.9 (tol 1e-4)."
    ),
    "commutator": (
        "Anchor: \"div_s(a(x)·b(y)) = b·(-Δ)^s a - a·(-Δ)^s b\" and the extended pairing ∫ G_{a,φ} b\n"
        "with G_{w,φ} = φ(-Δ)^s w - (-Δ)^s(wφ); worked example -π/2 (tol 1e-10);\n"
        "kernel quadrature cross-check at 4096 nodes (tol 1e-4)."
    ),
    "noether": (
        "Anchor: \"div_{1/2}(Ω_ik) = 0\" and \"(-Δ)^{1/2}u ∧ u = 0\" for sphere-valued maps;\n"
        "divergence tested against the modes 1, cos kθ, sin kθ, k <= 2N (tol 1e-12);\n"
        "sphere representation with the kernel K^{1/2} at 4096 nodes (tol 1e-4)."
    ),
    "hopf": (
        "Anchor: Fourier criterion, u is a \"stationary point of E if and only if\" ℋ(k) = 0 for all k;\n"
        "max |ℋ(k)| <= 1e-10·max(1, [u]²); H^{-3} bound \"(π²/3)[u]⁴\";\n"
        "conformality of the harmonic extension for r <= 0.99 (tol 1e-8)."
    ),
    "pohozaev": (
        "Anchor: \"Assume that u²∈C²([a,b])\"; for (-Δ)^{1/2}u = f(u) on (a,b), u = 0 outside,\n"
        "∫ x u'(-Δ)^{1/2}u = (π/8)(ℓ_a a - ℓ_b b) and ∫ u'(-Δ)^{1/2}u = (π/8)(ℓ_a - ℓ_b) (tol 1e-3);\n"
        "eigenrelation gate for the weighted Chebyshev basis (tol 1e-3); boundary limits (tol 1e-4);\n"
        "exterior blow-up -(α_b/2)(x-b)^{-1/2} with α_b = sqrt(ℓ_b) (tol 1e-3)."
    ),
    "circle-pohozaev": (
        "Anchor: \"traces of automorphisms of D²\"; ∫ u'·(-Δ)^{1/2}u = 0 and\n"
        "∫ u'·(-Δ)^{1/2}u sin(x-δ) = 0 for 200 random trig polynomials (tol 1e-10, scaled by [u]²)."
    ),
}


# ------------------------------------------------------------- reporting


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def render(reports: list[VerificationReport], fmt: str) -> str:
    rows = [r.to_dict() for r in reports]
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "params", "residual", "tolerance", "pass", "resolution"])
    for r in rows:
        w.writerow([r["check"], json.dumps(r["params"], sort_keys=True), r["residual"], r["tolerance"], r["pass"], r["resolution"]])
    return buf.getvalue()


def run_suite(cfg: SuiteConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if cfg.suite not in SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    result = SUITES[cfg.suite](cfg)
    text = render(result.reports, cfg.fmt)
    stdout.write(text)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / f"{cfg.suite}.{cfg.fmt}").write_text(text)
        for name, body in result.artifacts.items():
            (cfg.out / f"{cfg.suite}_{name}").write_text(body)
    return 0 if all(r.passed for r in result.reports) else 1


# ------------------------------------------------------------------ args


def _interval(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from exc
    if not a < b:
        raise argparse.ArgumentTypeError("interval needs a < b")
    return a, b


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fracverify", description="Verification suites for fractional-calculus identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--resolution", type=int, default=_env("resolution"))
    v.add_argument("--tolerance", type=float, default=_env("tolerance"))
    v.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    v.add_argument("--out", type=Path, default=_env("out"))
    v.add_argument("--format", dest="fmt", choices=["json", "csv"], default=_env("format", "json"))
    v.add_argument("--map", dest="map_name", choices=MAPS, default=_env("map", "circle-identity"))
    v.add_argument("--pairs", default=_env("pairs", "all"))
    v.add_argument("--f", default=_env("f", "const1"))
    v.add_argument("--interval", type=_interval, default=_env("interval", "-1,1"))
    v.add_argument("--input", type=Path, default=_env("input"), help="CircleFunction JSON (noether, hopf) or solution JSON (pohozaev)")
    d = sub.add_parser("describe", help="print the anchors and tolerances of a suite")
    d.add_argument("suite")
    return p


def _glue_negative(argv: list[str]) -> list[str]:
    """Rewrite ``--interval -1,1`` as ``--interval=-1,1`` so argparse keeps the value."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--interval":
            nxt = next(it, None)
            if nxt is not None and nxt[:1] == "-" and nxt[1:2] in set("0123456789."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
        if args.command == "describe":
            if args.suite not in DESCRIPTIONS:
                raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
            print(f"{args.suite}\n{DESCRIPTIONS[args.suite]}")
            return 0
        interval = args.interval if isinstance(args.interval, tuple) else _interval(args.interval)
        try:
            Nonlinearity.parse(args.f)
        except (ValueError, SyntaxError) as exc:
            raise UsageError(f"cannot parse --f {args.f!r}: {exc}") from exc
        cfg = SuiteConfig(
            suite=args.suite,
            resolution=None if args.resolution is None else int(args.resolution),
            tolerance=None if args.tolerance is None else float(args.tolerance),
            seed=int(args.seed),
            out=None if args.out is None else Path(args.out),
            fmt=args.fmt,
            map_name=args.map_name,
            pairs=args.pairs,
            f=args.f,
            interval=interval,
            input=None if args.input is None else Path(args.input),
        )
        return run_suite(cfg)
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"fracverify: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
