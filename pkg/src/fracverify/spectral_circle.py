"""Fourier-series core on the circle S¹ = ℝ / 2πℤ.

Coefficients follow û(k) = (1/2π) ∫ u(x) e^{-ikx} dx, so that
u(x) = Σ_k û(k) e^{ikx} and ‖u‖²_{L²} = 2π Σ_k |û(k)|².

A :class:`CircleFunction` stores a dense block of coefficients for
k = -N..N and m real components. Bandwidth never grows silently: products
that need more modes raise :class:`BandwidthError` unless the caller asks for
the larger bandwidth explicitly.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .kernels import TWO_PI, circle_kernel, navot_correction, riesz_constant, wrap_angle

DEFAULT_PV_RESOLUTION = 4096
DEFAULT_GAGLIARDO_RESOLUTION = 1024
REALITY_TOL = 1e-12


class BandwidthError(ValueError):
    """Raised when a result needs more Fourier modes than the caller allowed."""

    def __init__(self, required: int, allowed: int):
        super().__init__(f"result needs bandwidth {required}, caller allowed {allowed}")
        self.required = required
        self.allowed = allowed


@dataclass(frozen=True)
class CircleFunction:
    """Truncated Fourier representation of an ℝ^m-valued function on S¹.

    ``coeffs`` has shape (m, 2N+1) with column ``k + N`` holding û(k).
    """

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=complex, copy=True)
        if c.ndim == 1:
            c = c[None, :]
        if c.ndim != 2 or c.shape[1] % 2 != 1 or c.shape[0] < 1:
            raise ValueError(f"coeffs must have shape (m, 2N+1), got {c.shape}")
        scale = max(1.0, float(np.abs(c).max(initial=0.0)))
        if np.abs(c - np.conj(c[:, ::-1])).max(initial=0.0) > REALITY_TOL * scale:
            raise ValueError("coefficients violate the reality constraint û(-k) = conj(û(k))")
        # remove rounding asymmetry so downstream values are exactly real
        c = 0.5 * (c + np.conj(c[:, ::-1]))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return (self.coeffs.shape[1] - 1) // 2

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def mode(self, k: int) -> np.ndarray:
        """Coefficient vector û(k) over components (zero outside the band)."""
        if abs(k) > self.N:
            return np.zeros(self.m, dtype=complex)
        return self.coeffs[:, k + self.N].copy()

    def component(self, j: int) -> "CircleFunction":
        return CircleFunction(self.coeffs[j : j + 1])

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        """Values at angles ``x``; shape (len(x), m)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        phase = np.exp(1j * np.outer(x, self.wavenumbers))
        return (phase @ self.coeffs.T).real

    def derivative(self, order: int = 1) -> "CircleFunction":
        return CircleFunction(self.coeffs * (1j * self.wavenumbers) ** order)

    def with_bandwidth(self, N: int) -> "CircleFunction":
        """Zero-pad to a larger band, or drop modes that are exactly zero."""
        if N >= self.N:
            pad = N - self.N
            return CircleFunction(np.pad(self.coeffs, ((0, 0), (pad, pad))))
        cut = self.N - N
        dropped = np.concatenate([self.coeffs[:, :cut], self.coeffs[:, -cut:]], axis=1)
        if np.any(dropped != 0):
            raise BandwidthError(self.effective_bandwidth(), N)
        return CircleFunction(self.coeffs[:, cut:-cut])

    def effective_bandwidth(self, tol: float = 0.0) -> int:
        nz = np.nonzero(np.abs(self.coeffs).max(axis=0) > tol)[0]
        if nz.size == 0:
            return 0
        return int(np.abs(self.wavenumbers[nz]).max())

    def shifted(self, delta: float) -> "CircleFunction":
        """The function θ ↦ u(θ + δ)."""
        return CircleFunction(self.coeffs * np.exp(1j * self.wavenumbers * delta))

    def __add__(self, other: "CircleFunction") -> "CircleFunction":
        N = max(self.N, other.N)
        return CircleFunction(self.with_bandwidth(N).coeffs + other.with_bandwidth(N).coeffs)

    def __sub__(self, other: "CircleFunction") -> "CircleFunction":
        return self + (-1.0) * other

    def __mul__(self, c: float) -> "CircleFunction":
        if not np.isscalar(c) or np.iscomplexobj(c):
            raise TypeError("use multiply() for pointwise products; scalars must be real")
        return CircleFunction(self.coeffs * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "CircleFunction":
        return self * -1.0

    def to_json(self) -> str:
        comps = [[[float(z.real), float(z.imag)] for z in row] for row in self.coeffs]
        return json.dumps({"N": self.N, "m": self.m, "coeffs": comps})

    @classmethod
    def from_json(cls, text: str) -> "CircleFunction":
        data = json.loads(text)
        arr = np.array(data["coeffs"], dtype=float)
        c = arr[..., 0] + 1j * arr[..., 1]
        if c.shape != (data["m"], 2 * data["N"] + 1):
            raise ValueError("coefficient block does not match declared N and m")
        return cls(c)

    def to_csv(self, resolution: int) -> str:
        theta = uniform_grid(resolution)
        vals = self.evaluate(theta)
        header = ",".join(["theta"] + [f"u_{j + 1}" for j in range(self.m)])
        rows = [",".join(f"{v:.17g}" for v in (t, *row)) for t, row in zip(theta, vals)]
        return "\n".join([header, *rows]) + "\n"


def uniform_grid(P: int) -> np.ndarray:
    return TWO_PI * np.arange(P) / P


def from_modes(modes: dict[int, Sequence[complex]], m: int | None = None, N: int | None = None) -> CircleFunction:
    """Build a real function from its nonnegative modes; û(-k) is filled by conjugation."""
    if not modes:
        raise ValueError("at least one mode is required")
    vecs = {k: np.atleast_1d(np.asarray(v, dtype=complex)) for k, v in modes.items()}
    m = m or len(next(iter(vecs.values())))
    kmax = max(abs(k) for k in vecs)
    N = kmax if N is None else N
    c = np.zeros((m, 2 * N + 1), dtype=complex)
    for k, v in vecs.items():
        if k < 0:
            raise ValueError("give nonnegative wavenumbers only")
        if k == 0:
            c[:, N] = v.real
        else:
            c[:, N + k] = v
            c[:, N - k] = np.conj(v)
    return CircleFunction(c)


def trig(cos: dict[int, float] | None = None, sin: dict[int, float] | None = None, const: float = 0.0) -> CircleFunction:
    """Scalar trig polynomial const + Σ a_k cos kθ + Σ b_k sin kθ."""
    modes: dict[int, complex] = {0: const}
    for k, a in (cos or {}).items():
        modes[k] = modes.get(k, 0.0) + a / 2
    for k, b in (sin or {}).items():
        modes[k] = modes.get(k, 0.0) - 0.5j * b
    return from_modes({k: [v] for k, v in modes.items()})


def stack(funcs: Sequence[CircleFunction]) -> CircleFunction:
    """Concatenate components of several functions into one ℝ^m-valued map."""
    N = max(f.N for f in funcs)
    return CircleFunction(np.vstack([f.with_bandwidth(N).coeffs for f in funcs]))


def random_trig_polynomial(rng: np.random.Generator, degree: int, m: int = 1, N: int | None = None) -> CircleFunction:
    """Trig polynomial with standard normal coefficients up to ``degree``."""
    N = degree if N is None else N
    c = np.zeros((m, 2 * N + 1), dtype=complex)
    pos = rng.standard_normal((m, degree)) + 1j * rng.standard_normal((m, degree))
    c[:, N] = rng.standard_normal(m)
    c[:, N + 1 : N + degree + 1] = pos
    c[:, N - degree : N][:, ::-1] = np.conj(pos)
    return CircleFunction(c)


def analyze(samples: ArrayLike, N: int) -> CircleFunction:
    """Fourier coefficients k = -N..N from samples on the grid 2πj/P."""
    vals = np.asarray(samples, dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    P = vals.shape[0]
    if P < 2 * N + 1:
        raise ValueError(f"grid of {P} points cannot resolve bandwidth {N}; need at least {2 * N + 1}")
    fk = np.fft.fft(vals, axis=0) / P
    idx = np.arange(-N, N + 1) % P
    return CircleFunction(fk[idx].T)


def synthesize(u: CircleFunction, P: int) -> np.ndarray:
    """Samples on the grid 2πj/P; shape (P, m)."""
    return u.evaluate(uniform_grid(P))


def fractional_laplacian_circle(u: CircleFunction, s: float) -> CircleFunction:
    """Multiplier |k|^{2s}, s in (0, 1]."""
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    return CircleFunction(u.coeffs * np.abs(u.wavenumbers) ** (2.0 * s))


def hilbert_transform(u: CircleFunction) -> CircleFunction:
    """Multiplier -i sgn(k)."""
    return CircleFunction(u.coeffs * (-1j * np.sign(u.wavenumbers)))


def multiply(u: CircleFunction, v: CircleFunction, bandwidth: int | None = None) -> CircleFunction:
    """Pointwise product, componentwise (one factor may be scalar).

    The exact product has bandwidth N_u + N_v. ``bandwidth`` defaults to that
    value; a smaller value is accepted only if no nonzero mode is lost.
    """
    if u.m != v.m and 1 not in (u.m, v.m):
        raise ValueError(f"component mismatch: {u.m} vs {v.m}")
    m = max(u.m, v.m)
    cu = np.broadcast_to(u.coeffs, (m, u.coeffs.shape[1]))
    cv = np.broadcast_to(v.coeffs, (m, v.coeffs.shape[1]))
    prod = CircleFunction(np.array([np.convolve(a, b) for a, b in zip(cu, cv)]))
    if bandwidth is None:
        return prod
    try:
        return prod.with_bandwidth(bandwidth)
    except BandwidthError as err:
        raise BandwidthError(err.required, bandwidth) from None


def dot(u: CircleFunction, v: CircleFunction, bandwidth: int | None = None) -> CircleFunction:
    """Pointwise Euclidean dot product u·v as a scalar function."""
    p = multiply(u, v, bandwidth)
    return CircleFunction(p.coeffs.sum(axis=0, keepdims=True))


def integrate(u: CircleFunction) -> np.ndarray:
    """∫_{S¹} u per component."""
    return TWO_PI * u.coeffs[:, u.N].real


def inner(u: CircleFunction, v: CircleFunction) -> float:
    """∫_{S¹} u·v via Parseval."""
    N = max(u.N, v.N)
    a, b = u.with_bandwidth(N).coeffs, v.with_bandwidth(N).coeffs
    return float(TWO_PI * np.sum(a * np.conj(b)).real)


@dataclass(frozen=True)
class DiskFunction:
    """Samples of the harmonic extension ũ(r_i, θ_j); ``values`` has shape (nr, nθ, m)."""

    radii: np.ndarray
    angles: np.ndarray
    values: np.ndarray
    source: CircleFunction = field(repr=False)

    def _slice_coeffs(self) -> np.ndarray:
        k = np.abs(self.source.wavenumbers)
        return self.radii[:, None, None] ** k[None, None, :] * self.source.coeffs[None]

    def _synth(self, coeffs: np.ndarray) -> np.ndarray:
        phase = np.exp(1j * np.outer(self.angles, self.source.wavenumbers))
        return np.einsum("tk,rmk->rtm", phase, coeffs).real

    def radial_derivative(self) -> np.ndarray:
        k = np.abs(self.source.wavenumbers)
        r = self.radii[:, None, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            fac = np.where(k == 0, 0.0, k * r ** np.maximum(k - 1, 0))
        return self._synth(fac * self.source.coeffs[None])

    def angular_derivative(self) -> np.ndarray:
        return self._synth(self._slice_coeffs() * (1j * self.source.wavenumbers))


def poisson_kernel(r: float, theta: ArrayLike) -> np.ndarray:
    """P_r(θ) = (1 - r²) / (1 - 2r cos θ + r²), normalised so (1/2π)∫P_r = 1."""
    theta = np.asarray(theta, dtype=float)
    return (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(theta) + r * r)


def poisson_extend(u: CircleFunction, radii: ArrayLike, angles: ArrayLike) -> DiskFunction:
    """Harmonic extension: slice r has coefficients r^{|k|} û(k)."""
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if np.any((radii <= 0.0) | (radii >= 1.0)):
        raise ValueError("radii must lie in (0, 1)")
    disk = DiskFunction(radii, angles, np.empty(0), u)
    vals = disk._synth(disk._slice_coeffs())
    return DiskFunction(radii, angles, vals, u)


SeminormKind = Literal["sobolev", "gagliardo_half", "wiener_1", "wiener_3half"]


@dataclass(frozen=True)
class SeminormValue:
    kind: str
    value: float


def seminorm(u: CircleFunction, kind: SeminormKind, s: float = 0.5) -> SeminormValue:
    """Homogeneous seminorms; ``s`` is used by the ``sobolev`` kind only."""
    k = np.abs(u.wavenumbers).astype(float)
    mod = np.abs(u.coeffs)
    if kind == "sobolev":
        val = np.sqrt(np.sum(k ** (2 * s) * mod**2 * (k > 0)))
        return SeminormValue(f"sobolev({s:g})", float(val))
    if kind == "wiener_1":
        return SeminormValue(kind, float(np.sum(k * mod)))
    if kind == "wiener_3half":
        return SeminormValue(kind, float(np.sum(k**1.5 * mod)))
    if kind == "gagliardo_half":
        q = gagliardo_seminorm_quadrature(u)
        return SeminormValue(kind, float(np.sqrt(max(q.value, 0.0))))
    raise ValueError(f"unknown seminorm kind {kind!r}")


@dataclass(frozen=True)
class QuadratureResult:
    """A quadrature value together with the resolution that produced it."""

    value: float | np.ndarray
    resolution: int
    warning: str | None = None


def gagliardo_seminorm_quadrature(u: CircleFunction, resolution: int = DEFAULT_GAGLIARDO_RESOLUTION) -> QuadratureResult:
    """(1/(4(2π)²)) ∬ |u(x) - u(y)|² / sin²((x-y)/2) dx dy by tensor trapezoid.

    The integrand extends smoothly to the diagonal with value 4|u'(x)|², and it
    is a trig polynomial of degree < 2N+1 in each variable, so the rule is exact
    once resolution exceeds 2N.
    """
    P = int(resolution)
    h = TWO_PI / P
    U = synthesize(u, P)
    D = synthesize(u.derivative(), P)
    total = 4.0 * np.sum(D**2)
    for j in range(1, P // 2 + 1):
        diff = np.sum((np.roll(U, -j, axis=0) - U) ** 2)
        w = diff / np.sin(0.5 * j * h) ** 2
        total += w if (2 * j == P) else 2.0 * w
    value = total * h * h / (4.0 * TWO_PI**2)
    warn = None
    if P <= 2 * u.N:
        warn = f"resolution {P} does not exceed 2N = {2 * u.N}; quadrature is not exact"
        warnings.warn(warn, RuntimeWarning, stacklevel=2)
    return QuadratureResult(float(value), P, warn)


def pv_fraclap_circle(u: CircleFunction, s: float, x: float, resolution: int = DEFAULT_PV_RESOLUTION) -> QuadratureResult:
    """Principal value ∫ (u(x) - u(y)) K^s(x - y) dy at one angle.

    Nodes y = x + jh, j ≠ 0. Odd parts cancel on the symmetric grid. The even
    part behaves like |t|^{1-2s} near the excluded node, and the resulting
    O(h^{2-2s}) defect is removed with the generalised Euler-Maclaurin term
    built from the Riesz part of the kernel.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    ux = u.evaluate([x])[0]
    value = circle_pv(lambda t: ux[None, :] - u.evaluate(x + t), s, resolution)
    return QuadratureResult(value, int(resolution))


def circle_pv(numerator: Callable[[np.ndarray], np.ndarray], s: float, resolution: int = DEFAULT_PV_RESOLUTION) -> np.ndarray:
    """PV ∫ n(t) K^s(t) dt over S¹ for a smooth numerator n with n(0) = 0.

    ``numerator`` maps an array of offsets t to values of shape (len(t), ...).
    """
    P = int(resolution)
    h = TWO_PI / P
    t = wrap_angle(h * np.arange(1, P))
    vals = np.asarray(numerator(t), dtype=float)
    kern = circle_kernel(s, t).reshape((-1,) + (1,) * (vals.ndim - 1))
    trap = h * np.sum(vals * kern, axis=0)
    J = 4
    tj = h * np.arange(1, J + 1)
    even = 0.5 * (np.asarray(numerator(tj)) + np.asarray(numerator(-tj)))
    S = riesz_constant(s) * even / tj.reshape((-1,) + (1,) * (even.ndim - 1)) ** 2
    return trap - navot_correction(S, 1.0 - 2.0 * s, h)
