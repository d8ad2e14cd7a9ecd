"""Fractional divergences on the circle for product-form two-point fields.

For a(x) b(y) the s-divergence tested against φ is

    div_s(a(x) b(y))[φ] = ∬ a(x) b(y) (φ(x) - φ(y)) K^s(x - y) dx dy
                        = ∫ (b (-Δ)^s a - a (-Δ)^s b) φ,

and the commutator G_{w,φ} = φ (-Δ)^s w - (-Δ)^s (wφ) gives the extended
pairing ⟨G_{a,φ}, b⟩. Spectral formulas are the primary path; the kernel
integrals are kept as independent validators.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from .kernels import TWO_PI, circle_kernel, navot_correction, riesz_constant, wrap_angle
from .spectral_circle import (
    CircleFunction,
    fractional_laplacian_circle,
    inner,
    multiply,
    synthesize,
)

ABEL_CUTOFF = 1e-16


def _abel_weights(s: float, r: float) -> tuple[np.ndarray, np.ndarray]:
    if not 0.0 < s < 0.5:
        raise ValueError(f"s must lie in (0, 1/2), got {s}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    # r^k k^{2s} < cutoff once k exceeds the point where the log falls below
    kmax = 16
    while kmax * np.log(r) + 2 * s * np.log(kmax) >= np.log(ABEL_CUTOFF):
        kmax *= 2
    k = np.arange(1, kmax + 1, dtype=float)
    w = k ** (2 * s) * r**k
    keep = w >= ABEL_CUTOFF
    return k[keep], w[keep]


def kernel_Ks(s: float, z: ArrayLike, r: float) -> np.ndarray:
    """Abel-regularised kernel -(1/2π) Σ_{k≠0} |k|^{2s} r^{|k|} cos(kz)."""
    z = np.asarray(z, dtype=float)
    if np.any(np.mod(z, TWO_PI) == 0.0):
        raise ValueError("kernel is evaluated away from z = 0 mod 2π")
    k, w = _abel_weights(s, r)
    flat = z.reshape(-1)
    out = np.empty_like(flat)
    chunk = max(1, 2_000_000 // k.size)
    for i in range(0, flat.size, chunk):
        zz = flat[i : i + chunk]
        out[i : i + chunk] = -np.cos(np.outer(zz, k)) @ w / np.pi
    return out.reshape(z.shape)


@dataclass(frozen=True)
class RegularizedKernel:
    """K^s_r on S¹ ∖ {0}; converges to the exact kernel as r → 1."""

    s: float
    r: float

    def __call__(self, z: ArrayLike) -> np.ndarray:
        return kernel_Ks(self.s, z, self.r)

    def on_grid(self, P: int) -> np.ndarray:
        """Kernel at 2πj/P, j = 0..P-1, by folding the series onto P bins."""
        k, w = _abel_weights(self.s, self.r)
        bins = np.zeros(P)
        np.add.at(bins, k.astype(int) % P, w)
        np.add.at(bins, (-k.astype(int)) % P, w)
        return -np.fft.fft(bins).real / TWO_PI

    def bracketing(self, z_min: float = 0.1, z_max: float = np.pi, samples: int = 256) -> tuple[float, float]:
        """Best constants b, B with b ≤ K |sin(z/2)|^{1+2s} ≤ B on [z_min, z_max]."""
        z = np.linspace(z_min, z_max, samples)
        ratio = self(z) * np.abs(np.sin(0.5 * z)) ** (1.0 + 2.0 * self.s)
        return float(ratio.min()), float(ratio.max())


def div_s_product(a: CircleFunction, b: CircleFunction, s: float, phi: CircleFunction, bandwidth: int | None = None) -> float:
    """∫ (b (-Δ)^s a - a (-Δ)^s b) φ computed on coefficients.

    ``bandwidth`` caps the products b (-Δ)^s a and a (-Δ)^s b; a cap below
    N_a + N_b raises :class:`BandwidthError` if modes would be lost.
    """
    _check_scalar(a, b, phi)
    la = fractional_laplacian_circle(a, s)
    lb = fractional_laplacian_circle(b, s)
    integrand = multiply(b, la, bandwidth) - multiply(a, lb, bandwidth)
    return inner(integrand, phi)


@dataclass(frozen=True)
class CommutatorResult:
    G: CircleFunction
    w: CircleFunction = field(repr=False)
    phi: CircleFunction = field(repr=False)
    s: float


def commutator_G(w: CircleFunction, phi: CircleFunction, s: float, bandwidth: int | None = None) -> CommutatorResult:
    """G_{w,φ} = φ (-Δ)^s w - (-Δ)^s (wφ)."""
    if not 0.0 < s <= 0.5:
        raise ValueError(f"s must lie in (0, 1/2], got {s}")
    _check_scalar(w, phi)
    G = multiply(phi, fractional_laplacian_circle(w, s), bandwidth) - fractional_laplacian_circle(
        multiply(w, phi, bandwidth), s
    )
    return CommutatorResult(G, w, phi, s)


def div_extended_pair(a: CircleFunction, b: CircleFunction, s: float, phi: CircleFunction) -> float:
    """⟨G_{a,φ}, b⟩."""
    return inner(commutator_G(a, phi, s).G, b)


def commutator_G_quadrature(w: CircleFunction, phi: CircleFunction, s: float, resolution: int = 4096) -> np.ndarray:
    """Kernel integral ∫ w(x) (φ(x) - φ(y)) K^s(x - y) dx at the grid points y_i.

    Both trapezoid sums are circular convolutions with the kernel, done by FFT.
    The node x = y is excluded and the even-part defect is corrected as in
    :func:`fracverify.spectral_circle.circle_pv`.
    """
    _check_scalar(w, phi)
    P = int(resolution)
    h = TWO_PI / P
    W = synthesize(w, P)[:, 0]
    F = synthesize(phi, P)[:, 0]
    K = np.zeros(P)
    K[1:] = circle_kernel(s, wrap_angle(h * np.arange(1, P)))
    fk = np.fft.fft(K)
    conv = lambda v: np.fft.ifft(fk * np.fft.fft(v)).real  # noqa: E731
    trap = h * (conv(W * F) - F * conv(W))
    J = 4
    tj = h * np.arange(1, J + 1)
    even = np.empty((J, P))
    for j in range(1, J + 1):
        plus = np.roll(W, -j) * (np.roll(F, -j) - F)
        minus = np.roll(W, j) * (np.roll(F, j) - F)
        even[j - 1] = 0.5 * (plus + minus)
    S = riesz_constant(s) * even / tj[:, None] ** 2
    return trap - navot_correction(S, 1.0 - 2.0 * s, h)


def div_product_quadrature(a: CircleFunction, b: CircleFunction, s: float, phi: CircleFunction, resolution: int = 4096) -> float:
    """∬ a(x) b(y) (φ(x) - φ(y)) K^s(x - y) dx dy from the kernel integral."""
    P = int(resolution)
    G = commutator_G_quadrature(a, phi, s, P)
    B = synthesize(b, P)[:, 0]
    return float(TWO_PI / P * np.sum(G * B))


def _check_scalar(*funcs: CircleFunction) -> None:
    for f in funcs:
        if f.m != 1:
            raise ValueError("product-form divergences take scalar functions")
