"""The ½-fractional Hopf differential of a map u: S¹ → ℝ^m.

With v = (-Δ)^{1/2} u and v₊ its positive-frequency part, ℋ(u) = v₊ · v₊
(bilinear, no conjugation). On coefficients

    ℋ(k) = Σ_{a+b=k, a,b ≥ 1} a û(a) · b û(b),   k = 1..2N,

and u is a stationary point of the half Dirichlet energy iff ℋ ≡ 0, which in
turn is equivalent to conformality of the harmonic extension ũ in the disk.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .spectral_circle import CircleFunction, poisson_extend, seminorm

DEFAULT_TAU = 1e-10


@dataclass(frozen=True)
class HopfCoefficients:
    """ℋ(k) for k = 1..2N; ``values[k - 1]`` holds ℋ(k)."""

    values: np.ndarray
    N: int

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, self.values.size + 1)

    def evaluate(self, theta: ArrayLike) -> np.ndarray:
        """The distribution Σ_k ℋ(k) e^{ikθ} as a function."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        return np.exp(1j * np.outer(theta, self.k)) @ self.values

    def to_csv(self) -> str:
        rows = [f"{k},{z.real:.17g},{z.imag:.17g}" for k, z in zip(self.k, self.values)]
        return "\n".join(["k,re,im", *rows]) + "\n"


def hopf_coefficients(u: CircleFunction) -> HopfCoefficients:
    N = u.N
    if N == 0:
        return HopfCoefficients(np.zeros(0, dtype=complex), 0)
    k = np.arange(1, N + 1)
    pos = u.coeffs[:, N + 1 :] * k[None, :]
    vals = np.zeros(2 * N, dtype=complex)
    for row in pos:
        conv = np.convolve(row, row)  # index j ↔ wavenumber j + 2
        vals[1:] += conv
    return HopfCoefficients(vals, N)


def hopf_hminus3_norm(H: HopfCoefficients) -> float:
    """(Σ_k |ℋ(k)|² (1 + k²)^{-3})^{1/2}."""
    return float(np.sqrt(np.sum(np.abs(H.values) ** 2 * (1.0 + H.k.astype(float) ** 2) ** -3)))


def hopf_bound(u: CircleFunction) -> float:
    """(π²/3) [u]⁴_{Ḣ^{1/2}}, the bound on the squared H^{-3} norm."""
    return np.pi**2 / 3.0 * seminorm(u, "sobolev", 0.5).value ** 4


@dataclass(frozen=True)
class StationarityVerdict:
    passed: bool
    max_abs: float
    argmax_k: int
    tau: float


def is_stationary(u: CircleFunction, tau: float | None = None) -> StationarityVerdict:
    """Pass iff max_k |ℋ(k)| ≤ τ; default τ = 1e-10 · max(1, [u]²_{Ḣ^{1/2}})."""
    if tau is None:
        tau = DEFAULT_TAU * max(1.0, seminorm(u, "sobolev", 0.5).value ** 2)
    if tau <= 0:
        raise ValueError("τ must be positive")
    H = hopf_coefficients(u)
    if H.values.size == 0:
        return StationarityVerdict(True, 0.0, 0, tau)
    mags = np.abs(H.values)
    j = int(np.argmax(mags))
    return StationarityVerdict(bool(mags[j] <= tau), float(mags[j]), j + 1, tau)


@dataclass(frozen=True)
class ConformalityReport:
    orthogonality: float
    modulus: float
    radii: np.ndarray
    angles: np.ndarray


def conformality_report(u: CircleFunction, radii: ArrayLike, angles: ArrayLike) -> ConformalityReport:
    """sup |∂_θũ · ∂_rũ| and sup ||∂_θũ|/r - |∂_rũ|| over the polar grid."""
    disk = poisson_extend(u, radii, angles)
    dr = disk.radial_derivative()
    dth = disk.angular_derivative()
    orth = np.abs(np.sum(dr * dth, axis=2))
    r = disk.radii[:, None]
    mod = np.abs(np.linalg.norm(dth, axis=2) / r - np.linalg.norm(dr, axis=2))
    return ConformalityReport(float(orth.max()), float(mod.max()), disk.radii, disk.angles)
