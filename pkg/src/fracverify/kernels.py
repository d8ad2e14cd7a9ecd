"""Singular kernels and normalising constants shared by the circle and line code.

Conventions: on the real line

    (-Δ)^s u(x) = C_{1,s} PV ∫ (u(x) - u(y)) / |x - y|^{1+2s} dy,

and on the circle the kernel is the 2π-periodisation of C_{1,s}|z|^{-1-2s},
which reproduces the multiplier |k|^{2s} exactly.
"""
from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gamma, zeta

TWO_PI = 2.0 * np.pi


def riesz_constant(s: float) -> float:
    """Return C_{1,s}, the constant making the singular integral match |ξ|^{2s}.

    Uses C_{1,s} = 4^s Γ(1/2 + s) / (√π |Γ(-s)|) = Γ(1 + 2s) sin(πs) / π,
    which gives exactly 1/π at s = 1/2.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    return float(gamma(1.0 + 2.0 * s) * np.sin(np.pi * s) / np.pi)


def wrap_angle(z: ArrayLike) -> np.ndarray:
    """Map angles to (-π, π]."""
    z = np.asarray(z, dtype=float)
    w = np.mod(z + np.pi, TWO_PI) - np.pi
    return np.where(w == -np.pi, np.pi, w)


def half_kernel(z: ArrayLike) -> np.ndarray:
    """Circle kernel of (-Δ)^{1/2}: 1 / (4π sin²(z/2))."""
    z = np.asarray(z, dtype=float)
    return 1.0 / (4.0 * np.pi * np.sin(0.5 * z) ** 2)


def circle_kernel(s: float, z: ArrayLike) -> np.ndarray:
    """Exact circle kernel K^s(z) for s in (0, 1), z not a multiple of 2π.

    Periodised Riesz kernel written with the Hurwitz zeta function:
    C_{1,s} (2π)^{-1-2s} [ζ(1+2s, q) + ζ(1+2s, 1-q)] with q = z/2π mod 1.
    """
    z = np.asarray(z, dtype=float)
    if s == 0.5:
        return half_kernel(z)
    q = np.mod(z, TWO_PI) / TWO_PI
    if np.any((q == 0.0)):
        raise ValueError("kernel is singular at z = 0 mod 2π")
    p = 1.0 + 2.0 * s
    return riesz_constant(s) * TWO_PI ** (-p) * (zeta(p, q) + zeta(p, 1.0 - q))


def navot_correction(samples: np.ndarray, beta: float, h: float) -> np.ndarray:
    """Correction for a node-excluding trapezoid sum of |t|^β S(t), S smooth and even.

    ``samples[j-1]`` holds S(j h) for j = 1..J (extra trailing axes allowed).
    The generalised Euler-Maclaurin expansion gives

        h Σ_{j≠0} f(jh) - ∫ f = Σ_m 2 ζ(-β-2m) S_{2m} h^{β+2m+1},

    where S_{2m} are the even Taylor coefficients of S, recovered here by an
    exact polynomial fit in t². The returned value is this difference, so the
    caller subtracts it from the trapezoid sum.
    """
    samples = np.asarray(samples, dtype=float)
    J = samples.shape[0]
    j = np.arange(1, J + 1, dtype=float)
    vander = j[:, None] ** (2.0 * np.arange(J))[None, :]
    flat = samples.reshape(J, -1)
    scaled = np.linalg.solve(vander, flat)  # S_{2m} h^{2m}
    weights = np.array([2.0 * zeta(-beta - 2.0 * m) for m in range(J)])
    weights = np.nan_to_num(weights)
    corr = (weights[:, None] * scaled).sum(axis=0) * h ** (beta + 1.0)
    return corr.reshape(samples.shape[1:])
