"""Multigradient structure tensor, its eigen-decomposition, and the
edge-steered diffusion tensor.

The multigradient K is the Gaussian-smoothed sum over color channels of
gradient outer products. Its eigenvalues give the vector edge indicator
N = sqrt(lambda_plus + lambda_minus); the diffusion tensor smooths with
strength f_minus(N) = (1+N^2)^(-1/2) along edges and
f_plus(N) = (1+N^2)^(-1) across them.
"""

from dataclasses import dataclass

import numpy as np

from .fdcalc import gaussian_convolve, gradient


@dataclass(frozen=True)
class StructureField:
    """Per-pixel eigen-structure of the multigradient.

    lam_plus >= lam_minus >= 0; theta_plus/theta_minus are orthonormal
    2-vectors stored as (H, W, 2) arrays; edge_n = sqrt(lam_plus + lam_minus).
    """

    lam_plus: np.ndarray
    lam_minus: np.ndarray
    theta_plus: np.ndarray
    theta_minus: np.ndarray
    edge_n: np.ndarray


@dataclass(frozen=True)
class TensorField:
    """Per-pixel symmetric positive-definite 2x2 matrices (t11, t12, t22)."""

    t11: np.ndarray
    t12: np.ndarray
    t22: np.ndarray


def multigradient(img, sigma):
    """Smoothed multigradient K = G_sigma * sum_i grad(U_i) grad(U_i)^T.

    Returns the three distinct entries (k11, k12, k22), each smoothed
    independently.
    """
    k11 = k12 = k22 = 0.0
    for c in range(img.channels):
        fx, fy = gradient(img.channel(c))
        k11 = k11 + fx * fx
        k12 = k12 + fx * fy
        k22 = k22 + fy * fy
    return (
        gaussian_convolve(k11, sigma),
        gaussian_convolve(k12, sigma),
        gaussian_convolve(k22, sigma),
    )


def eigen_decompose(k11, k12, k22):
    """Closed-form eigensolve of the per-pixel symmetric 2x2 field.

    lambda_pm = m +- r with m = (k11+k22)/2, r = sqrt(((k11-k22)/2)^2 + k12^2);
    negative roundoff is clamped to 0. Eigenvectors come from the half-angle
    phi = atan2(2 k12, k11 - k22) / 2, which degrades gracefully to
    theta_plus = (1,0), theta_minus = (0,1) for isotropic/zero tensors.
    """
    m = (k11 + k22) * 0.5
    r = np.sqrt(((k11 - k22) * 0.5) ** 2 + k12 * k12)
    lam_plus = np.maximum(m + r, 0.0)
    lam_minus = np.maximum(m - r, 0.0)
    phi = 0.5 * np.arctan2(2.0 * k12, k11 - k22)
    c, s = np.cos(phi), np.sin(phi)
    theta_plus = np.stack([c, s], axis=-1)
    theta_minus = np.stack([-s, c], axis=-1)
    edge_n = np.sqrt(lam_plus + lam_minus)
    return StructureField(lam_plus, lam_minus, theta_plus, theta_minus, edge_n)


def edge_stopping(n):
    """Smoothing strengths (f_minus, f_plus) for edge indicator N."""
    n2 = n * n
    f_minus = 1.0 / np.sqrt(1.0 + n2)
    f_plus = 1.0 / (1.0 + n2)
    return f_minus, f_plus


def build_tensor(s):
    """Diffusion tensor T = f_minus(N) theta_- theta_-^T + f_plus(N) theta_+ theta_+^T."""
    f_minus, f_plus = edge_stopping(s.edge_n)
    px, py = s.theta_plus[..., 0], s.theta_plus[..., 1]
    mx, my = s.theta_minus[..., 0], s.theta_minus[..., 1]
    t11 = f_minus * mx * mx + f_plus * px * px
    t12 = f_minus * mx * my + f_plus * px * py
    t22 = f_minus * my * my + f_plus * py * py
    return TensorField(t11, t12, t22)
