"""Finite-difference operators and separable Gaussian smoothing on 2-D scalar fields.

All stencils use the mirror (Neumann) boundary rule a(-1) = a(1),
a(W) = a(W-2), i.e. reflection across the edge sample. Grid spacing is 1.
Fields are 2-D float arrays; x is the column axis (axis 1), y the row
axis (axis 0).
"""

import enum

import numpy as np
from scipy.ndimage import convolve1d


class BoundaryRule(enum.Enum):
    """Boundary handling for all stencil reads. Single variant, kept explicit."""

    MIRROR = "mirror"


def _mirror_pad1(f):
    # reflect across the edge sample: pad[-1] = f[1], pad[W] = f[W-2]
    return np.pad(f, 1, mode="reflect")


def gradient(f):
    """Central-difference gradient (f_x, f_y) of a scalar field.

    f_x(i,j) = (f(i,j+1) - f(i,j-1)) / 2, analogously f_y along rows.
    """
    f = np.asarray(f, dtype=np.float64)
    p = _mirror_pad1(f)
    fx = (p[1:-1, 2:] - p[1:-1, :-2]) * 0.5
    fy = (p[2:, 1:-1] - p[:-2, 1:-1]) * 0.5
    return fx, fy


def laplacian(f):
    """5-point Laplacian f(i±1,j) + f(i,j±1) - 4 f(i,j) with mirror boundary."""
    f = np.asarray(f, dtype=np.float64)
    p = _mirror_pad1(f)
    return p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * f


def hessian(f):
    """Second-difference Hessian entries (f_xx, f_xy, f_yy).

    f_xx(i,j) = f(i,j+1) - 2 f(i,j) + f(i,j-1), f_yy analogously;
    f_xy is the 4-point cross central difference divided by 4.
    """
    f = np.asarray(f, dtype=np.float64)
    p = _mirror_pad1(f)
    fxx = p[1:-1, 2:] - 2.0 * f + p[1:-1, :-2]
    fyy = p[2:, 1:-1] - 2.0 * f + p[:-2, 1:-1]
    fxy = (p[2:, 2:] - p[2:, :-2] - p[:-2, 2:] + p[:-2, :-2]) * 0.25
    return fxx, fxy, fyy


def gaussian_kernel(sigma):
    """1-D Gaussian kernel exp(-t^2 / 2 sigma^2), truncated at radius
    ceil(3 sigma) and renormalized to sum exactly 1."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    radius = int(np.ceil(3.0 * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_convolve(f, sigma):
    """Separable Gaussian smoothing with mirror boundary; sigma = 0 is identity."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    f = np.asarray(f, dtype=np.float64)
    if sigma == 0:
        return f.copy()
    k = gaussian_kernel(sigma)
    out = convolve1d(f, k, axis=0, mode="mirror")
    return convolve1d(out, k, axis=1, mode="mirror")
