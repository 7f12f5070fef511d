"""Channel weights from total-variation-smoothed gradient magnitudes.

An auxiliary copy of the input is smoothed channel-wise by explicit TV flow
(epsilon-regularized), and the per-channel weights are the Gaussian-smoothed
gradient magnitudes of that copy, normalized pixel-wise to sum to 1.
"""

from dataclasses import dataclass

import numpy as np

from .fdcalc import gaussian_convolve, gradient
from .image import PlanarImage

_DENOM_FLOOR = 1e-12  # below this the weights fall back to (1/3, 1/3, 1/3)


@dataclass(frozen=True)
class TvConfig:
    """TV-flow and weight-smoothing parameters.

    The explicit step is stable only while dt <= epsilon / 4: the flux slope
    at zero gradient is 1/epsilon and the divergence stencil contributes a
    factor of 8.  The defaults keep that margin; shrinking epsilon without
    shrinking dt makes flat regions oscillate instead of smoothing.
    """

    iterations: int = 50
    dt: float = 0.1
    epsilon: float = 0.5
    rho: float = 2.0

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations}")
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")


@dataclass(frozen=True)
class WeightField:
    """Per-pixel channel weights, shape (3, H, W); each pixel sums to 1."""

    data: np.ndarray


def _tv_step(u, dt, epsilon):
    # forward-difference gradient (zero on the far edge), flux limited by
    # the regularized magnitude, then the exact negative-adjoint divergence
    gx = np.diff(u, axis=1, append=u[:, -1:])
    gy = np.diff(u, axis=0, append=u[-1:, :])
    mag = np.sqrt(gx * gx + gy * gy + epsilon * epsilon)
    px = gx / mag
    py = gy / mag
    div = np.diff(px, axis=1, prepend=0.0) + np.diff(py, axis=0, prepend=0.0)
    return u + dt * div


def tv_smooth(img, cfg):
    """Explicit channel-wise TV flow for cfg.iterations steps of cfg.dt."""
    planes = [img.channel(c).copy() for c in range(img.channels)]
    for _ in range(cfg.iterations):
        planes = [_tv_step(u, cfg.dt, cfg.epsilon) for u in planes]
    return PlanarImage(np.stack(planes))


def discrete_tv(f):
    """Sum of absolute forward differences; the quantity the TV flow shrinks."""
    return float(np.abs(np.diff(f, axis=1)).sum() + np.abs(np.diff(f, axis=0)).sum())


def compute_weights(img_tilde, rho):
    """Per-pixel channel weights from smoothed gradient magnitudes.

    omega_i = |G_rho * ||grad U~_i||| / sum_j |G_rho * ||grad U~_j|||, with a
    uniform (1/3, 1/3, 1/3) fallback where the denominator underflows.
    """
    if img_tilde.channels != 3:
        raise ValueError("weights need a 3-channel image")
    mags = []
    for c in range(3):
        fx, fy = gradient(img_tilde.channel(c))
        mags.append(np.abs(gaussian_convolve(np.sqrt(fx * fx + fy * fy), rho)))
    mags = np.stack(mags)
    denom = mags.sum(axis=0)
    flat = denom < _DENOM_FLOOR
    w = mags / np.where(flat, 1.0, denom)
    w[:, flat] = 1.0 / 3.0
    return WeightField(w)
