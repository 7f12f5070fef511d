"""Fidelity metrics on unit-range color images: PSNR and mean SSIM."""

from dataclasses import dataclass

import numpy as np

from .fdcalc import gaussian_convolve

SSIM_WINDOW = "gaussian-11x11-sigma1.5"  # recorded in bench CSV metadata

_K1 = 0.01
_K2 = 0.03
_C1 = _K1 * _K1  # (K1 * L)^2 with L = 1
_C2 = _K2 * _K2
_WINDOW_SIGMA = 1.5


def _check_pair(a, b):
    if a.data.shape != b.data.shape:
        raise ValueError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")


def mse(a, b):
    """Mean over pixels of the squared channel-vector difference.

    Computed on the floating data as-is; out-of-range samples are not
    clipped here (quantization happens only when an image is saved).
    """
    _check_pair(a, b)
    diff = a.data - b.data
    return float((diff * diff).sum() / (a.height * a.width))


def psnr(a, b):
    """10 log10(peak / MSE) in dB, where peak is the channel count.

    Returns +inf when the images agree exactly.
    """
    err = mse(a, b)
    if err == 0.0:
        return float("inf")
    return float(10.0 * np.log10(a.channels / err))


def ssim_map(f, g):
    """Per-pixel SSIM between two scalar planes in [0, 1].

    Local moments use an 11x11 Gaussian window (sigma 1.5) with the same
    mirror boundary as every other stencil here.
    """
    f = np.clip(f, 0.0, 1.0)
    g = np.clip(g, 0.0, 1.0)
    mu_f = gaussian_convolve(f, _WINDOW_SIGMA)
    mu_g = gaussian_convolve(g, _WINDOW_SIGMA)
    var_f = gaussian_convolve(f * f, _WINDOW_SIGMA) - mu_f * mu_f
    var_g = gaussian_convolve(g * g, _WINDOW_SIGMA) - mu_g * mu_g
    cov = gaussian_convolve(f * g, _WINDOW_SIGMA) - mu_f * mu_g
    num = (2.0 * mu_f * mu_g + _C1) * (2.0 * cov + _C2)
    den = (mu_f * mu_f + mu_g * mu_g + _C1) * (var_f + var_g + _C2)
    return num / den


def mssim(a, b):
    """Mean SSIM: per-channel map means, averaged across channels."""
    _check_pair(a, b)
    vals = [ssim_map(a.channel(c), b.channel(c)).mean() for c in range(a.channels)]
    return float(np.mean(vals))


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float
    mssim: float


def evaluate(result, reference):
    return QualityReport(
        mse=mse(result, reference),
        psnr_db=psnr(result, reference),
        mssim=mssim(result, reference),
    )
