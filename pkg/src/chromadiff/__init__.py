"""Color image denoising by edge-coupled vector diffusion.

The pipeline: a TV-flow pass on the noisy input yields per-channel weight
maps; every diffusion step then drives each channel by a shared structure
tensor and exchanges detail between channels through a weighted-Laplacian
coupling term.  PSNR and mean SSIM metrics plus a benchmark CLI round out
the package.
"""

from .diffusion import (
    DiffusionConfig,
    DivergenceError,
    SchemeKind,
    coupling_field,
    coupling_term,
    denoise,
    diffusion_tensor,
    prepare_weights,
    trace_step_field,
)
from .fdcalc import (
    BoundaryRule,
    gaussian_convolve,
    gaussian_kernel,
    gradient,
    hessian,
    laplacian,
)
from .image import (
    RNG_ALGORITHM,
    FormatError,
    PlanarImage,
    add_gaussian_noise,
    load,
    save,
)
from .metrics import SSIM_WINDOW, QualityReport, evaluate, mse, mssim, psnr, ssim_map
from .structure import (
    StructureField,
    TensorField,
    build_tensor,
    edge_stopping,
    eigen_decompose,
    multigradient,
)
from .weights import TvConfig, WeightField, compute_weights, discrete_tv, tv_smooth

__all__ = [
    "BoundaryRule",
    "DiffusionConfig",
    "DivergenceError",
    "FormatError",
    "PlanarImage",
    "QualityReport",
    "RNG_ALGORITHM",
    "SSIM_WINDOW",
    "SchemeKind",
    "StructureField",
    "TensorField",
    "TvConfig",
    "WeightField",
    "add_gaussian_noise",
    "build_tensor",
    "compute_weights",
    "coupling_field",
    "coupling_term",
    "denoise",
    "diffusion_tensor",
    "discrete_tv",
    "edge_stopping",
    "eigen_decompose",
    "evaluate",
    "gaussian_convolve",
    "gaussian_kernel",
    "gradient",
    "hessian",
    "laplacian",
    "load",
    "mse",
    "mssim",
    "multigradient",
    "prepare_weights",
    "psnr",
    "save",
    "ssim_map",
    "trace_step_field",
    "tv_smooth",
]
