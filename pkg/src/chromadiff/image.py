"""Image container, PNG/PPM I/O, and seeded Gaussian noise injection.

Images are stored planar: a (channels, height, width) float64 array of
intensities, normalized to [0,1] on load. Channel count is 3 for color
work; single-channel images are permitted as intermediates.
"""

from dataclasses import dataclass

import numpy as np
from PIL import Image as _PILImage

RNG_ALGORITHM = "numpy-philox4x64"  # recorded in bench CSV metadata


class FormatError(ValueError):
    """Unsupported image format property (bit depth, colorspace, magic)."""


@dataclass(frozen=True)
class PlanarImage:
    """An image as per-channel planar scalar grids, shape (channels, H, W)."""

    data: np.ndarray

    def __post_init__(self):
        d = self.data
        if d.ndim != 3 or d.shape[0] not in (1, 3):
            raise ValueError(f"expected (channels, H, W) with 1 or 3 channels, got shape {d.shape}")
        if d.shape[1] < 3 or d.shape[2] < 3:
            raise ValueError(f"image must be at least 3x3, got {d.shape[2]}x{d.shape[1]}")
        if d.dtype != np.float64:
            object.__setattr__(self, "data", d.astype(np.float64))

    @property
    def channels(self):
        return self.data.shape[0]

    @property
    def height(self):
        return self.data.shape[1]

    @property
    def width(self):
        return self.data.shape[2]

    def channel(self, i):
        """One channel plane as a 2-D array view."""
        return self.data[i]


def _from_uint8(arr):
    # (H, W, C) or (H, W) uint8 -> PlanarImage in [0,1]
    a = arr.astype(np.float64) / 255.0
    if a.ndim == 2:
        a = np.broadcast_to(a, (3,) + a.shape).copy()
    else:
        a = np.ascontiguousarray(np.moveaxis(a, 2, 0))
    return PlanarImage(a)


def _load_ppm(path):
    with open(path, "rb") as f:
        raw = f.read()
    if not raw.startswith(b"P6"):
        raise FormatError(f"{path}: not a binary PPM (P6) file")
    # header: magic, width, height, maxval; '#' comments allowed between tokens
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PPM header")
        tokens.append(raw[start:pos])
    pos += 1  # single whitespace after maxval
    width, height, maxval = (int(t) for t in tokens)
    if maxval != 255:
        raise FormatError(f"{path}: unsupported PPM maxval {maxval} (only 8-bit, maxval 255)")
    n = width * height * 3
    if len(raw) - pos < n:
        raise FormatError(f"{path}: truncated PPM pixel data")
    pixels = np.frombuffer(raw, dtype=np.uint8, count=n, offset=pos)
    return _from_uint8(pixels.reshape(height, width, 3))


def load(path):
    """Read an 8-bit PNG (RGB/RGBA/grayscale) or binary PPM (P6) as a PlanarImage.

    Samples are mapped from {0..255} to [0,1] by division by 255. RGBA alpha
    is dropped; grayscale is replicated to 3 identical channels.
    """
    path = str(path)
    with open(path, "rb") as f:
        magic = f.read(2)
    if magic == b"P6":
        return _load_ppm(path)
    if magic[:1] == b"P" and magic[1:2] in b"123457":
        raise FormatError(f"{path}: unsupported PNM variant {magic.decode()} (only binary PPM P6)")
    with _PILImage.open(path) as im:
        if im.format != "PNG":
            raise FormatError(f"{path}: unsupported format {im.format!r} (only PNG and binary PPM)")
        if im.mode in ("I", "I;16", "I;16B", "I;16L", "I;16N"):
            raise FormatError(f"{path}: unsupported bit depth (16-bit PNG; only 8-bit is supported)")
        if im.mode not in ("RGB", "RGBA", "L", "LA", "P"):
            raise FormatError(f"{path}: unsupported colorspace {im.mode!r}")
        if im.mode == "P":
            im = im.convert("RGBA" if "transparency" in im.info else "RGB")
        if im.mode in ("RGBA", "LA"):
            im = im.convert("RGBA")
            arr = np.asarray(im, dtype=np.uint8)[:, :, :3]
        else:
            arr = np.asarray(im, dtype=np.uint8)
    return _from_uint8(arr)


def save(img, path):
    """Write a PlanarImage as an 8-bit PNG.

    Samples are clamped to [0,1] and quantized by round-half-up of 255*v, so
    load(save(x)) round-trips within 1/510 per sample for in-range inputs.
    """
    data = img.data
    if not np.isfinite(data).all():
        raise ValueError("cannot save image with non-finite samples")
    q = np.floor(np.clip(data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    if img.channels == 1:
        pil = _PILImage.fromarray(q[0], mode="L")
    else:
        pil = _PILImage.fromarray(np.moveaxis(q, 0, 2), mode="RGB")
    pil.save(str(path), format="PNG")


def add_gaussian_noise(img, sigma_n, seed):
    """Add i.i.d. zero-mean Gaussian noise of standard deviation sigma_n
    (given on the 0..255 scale) to every sample.

    Noise is generated with a counter-based Philox generator keyed by
    ``seed``, so identical (img, sigma_n, seed) gives bit-identical output.
    The result is intentionally not clamped; clamping happens at save time.
    """
    if sigma_n < 0:
        raise ValueError(f"sigma_n must be >= 0, got {sigma_n}")
    if sigma_n == 0:
        return PlanarImage(img.data.copy())
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    noise = rng.normal(0.0, sigma_n / 255.0, size=img.data.shape)
    return PlanarImage(img.data + noise)
