"""Shared fixtures: a small synthetic chromatic-edge corpus and RNG helpers."""

import numpy as np
import pytest

from chromadiff import PlanarImage


def make_disk(n=128):
    """Red/blue disk against an opposing background; green flat.

    The rim is linearly antialiased over one pixel so the boundary is
    band-limited: a hard-aliased rim re-digitizes under the first TV step,
    which reads as a (discretization, not flow) TV increase.
    """
    yy, xx = np.mgrid[0:n, 0:n]
    r = np.sqrt((yy - n / 2) ** 2 + (xx - n / 2) ** 2)
    t = np.clip(0.3 * n + 0.5 - r, 0.0, 1.0)
    return PlanarImage(np.stack([0.2 + 0.6 * t, np.full((n, n), 0.2), 0.8 - 0.6 * t]))


def make_stripes(n=128, period=32):
    """Vertical stripes in the red channel only; green and blue flat."""
    band = ((np.arange(n) // period) % 2).astype(float)
    return PlanarImage(
        np.stack(
            [np.tile(0.25 + 0.5 * band, (n, 1)), np.full((n, n), 0.5), np.full((n, n), 0.5)]
        )
    )


def make_checker(n=128, cell=32):
    """Isoluminant checkerboard: red/green swap across cells, blue flat."""
    yy, xx = np.mgrid[0:n, 0:n]
    par = ((yy // cell + xx // cell) % 2).astype(float)
    return PlanarImage(np.stack([0.3 + 0.4 * par, 0.7 - 0.4 * par, np.full((n, n), 0.5)]))


def random_image(seed, channels=3, h=32, w=32):
    rng = np.random.default_rng(seed)
    return PlanarImage(rng.random((channels, h, w)))


@pytest.fixture(scope="session")
def corpus():
    """The 128x128 chromatic-edge test corpus: disk, stripes, checkerboard."""
    return {"disk": make_disk(), "stripes": make_stripes(), "checker": make_checker()}
