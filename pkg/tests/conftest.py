import numpy as np
import pytest

from pricce.imgcore import RasterImage, from_float_rgb, gaussian_filter


def natural_image(seed: int, side: int = 96) -> RasterImage:
    """Synthetic photo-like fixture: smooth gradient + blobs + fine texture,
    mid-range mean with headroom so distortions do not clip immediately."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:side, 0:side] / side
    base = 60 + 120 * (0.5 * xx + 0.5 * yy)
    chans = []
    for c in range(3):
        blobs = gaussian_filter(rng.normal(0, 60, (side, side)), 6.0, 18)
        texture = gaussian_filter(rng.normal(0, 25, (side, side)), 1.0, 3)
        chans.append(base + blobs + 0.5 * texture + 15 * (c - 1))
    return from_float_rgb(np.stack(chans, axis=-1))


def random_image(seed: int, side: int = 32) -> RasterImage:
    rng = np.random.default_rng(seed)
    return RasterImage(rng.integers(0, 256, (side, side, 3), dtype=np.uint8))


@pytest.fixture
def photo():
    return natural_image(7)


@pytest.fixture
def photo_small():
    return natural_image(7, side=32)
