"""Shared helpers for the demo scripts: a synthetic "photograph" so the
demos run without any external image assets, and an output directory."""

from pathlib import Path

import numpy as np

from pricce.imgcore import RasterImage, from_float_rgb, gaussian_filter

OUT_DIR = Path(__file__).parent / "output"


def make_photo(seed: int = 0, side: int = 128) -> RasterImage:
    """Build a deterministic synthetic photograph: a smooth illumination
    gradient, a few soft blobs, and fine texture."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:side, 0:side] / (side - 1)
    base = 40.0 + 170.0 * (0.55 * xx + 0.45 * yy)
    blobs = gaussian_filter(rng.normal(0, 90, (side, side)), 6.0, 18)
    texture = gaussian_filter(rng.normal(0, 25, (side, side)), 1.0, 3)
    plane = base + blobs + texture
    rgb = np.stack([plane + off for off in rng.normal(0, 12, 3)], axis=-1)
    return from_float_rgb(rgb)


def out_path(name: str) -> Path:
    OUT_DIR.mkdir(exist_ok=True)
    return OUT_DIR / name
