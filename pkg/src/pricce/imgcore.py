"""Shared image primitives: containers, grayscale, histograms, filtering.

Everything downstream (distortion synthesis, enhancers, metrics) works on
two representations: 8-bit ``RasterImage`` for stored pixels and plain 2-D
float64 arrays ("planes") for intermediate math.  All spatial filters use
edge replication at borders so results are reproducible across modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

MIN_SIDE = 16

# Rec.601 luma weights; the conversion used everywhere in this package.
_LUMA = np.array([0.299, 0.587, 0.114])


class ImageDataError(ValueError):
    """Raised for malformed or out-of-contract image data."""


@dataclass(frozen=True)
class RasterImage:
    """8-bit raster, grayscale (H, W) or interleaved RGB (H, W, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            raise ImageDataError(f"pixels must be uint8, got {px.dtype}")
        if px.ndim == 2:
            pass
        elif px.ndim == 3 and px.shape[2] == 3:
            pass
        else:
            raise ImageDataError(f"expected (H,W) or (H,W,3), got shape {px.shape}")
        if px.shape[0] < MIN_SIDE or px.shape[1] < MIN_SIDE:
            raise ImageDataError(
                f"image {px.shape[1]}x{px.shape[0]} is below the "
                f"{MIN_SIDE}x{MIN_SIDE} minimum"
            )
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3

    def as_rgb(self) -> np.ndarray:
        """Float64 (H, W, 3) view; grayscale is replicated across channels."""
        px = self.pixels.astype(np.float64)
        if px.ndim == 2:
            px = np.stack([px] * 3, axis=-1)
        return px


def from_float_rgb(rgb: np.ndarray) -> RasterImage:
    """Clip a float (H, W, 3) array to [0, 255] and quantize (ties to even)."""
    out = np.rint(np.clip(rgb, 0.0, 255.0)).astype(np.uint8)
    return RasterImage(out)


def to_gray(img: RasterImage) -> np.ndarray:
    """Rec.601 luma plane in [0, 255]; identity for single-channel input."""
    if img.channels == 1:
        return img.pixels.astype(np.float64)
    return img.pixels.astype(np.float64) @ _LUMA


def histogram(plane: np.ndarray) -> np.ndarray:
    """256-bin histogram of a plane with samples in [0, 255].

    Samples are binned by rounding to the nearest integer (ties to even),
    matching the 8-bit quantization rule, so a float plane and its raster
    counterpart produce identical histograms.
    """
    plane = np.asarray(plane, dtype=np.float64)
    lo, hi = plane.min(), plane.max()
    if lo < 0.0 or hi > 255.0:
        bad = lo if lo < 0.0 else hi
        raise ImageDataError(f"sample {bad} outside [0, 255]")
    bins = np.rint(plane).astype(np.int64)
    return np.bincount(bins.ravel(), minlength=256)


def hist_pdf(counts: np.ndarray) -> np.ndarray:
    total = counts.sum()
    if total == 0:
        raise ImageDataError("empty histogram")
    return counts / total


def gaussian_kernel(sigma: float, radius: int) -> np.ndarray:
    """Normalized 1-D Gaussian taps at offsets -radius..radius."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_filter(plane: np.ndarray, sigma: float, radius: int) -> np.ndarray:
    """Separable Gaussian blur with replicated borders."""
    k = gaussian_kernel(sigma, radius)
    plane = np.asarray(plane, dtype=np.float64)
    out = ndimage.correlate1d(plane, k, axis=0, mode="nearest")
    out = ndimage.correlate1d(out, k, axis=1, mode="nearest")
    return out


def smooth_1d(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """1-D correlation with replicated ends (histogram smoothing helper)."""
    return ndimage.correlate1d(np.asarray(values, dtype=np.float64), kernel, mode="nearest")


def downsample2(plane: np.ndarray) -> np.ndarray:
    """2x2 average pooling; trailing odd row/column is dropped."""
    plane = np.asarray(plane, dtype=np.float64)
    h, w = plane.shape
    if h < 2 or w < 2:
        raise ValueError(f"plane {w}x{h} too small to downsample")
    h2, w2 = h // 2, w // 2
    p = plane[: 2 * h2, : 2 * w2]
    return p.reshape(h2, 2, w2, 2).mean(axis=(1, 3))


def load_image(path: str | Path) -> RasterImage:
    """Read an 8-bit PNG or BMP, grayscale or RGB.

    Paletted, 16-bit, and alpha-carrying files are rejected rather than
    silently converted, so dataset labels stay reproducible.
    """
    path = Path(path)
    with Image.open(path) as im:
        if im.mode == "P":
            raise ImageDataError(f"{path}: paletted images are not supported")
        if im.mode in ("I", "I;16", "I;16B", "I;16L", "F"):
            raise ImageDataError(f"{path}: only 8-bit images are supported (mode {im.mode})")
        if im.mode not in ("L", "RGB"):
            raise ImageDataError(f"{path}: unsupported mode {im.mode} (need L or RGB)")
        px = np.asarray(im, dtype=np.uint8)
    try:
        return RasterImage(px)
    except ImageDataError as exc:
        raise ImageDataError(f"{path}: {exc}") from exc


def save_image(img: RasterImage, path: str | Path) -> None:
    """Write PNG or BMP by extension, atomically (temp file then rename)."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext not in (".png", ".bmp"):
        raise ValueError(f"unsupported output format {ext!r} (use .png or .bmp)")
    tmp = path.with_name(path.name + ".tmp")
    Image.fromarray(img.pixels).save(tmp, format="PNG" if ext == ".png" else "BMP")
    tmp.replace(path)
