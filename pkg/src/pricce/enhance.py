"""Seven contrast-enhancement algorithms producing pseudo-reference candidates.

Histogram-domain methods (HE, DHE, BPDHE, Cao) operate on the luma plane
and scale the RGB channels by the per-pixel luma ratio, which avoids hue
shifts.  Simplest color balance, MSRCR and the camera-model fusion method
(Ying) work per channel by construction.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, asdict

import numpy as np

from pricce.imgcore import (
    RasterImage,
    from_float_rgb,
    gaussian_filter,
    gaussian_kernel,
    histogram,
    smooth_1d,
    to_gray,
)

log = logging.getLogger(__name__)

_EPS = 1e-12


class EnhancerId(enum.IntEnum):
    """Label space of the classifier; ordinal order is the class encoding."""

    HE = 0
    SIMPLEST_CB = 1
    YING = 2
    CAO = 3
    DHE = 4
    BPDHE = 5
    MSRCR = 6

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def from_key(cls, key: str) -> "EnhancerId":
        try:
            return cls[key.upper().replace("-", "_")]
        except KeyError:
            raise ValueError(f"unknown enhancer {key!r}") from None


@dataclass(frozen=True)
class EnhancerConfig:
    """Tunables for all seven algorithms; defaults follow the algorithms'
    original publications where this pipeline does not prescribe values."""

    # simplest color balance: fraction of samples saturated per tail
    cb_low: float = 0.01
    cb_high: float = 0.01
    # MSRCR surround scales, per-scale weights, color-restoration constants
    msrcr_sigmas: tuple = (15.0, 80.0, 250.0)
    msrcr_weights: tuple = (1 / 3, 1 / 3, 1 / 3)
    msrcr_alpha: float = 125.0
    msrcr_beta: float = 46.0
    msrcr_clip: float = 0.01
    # DHE moving-average smoothing width; BPDHE Gaussian smoothing
    dhe_smooth_width: int = 5
    bpdhe_sigma: float = 2.0
    bpdhe_radius: int = 4
    # Ying camera model and exposure search
    ying_a: float = -0.3293
    ying_b: float = 1.1258
    ying_mu: float = 0.5
    ying_k_max: float = 7.0
    ying_sigma: float = 5.0
    # Cao bright/dim switch and weighting exponent
    cao_threshold: float = 128.0
    cao_exponent: float = 0.75

    def __post_init__(self):
        w = np.asarray(self.msrcr_weights, dtype=np.float64)
        if len(self.msrcr_sigmas) < 1 or len(w) != len(self.msrcr_sigmas):
            raise ValueError("msrcr needs >= 1 scale with matching weights")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"msrcr weights must sum to 1, got {w.sum()}")
        for frac in (self.cb_low, self.cb_high):
            if not 0.0 <= frac < 0.25:
                raise ValueError(f"color-balance tail fraction {frac} outside [0, 0.25)")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["msrcr_sigmas"] = list(self.msrcr_sigmas)
        d["msrcr_weights"] = list(self.msrcr_weights)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EnhancerConfig":
        d = dict(d)
        for k in ("msrcr_sigmas", "msrcr_weights"):
            if k in d:
                d[k] = tuple(d[k])
        return cls(**d)


def _apply_luma_map(img: RasterImage, new_luma: np.ndarray) -> RasterImage:
    """Scale RGB channels by the luma ratio new/old, per pixel."""
    rgb = img.as_rgb()
    old = to_gray(img)
    ratio = new_luma / np.maximum(old, _EPS)
    out = rgb * ratio[..., None]
    # zero-luma pixels carry no chroma; set them to the target luma directly
    dark = old < 0.5
    if dark.any():
        out[dark] = new_luma[dark, None]
    return from_float_rgb(out)


def _equalize_lut(counts: np.ndarray) -> np.ndarray:
    """Classic global-equalization LUT s_k = round(255 * CDF(k))."""
    cdf = np.cumsum(counts) / max(counts.sum(), 1)
    return np.rint(255.0 * cdf)


def he(img: RasterImage) -> RasterImage:
    """Global histogram equalization on luma."""
    luma = to_gray(img)
    lut = _equalize_lut(histogram(luma))
    new_luma = lut[np.rint(luma).astype(np.int64)]
    return _apply_luma_map(img, new_luma)


def _partition_lut(counts: np.ndarray, boundaries: list[int]) -> np.ndarray:
    """Equalize each [b_i, b_{i+1}] slice into an output range proportional
    to its input span (dynamic-range allocation shared by DHE/BPDHE)."""
    spans = np.diff(boundaries).astype(np.float64)
    ranges = spans / spans.sum() * 255.0
    starts = np.concatenate([[0.0], np.cumsum(ranges)[:-1]])
    lut = np.zeros(256)
    for i in range(len(spans)):
        lo, hi = boundaries[i], boundaries[i + 1]
        sub = counts[lo : hi + 1].astype(np.float64)
        total = sub.sum()
        if total > 0:
            cdf = np.cumsum(sub) / total
        else:
            cdf = np.linspace(0.0, 1.0, hi - lo + 1)
        lut[lo : hi + 1] = starts[i] + ranges[i] * cdf
    # below/above the occupied range, extend flat
    lut[: boundaries[0]] = lut[boundaries[0]]
    lut[boundaries[-1] :] = lut[boundaries[-1]]
    return np.rint(np.clip(lut, 0.0, 255.0))


def _interior_extrema(smoothed: np.ndarray, lo: int, hi: int, minima: bool) -> list[int]:
    """Strict interior extrema of smoothed[lo..hi]; a flat plateau that is
    an extremum contributes its center index."""
    idx = []
    k = lo + 1
    while k < hi:
        start = k
        while k + 1 <= hi and smoothed[k + 1] == smoothed[start]:
            k += 1
        if k >= hi:
            break
        left, val, right = smoothed[start - 1], smoothed[start], smoothed[k + 1]
        if minima and val < left and val < right:
            idx.append((start + k) // 2)
        elif not minima and val > left and val > right:
            idx.append((start + k) // 2)
        k += 1
    return idx


def dhe(img: RasterImage, cfg: EnhancerConfig) -> RasterImage:
    """Dynamic histogram equalization: partition at local minima of the
    smoothed luma histogram, equalize each partition into its own range."""
    luma = to_gray(img)
    counts = histogram(luma)
    occupied = np.nonzero(counts)[0]
    lo, hi = int(occupied[0]), int(occupied[-1])
    width = cfg.dhe_smooth_width
    smoothed = smooth_1d(counts, np.full(width, 1.0 / width))
    minima = _interior_extrema(smoothed, lo, hi, minima=True)
    if not minima or lo == hi:
        log.info("dhe: no interior local minima, falling back to plain HE")
        return he(img)
    lut = _partition_lut(counts, [lo, *minima, hi])
    new_luma = lut[np.rint(luma).astype(np.int64)]
    return _apply_luma_map(img, new_luma)


def bpdhe(img: RasterImage, cfg: EnhancerConfig) -> RasterImage:
    """Brightness-preserving DHE: partition at local maxima of a
    Gaussian-smoothed histogram, equalize, then rescale so the output
    mean brightness matches the input mean."""
    luma = to_gray(img)
    counts = histogram(luma)
    occupied = np.nonzero(counts)[0]
    lo, hi = int(occupied[0]), int(occupied[-1])
    smoothed = smooth_1d(counts, gaussian_kernel(cfg.bpdhe_sigma, cfg.bpdhe_radius))
    maxima = _interior_extrema(smoothed, lo, hi, minima=False)
    if maxima and lo != hi:
        lut = _partition_lut(counts, [lo, *maxima, hi])
    else:
        lut = _equalize_lut(counts)
    equalized = lut[np.rint(luma).astype(np.int64)].astype(np.float64)
    mean_in = luma.mean()
    mean_out = equalized.mean()
    if mean_out <= 0.0:
        raise ValueError("bpdhe: degenerate all-black equalized output")
    normalized = np.clip(equalized * (mean_in / mean_out), 0.0, 255.0)
    return _apply_luma_map(img, normalized)


def simplest_cb(img: RasterImage, cfg: EnhancerConfig) -> RasterImage:
    """Simplest color balance: per-channel quantile stretch to [0, 255]."""
    rgb = img.as_rgb()
    out = np.empty_like(rgb)
    for c in range(3):
        ch = rgb[:, :, c]
        v_lo = np.quantile(ch, cfg.cb_low, method="lower")
        v_hi = np.quantile(ch, 1.0 - cfg.cb_high, method="higher")
        if v_hi <= v_lo:
            out[:, :, c] = ch  # constant channel: nothing to stretch
            continue
        out[:, :, c] = (ch - v_lo) * (255.0 / (v_hi - v_lo))
    return from_float_rgb(out)


def msrcr(img: RasterImage, cfg: EnhancerConfig) -> RasterImage:
    """Multiscale retinex with color restoration."""
    rgb = img.as_rgb() + 1.0  # offset keeps logs finite at zero pixels
    retinex = np.zeros_like(rgb)
    for sigma, w in zip(cfg.msrcr_sigmas, cfg.msrcr_weights):
        radius = max(1, int(np.ceil(3.0 * sigma)))
        for c in range(3):
            surround = gaussian_filter(rgb[:, :, c], sigma, radius)
            retinex[:, :, c] += w * (np.log10(rgb[:, :, c]) - np.log10(surround))
    restore = cfg.msrcr_beta * (
        np.log10(cfg.msrcr_alpha * rgb) - np.log10(rgb.sum(axis=2, keepdims=True))
    )
    raw = restore * retinex
    out = np.empty_like(raw)
    for c in range(3):
        ch = raw[:, :, c]
        lo = np.quantile(ch, cfg.msrcr_clip)
        hi = np.quantile(ch, 1.0 - cfg.msrcr_clip)
        if hi <= lo:
            out[:, :, c] = img.as_rgb()[:, :, c]  # flat response: pass through
            continue
        out[:, :, c] = (ch - lo) * (255.0 / (hi - lo))
    return from_float_rgb(out)


def _btf(p: np.ndarray, k: float, a: float, b: float) -> np.ndarray:
    """Camera brightness transform g(P, k) = e^{b(1-k^a)} * P^{k^a}."""
    ka = k**a
    return np.exp(b * (1.0 - ka)) * np.power(np.maximum(p, 0.0), ka)


def ying(img: RasterImage, cfg: EnhancerConfig) -> RasterImage:
    """Exposure-fusion enhancement: blend the input with a synthetically
    brightened exposure, weighted by the estimated illumination map."""
    p = img.as_rgb() / 255.0
    illum = gaussian_filter(p.max(axis=2), cfg.ying_sigma, max(1, int(3 * cfg.ying_sigma)))
    illum = np.clip(illum, 0.0, 1.0)
    weight = illum**cfg.ying_mu

    under = illum < 0.5
    if under.mean() < 0.01:
        return RasterImage(img.pixels.copy())

    luma = (to_gray(img) / 255.0)[under]

    def neg_entropy(k: float) -> float:
        bright = np.clip(_btf(luma, k, cfg.ying_a, cfg.ying_b), 0.0, 1.0)
        counts = np.bincount(np.rint(bright * 255.0).astype(np.int64), minlength=256)
        pdf = counts[counts > 0] / counts.sum()
        return float(np.sum(pdf * np.log2(pdf)))

    ks = np.geomspace(1.0, cfg.ying_k_max, 40)
    k_best = float(ks[int(np.argmin([neg_entropy(k) for k in ks]))])

    fused = weight[..., None] * p + (1.0 - weight[..., None]) * _btf(
        p, k_best, cfg.ying_a, cfg.ying_b
    )
    return from_float_rgb(fused * 255.0)


def cao(img: RasterImage, cfg: EnhancerConfig) -> RasterImage:
    """Adaptive gamma correction driven by the weighted intensity CDF;
    bright images are processed as negatives."""
    luma = to_gray(img)
    levels = np.rint(luma).astype(np.int64)
    invert = luma.mean() > cfg.cao_threshold
    work = 255 - levels if invert else levels

    counts = np.bincount(work.ravel(), minlength=256).astype(np.float64)
    pdf = counts / counts.sum()
    p_min, p_max = pdf.min(), pdf.max()
    if p_max > p_min:
        w = ((pdf - p_min) / (p_max - p_min)) ** cfg.cao_exponent
    else:
        w = np.full(256, 1.0)  # flat pdf: uniform weighting
    w_pdf = w / w.sum()
    gamma = np.cumsum(w_pdf)

    l_max = int(work.max())
    lut = np.arange(256, dtype=np.float64)
    if l_max > 0:
        lvl = np.arange(l_max + 1, dtype=np.float64)
        lut[: l_max + 1] = np.rint(l_max * (lvl / l_max) ** gamma[: l_max + 1])
    mapped = lut[work]
    if invert:
        mapped = 255.0 - mapped
    return _apply_luma_map(img, mapped)


_DISPATCH = {
    EnhancerId.HE: lambda img, cfg: he(img),
    EnhancerId.SIMPLEST_CB: simplest_cb,
    EnhancerId.YING: ying,
    EnhancerId.CAO: cao,
    EnhancerId.DHE: dhe,
    EnhancerId.BPDHE: bpdhe,
    EnhancerId.MSRCR: msrcr,
}


def enhance(img: RasterImage, algo: EnhancerId, cfg: EnhancerConfig | None = None) -> RasterImage:
    """Run one enhancement algorithm; output is always 3-channel 8-bit."""
    algo = EnhancerId(algo)
    cfg = cfg or EnhancerConfig()
    if img.channels == 1:
        img = RasterImage(np.stack([img.pixels] * 3, axis=-1))
    out = _DISPATCH[algo](img, cfg)
    if out.channels == 1:  # pragma: no cover
        out = RasterImage(np.stack([out.pixels] * 3, axis=-1))
    return out
