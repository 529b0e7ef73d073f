"""Full-reference quality metrics: PSNR, SSIM, MS-SSIM, GMSD, pixel-domain VIF.

All metrics operate on luma planes.  ``compare`` is the single entry point
used by labeling and scoring: it converts both rasters to luma and
dispatches.  GMSD is lower-is-better; every other metric is
higher-is-better (see ``MetricScore.higher_is_better``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from pricce.imgcore import RasterImage, downsample2, gaussian_kernel, to_gray

PSNR_CAP = 100.0

_SSIM_K1 = 0.01
_SSIM_K2 = 0.03
_SSIM_L = 255.0
_MSSSIM_WEIGHTS = np.array([0.0448, 0.2856, 0.3001, 0.2363, 0.1333])
_GMSD_C = 170.0
_VIF_SIGMA_NSQ = 2.0


class MetricId(enum.Enum):
    PSNR = "psnr"
    SSIM = "ssim"
    MSSSIM = "ms-ssim"
    GMSD = "gmsd"
    VIF = "vif"

    @classmethod
    def from_key(cls, key: str) -> "MetricId":
        for m in cls:
            if m.value == key.lower() or m.name.lower() == key.lower():
                return m
        raise ValueError(f"unknown metric {key!r}")


@dataclass(frozen=True)
class MetricScore:
    metric: MetricId
    value: float
    higher_is_better: bool

    @staticmethod
    def ideal(metric: MetricId) -> float:
        return {MetricId.PSNR: PSNR_CAP, MetricId.GMSD: 0.0}.get(metric, 1.0)


def _check_dims(ref: np.ndarray, test: np.ndarray) -> None:
    if ref.shape != test.shape:
        raise ValueError(f"dimension mismatch: {ref.shape} vs {test.shape}")


def psnr(ref: np.ndarray, test: np.ndarray) -> MetricScore:
    """Peak signal-to-noise ratio in dB, capped at 100 for identical inputs."""
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    _check_dims(ref, test)
    mse = np.mean((ref - test) ** 2)
    if mse == 0.0:
        value = PSNR_CAP
    else:
        value = min(10.0 * np.log10(255.0**2 / mse), PSNR_CAP)
    return MetricScore(MetricId.PSNR, float(value), True)


def _filter_valid(plane: np.ndarray, win: np.ndarray) -> np.ndarray:
    return fftconvolve(plane, win, mode="valid")


def _gauss_window(size: int, sigma: float) -> np.ndarray:
    k = gaussian_kernel(sigma, size // 2)
    return np.outer(k, k)


def _ssim_maps(ref, test, win):
    """Per-window luminance and contrast-structure maps (valid region)."""
    c1 = (_SSIM_K1 * _SSIM_L) ** 2
    c2 = (_SSIM_K2 * _SSIM_L) ** 2
    mu1 = _filter_valid(ref, win)
    mu2 = _filter_valid(test, win)
    s11 = _filter_valid(ref * ref, win) - mu1 * mu1
    s22 = _filter_valid(test * test, win) - mu2 * mu2
    s12 = _filter_valid(ref * test, win) - mu1 * mu2
    lum = (2.0 * mu1 * mu2 + c1) / (mu1**2 + mu2**2 + c1)
    cs = (2.0 * s12 + c2) / (s11 + s22 + c2)
    return lum, cs


def ssim(ref: np.ndarray, test: np.ndarray) -> MetricScore:
    """Mean local SSIM, 11x11 Gaussian window with sigma 1.5."""
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    _check_dims(ref, test)
    if min(ref.shape) < 11:
        raise ValueError(f"ssim needs min dimension >= 11, got {ref.shape}")
    win = _gauss_window(11, 1.5)
    lum, cs = _ssim_maps(ref, test, win)
    return MetricScore(MetricId.SSIM, float(np.mean(lum * cs)), True)


def ms_ssim_scale_count(shape: tuple[int, int]) -> int:
    """Scales usable before the coarsest level drops below the 11px window."""
    n = 1
    side = min(shape)
    while n < len(_MSSSIM_WEIGHTS) and side // 2 >= 11:
        side //= 2
        n += 1
    return n


def ms_ssim(ref: np.ndarray, test: np.ndarray) -> MetricScore:
    """Multi-scale SSIM over a dyadic pyramid.

    Uses the standard five exponents; on small images the pyramid is
    truncated and the exponents renormalized to sum to 1.
    """
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    _check_dims(ref, test)
    if min(ref.shape) < 11:
        raise ValueError(f"ms-ssim needs min dimension >= 11, got {ref.shape}")
    n_scales = ms_ssim_scale_count(ref.shape)
    weights = _MSSSIM_WEIGHTS[:n_scales] / _MSSSIM_WEIGHTS[:n_scales].sum()
    win = _gauss_window(11, 1.5)
    value = 1.0
    for s in range(n_scales):
        lum, cs = _ssim_maps(ref, test, win)
        mcs = max(float(np.mean(cs)), 0.0)
        if s == n_scales - 1:
            ml = max(float(np.mean(lum * cs)), 0.0)
            value *= ml ** weights[s]
        else:
            value *= mcs ** weights[s]
            ref = downsample2(ref)
            test = downsample2(test)
    return MetricScore(MetricId.MSSSIM, float(value), True)


def _prewitt_magnitude(plane: np.ndarray) -> np.ndarray:
    kx = np.array([[1, 0, -1], [1, 0, -1], [1, 0, -1]]) / 3.0
    padded = np.pad(plane, 1, mode="edge")
    gx = fftconvolve(padded, kx, mode="valid")
    gy = fftconvolve(padded, kx.T, mode="valid")
    return np.sqrt(gx**2 + gy**2)


def gmsd(ref: np.ndarray, test: np.ndarray) -> MetricScore:
    """Gradient-magnitude similarity deviation (lower is better)."""
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    _check_dims(ref, test)
    if min(ref.shape) < 4:
        raise ValueError(f"gmsd needs min dimension >= 4, got {ref.shape}")
    m_r = _prewitt_magnitude(downsample2(ref))
    m_t = _prewitt_magnitude(downsample2(test))
    gms = (2.0 * m_r * m_t + _GMSD_C) / (m_r**2 + m_t**2 + _GMSD_C)
    return MetricScore(MetricId.GMSD, float(np.std(gms)), False)


def vif(ref: np.ndarray, test: np.ndarray) -> MetricScore:
    """Pixel-domain visual information fidelity.

    Gaussian scale space with windows of size 2^(5-s)+1 at scale s and
    observer noise variance 2.  Directional: the first argument is the
    reference.  Values above 1 indicate the test image carries more
    information than the reference, which is exactly why VIF can judge
    contrast enhancement.
    """
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    _check_dims(ref, test)
    eps = 1e-10
    num = 0.0
    den = 0.0
    scales_used = 0
    for scale in range(1, 5):
        n = 2 ** (4 - scale + 1) + 1
        win = _gauss_window(n, n / 5.0)
        if scale > 1:
            if min(ref.shape) < n:
                break
            ref = _filter_valid(ref, win)[::2, ::2]
            test = _filter_valid(test, win)[::2, ::2]
        if min(ref.shape) < n:
            break
        mu1 = _filter_valid(ref, win)
        mu2 = _filter_valid(test, win)
        s11 = np.maximum(_filter_valid(ref * ref, win) - mu1**2, 0.0)
        s22 = np.maximum(_filter_valid(test * test, win) - mu2**2, 0.0)
        s12 = _filter_valid(ref * test, win) - mu1 * mu2

        g = s12 / (s11 + eps)
        sv_sq = s22 - g * s12
        s11 = np.maximum(s11 - eps, 0.0)

        g[s22 < eps] = 0.0
        sv_sq[s22 < eps] = 0.0
        sv_sq[g < 0.0] = s22[g < 0.0]
        g = np.maximum(g, 0.0)
        sv_sq = np.maximum(sv_sq, eps)

        num += np.sum(np.log(1.0 + g**2 * s11 / (sv_sq + _VIF_SIGMA_NSQ)))
        den += np.sum(np.log(1.0 + s11 / _VIF_SIGMA_NSQ))
        scales_used += 1
    if scales_used == 0:
        raise ValueError(f"image {ref.shape} too small for vif")
    if den < 1e-9:
        raise ValueError("vif: reference carries no information (constant plane)")
    return MetricScore(MetricId.VIF, float(num / den), True)


_DISPATCH = {
    MetricId.PSNR: psnr,
    MetricId.SSIM: ssim,
    MetricId.MSSSIM: ms_ssim,
    MetricId.GMSD: gmsd,
    MetricId.VIF: vif,
}


def compare(ref: RasterImage, test: RasterImage, metric: MetricId) -> MetricScore:
    """Luma-domain dispatch; the single entry point for labeling/scoring."""
    if (ref.height, ref.width) != (test.height, test.width):
        raise ValueError(
            f"dimension mismatch: {ref.width}x{ref.height} vs {test.width}x{test.height}"
        )
    return _DISPATCH[metric](to_gray(ref), to_gray(test))
