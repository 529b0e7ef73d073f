"""Synthetic contrast distortions: five families, 33 catalog presets.

The catalog drives dataset generation: every reference image is degraded
by each preset, giving 33 samples per reference (1500 references would
yield 49,500 samples).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from pricce.imgcore import RasterImage, from_float_rgb, to_gray


class DistortionFamily(enum.Enum):
    CONTRAST_CHANGE = "contrast-change"
    GAMMA_TRANSFER = "gamma-transfer"
    LOGISTIC = "logistic"
    CUBIC = "cubic"
    MEAN_SHIFT = "mean-shift"


ALPHA_LEVELS = (0.5, 0.75, 1.0, 1.25, 1.5)
GAMMA_LEVELS = (1 / 5, 1 / 3, 1 / 2, 1 / 1.5, 1.5, 2.0, 3.0, 5.0)
DELTA_LEVELS = (20, -20, 40, -40, 60, -60, 80, -80, 100, -100, 120, -120)

# Monotone cubics on [0,1]: blends x -> (1-t)*x + t*(3x^2 - 2x^3) with
# increasing S-curve strength t.  Coefficients are (a1, a2, a3, a4) for
# a1*x^3 + a2*x^2 + a3*x + a4.  Chosen for this artifact; not published
# values.
CUBIC_LEVELS = (
    (-0.8, 1.2, 0.6, 0.0),
    (-1.2, 1.8, 0.4, 0.0),
    (-1.6, 2.4, 0.2, 0.0),
    (-2.0, 3.0, 0.0, 0.0),
)

# 4-parameter logistics (b1-b2)/(1+exp(-(x-b3)/b4)) + b2, centred at 0.5
# with increasing steepness; b1/b2 solved so the curve hits 0 at x=0 and
# 1 at x=1.  Chosen for this artifact; not published values.
LOGISTIC_LEVELS = (
    (1.232864, -0.232864, 0.5, 0.30),
    (1.089431, -0.089425, 0.5, 0.20),
    (1.015747, -0.015748, 0.5, 0.12),
    (1.001935, -0.001934, 0.5, 0.08),
)

_PARAM_SETS = {
    DistortionFamily.CONTRAST_CHANGE: [(a,) for a in ALPHA_LEVELS],
    DistortionFamily.GAMMA_TRANSFER: [(g,) for g in GAMMA_LEVELS],
    DistortionFamily.LOGISTIC: list(LOGISTIC_LEVELS),
    DistortionFamily.CUBIC: list(CUBIC_LEVELS),
    DistortionFamily.MEAN_SHIFT: [(float(d),) for d in DELTA_LEVELS],
}

CATALOG_VERSION = "1"


@dataclass(frozen=True)
class DistortionSpec:
    """One distortion family plus its level parameters."""

    family: DistortionFamily
    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        allowed = _PARAM_SETS[self.family]
        if not any(np.allclose(params, ok) for ok in allowed):
            raise ValueError(
                f"{self.family.value} parameters {params} are not a catalog "
                f"preset; use DistortionSpec.unchecked for custom values"
            )

    @classmethod
    def unchecked(cls, family: DistortionFamily, params: tuple) -> "DistortionSpec":
        """Bypass the catalog check for custom parameter values."""
        spec = object.__new__(cls)
        object.__setattr__(spec, "family", family)
        object.__setattr__(spec, "params", tuple(float(p) for p in params))
        return spec

    @property
    def level_index(self) -> int:
        for i, ok in enumerate(_PARAM_SETS[self.family]):
            if np.allclose(self.params, ok):
                return i
        return -1


def catalog() -> list[DistortionSpec]:
    """All 33 presets, in stable order: contrast change, gamma, logistic,
    cubic, mean shift."""
    order = (
        DistortionFamily.CONTRAST_CHANGE,
        DistortionFamily.GAMMA_TRANSFER,
        DistortionFamily.LOGISTIC,
        DistortionFamily.CUBIC,
        DistortionFamily.MEAN_SHIFT,
    )
    return [DistortionSpec(fam, p) for fam in order for p in _PARAM_SETS[fam]]


def apply_distortion(img: RasterImage, spec: DistortionSpec) -> RasterImage:
    """Apply one distortion preset; output is clipped to [0, 255]."""
    rgb = img.as_rgb()
    fam = spec.family
    if fam is DistortionFamily.CONTRAST_CHANGE:
        (alpha,) = spec.params
        gray = to_gray(img)[..., None]
        out = (1.0 - alpha) * rgb + alpha * gray
    elif fam is DistortionFamily.GAMMA_TRANSFER:
        (gamma,) = spec.params
        x = rgb / 255.0
        out = 255.0 * x ** (1.0 / gamma)
    elif fam is DistortionFamily.CUBIC:
        a1, a2, a3, a4 = spec.params
        x = rgb / 255.0
        out = 255.0 * (a1 * x**3 + a2 * x**2 + a3 * x + a4)
    elif fam is DistortionFamily.LOGISTIC:
        b1, b2, b3, b4 = spec.params
        x = rgb / 255.0
        out = 255.0 * ((b1 - b2) / (1.0 + np.exp(-(x - b3) / b4)) + b2)
    elif fam is DistortionFamily.MEAN_SHIFT:
        (delta,) = spec.params
        out = rgb + delta
    else:  # pragma: no cover
        raise ValueError(f"unknown family {fam}")
    return from_float_rgb(out)


def format_catalog() -> str:
    """Human-readable catalog table (family, level index, parameters)."""
    lines = [f"{'family':<16} {'level':>5}  parameters"]
    for spec in catalog():
        params = ", ".join(f"{p:g}" for p in spec.params)
        lines.append(f"{spec.family.value:<16} {spec.level_index:>5}  {params}")
    return "\n".join(lines)
