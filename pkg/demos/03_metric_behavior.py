"""
Full-reference metric behavior on a distortion ladder
=====================================================

Five full-reference metrics are available: PSNR, SSIM, MS-SSIM, GMSD, and
pixel-domain VIF.  This script sweeps a mean-shift ladder of increasing
severity and shows how each metric responds, including two behaviors worth
knowing about:

* GMSD is a *distance*: lower is better, so its trend runs opposite to the
  similarity metrics and downstream consumers must negate it.
* VIF can exceed 1.0 when the test image has *more* contrast than the
  reference — it measures preserved information, not closeness.
"""

import numpy as np

from _shared import make_photo
from pricce.distort import DistortionFamily, DistortionSpec, apply_distortion
from pricce.imgcore import from_float_rgb
from pricce.metrics import MetricId, compare

photo = make_photo(2)

# ---------------------------------------------------------------------------
# Identity sanity check: every metric must report its ideal value when the
# test image equals the reference.
for metric in MetricId:
    s = compare(photo, photo, metric)
    print(f"identity {metric.value:8s} -> {s.value:8.4f} "
          f"({'higher' if s.higher_is_better else 'lower'} is better)")

# ---------------------------------------------------------------------------
# Mean-shift ladder: all similarity metrics should fall, GMSD should rise.
deltas = (20.0, 40.0, 60.0, 80.0, 100.0)
print(f"\n{'delta':>6s}" + "".join(f"{m.value:>10s}" for m in MetricId))
for delta in deltas:
    dist = apply_distortion(
        photo, DistortionSpec(DistortionFamily.MEAN_SHIFT, (delta,))
    )
    row = [compare(photo, dist, m).value for m in MetricId]
    print(f"{delta:6.0f}" + "".join(f"{v:10.4f}" for v in row))

# ---------------------------------------------------------------------------
# VIF above 1: amplify contrast around the mid-gray point.
amplified = from_float_rgb(
    (photo.pixels.astype(float) - 127.5) * 1.4 + 127.5
)
vif = compare(photo, amplified, MetricId.VIF).value
print(f"\nVIF of a contrast-amplified image: {vif:.4f} (> 1.0: the test "
      "image carries more visual information than the reference)")
assert vif > 1.0
