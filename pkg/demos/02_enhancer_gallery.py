"""
A gallery of the seven contrast enhancers
=========================================

The classifier's label space is a fixed, ordered set of seven contrast
enhancement algorithms.  Given a contrast-distorted image, each one proposes
a different "repaired" version; the pipeline treats the best proposal as a
pseudo-reference.  This script runs all seven on a gamma-darkened image and
reports how close each result is to the original, as measured by VIF — the
same criterion the dataset labeler uses.
"""

from _shared import make_photo, out_path
from pricce.distort import DistortionFamily, DistortionSpec, apply_distortion
from pricce.enhance import EnhancerConfig, EnhancerId, enhance
from pricce.imgcore import save_image, to_gray
from pricce.metrics import MetricId, compare

cfg = EnhancerConfig()
photo = make_photo(1)

# Darken heavily: gamma 1/3 pushes most of the histogram toward black.
dark = apply_distortion(
    photo, DistortionSpec(DistortionFamily.GAMMA_TRANSFER, (1.0 / 3.0,))
)
save_image(dark, out_path("gallery_input.png"))
print(f"input luma mean after gamma: {to_gray(dark).mean():.1f} "
      f"(pristine was {to_gray(photo).mean():.1f})")

# ---------------------------------------------------------------------------
# Run every enhancer.  The enum order is the classifier's class order, so
# iterating EnhancerId is iterating the label space.
print(f"\n{'enhancer':12s} {'luma mean':>9s} {'VIF vs pristine':>15s}")
scores = {}
for algo in EnhancerId:
    result = enhance(dark, algo, cfg)
    save_image(result, out_path(f"gallery_{algo.key}.png"))
    vif = compare(photo, result, MetricId.VIF).value
    scores[algo] = vif
    print(f"{algo.key:12s} {to_gray(result).mean():9.1f} {vif:15.4f}")

winner = max(scores, key=scores.get)
print(f"\nbest pseudo-reference for this distortion: {winner.key}")
print("this VIF-argmax choice is exactly the label the dataset generator "
      "would assign to this sample")
