"""Automatic exposure compensation.

Estimates one positive gain per stack image so that, after scaling, each
image renders its assigned slice of the scene's brightness range at middle
gray (0.18, the photographic key value).  The middle-brightness image
anchors the estimate: its luminance range is split into N equal parts, the
k-th brightest part is assigned to the k-th image, and each gain maps the
geometric mean luminance over the assigned part to the target gray.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import DEFAULT_EPSILON, geometric_mean

DEFAULT_TARGET_GRAY = 0.18


class DegenerateRangeError(ValueError):
    """Luminance range is a single value; equal parts are undefined."""


@dataclass
class CompensationPlan:
    """Per-image gains plus the partition they were derived from.

    ``middle_index`` is the 1-based index ceil((N+1)/2) of the anchor
    image; ``thresholds`` are the N+1 partition bounds in descending order
    (thresholds[0] is the anchor's max luminance, thresholds[-1] its min).
    """

    middle_index: int
    thresholds: np.ndarray
    gains: np.ndarray
    target_gray: float = DEFAULT_TARGET_GRAY


def middle_index(n: int) -> int:
    """1-based index ceil((n+1)/2) of the middle-brightness image."""
    if n < 1:
        raise ValueError("need at least one image")
    return (n + 2) // 2


def partition_thresholds(lum: np.ndarray, n: int) -> np.ndarray:
    """Descending bounds splitting [min, max] luminance into n equal parts.

    Returns n+1 values; the endpoints are set to the exact observed max and
    min so the partition covers every pixel.
    """
    if n < 1:
        raise ValueError("need at least one part")
    lo = float(lum.min())
    hi = float(lum.max())
    if hi == lo:
        raise DegenerateRangeError("constant luminance map has no range to split")
    ks = np.arange(1, n + 2, dtype=np.float64)
    thetas = (n - ks + 1.0) / n * (hi - lo) + lo
    thetas[0] = hi
    thetas[-1] = lo
    return thetas


def partition_regions(lum: np.ndarray, thresholds: np.ndarray) -> list[np.ndarray]:
    """Boolean masks of the brightness parts defined by ``thresholds``.

    Part k collects pixels with thresholds[k] <= L < thresholds[k-1]
    (lower-closed), and the brightest part additionally absorbs the global
    maximum, so the masks are disjoint and cover every pixel.
    """
    thresholds = np.asarray(thresholds, dtype=np.float64)
    if np.any(np.diff(thresholds) > 0):
        raise ValueError("thresholds must be non-increasing")
    regions = []
    for k in range(1, len(thresholds)):
        hi = thresholds[k - 1]
        lo = thresholds[k]
        mask = (lum >= lo) & (lum < hi)
        if k == 1:
            mask |= lum == hi
        regions.append(mask)
    return regions


def estimate_gains(
    enhanced_lums: list[np.ndarray],
    epsilon: float = DEFAULT_EPSILON,
    target_gray: float = DEFAULT_TARGET_GRAY,
) -> CompensationPlan:
    """Estimate per-image gains from the stack's enhanced luminances.

    The middle image's gain maps its global geometric mean to
    ``target_gray``; every other image k is normalized over the pixels of
    the k-th brightest part of the middle image.  Parts that catch no
    pixels fall back to their nominal mid-level brightness, and a constant
    middle image degrades to global compensation for the whole stack.
    """
    n = len(enhanced_lums)
    if n < 1:
        raise ValueError("need at least one luminance map")
    shape = enhanced_lums[0].shape
    for lum in enhanced_lums[1:]:
        if lum.shape != shape:
            raise ValueError("all luminance maps must share one size")
    j = middle_index(n)
    anchor = enhanced_lums[j - 1]
    gains = np.empty(n, dtype=np.float64)

    lo = float(anchor.min())
    hi = float(anchor.max())
    if hi == lo:
        thetas = np.full(n + 1, hi)
        for k in range(1, n + 1):
            gains[k - 1] = target_gray / geometric_mean(
                enhanced_lums[k - 1], epsilon=epsilon
            )
        return CompensationPlan(j, thetas, gains, target_gray)

    thetas = partition_thresholds(anchor, n)
    regions = partition_regions(anchor, thetas)
    for k in range(1, n + 1):
        if k == j:
            mean = geometric_mean(anchor, epsilon=epsilon)
        elif regions[k - 1].any():
            mean = geometric_mean(
                enhanced_lums[k - 1], regions[k - 1], epsilon=epsilon
            )
        else:
            midpoint = 0.5 * (thetas[k - 1] + thetas[k])
            mean = max(midpoint, epsilon)
        gains[k - 1] = target_gray / mean
    return CompensationPlan(j, thetas, gains, target_gray)


def apply_gain(lum: np.ndarray, alpha: float) -> np.ndarray:
    """Scale a luminance map by a positive gain."""
    if alpha <= 0:
        raise ValueError("gain must be positive")
    return lum * alpha
