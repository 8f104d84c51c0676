"""Raster containers and shared luminance math.

Images are plain numpy arrays in linear-light float64: luminance maps are
(H, W), RGB images are (H, W, 3).  File decoding maps integer codes into
[0, 1], but processed values are allowed to exceed 1 (pre-tonemap luminance
is unbounded above).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Rec. 709 relative luminance coefficients for linear RGB.
LUMA_R = 0.2126
LUMA_G = 0.7152
LUMA_B = 0.0722

DEFAULT_EPSILON = 1e-6


class EmptyRegionError(ValueError):
    """Raised when a statistic is requested over a region with no pixels."""


def as_luminance(data) -> np.ndarray:
    """Validate and return a luminance map as a float64 (H, W) array.

    Values must be finite and non-negative.
    """
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"luminance map must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("luminance map contains NaN or infinite values")
    if arr.min(initial=0.0) < 0.0:
        raise ValueError("luminance map contains negative values")
    return arr


def as_rgb(data) -> np.ndarray:
    """Validate and return an RGB image as a float64 (H, W, 3) array."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"RGB image must have shape (H, W, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("RGB image contains NaN or infinite values")
    return arr


def luminance_of(image: np.ndarray) -> np.ndarray:
    """Rec. 709 relative luminance of a linear-light RGB image."""
    rgb = as_rgb(image)
    return (
        LUMA_R * rgb[..., 0]
        + LUMA_G * rgb[..., 1]
        + LUMA_B * rgb[..., 2]
    )


def geometric_mean(
    lum: np.ndarray,
    region: np.ndarray | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """Geometric mean of luminance over a region.

    Computed in the log domain; values below ``epsilon`` are clamped up to it
    so zero pixels do not collapse the mean to zero.  ``region`` is a boolean
    mask (None means the whole image).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    values = lum if region is None else lum[region]
    if values.size == 0:
        raise EmptyRegionError("geometric mean over an empty region")
    return float(np.exp(np.mean(np.log(np.maximum(values, epsilon)))))


@dataclass
class ExposureStack:
    """Ordered set of equally sized RGB images, darkest exposure first.

    ``evs`` optionally tags each image with its exposure value in EV; when
    present it must be strictly increasing (the stack order).
    """

    images: list[np.ndarray]
    evs: list[float] | None = None

    def __post_init__(self):
        if len(self.images) < 1:
            raise ValueError("exposure stack needs at least one image")
        self.images = [as_rgb(img) for img in self.images]
        shape = self.images[0].shape
        for img in self.images[1:]:
            if img.shape != shape:
                raise ValueError("all stack images must share one size")
        if self.evs is not None:
            self.evs = [float(v) for v in self.evs]
            if len(self.evs) != len(self.images):
                raise ValueError("one EV tag per image required")
            if any(b <= a for a, b in zip(self.evs, self.evs[1:])):
                raise ValueError("EV tags must be strictly increasing")

    def __len__(self) -> int:
        return len(self.images)

    @property
    def shape(self) -> tuple[int, int]:
        h, w, _ = self.images[0].shape
        return h, w

    @classmethod
    def from_images(
        cls,
        images: list[np.ndarray],
        evs: list[float] | None = None,
        epsilon: float = DEFAULT_EPSILON,
    ) -> "ExposureStack":
        """Build a stack, sorting darkest-first.

        With EV tags the sort key is the tag; without, images are ordered by
        geometric mean luminance as a proxy for exposure.
        """
        if evs is not None:
            order = sorted(range(len(images)), key=lambda i: evs[i])
            return cls([images[i] for i in order], [evs[i] for i in order])
        keys = [
            geometric_mean(luminance_of(as_rgb(img)), epsilon=epsilon)
            for img in images
        ]
        order = sorted(range(len(images)), key=lambda i: keys[i])
        return cls([images[i] for i in order], None)
