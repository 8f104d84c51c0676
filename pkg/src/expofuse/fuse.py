"""Fusion of an exposure stack into one image.

Two weighting schemes: constant weights ("simple average", the intended
companion of the exposure compensation, since the inputs are already
balanced), and Mertens-style quality weights built from contrast,
saturation, and well-exposedness (Mertens et al. 2009, "Exposure fusion").
Blending is either a per-pixel weighted average or a Laplacian-pyramid
blend with Gaussian-smoothed weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import luminance_of
from .metrics import well_exposedness_map

WEIGHT_FLOOR = 1e-12

# Burt-Adelson binomial kernel; dyadic coefficients keep constant maps
# exact through every pyramid stage.
_KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


class ZeroWeightSumError(ValueError):
    """All weights vanish at some pixel and flooring is disabled."""


class InvalidLevelsError(ValueError):
    """Requested pyramid depth does not fit the image size."""


@dataclass
class FusionConfig:
    """Fusion settings.

    ``scheme`` picks the weight maps, ``blend`` the combination method.
    ``pyramid_levels=None`` selects the automatic depth for the image
    size.  The exponents shape the Mertens weights and are ignored by the
    simple scheme.
    """

    scheme: str = "simple"
    blend: str = "naive"
    pyramid_levels: int | None = None
    exp_contrast: float = 1.0
    exp_saturation: float = 1.0
    exp_wellexposedness: float = 1.0

    def __post_init__(self):
        if self.scheme not in ("simple", "mertens"):
            raise ValueError(f"unknown weight scheme {self.scheme!r}")
        if self.blend not in ("naive", "pyramid"):
            raise ValueError(f"unknown blend mode {self.blend!r}")
        if self.pyramid_levels is not None and self.pyramid_levels < 1:
            raise InvalidLevelsError("pyramid_levels must be at least 1")
        for exp in (self.exp_contrast, self.exp_saturation, self.exp_wellexposedness):
            if exp < 0:
                raise ValueError("weight exponents must be non-negative")


def simple_weights(stack_size: int, shape: tuple[int, int]) -> list[np.ndarray]:
    """Constant unit weight per image: fusion reduces to the plain mean."""
    if stack_size < 1:
        raise ValueError("need at least one image")
    return [np.ones(shape, dtype=np.float64) for _ in range(stack_size)]


def _laplacian_abs(gray: np.ndarray) -> np.ndarray:
    """|4-neighbor discrete Laplacian| with edge-replicated borders."""
    p = np.pad(gray, 1, mode="edge")
    lap = p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * gray
    return np.abs(lap)


def mertens_weights(
    images: list[np.ndarray],
    config: FusionConfig = FusionConfig(scheme="mertens"),
) -> list[np.ndarray]:
    """Per-pixel quality weights: contrast * saturation * well-exposedness.

    Contrast is the absolute Laplacian of luminance, saturation the
    standard deviation across channels, well-exposedness the Gaussian
    closeness of each channel to mid-range.  Weights are returned without
    any floor; flat gray regions may be zero in every map.
    """
    weights = []
    for img in images:
        contrast = _laplacian_abs(luminance_of(img))
        saturation = img.std(axis=2)
        wellexp = well_exposedness_map(img)
        weights.append(
            contrast**config.exp_contrast
            * saturation**config.exp_saturation
            * wellexp**config.exp_wellexposedness
        )
    return weights


def _normalize_weights(
    weights: list[np.ndarray], floor: float
) -> list[np.ndarray]:
    floored = [w + floor for w in weights]
    total = floored[0].copy()
    for w in floored[1:]:
        total += w
    if floor == 0.0 and np.any(total == 0.0):
        raise ZeroWeightSumError("all weights vanish at some pixel")
    return [w / total for w in floored]


def weighted_average(
    images: list[np.ndarray],
    weights: list[np.ndarray],
    floor: float = WEIGHT_FLOOR,
) -> np.ndarray:
    """Per-pixel weighted average of the stack, channel by channel.

    The floor keeps the per-pixel weight sum positive; pass ``floor=0`` to
    insist on the raw weights (raises where they all vanish).
    """
    if len(images) != len(weights):
        raise ValueError("one weight map per image required")
    normed = _normalize_weights(weights, floor)
    out = np.zeros_like(images[0])
    for w, img in zip(normed, images):
        out += w[..., None] * img
    return out


def max_pyramid_levels(shape: tuple[int, int]) -> int:
    """Deepest legal pyramid for an image size."""
    return max(1, int(math.floor(math.log2(min(shape[0], shape[1])))))


def auto_pyramid_levels(shape: tuple[int, int]) -> int:
    """Default pyramid depth: one less than the maximum, at least 1."""
    return max(1, max_pyramid_levels(shape) - 1)


def _blur(x: np.ndarray) -> np.ndarray:
    """Separable 5-tap binomial blur with edge-replicated borders."""
    pad = ((2, 2), (0, 0)) if x.ndim == 2 else ((2, 2), (0, 0), (0, 0))
    p = np.pad(x, pad, mode="edge")
    y = sum(_KERNEL[i] * p[i : i + x.shape[0]] for i in range(5))
    pad = ((0, 0), (2, 2)) if x.ndim == 2 else ((0, 0), (2, 2), (0, 0))
    p = np.pad(y, pad, mode="edge")
    return sum(_KERNEL[i] * p[:, i : i + x.shape[1]] for i in range(5))


def _downsample(x: np.ndarray) -> np.ndarray:
    return _blur(x)[::2, ::2]


def _upsample(x: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    r = np.repeat(np.repeat(x, 2, axis=0), 2, axis=1)[: shape[0], : shape[1]]
    return _blur(r)


def gaussian_pyramid(x: np.ndarray, levels: int) -> list[np.ndarray]:
    pyr = [x]
    for _ in range(levels - 1):
        pyr.append(_downsample(pyr[-1]))
    return pyr


def laplacian_pyramid(x: np.ndarray, levels: int) -> list[np.ndarray]:
    gauss = gaussian_pyramid(x, levels)
    pyr = [
        gauss[i] - _upsample(gauss[i + 1], gauss[i].shape[:2])
        for i in range(levels - 1)
    ]
    pyr.append(gauss[-1])
    return pyr


def collapse_pyramid(pyr: list[np.ndarray]) -> np.ndarray:
    x = pyr[-1]
    for lap in reversed(pyr[:-1]):
        x = lap + _upsample(x, lap.shape[:2])
    return x


def pyramid_blend(
    images: list[np.ndarray],
    weights: list[np.ndarray],
    levels: int,
    floor: float = WEIGHT_FLOOR,
) -> np.ndarray:
    """Laplacian-pyramid blend with Gaussian-smoothed normalized weights.

    With ``levels=1`` there is no decomposition and the result matches
    :func:`weighted_average` exactly.
    """
    if len(images) != len(weights):
        raise ValueError("one weight map per image required")
    shape = images[0].shape[:2]
    if levels < 1 or levels > max_pyramid_levels(shape):
        raise InvalidLevelsError(
            f"levels must be in [1, {max_pyramid_levels(shape)}] for size {shape}"
        )
    normed = _normalize_weights(weights, floor)
    blended: list[np.ndarray] | None = None
    for w, img in zip(normed, images):
        w_pyr = gaussian_pyramid(w, levels)
        i_pyr = laplacian_pyramid(img, levels)
        contrib = [wl[..., None] * il for wl, il in zip(w_pyr, i_pyr)]
        if blended is None:
            blended = contrib
        else:
            blended = [b + c for b, c in zip(blended, contrib)]
    return collapse_pyramid(blended)
