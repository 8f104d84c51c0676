"""End-to-end flow: enhance, compensate, tone map, restore, fuse, score.

Per image: luminance -> dodging-and-burning contrast enhancement -> gain
from the stack-wide compensation plan -> Reinhard tone mapping against the
image's own peak -> color restoration.  The balanced images are then fused
and scored.  Everything is deterministic for fixed inputs and settings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compensate import (
    DEFAULT_TARGET_GRAY,
    CompensationPlan,
    apply_gain,
    estimate_gains,
)
from .enhance import dodge_burn
from .filters import BilateralParams
from .fuse import (
    FusionConfig,
    auto_pyramid_levels,
    mertens_weights,
    pyramid_blend,
    simple_weights,
    weighted_average,
)
from .image import DEFAULT_EPSILON, ExposureStack, luminance_of
from .metrics import QualityReport, build_report
from .tonemap import restore_color, tonemap_stack_image


@dataclass
class PipelineParams:
    """Adjustment-stage settings with the published defaults."""

    bilateral: BilateralParams = field(default_factory=BilateralParams)
    epsilon: float = DEFAULT_EPSILON
    target_gray: float = DEFAULT_TARGET_GRAY
    exact_bilateral: bool = False


@dataclass
class Intermediates:
    """Stage outputs kept for inspection and tests."""

    luminances: list[np.ndarray]
    enhanced_lums: list[np.ndarray]
    plan: CompensationPlan | None
    gained_lums: list[np.ndarray]
    tonemapped_lums: list[np.ndarray]
    adjusted: ExposureStack
    weight_maps: list[np.ndarray] | None = None


@dataclass
class PipelineResult:
    fused: np.ndarray
    report: QualityReport
    intermediates: Intermediates | None = None


def _adjust_details(stack: ExposureStack, params: PipelineParams) -> Intermediates:
    lums = [luminance_of(img) for img in stack.images]
    enhanced = [
        dodge_burn(lum, params.bilateral, exact=params.exact_bilateral)
        for lum in lums
    ]
    plan = estimate_gains(enhanced, params.epsilon, params.target_gray)
    gained = [
        apply_gain(lum, alpha) for lum, alpha in zip(enhanced, plan.gains)
    ]
    tonemapped = [tonemap_stack_image(lum) for lum in gained]
    adjusted_images = [
        restore_color(img, lum, new_lum)
        for img, lum, new_lum in zip(stack.images, lums, tonemapped)
    ]
    adjusted = ExposureStack(adjusted_images, stack.evs)
    return Intermediates(lums, enhanced, plan, gained, tonemapped, adjusted)


def adjust_stack(
    stack: ExposureStack, params: PipelineParams = PipelineParams()
) -> ExposureStack:
    """Exposure-compensated, tone-mapped version of the stack."""
    return _adjust_details(stack, params).adjusted


def run(
    stack: ExposureStack,
    fusion: FusionConfig = FusionConfig(),
    adjust: bool = True,
    params: PipelineParams = PipelineParams(),
    keep_intermediates: bool = False,
) -> PipelineResult:
    """Fuse a stack, optionally after luminance adjustment, and score it.

    With ``adjust=False`` the raw stack is fused directly (the baseline
    condition); the report always covers whatever was actually fused.
    """
    if adjust:
        details = _adjust_details(stack, params)
        fuse_stack = details.adjusted
    else:
        details = None
        fuse_stack = stack

    if fusion.scheme == "simple":
        weights = simple_weights(len(fuse_stack), fuse_stack.shape)
    else:
        weights = mertens_weights(fuse_stack.images, fusion)

    if fusion.blend == "naive":
        fused = weighted_average(fuse_stack.images, weights)
    else:
        levels = fusion.pyramid_levels
        if levels is None:
            levels = auto_pyramid_levels(fuse_stack.shape)
        fused = pyramid_blend(fuse_stack.images, weights, levels)

    report = build_report(
        stack.images, fuse_stack.images, fused, fusion, adjusted=adjust
    )
    intermediates = None
    if keep_intermediates:
        if details is None:
            details = Intermediates(
                [luminance_of(img) for img in stack.images],
                [], None, [], [], stack,
            )
        details.weight_maps = weights
        intermediates = details
    return PipelineResult(fused, report, intermediates)
