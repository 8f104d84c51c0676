import numpy as np
import pytest

from expofuse.filters import BilateralParams
from expofuse.fuse import FusionConfig
from expofuse.image import ExposureStack, luminance_of
from expofuse.pipeline import PipelineParams, PipelineResult, adjust_stack, run
from expofuse.synth import CrfModel, builtin_fields, make_stack

FAST = PipelineParams(bilateral=BilateralParams(sigma_spatial=2.0, radius=6))


def small_stack(name="bimodal", evs=(-2.0, 0.0, 2.0), size=(32, 32)):
    field = builtin_fields(size)[name]
    return make_stack(field, list(evs), CrfModel("saturating-linear"))


def test_adjust_preserves_stack_geometry():
    stack = small_stack()
    adjusted = adjust_stack(stack, FAST)
    assert isinstance(adjusted, ExposureStack)
    assert len(adjusted) == len(stack)
    assert adjusted.shape == stack.shape
    assert adjusted.evs == stack.evs


def test_adjusted_luminance_is_display_ready():
    stack = small_stack()
    adjusted = adjust_stack(stack, FAST)
    for img in adjusted.images:
        lum = luminance_of(img)
        assert lum.max() <= 1.0 + 1e-9
        assert lum.min() >= 0.0


def test_unadjusted_simple_naive_is_plain_mean():
    stack = small_stack()
    result = run(stack, FusionConfig(), adjust=False, params=FAST)
    want = sum(stack.images) / len(stack)
    assert np.abs(result.fused - want).max() < 1e-12
    assert result.report.adjusted is False


def test_run_returns_report_and_optional_intermediates():
    stack = small_stack()
    result = run(stack, FusionConfig(), params=FAST)
    assert isinstance(result, PipelineResult)
    assert result.intermediates is None
    assert result.report.scheme == "simple"
    assert result.report.adjusted is True

    kept = run(stack, FusionConfig(), params=FAST, keep_intermediates=True)
    inter = kept.intermediates
    assert inter is not None
    assert len(inter.luminances) == 3
    assert len(inter.enhanced_lums) == 3
    assert len(inter.gained_lums) == 3
    assert len(inter.tonemapped_lums) == 3
    assert inter.plan is not None
    assert np.all(inter.plan.gains > 0)
    assert len(inter.weight_maps) == 3


def test_run_is_deterministic():
    stack = small_stack()
    a = run(stack, FusionConfig(scheme="mertens", blend="pyramid"), params=FAST)
    b = run(stack, FusionConfig(scheme="mertens", blend="pyramid"), params=FAST)
    assert np.array_equal(a.fused, b.fused)


def test_mertens_pyramid_path_stays_in_gamut():
    stack = small_stack(size=(32, 32))
    result = run(
        stack, FusionConfig(scheme="mertens", blend="pyramid"), params=FAST
    )
    assert result.report.scheme == "mertens"
    assert np.all(np.isfinite(result.fused))
    # pyramid blending can ring slightly past the endpoints, never wildly
    assert result.fused.min() > -0.1
    assert result.fused.max() < 1.1


def test_explicit_pyramid_levels_respected():
    stack = small_stack()
    one = run(
        stack,
        FusionConfig(scheme="simple", blend="pyramid", pyramid_levels=1),
        params=FAST,
    )
    naive = run(stack, FusionConfig(scheme="simple", blend="naive"), params=FAST)
    assert np.array_equal(one.fused, naive.fused)


def test_adjustment_changes_the_result():
    stack = small_stack()
    raw = run(stack, FusionConfig(), adjust=False, params=FAST)
    adj = run(stack, FusionConfig(), adjust=True, params=FAST)
    assert not np.array_equal(raw.fused, adj.fused)


def test_single_image_stack_runs():
    field = builtin_fields((16, 16))["ramp"]
    stack = make_stack(field, [0.0])
    result = run(stack, FusionConfig(), params=FAST)
    assert result.fused.shape == (16, 16, 3)
    assert np.all(np.isfinite(result.fused))


def test_exact_bilateral_matches_windowed_when_covering():
    stack = small_stack(size=(16, 16))
    p_win = PipelineParams(bilateral=BilateralParams(sigma_spatial=2.0, radius=20))
    p_full = PipelineParams(
        bilateral=BilateralParams(sigma_spatial=2.0, radius=20), exact_bilateral=True
    )
    a = run(stack, FusionConfig(), params=p_win)
    b = run(stack, FusionConfig(), params=p_full)
    assert np.array_equal(a.fused, b.fused)


def test_custom_target_gray_shifts_brightness():
    stack = small_stack()
    dim = run(
        stack,
        FusionConfig(),
        params=PipelineParams(
            bilateral=FAST.bilateral, target_gray=0.09
        ),
    )
    bright = run(
        stack,
        FusionConfig(),
        params=PipelineParams(
            bilateral=FAST.bilateral, target_gray=0.36
        ),
    )
    assert bright.fused.mean() > dim.fused.mean()


def test_constant_mid_gray_single_image_becomes_white():
    # geometric mean already at 0.18 so the gain is 1; the tonemap then
    # sends the (constant) peak luminance to 1.0
    stack = ExposureStack([np.full((8, 8, 3), 0.18)], [0.0])
    adjusted = adjust_stack(stack, FAST)
    assert np.allclose(adjusted.images[0], 1.0, atol=1e-12)


def test_middle_gained_luminance_hits_middle_gray():
    from expofuse.image import geometric_mean

    stack = small_stack()
    result = run(stack, FusionConfig(), params=FAST, keep_intermediates=True)
    inter = result.intermediates
    j = inter.plan.middle_index - 1
    assert geometric_mean(inter.gained_lums[j]) == pytest.approx(0.18, rel=1e-9)


def test_unadjusted_single_image_passes_through():
    field = builtin_fields((16, 16))["ramp"]
    stack = make_stack(field, [0.0])
    result = run(stack, FusionConfig(), adjust=False, params=FAST)
    assert np.abs(result.fused - stack.images[0]).max() < 1e-15
