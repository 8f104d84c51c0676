import numpy as np
import pytest

from expofuse.image import ExposureStack
from expofuse.io import read_ev_sidecar, read_image
from expofuse.synth import (
    CrfModel,
    IrradianceField,
    builtin_fields,
    expose,
    make_stack,
    write_stack,
)


def test_field_requires_positive_irradiance():
    with pytest.raises(ValueError):
        IrradianceField(np.zeros((4, 4)))
    with pytest.raises(ValueError):
        IrradianceField(np.full((4, 4), -1.0))
    IrradianceField(np.full((4, 4), 1e-9))  # strictly positive is fine


def test_crf_kinds():
    x = np.array([0.25, 0.5, 1.0])
    assert np.allclose(CrfModel("linear").apply(x), x)
    assert np.allclose(CrfModel("gamma", gamma=2.0).apply(x), np.sqrt(x))
    assert np.allclose(
        CrfModel("saturating-linear", saturation_level=2.0).apply(x), x / 2.0
    )
    with pytest.raises(ValueError):
        CrfModel("sigmoid")


def test_expose_reports_log2_shutter_ratio():
    field = IrradianceField(np.full((4, 4), 0.1))
    _, ev = expose(field, shutter=4.0, base_shutter=1.0)
    assert ev == 2.0
    _, ev = expose(field, shutter=0.25)
    assert ev == -2.0


def test_expose_saturates_at_one():
    field = IrradianceField(np.full((2, 2), 3.0))
    img, _ = expose(field, shutter=1.0)
    assert img.shape == (2, 2, 3)
    assert np.all(img == 1.0)


def test_linear_crf_doubles_per_stop():
    field = IrradianceField(np.linspace(0.01, 0.2, 16).reshape(4, 4))
    dim, _ = expose(field, shutter=1.0)
    bright, _ = expose(field, shutter=2.0)
    assert np.allclose(bright, 2.0 * dim, rtol=0, atol=1e-15)


def test_make_stack_orders_by_ev():
    field = IrradianceField(np.full((4, 4), 0.2))
    stack = make_stack(field, [1.0, -1.0, 0.0])
    assert isinstance(stack, ExposureStack)
    assert stack.evs == [-1.0, 0.0, 1.0]
    means = [img.mean() for img in stack.images]
    assert means[0] < means[1] < means[2]


def test_builtin_fields_are_deterministic():
    a = builtin_fields((32, 32))
    b = builtin_fields((32, 32))
    assert set(a) == {"ramp", "bimodal", "checker", "window", "courtyard", "lamp"}
    for name in a:
        assert a[name].values.shape == (32, 32)
        assert np.array_equal(a[name].values, b[name].values)
        assert a[name].values.min() > 0.0


def test_builtin_bimodal_has_two_modes():
    field = builtin_fields((64, 64))["bimodal"].values
    # interior around 0.02, window patch around 8: four stops apart
    assert field.min() < 0.05
    assert field.max() > 4.0


def test_write_stack_round_trip(tmp_path):
    field = builtin_fields((16, 16))["ramp"]
    stack = make_stack(field, [-1.0, 0.0, 1.0], CrfModel("linear"))
    paths = write_stack(stack, tmp_path, prefix="t")
    assert len(paths) == 3
    names = [p.rsplit("/", 1)[-1] for p in paths]
    assert names == ["t_ev-1.png", "t_ev+0.png", "t_ev+1.png"]

    entries = read_ev_sidecar(tmp_path / "t_evs.txt")
    assert [ev for _, ev in entries] == [-1.0, 0.0, 1.0]
    for (name, _), path in zip(entries, paths):
        assert name in path
        img = read_image(path)
        assert img.shape == (16, 16, 3)


def test_write_stack_16_bit_preserves_detail(tmp_path):
    field = builtin_fields((16, 16))["ramp"]
    stack = make_stack(field, [0.0], CrfModel("linear"))
    (p8,) = write_stack(stack, tmp_path, prefix="a", bit_depth=8)
    (p16,) = write_stack(stack, tmp_path, prefix="b", bit_depth=16)
    img8 = read_image(p8)
    img16 = read_image(p16)
    err8 = np.abs(img8 - stack.images[0]).max()
    err16 = np.abs(img16 - stack.images[0]).max()
    assert err16 < err8
    assert err16 <= 0.5 / 65535 + 1e-12
