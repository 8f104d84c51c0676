import numpy as np
import pytest

from expofuse.io import (
    UnsupportedFormatError,
    linear_to_srgb,
    quantize,
    read_ev_sidecar,
    read_image,
    srgb_to_linear,
    write_ev_sidecar,
    write_image,
)

from conftest import random_rgb


def test_quantize_rounds_half_up():
    vals = np.array([0.0, 1.0, 0.5, 126.5 / 255, 126.4999 / 255])
    codes = quantize(vals, 255)
    assert codes.dtype == np.uint8
    # 0.5 * 255 = 127.5 rounds up, 126.5 rounds up, just below stays down
    assert codes.tolist() == [0, 255, 128, 127, 126]


def test_quantize_clamps_out_of_range():
    codes = quantize(np.array([-0.25, 1.25]), 255)
    assert codes.tolist() == [0, 255]


def test_quantize_16_bit():
    codes = quantize(np.array([0.0, 0.5, 1.0]), 65535)
    assert codes.dtype == np.uint16
    assert codes.tolist() == [0, 32768, 65535]


def test_srgb_transfer_round_trip():
    x = np.linspace(0.0, 1.0, 1001)
    assert np.allclose(linear_to_srgb(srgb_to_linear(x)), x, atol=1e-12)
    assert np.allclose(srgb_to_linear(linear_to_srgb(x)), x, atol=1e-12)


def test_srgb_transfer_anchors():
    assert srgb_to_linear(np.array([0.0]))[0] == 0.0
    assert srgb_to_linear(np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-12)
    # IEC 61966-2-1: mid code 0.5 decodes near 0.214
    assert srgb_to_linear(np.array([0.5]))[0] == pytest.approx(0.21404114, abs=1e-7)
    # linear segment below the knee
    assert srgb_to_linear(np.array([0.03]))[0] == pytest.approx(0.03 / 12.92, rel=1e-12)


def test_srgb_transfer_continuous_at_knee():
    below = srgb_to_linear(np.array([0.04044999]))[0]
    above = srgb_to_linear(np.array([0.04045001]))[0]
    assert abs(above - below) < 1e-6


def test_png_8_bit_round_trip_is_exact(tmp_path, rng):
    codes = rng.integers(0, 256, (9, 7, 3))
    img = codes / 255.0
    path = tmp_path / "a.png"
    write_image(img, path)
    back = read_image(path)
    assert back.shape == (9, 7, 3)
    assert np.array_equal(back, img)


def test_png_16_bit_round_trip_is_exact(tmp_path, rng):
    codes = rng.integers(0, 65536, (6, 6, 3))
    img = codes / 65535.0
    path = tmp_path / "b.png"
    write_image(img, path, bit_depth=16)
    assert np.array_equal(read_image(path), img)


def test_ppm_round_trip_is_exact(tmp_path, rng):
    codes = rng.integers(0, 256, (5, 8, 3))
    img = codes / 255.0
    path = tmp_path / "c.ppm"
    write_image(img, path)
    assert np.array_equal(read_image(path), img)


def test_srgb_encode_decode_round_trip_within_half_code(tmp_path, rng):
    img = random_rgb(rng, (8, 8))
    path = tmp_path / "d.png"
    write_image(img, path, encode_srgb=True)
    back = read_image(path, assume_srgb=True)
    # 8-bit quantization in gamma space; error bound mapped through the
    # decode slope (<= ~12.92x at the dark end is the worst case)
    assert np.abs(back - img).max() < 0.5 / 255 * 13


def test_gray_write_replicates_channels(tmp_path):
    lum = np.linspace(0.0, 1.0, 30).reshape(5, 6)
    path = tmp_path / "g.png"
    write_image(lum, path)
    back = read_image(path)
    assert back.shape == (5, 6, 3)
    assert np.array_equal(back[..., 0], back[..., 1])
    assert np.array_equal(back[..., 0], back[..., 2])


def test_unsupported_suffix_raises(tmp_path):
    with pytest.raises(UnsupportedFormatError):
        read_image(tmp_path / "x.jpeg")
    with pytest.raises(UnsupportedFormatError):
        write_image(np.zeros((2, 2, 3)), tmp_path / "x.tiff")


def test_missing_file_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_image(tmp_path / "missing.png")


def test_ev_sidecar_round_trip(tmp_path):
    entries = [("dark.png", -2.0), ("mid.png", 0.0), ("bright.png", 1.5)]
    path = tmp_path / "stack_evs.txt"
    write_ev_sidecar(path, entries)
    assert read_ev_sidecar(path) == entries
