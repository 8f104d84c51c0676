"""Image file I/O: PPM (P6) and PNG at 8 or 16 bit.

OpenCV provides the container codecs; everything with numeric consequences
(code-to-float mapping, sRGB transfer, round-half-up quantization) is done
here so results do not depend on codec internals.  Internal data is always
linear-light float64; the sRGB transfer is applied only at this boundary
when requested.
"""

from __future__ import annotations

import os

import cv2
import numpy as np

SUPPORTED_SUFFIXES = {".ppm", ".png"}


class UnsupportedFormatError(ValueError):
    """File extension outside the supported PPM/PNG set."""


class CorruptFileError(ValueError):
    """File exists but could not be decoded."""


class IoFailureError(OSError):
    """Encoding or writing an image file failed."""


def srgb_to_linear(encoded: np.ndarray) -> np.ndarray:
    """Inverse sRGB transfer (IEC 61966-2-1), elementwise on [0, 1]."""
    encoded = np.asarray(encoded, dtype=np.float64)
    return np.where(
        encoded <= 0.04045,
        encoded / 12.92,
        ((encoded + 0.055) / 1.055) ** 2.4,
    )


def linear_to_srgb(linear: np.ndarray) -> np.ndarray:
    """Forward sRGB transfer, elementwise on [0, 1]."""
    linear = np.asarray(linear, dtype=np.float64)
    return np.where(
        linear <= 0.0031308,
        12.92 * linear,
        1.055 * np.power(linear, 1.0 / 2.4) - 0.055,
    )


def quantize(values: np.ndarray, max_code: int, clamp: bool = True) -> np.ndarray:
    """Map [0, 1] floats to integer codes, rounding half up."""
    v = np.asarray(values, dtype=np.float64)
    if clamp:
        v = np.clip(v, 0.0, 1.0)
    codes = np.floor(v * max_code + 0.5)
    # Even with clamp=False the codes must stay encodable.
    codes = np.clip(codes, 0, max_code)
    return codes.astype(np.uint8 if max_code <= 255 else np.uint16)


def _check_suffix(path: str) -> str:
    suffix = os.path.splitext(str(path))[1].lower()
    if suffix not in SUPPORTED_SUFFIXES:
        raise UnsupportedFormatError(
            f"unsupported image format {suffix!r}; use PPM or PNG"
        )
    return suffix


def read_image(path, assume_srgb: bool = False) -> np.ndarray:
    """Read a PPM/PNG file into a linear-light (H, W, 3) float64 array.

    Integer codes are mapped to [0, 1] by dividing by the code range; with
    ``assume_srgb`` the inverse sRGB transfer is applied afterwards.
    Grayscale files are replicated to three channels.
    """
    _check_suffix(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise CorruptFileError(f"could not decode image file {path}")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise UnsupportedFormatError(
            f"unsupported sample type {raw.dtype} in {path}; use 8 or 16 bit"
        )
    if raw.ndim == 2:
        raw = np.repeat(raw[:, :, None], 3, axis=2)
    elif raw.shape[2] == 4:
        raw = raw[:, :, :3]
    data = raw[:, :, ::-1].astype(np.float64) / scale  # BGR -> RGB
    if assume_srgb:
        data = srgb_to_linear(data)
    return data


def write_image(
    image: np.ndarray,
    path,
    encode_srgb: bool = False,
    clamp: bool = True,
    bit_depth: int = 8,
) -> None:
    """Write an image as PPM/PNG with round-half-up quantization.

    2-D arrays are written as grayscale, (H, W, 3) as color.  ``clamp``
    limits values to [0, 1] before encoding; out-of-range values with
    ``clamp=False`` still land on the nearest representable code.
    """
    suffix = _check_suffix(path)
    if bit_depth not in (8, 16):
        raise ValueError("bit_depth must be 8 or 16")
    data = np.asarray(image, dtype=np.float64)
    if data.ndim not in (2, 3):
        raise ValueError(f"expected 2-D or 3-D image data, got shape {data.shape}")
    if encode_srgb:
        data = linear_to_srgb(np.clip(data, 0.0, 1.0) if clamp else data)
    codes = quantize(data, 255 if bit_depth == 8 else 65535, clamp=clamp)
    if codes.ndim == 3:
        codes = codes[:, :, ::-1]  # RGB -> BGR
    elif suffix == ".ppm":
        codes = np.repeat(codes[:, :, None], 3, axis=2)
    try:
        ok = cv2.imwrite(str(path), codes)
    except cv2.error as exc:
        raise IoFailureError(f"failed to write {path}: {exc}") from exc
    if not ok:
        raise IoFailureError(f"failed to write {path}")


def write_ev_sidecar(path, entries: list[tuple[str, float]]) -> None:
    """Write a plain-text sidecar of ``name ev`` lines."""
    with open(path, "w", encoding="ascii") as fh:
        for name, ev in entries:
            fh.write(f"{name} {ev:g}\n")


def read_ev_sidecar(path) -> list[tuple[str, float]]:
    """Parse a ``name ev`` sidecar written by :func:`write_ev_sidecar`."""
    entries = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            name, ev = line.rsplit(None, 1)
            entries.append((name, float(ev)))
    return entries
