"""Synthetic camera pipeline for generating exposure stacks.

Models the capture chain for a static scene: exposure is irradiance times
shutter time, pixel values come from a response function with sensor
saturation, and exposure value (EV) is the log2 shutter ratio against the
proper-exposure shutter.  With a linear response, an image at +1 EV is
exactly twice the 0 EV image wherever unsaturated, which makes these
stacks precise ground truth for the compensation tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .image import ExposureStack
from .io import write_ev_sidecar, write_image


@dataclass
class IrradianceField:
    """Scene irradiance: strictly positive, finite, (H, W) or (H, W, 3)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
            raise ValueError(f"irradiance must be (H, W) or (H, W, 3), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("irradiance contains NaN or infinite values")
        if arr.min() <= 0:
            raise ValueError("irradiance must be strictly positive")
        self.values = arr

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape[0], self.values.shape[1]


@dataclass(frozen=True)
class CrfModel:
    """Camera response: how sensor exposure becomes a pixel value.

    ``linear`` passes exposure straight through, ``gamma`` applies a 1/g
    power after clipping, ``saturating-linear`` is linear with full-well
    at ``saturation_level``.  The final pixel value is always clipped to 1.
    """

    kind: str = "linear"
    gamma: float = 1.0
    saturation_level: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "gamma", "saturating-linear"):
            raise ValueError(f"unknown CRF kind {self.kind!r}")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.saturation_level <= 0:
            raise ValueError("saturation_level must be positive")

    def apply(self, exposure: np.ndarray) -> np.ndarray:
        if self.kind == "linear":
            return exposure
        if self.kind == "gamma":
            return np.minimum(exposure, 1.0) ** (1.0 / self.gamma)
        return exposure / self.saturation_level


def expose(
    field: IrradianceField,
    shutter: float,
    crf: CrfModel = CrfModel(),
    base_shutter: float = 1.0,
) -> tuple[np.ndarray, float]:
    """Capture one image; returns (RGB image, EV tag).

    Pixel value is min(crf(E * shutter), 1); single-channel fields are
    replicated to gray RGB.  EV is log2(shutter) - log2(base_shutter).
    """
    if shutter <= 0 or base_shutter <= 0:
        raise ValueError("shutter times must be positive")
    img = np.minimum(crf.apply(field.values * shutter), 1.0)
    if img.ndim == 2:
        img = np.repeat(img[:, :, None], 3, axis=2)
    ev = float(np.log2(shutter) - np.log2(base_shutter))
    return img, ev


def make_stack(
    field: IrradianceField,
    evs: list[float],
    crf: CrfModel = CrfModel(),
    base_shutter: float = 1.0,
) -> ExposureStack:
    """Capture one image per EV (shutter = 2^ev * base), darkest first.

    EVs may arrive in any order; the stack is always assembled darkest
    first.  Duplicate EVs are rejected.
    """
    evs = sorted(evs)
    if any(b <= a for a, b in zip(evs, evs[1:])):
        raise ValueError("EVs must be distinct")
    images = []
    tags = []
    for ev in evs:
        img, tag = expose(field, (2.0**ev) * base_shutter, crf, base_shutter)
        images.append(img)
        tags.append(tag)
    return ExposureStack(images, tags)


def _texture(rng: np.random.Generator, shape, amount: float) -> np.ndarray:
    """Smooth multiplicative texture around 1, detail at two scales."""
    coarse = rng.random((shape[0] // 8 + 2, shape[1] // 8 + 2))
    coarse = np.kron(coarse, np.ones((8, 8)))[: shape[0], : shape[1]]
    fine = rng.random(shape)
    return 1.0 + amount * (0.7 * (coarse - 0.5) + 0.3 * (fine - 0.5))


def builtin_fields(size: tuple[int, int] = (128, 128)) -> dict[str, IrradianceField]:
    """Deterministic named test scenes.

    ``ramp``: horizontal irradiance ramp.  ``bimodal``: dark textured
    interior with a bright window patch.  ``checker``: two-level
    checkerboard.  Three more window/courtyard/lamp scenes mimic bracketed
    photographs of high dynamic range scenes for end-to-end tests.  All
    scenes are reproducible (fixed seeds).
    """
    h, w = size
    fields: dict[str, IrradianceField] = {}

    ramp = np.tile(np.linspace(0.02, 2.0, w), (h, 1))
    fields["ramp"] = IrradianceField(ramp)

    rng = np.random.default_rng(2018)
    interior = 0.02 * _texture(rng, (h, w), 0.8)
    interior *= np.tile(np.linspace(0.6, 1.4, w), (h, 1))  # side lighting
    window = 8.0 * _texture(rng, (h, w), 0.9)
    bimodal = interior.copy()
    y0, y1 = h // 6, h // 2
    x0, x1 = w // 2, w - w // 8
    bimodal[y0:y1, x0:x1] = window[y0:y1, x0:x1]
    fields["bimodal"] = IrradianceField(bimodal)

    checker = np.indices((h, w)).sum(axis=0) // 8 % 2
    fields["checker"] = IrradianceField(np.where(checker > 0, 1.5, 0.04))

    rng = np.random.default_rng(41)
    room = 0.03 * _texture(rng, (h, w), 0.9)
    room *= np.tile(np.linspace(1.3, 0.5, h), (w, 1)).T  # darker floor
    pane = 8.0 * _texture(rng, (h, w), 0.7)
    scene = room.copy()
    for x0, x1 in ((w // 8, 3 * w // 8), (5 * w // 8, 7 * w // 8)):
        scene[h // 5 : 3 * h // 5, x0:x1] = pane[h // 5 : 3 * h // 5, x0:x1]
    fields["window"] = IrradianceField(scene)

    rng = np.random.default_rng(42)
    ground = 0.025 * _texture(rng, (h, w), 1.0)
    sky = 10.0 * _texture(rng, (h, w), 0.4)
    court = ground.copy()
    horizon = h // 5
    court[:horizon] = sky[:horizon]
    wall = 0.07 * _texture(rng, (h, w), 0.9)
    court[horizon : horizon + h // 6, : w // 3] = wall[
        horizon : horizon + h // 6, : w // 3
    ]
    fields["courtyard"] = IrradianceField(court)

    rng = np.random.default_rng(43)
    yy, xx = np.indices((h, w), dtype=np.float64)
    dist = np.hypot(yy - h / 3, xx - 2 * w / 3) / (0.25 * min(h, w))
    lamp = 0.015 * _texture(rng, (h, w), 0.8) + 10.0 * np.exp(-(dist**6))
    shade = 0.08 * _texture(rng, (h, w), 0.6)
    lamp[2 * h // 3 :, : w // 2] = shade[2 * h // 3 :, : w // 2]
    fields["lamp"] = IrradianceField(lamp)

    return fields


def write_stack(
    stack: ExposureStack,
    out_dir,
    prefix: str = "stack",
    bit_depth: int = 8,
    encode_srgb: bool = False,
    image_format: str = "png",
) -> list[str]:
    """Write stack images plus the EV sidecar; returns written image paths."""
    os.makedirs(out_dir, exist_ok=True)
    evs = stack.evs if stack.evs is not None else list(range(len(stack)))
    paths = []
    entries = []
    for img, ev in zip(stack.images, evs):
        name = f"{prefix}_ev{ev:+g}.{image_format}"
        path = os.path.join(out_dir, name)
        write_image(img, path, encode_srgb=encode_srgb, bit_depth=bit_depth)
        paths.append(path)
        entries.append((name, float(ev)))
    write_ev_sidecar(os.path.join(out_dir, f"{prefix}_evs.txt"), entries)
    return paths
