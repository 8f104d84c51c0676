"""Reference-free quality metrics for stacks and fused images.

Three measures: per-pixel well-exposedness (Gaussian closeness to
mid-range, the Mertens et al. 2009 quality measure with sigma = 0.2),
discrete entropy of the 8-bit luminance histogram, and the statistical
naturalness term of the tone-mapped image quality index (TMQI, Yeganeh &
Wang 2013).  Structural fidelity of the TMQI needs an HDR reference and is
out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import luminance_of
from .io import quantize

WELLEXP_SIGMA = 0.2

# Statistical naturalness constants from the TMQI reference
# implementation (Yeganeh & Wang 2013): Gaussian fit of global means,
# Beta fit of mean local standard deviations on 8-bit grayscale images.
TMQI_MEAN_MU = 115.94
TMQI_MEAN_SIGMA = 27.99
TMQI_BETA_A = 4.4
TMQI_BETA_B = 10.1
TMQI_STD_SCALE = 64.29
TMQI_BLOCK = 11


def well_exposedness_map(image: np.ndarray) -> np.ndarray:
    """Per-pixel exposure quality in (0, 1].

    Product over channels of exp(-(c - 0.5)^2 / (2 * 0.2^2)); peaks at
    mid-gray and decays symmetrically toward under- and over-exposure.
    """
    dev = (np.asarray(image) - 0.5) ** 2
    return np.exp(-dev.sum(axis=2) / (2.0 * WELLEXP_SIGMA**2))


def max_well_exposedness(images: list[np.ndarray]) -> np.ndarray:
    """Pixelwise best well-exposedness achieved anywhere in the stack."""
    if not images:
        raise ValueError("need at least one image")
    best = well_exposedness_map(images[0])
    for img in images[1:]:
        best = np.maximum(best, well_exposedness_map(img))
    return best


def _gray_codes(image: np.ndarray) -> np.ndarray:
    """8-bit grayscale codes of an RGB image or a bare luminance map."""
    lum = image if image.ndim == 2 else luminance_of(image)
    return quantize(lum, 255)


def discrete_entropy(image: np.ndarray) -> float:
    """Shannon entropy of the 8-bit grayscale histogram, in bits [0, 8]."""
    hist = np.bincount(_gray_codes(image).ravel(), minlength=256)
    p = hist / hist.sum()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _mean_block_std(gray: np.ndarray, block: int = TMQI_BLOCK) -> float:
    """Mean local standard deviation over non-overlapping blocks.

    Each block contributes its sample standard deviation once per pixel it
    covers (blockproc semantics); edge blocks are smaller, single-pixel
    blocks count as zero spread.
    """
    h, w = gray.shape
    total = 0.0
    for y in range(0, h, block):
        for x in range(0, w, block):
            tile = gray[y : y + block, x : x + block]
            std = float(tile.std(ddof=1)) if tile.size > 1 else 0.0
            total += std * tile.size
    return total / (h * w)


def statistical_naturalness(image: np.ndarray) -> float:
    """TMQI statistical naturalness in [0, 1], computed on 8-bit grayscale.

    Product of a brightness term (Gaussian density of the global mean,
    peak at code 115.94) and a contrast term (Beta density of the mean
    local standard deviation rescaled by 64.29), each normalized by its
    own maximum so the product's peak is 1.
    """
    gray = _gray_codes(image).astype(np.float64)
    u = float(gray.mean())
    sig = _mean_block_std(gray)

    pm = np.exp(-((u - TMQI_MEAN_MU) ** 2) / (2.0 * TMQI_MEAN_SIGMA**2))

    x = sig / TMQI_STD_SCALE
    a, b = TMQI_BETA_A, TMQI_BETA_B
    mode = (a - 1.0) / (a + b - 2.0)
    if 0.0 < x < 1.0:
        # Density ratio to the mode; the Beta normalizer cancels.
        pd = (x / mode) ** (a - 1.0) * ((1.0 - x) / (1.0 - mode)) ** (b - 1.0)
    else:
        pd = 0.0
    return float(pm * pd)


@dataclass
class QualityReport:
    """Metric summary for one fusion run."""

    scheme: str
    adjusted: bool
    statistical_naturalness: float
    discrete_entropy: float
    mean_well_exposedness: list[float]

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "adjusted": self.adjusted,
            "statistical_naturalness": self.statistical_naturalness,
            "discrete_entropy": self.discrete_entropy,
            "mean_well_exposedness": self.mean_well_exposedness,
        }

    CSV_HEADER = (
        "scheme,adjusted,statistical_naturalness,discrete_entropy,"
        "mean_well_exposedness"
    )

    def csv_row(self) -> str:
        wellexp = ";".join(f"{v:.6f}" for v in self.mean_well_exposedness)
        return (
            f"{self.scheme},{self.adjusted},"
            f"{self.statistical_naturalness:.6f},"
            f"{self.discrete_entropy:.6f},{wellexp}"
        )


def build_report(
    stack_images: list[np.ndarray],
    adjusted_images: list[np.ndarray],
    fused: np.ndarray,
    config,
    adjusted: bool,
) -> QualityReport:
    """Aggregate the three metrics for a pipeline run.

    Well-exposedness is reported per adjusted image (the images actually
    fused); entropy and naturalness are computed on the fused result.
    ``config`` only needs a ``scheme`` attribute; ``stack_images`` is
    accepted for API symmetry but the report scores the fused inputs.
    """
    return QualityReport(
        scheme=getattr(config, "scheme", "simple"),
        adjusted=adjusted,
        statistical_naturalness=statistical_naturalness(fused),
        discrete_entropy=discrete_entropy(fused),
        mean_well_exposedness=[
            float(well_exposedness_map(img).mean()) for img in adjusted_images
        ],
    )
