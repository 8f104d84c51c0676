"""Global tone mapping and color restoration.

Gained luminance regularly exceeds 1; Reinhard's global operator
(Reinhard et al. 2002, "Photographic tone reproduction for digital
images") compresses it back into [0, 1] without truncation.  With the
white point set to the map's maximum, the brightest pixel lands exactly
on 1.  Color is restored by scaling the original RGB by the luminance
ratio, which preserves chromaticity.
"""

from __future__ import annotations

import numpy as np


def reinhard(lum: np.ndarray, l_white: float) -> np.ndarray:
    """Reinhard's global operator L/(1+L) * (1 + L/l_white^2).

    Strictly increasing in L, with reinhard(l_white) == 1.
    """
    if l_white <= 0:
        raise ValueError("l_white must be positive")
    lw_sq = l_white * l_white
    return lum / (1.0 + lum) * (1.0 + lum / lw_sq)


def tonemap_stack_image(adjusted: np.ndarray) -> np.ndarray:
    """Tone map a gained luminance map with its own maximum as white point.

    Output is guaranteed to stay in [0, 1]; the clip only absorbs
    last-ulp rounding above 1.  An all-zero map is returned unchanged.
    """
    peak = float(adjusted.max())
    if peak == 0.0:
        return np.zeros_like(adjusted)
    return np.minimum(reinhard(adjusted, peak), 1.0)


def restore_color(
    original: np.ndarray,
    original_lum: np.ndarray,
    new_lum: np.ndarray,
) -> np.ndarray:
    """Rescale RGB channels to the new luminance: C * new_L / old_L.

    Channel ratios are untouched wherever the original luminance is
    positive; zero-luminance pixels (all channels zero under the Rec. 709
    weighting) stay zero.
    """
    ratio = np.zeros_like(original_lum)
    nz = original_lum > 0.0
    ratio[nz] = new_lum[nz] / original_lum[nz]
    return original * ratio[..., None]
