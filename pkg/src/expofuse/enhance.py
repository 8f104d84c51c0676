"""Local contrast enhancement by dodging and burning.

Each pixel is scaled by its ratio to the edge-preserving local average:
pixels brighter than their neighborhood get brighter, darker ones get
darker.  See Huo et al. (2013), "Dodging and burning inspired inverse tone
mapping algorithm".
"""

from __future__ import annotations

import numpy as np

from .filters import BilateralParams, bilateral_local_average
from .image import as_luminance


def dodge_burn(
    lum: np.ndarray,
    params: BilateralParams = BilateralParams(),
    exact: bool = False,
) -> np.ndarray:
    """Contrast-enhanced luminance L^2 / local_average(L).

    The local average is zero only where the whole neighborhood (including
    the pixel itself) is zero, so 0/0 is defined as 0.
    """
    lum = as_luminance(lum)
    local = bilateral_local_average(lum, params, exact=exact)
    out = np.zeros_like(lum)
    nz = local > 0.0
    out[nz] = lum[nz] * lum[nz] / local[nz]
    return out
