from __future__ import annotations

import math

_COTH_SERIES_CUTOFF = 1e-4


def coth(x: float) -> float:
    """Hyperbolic cotangent, using the Laurent series near zero."""
    if x == 0:
        raise ZeroDivisionError("coth(0)")
    ax = abs(x)
    if ax < _COTH_SERIES_CUTOFF:
        return 1.0 / x + x / 3.0 - x**3 / 45.0
    return 1.0 / math.tanh(x)
