"""Named data profiles on [0, l] used by the CLI and the test corpus.

``sin_k``: pure modes (compatible to all orders); ``bump``: a smooth
compactly supported hump (all end derivatives vanish); ``poly``: x(l-x);
``poly_cubic``: x(l-x)(l-2x).  The polynomial profiles vanish at the ends
but have non-vanishing end derivatives, which exercises the
slightly-incompatible-data paths.
"""

from __future__ import annotations

import math
import re

import numpy as np

__all__ = ["make_profile", "profile_names"]


def _bump(x, l):
    s = np.clip(np.asarray(x, dtype=float) / l, 0.0, 1.0)
    inner = s * (1.0 - s)
    out = np.zeros_like(s)
    pos = inner > 0
    # normalised to peak value 1 at the midpoint
    out[pos] = np.exp(4.0 - 1.0 / inner[pos])
    return out


def profile_names() -> list:
    return ["sin_<k>", "bump", "poly", "poly_cubic"]


def make_profile(name: str, l: float):
    """Vectorised callable x -> values for a named profile."""
    m = re.fullmatch(r"sin_(\d+)", name)
    if m:
        k = int(m.group(1))
        if k < 1:
            raise ValueError("sine mode index must be >= 1")
        return lambda x: np.sin(k * math.pi * np.asarray(x, dtype=float) / l)
    if name == "bump":
        return lambda x: _bump(x, l)
    if name == "poly":
        return lambda x: np.asarray(x, dtype=float) * (l - np.asarray(x, dtype=float))
    if name == "poly_cubic":
        return lambda x: (np.asarray(x, dtype=float) * (l - np.asarray(x, dtype=float))
                          * (l - 2.0 * np.asarray(x, dtype=float)))
    raise ValueError(f"unknown profile {name!r}; available: {', '.join(profile_names())}")
