"""Space-time sample container shared by the spectral and oracle solvers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Field"]


@dataclass
class Field:
    """Solution samples; values[i, j] = u(x_i, t_j), zero on boundary rows."""

    x_nodes: np.ndarray
    t_nodes: np.ndarray
    values: np.ndarray
    values_dt: np.ndarray | None = None

    def sup_norm_per_time(self) -> np.ndarray:
        return np.max(np.abs(self.values), axis=0)
