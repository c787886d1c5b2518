from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm


@dataclass(frozen=True)
class HolonomyResult:
    abelian_phase: float | None = None
    dark_unitary: np.ndarray | None = None
    leakage: float | None = None
    min_gap: float | None = None

    def __post_init__(self):
        if self.leakage is not None and not 0.0 <= self.leakage <= 1.0:
            raise ValueError("leakage must lie in [0, 1]")


def path_ordered_exp(increments: Sequence[np.ndarray]) -> np.ndarray:
    """Product exp(X_K) ... exp(X_2) exp(X_1), later increments to the left."""
    increments = list(increments)
    d = increments[0].shape[0]
    u = np.eye(d, dtype=complex)
    for x in increments:
        u = expm(x) @ u
    return u
