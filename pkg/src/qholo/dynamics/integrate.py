"""Fixed-step RK4 building blocks shared by the evolution engines."""
from __future__ import annotations

import math
import warnings

import numpy as np

DEFAULT_DT_FACTOR = 0.05
WARN_DT_NORM = 0.1
CHUNK = 2048
MAX_RECORDS = 2000


class StepSizeWarning(UserWarning):
    pass


def step_grid(t_span, dt: float) -> tuple[int, float]:
    t0, t1 = map(float, t_span)
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    return n, (t1 - t0) / n


def default_dt(ham, t_span) -> float:
    nrm = ham.max_norm(t_span)
    return DEFAULT_DT_FACTOR / nrm if nrm > 0 else (t_span[1] - t_span[0]) / 100


def check_dt(ham, t_span, h: float):
    nrm = ham.max_norm(t_span)
    if h * nrm > WARN_DT_NORM:
        warnings.warn(f"dt*||H|| = {h * nrm:.3g} exceeds {WARN_DT_NORM}; RK4 accuracy will suffer",
                      StepSizeWarning, stacklevel=3)
    return nrm


def record_stride(n_steps: int, max_records: int = MAX_RECORDS) -> int:
    return max(1, math.ceil(n_steps / max_records))


def half_grid(t0: float, h: float, k0: int, k1: int) -> np.ndarray:
    """Times t_k, t_k + h/2 for k in [k0, k1) plus t_{k1}."""
    return t0 + h * (k0 + 0.5 * np.arange(2 * (k1 - k0) + 1))


def rk4_propagators(gen: np.ndarray, h: float) -> np.ndarray:
    """One-step RK4 maps for psi' = A(t) psi from A on a half grid.

    ``gen`` holds A at (t_k, t_k + h/2, t_{k+1}, ...) as produced by
    :func:`half_grid`; the result has one matrix per step.
    """
    a1, a2, a4 = gen[:-1:2], gen[1::2], gen[2::2]
    eye = np.eye(gen.shape[-1])
    k2 = a2 + 0.5 * h * (a2 @ a1)
    k3 = a2 + 0.5 * h * (a2 @ k2)
    k4 = a4 + h * (a4 @ k3)
    return eye + (h / 6.0) * (a1 + 2 * k2 + 2 * k3 + k4)


def iter_propagators(ham_func, t0: float, h: float, n_steps: int, chunk: int = CHUNK,
                     extra=None):
    """Yield (k0, propagator stack) chunks for the generator -i (H + extra)."""
    for k0 in range(0, n_steps, chunk):
        k1 = min(n_steps, k0 + chunk)
        hs = ham_func(half_grid(t0, h, k0, k1))
        if extra is not None:
            hs = hs + extra
        yield k0, rk4_propagators(-1j * hs, h)


def rowwise_apply(m: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """psi_b -> M psi_b for each row, with a summation order independent of batch size."""
    return (m[None, :, :] * psi[:, None, :]).sum(-1)
