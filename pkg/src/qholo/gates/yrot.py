"""Y-rotation from the doubly degenerate dark space of a tripod coupling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..pulses import ControlPath, loop_area_cos
from ..qcore import HermitianOperator, LabeledBasis, TimeDependentHamiltonian
from .holonomy import HolonomyResult

START_TOL = 1e-9

# order follows {|e>, |0>_L = |r>, |1>_L = |s>, |a->}
YROT_LABELS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
YROT_NAMES = ("e", "0L", "1L", "a-")


@dataclass(frozen=True)
class YRotParams:
    omega: float
    path: ControlPath
    N: int = 1000

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        for ch in ("theta", "phi"):
            if ch not in self.path.channels:
                raise ValueError(f"y-rotation path needs a {ch!r} channel")


def yrot_basis(N: int = 1000) -> LabeledBasis:
    labels = tuple((N - 1,) + occ for occ in YROT_LABELS)
    return LabeledBasis(labels, YROT_NAMES, ("g", "e", "r", "s", "a-"))


def yrot_hamiltonian(params: YRotParams) -> TimeDependentHamiltonian:
    basis = yrot_basis(params.N)
    path, om = params.path, params.omega

    def func(t):
        th = path.value("theta", t)
        ph = path.value("phi", t)
        h = np.zeros((len(t), 4, 4))
        h[:, 0, 1] = np.sin(th) * np.cos(ph)
        h[:, 0, 2] = np.sin(th) * np.sin(ph)
        h[:, 0, 3] = np.cos(th)
        h[:, 1:, 0] = h[:, 0, 1:]
        return om * h

    return TimeDependentHamiltonian(basis, func, (path.t_start, path.t_end), "yrot")


def h_yrot(params: YRotParams, t: float) -> HermitianOperator:
    return yrot_hamiltonian(params).at(t)


def yrot_dark_states(theta, phi) -> np.ndarray:
    """Columns D1, D2 in the {e, 0L, 1L, a-} order."""
    d = np.zeros((4, 2))
    d[1, 0], d[2, 0] = np.sin(phi), -np.cos(phi)
    d[1, 1] = np.cos(theta) * np.cos(phi)
    d[2, 1] = np.cos(theta) * np.sin(phi)
    d[3, 1] = -np.sin(theta)
    return d


def yrot_connection(theta, phi_dot) -> np.ndarray:
    """A_ij = <D_i|dD_j/dt>, stacked over the inputs."""
    c = np.cos(np.asarray(theta, float)) * np.asarray(phi_dot, float)
    a = np.zeros(c.shape + (2, 2))
    a[..., 0, 1] = -c
    a[..., 1, 0] = c
    return a


def _check_start(path: ControlPath):
    th0 = float(path.value("theta", path.t_start))
    ph0 = float(path.value("phi", path.t_start))
    if abs(th0) > START_TOL or abs(ph0 - np.pi / 2) > START_TOL:
        raise ValueError(f"loop must start at (theta, phi) = (0, pi/2); got ({th0:.3e}, {ph0:.6f})")


def wilson_loop(params: YRotParams, n_steps: int = 10_000) -> HolonomyResult:
    """Path-ordered transport of the dark-space coefficients around the loop.

    Coefficients obey dC/dt = -A C, so each step contributes exp(-int A dt),
    with the step integral taken by 2-point Gauss-Legendre.
    """
    path = params.path
    path.require_closed()
    _check_start(path)
    t = np.linspace(path.t_start, path.t_end, n_steps + 1)
    h = t[1] - t[0]
    mid = 0.5 * (t[:-1] + t[1:])
    off = h / (2 * np.sqrt(3))
    inc = np.zeros((n_steps, 2, 2))
    for tq in (mid - off, mid + off):
        inc -= 0.5 * h * yrot_connection(path.value("theta", tq), path.derivative("phi", tq))
    steps = expm(inc.astype(complex))
    u = np.eye(2, dtype=complex)
    for s in steps:
        u = s @ u
    return HolonomyResult(dark_unitary=u, min_gap=params.omega)


def wilson_closed_form(phi2: float) -> np.ndarray:
    c, s = np.cos(phi2), np.sin(phi2)
    return np.array([[c, s], [-s, c]])


def yrot_angle_analytic(params: YRotParams, n_steps: int = 4000) -> float:
    return loop_area_cos(params.path, n_steps)


def yrot_target_state(basis: LabeledBasis, phi2: float, initial: str = "0L") -> np.ndarray:
    """Ideal end state for |0>_L or |1>_L input under the closed-form holonomy."""
    u = wilson_closed_form(phi2)
    col = {"0L": 0, "1L": 1}[initial]
    v = np.zeros(basis.dimension, complex)
    v[basis.index_of_name("0L")] = u[0, col]
    v[basis.index_of_name("1L")] = u[1, col]
    return v


def leakage_from_dark(psi: np.ndarray, theta: float, phi: float) -> float:
    d = yrot_dark_states(theta, phi)
    p = np.sum(np.abs(d.T @ psi) ** 2)
    return float(np.clip(1.0 - p / np.vdot(psi, psi).real, 0.0, 1.0))


__all__ = ["YRotParams", "yrot_basis", "yrot_hamiltonian", "h_yrot", "yrot_dark_states",
           "yrot_connection", "wilson_loop", "wilson_closed_form", "yrot_angle_analytic",
           "yrot_target_state", "leakage_from_dark"]
