"""Single-qubit phase gate: three-level dark state with a decoupled |0>_L."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..pulses import ControlPath, loop_area_sin2, sample
from ..qcore import (HermitianOperator, LabeledBasis, TimeDependentHamiltonian,
                     build_collective_basis, eigendecompose, mode_lowering)
from .holonomy import HolonomyResult

PHASE_NAMES = {(0, 0, 0): "0L", (0, 0, 1): "a+", (0, 1, 0): "1L", (1, 0, 0): "e"}


@dataclass(frozen=True)
class PhaseGateParams:
    omega: float
    path: ControlPath
    N: int = 1000

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        for ch in ("theta", "phi"):
            if ch not in self.path.channels:
                raise ValueError(f"phase-gate path needs a {ch!r} channel")


def phase_basis(N: int = 1000) -> LabeledBasis:
    """{|0>_L, |a+>, |1>_L, |e>} as single-excitation collective states."""
    b = build_collective_basis(["e", "s", "a+"], N, 1)
    names = tuple(PHASE_NAMES[lab[1:]] for lab in b.labels)
    return LabeledBasis(b.labels, names, b.modes)


def _ladder_terms(basis):
    E = mode_lowering(basis, "e")
    S = mode_lowering(basis, "s")
    A = mode_lowering(basis, "a+")
    return E.T @ S, E.T @ A


def phase_hamiltonian(params: PhaseGateParams) -> TimeDependentHamiltonian:
    basis = phase_basis(params.N)
    es, ea = _ladder_terms(basis)
    path, om = params.path, params.omega

    def func(t):
        th = path.value("theta", t)
        ph = path.value("phi", t)
        om1 = om * np.sin(th)
        oma = -om * np.cos(th) * np.exp(1j * ph)
        h = om1[:, None, None] * es + oma[:, None, None] * ea
        return h + np.conj(np.swapaxes(h, 1, 2))

    return TimeDependentHamiltonian(basis, func, (path.t_start, path.t_end), "phase")


def h_phase(params: PhaseGateParams, t: float) -> HermitianOperator:
    return phase_hamiltonian(params).at(t)


def phase_dark_state(basis: LabeledBasis, theta: float, phi: float) -> np.ndarray:
    """cos(theta)|1>_L + sin(theta) e^{-i phi}|a+>."""
    v = np.zeros(basis.dimension, complex)
    v[basis.index_of_name("1L")] = np.cos(theta)
    v[basis.index_of_name("a+")] = np.sin(theta) * np.exp(-1j * phi)
    return v


def path_min_gap(ham: TimeDependentHamiltonian, times) -> float:
    return min(eigendecompose(m).min_gap() for m in ham.matrices(times))


def berry_phase_analytic(params: PhaseGateParams, n_steps: int = 4000) -> HolonomyResult:
    """Geometric phase of the dark state around the loop, plus the path's spectral gap."""
    phase = loop_area_sin2(params.path, n_steps)
    t = sample(params.path, 200).times
    return HolonomyResult(abelian_phase=phase, min_gap=path_min_gap(phase_hamiltonian(params), t))
