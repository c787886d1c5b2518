"""Blockade-limited adiabatic pumping of a single Rydberg excitation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..pulses import ControlPath
from ..qcore import (HermitianOperator, LabeledBasis, TimeDependentHamiltonian,
                     build_collective_basis, mode_lowering)

SHIFT_KEYS = ("u_mm", "u_rr", "u_ff", "u_rm", "u_fm", "u_fr")


@dataclass(frozen=True)
class PumpParams:
    """Channels ``p1`` (g-m, enhanced by sqrt(N)) and ``p2`` (m-r) in rad/us.

    Shifts are minimum pair energies in rad/us, entered with positive sign.
    """

    path: ControlPath
    N: int = 1000
    u_mm: float = 300.0
    u_rr: float = 400.0
    u_ff: float = 400.0
    u_rm: float = 400.0
    u_fm: float = 300.0
    u_fr: float = 400.0
    max_excitations: int = 2

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        for k in SHIFT_KEYS:
            if getattr(self, k) < 0:
                raise ValueError(f"{k} must be non-negative")
        if self.max_excitations < 2:
            raise ValueError("pump truncation must host double excitations (max_excitations >= 2)")
        for ch in ("p1", "p2"):
            if ch not in self.path.channels:
                raise ValueError(f"pump path needs a {ch!r} channel")


def pump_basis(params: PumpParams, f_occupied: bool = False) -> LabeledBasis:
    """(m, r) occupations up to the cap, with the f excitation frozen at 0 or 1."""
    cap = params.max_excitations
    nf = int(f_occupied)
    full = build_collective_basis(["m", "r", "f"], params.N, cap + nf)
    return full.restrict(lambda lab: lab[3] == nf and lab[1] + lab[2] <= cap)


def pump_operators(params: PumpParams, f_occupied: bool = False):
    basis = pump_basis(params, f_occupied)
    M = mode_lowering(basis, "m")
    R = mode_lowering(basis, "r")
    nm = M.T @ M
    nr = R.T @ R
    nf = float(f_occupied) * np.eye(basis.dimension)
    ff = np.zeros_like(nm)  # at most one f excitation here
    static = (params.u_mm * (M.T @ M.T @ M @ M) + params.u_rr * (R.T @ R.T @ R @ R)
              + params.u_ff * ff + params.u_rm * nr @ nm
              + params.u_fm * nf @ nm + params.u_fr * nf @ nr)
    drive1 = np.sqrt(params.N) * (M + M.T)
    # lower before raising so no intermediate state leaves the truncation
    x = M.T @ R
    drive2 = x + x.T
    return basis, static, drive1, drive2


def pump_hamiltonian(params: PumpParams, f_occupied: bool = False) -> TimeDependentHamiltonian:
    basis, static, d1, d2 = pump_operators(params, f_occupied)
    path = params.path

    def func(t):
        a = path.value("p1", t)[:, None, None]
        b = path.value("p2", t)[:, None, None]
        return static + a * d1 + b * d2

    tag = "pump-1L" if f_occupied else "pump-0L"
    return TimeDependentHamiltonian(basis, func, (path.t_start, path.t_end), tag)


def h_pump(params: PumpParams, t: float, f_occupied: bool = False) -> HermitianOperator:
    return pump_hamiltonian(params, f_occupied).at(t)


def pump_populations(basis: LabeledBasis, pops: np.ndarray) -> dict:
    """Group populations (last axis over basis) into r-single, r-any, double."""
    labs = basis.labels
    single_r = np.array([l[1] == 0 and l[2] == 1 for l in labs])
    any_r = np.array([l[2] for l in labs], float)
    double = np.array([l[1] + l[2] >= 2 for l in labs])
    return {
        "single_r": pops[..., single_r].sum(-1),
        "r_population": pops @ any_r,
        "double": pops[..., double].sum(-1),
    }
