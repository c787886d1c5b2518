"""Master-equation integration with the 2*kappa dissipator convention."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qcore import TimeDependentHamiltonian
from .integrate import CHUNK, check_dt, default_dt, half_grid, record_stride, step_grid
from .schrodinger import EvolutionRecord, _window


@dataclass(frozen=True)
class CollapseChannel:
    """Jump operator L with rate kappa; enters as 2*kappa (L rho L^+ - {L^+L, rho}/2)."""

    operator: np.ndarray
    rate: float
    name: str = "cavity"

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("collapse rate must be non-negative")
        object.__setattr__(self, "operator", np.asarray(self.operator, dtype=complex))


def effective_terms(channels, d: int):
    """Non-Hermitian correction -i sum kappa L^+L and the scaled jump operators."""
    anti = np.zeros((d, d), complex)
    jumps = []
    for ch in channels:
        L = ch.operator
        if L.shape != (d, d):
            raise ValueError(f"collapse operator shape {L.shape} does not match dimension {d}")
        if ch.rate == 0:
            continue
        anti += ch.rate * (L.conj().T @ L)
        jumps.append(np.sqrt(2 * ch.rate) * L)
    return -1j * anti, jumps


class _SparseJump:
    """L rho L^+ restricted to the rows/columns where L is non-zero."""

    def __init__(self, L):
        self.rows = np.flatnonzero(np.any(L != 0, axis=1))
        self.cols = np.flatnonzero(np.any(L != 0, axis=0))
        self.sub = L[np.ix_(self.rows, self.cols)]
        self.sub_h = self.sub.conj().T

    def add_to(self, out, rho):
        if not len(self.rows):
            return
        blk = rho[..., self.cols[:, None], self.cols[None, :]]
        out[..., self.rows[:, None], self.rows[None, :]] += self.sub @ blk @ self.sub_h


def validate_density(rho: np.ndarray, tol: float = 1e-8):
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.6g}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")


def _rhs(heff, jumps, rho):
    out = -1j * (heff @ rho - rho @ heff.conj().T)
    for j in jumps:
        j.add_to(out, rho)
    return out


def lindblad_propagate(ham: TimeDependentHamiltonian, channels, rhos: np.ndarray, t_span,
                       dt: float, record_every: int | None = None):
    """RK4 on a stack (B, d, d) of operators; linear, so any operator works.

    Returns the final stack and, when ``record_every`` is set, the recorded
    times and stacks.
    """
    t0 = float(t_span[0])
    n, h = step_grid(t_span, dt)
    d = ham.basis.dimension
    anti, jumps = effective_terms(channels, d)
    jumps = [_SparseJump(L) for L in jumps]
    rho = np.array(rhos, dtype=complex)
    rec_t, rec = [t0], [rho.copy()]
    for k0 in range(0, n, CHUNK):
        k1 = min(n, k0 + CHUNK)
        hs = ham.matrices(half_grid(t0, h, k0, k1)) + anti
        for j in range(k1 - k0):
            h1, h2, h4 = hs[2 * j], hs[2 * j + 1], hs[2 * j + 2]
            q1 = _rhs(h1, jumps, rho)
            q2 = _rhs(h2, jumps, rho + 0.5 * h * q1)
            q3 = _rhs(h2, jumps, rho + 0.5 * h * q2)
            q4 = _rhs(h4, jumps, rho + h * q3)
            rho = rho + (h / 6.0) * (q1 + 2 * q2 + 2 * q3 + q4)
            k = k0 + j + 1
            if record_every and (k % record_every == 0 or k == n):
                rec_t.append(t0 + k * h)
                rec.append(rho.copy())
    if record_every:
        return rho, np.array(rec_t), np.array(rec)
    return rho


def evolve_lindblad(ham: TimeDependentHamiltonian, channels, rho0, t_span=None,
                    dt: float | None = None, max_records: int = 2000) -> EvolutionRecord:
    t_span = _window(ham, t_span)
    rho0 = np.asarray(rho0, dtype=complex)
    d = ham.basis.dimension
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 has shape {rho0.shape}, basis dimension is {d}")
    validate_density(rho0)
    if dt is None:
        dt = default_dt(ham, t_span)
    n, h = step_grid(t_span, dt)
    check_dt(ham, t_span, h)
    stride = record_stride(n, max_records)
    _, times, stack = lindblad_propagate(ham, channels, rho0[None], t_span, h, stride)
    states = stack[:, 0]
    pops = np.real(np.einsum("tii->ti", states))
    tr = pops.sum(1)
    drift = float(np.max(np.abs(tr - 1)) / (t_span[1] - t_span[0]))
    herm = 0.5 * (states + np.conj(np.swapaxes(states, 1, 2)))
    min_eig = float(np.linalg.eigvalsh(herm).min())
    return EvolutionRecord(ham.basis, times, states, pops, drift, min_eigenvalue=min_eig,
                           meta={"dt": h, "n_steps": n, "stride": stride,
                                 "max_trace_error": float(np.max(np.abs(tr - 1)))})
