"""Unitary evolution, phase read-out and adiabaticity diagnostics."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ..qcore import LabeledBasis, StateVector, TimeDependentHamiltonian, eigendecompose
from .integrate import (check_dt, default_dt, iter_propagators, record_stride, step_grid)


class NonCyclicWarning(UserWarning):
    pass


@dataclass(frozen=True)
class EvolutionRecord:
    """Sampled trajectory of a state vector or density matrix.

    ``states`` is (n_rec, d) for pure states and (n_rec, d, d) for density
    matrices.  ``norm_drift`` is max |norm^2 - norm0^2| (or trace) per us.
    """

    basis: LabeledBasis
    times: np.ndarray
    states: np.ndarray
    populations: np.ndarray
    norm_drift: float = 0.0
    relative_phase: np.ndarray | None = None
    min_gap: float | None = None
    dark_leakage: np.ndarray | None = None
    min_eigenvalue: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def is_density(self) -> bool:
        return self.states.ndim == 3

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def population(self, name: str) -> np.ndarray:
        return self.populations[:, self.basis.index_of_name(name)]

    def expectation(self, op: np.ndarray) -> np.ndarray:
        if self.is_density:
            return np.einsum("ij,tji->t", op, self.states).real
        return np.einsum("ti,ij,tj->t", self.states.conj(), op, self.states).real

    def to_csv(self, path, precision: int = 12):
        from ..io import atomic_write_text, format_csv
        header = ["time_us"] + [f"pop_{n}" for n in self.basis.names]
        cols = [self.times] + [self.populations[:, i] for i in range(self.basis.dimension)]
        if self.relative_phase is not None:
            header.append("relative_phase_rad")
            cols.append(self.relative_phase)
        if self.dark_leakage is not None:
            header.append("leakage")
            cols.append(self.dark_leakage)
        atomic_write_text(path, format_csv(header, np.column_stack(cols), precision))


def _as_vector(basis: LabeledBasis, psi0) -> np.ndarray:
    if isinstance(psi0, StateVector):
        if psi0.basis.labels != basis.labels:
            raise ValueError("initial state basis does not match Hamiltonian basis")
        return psi0.amplitudes.copy()
    v = np.asarray(psi0, dtype=complex)
    if v.shape != (basis.dimension,):
        raise ValueError(f"initial state has shape {v.shape}, basis dimension is {basis.dimension}")
    return v.copy()


def _window(ham, t_span):
    if t_span is None:
        if ham.t_window is None:
            raise ValueError("t_span required when the Hamiltonian carries no window")
        t_span = ham.t_window
    return tuple(map(float, t_span))


def evolve_schrodinger(ham: TimeDependentHamiltonian, psi0, t_span=None, dt: float | None = None,
                       ref_state=None, relative_to=None, max_records: int = 2000,
                       renormalize: bool = False) -> EvolutionRecord:
    """Fixed-step RK4 for i dpsi/dt = H(t) psi.

    ``ref_state`` (and optionally ``relative_to``) turn on the unwrapped
    relative-phase series arg<ref|psi> - arg<relative_to|psi>.
    """
    t_span = _window(ham, t_span)
    psi = _as_vector(ham.basis, psi0)
    nrm0 = np.vdot(psi, psi).real
    if abs(nrm0 - 1) > 1e-8:
        raise ValueError(f"initial state not normalised (norm^2 = {nrm0:.6g})")
    if dt is None:
        dt = default_dt(ham, t_span)
    n, h = step_grid(t_span, dt)
    check_dt(ham, t_span, h)
    stride = record_stride(n, max_records)
    rec_t, rec_s = [t_span[0]], [psi.copy()]
    for k0, props in iter_propagators(ham.matrices, t_span[0], h, n):
        for j, m in enumerate(props):
            psi = m @ psi
            k = k0 + j + 1
            if renormalize:
                psi /= np.linalg.norm(psi)
            if k % stride == 0 or k == n:
                rec_t.append(t_span[0] + k * h)
                rec_s.append(psi.copy())
    states = np.array(rec_s)
    times = np.array(rec_t)
    pops = np.abs(states) ** 2
    norms = pops.sum(1)
    drift = float(np.max(np.abs(norms - nrm0)) / (t_span[1] - t_span[0]))
    rel = None
    if ref_state is not None:
        rel = relative_phase_series(ham.basis, states, ref_state, relative_to)
    return EvolutionRecord(ham.basis, times, states, pops, drift, rel,
                           meta={"dt": h, "n_steps": n, "stride": stride})


def _vec(basis, s):
    if isinstance(s, str):
        return basis.ket(basis.labels[basis.index_of_name(s)])
    if isinstance(s, StateVector):
        return s.amplitudes
    return np.asarray(s, dtype=complex)


def relative_phase_series(basis, states, ref_state, relative_to=None) -> np.ndarray:
    ph = np.angle(states @ _vec(basis, ref_state).conj())
    if relative_to is not None:
        ph = ph - np.angle(states @ _vec(basis, relative_to).conj())
    return np.unwrap(ph)


@dataclass(frozen=True)
class PhaseEstimate:
    value: float
    cyclic: bool
    ref_population: float


def extract_geometric_phase(record: EvolutionRecord, ref_state, relative_to=None,
                            min_population: float = 0.99) -> PhaseEstimate:
    """Unwrapped arg<ref|psi(t_end)>, flagged non-cyclic when the final
    population on the reference subspace falls below ``min_population``."""
    if record.is_density:
        raise ValueError("phase extraction needs pure-state records")
    ser = relative_phase_series(record.basis, record.states, ref_state, relative_to)
    ref = _vec(record.basis, ref_state)
    pop = abs(np.vdot(ref, record.final)) ** 2
    if relative_to is not None:
        pop += abs(np.vdot(_vec(record.basis, relative_to), record.final)) ** 2
        norm0 = (abs(np.vdot(ref, record.states[0])) ** 2
                 + abs(np.vdot(_vec(record.basis, relative_to), record.states[0])) ** 2)
    else:
        norm0 = abs(np.vdot(ref, record.states[0])) ** 2
    frac = pop / norm0 if norm0 > 0 else 0.0
    cyclic = bool(frac > min_population)
    if not cyclic:
        warnings.warn(f"evolution is not cyclic: final reference population {frac:.4f}",
                      NonCyclicWarning, stacklevel=2)
    return PhaseEstimate(float(ser[-1]), cyclic, float(frac))


@dataclass(frozen=True)
class AdiabaticityReport:
    min_gap: float
    max_leakage: float
    gaps: np.ndarray
    leakage: np.ndarray


def adiabaticity_report(ham: TimeDependentHamiltonian, record: EvolutionRecord,
                        tol_zero: float | None = None) -> AdiabaticityReport:
    """Leakage out of the instantaneous zero-energy subspace along a record."""
    gaps, leak = [], []
    for t, s in zip(record.times, record.states):
        ed = eigendecompose(ham.matrices([t])[0], tol_zero)
        gaps.append(ed.min_gap())
        p0 = ed.zero_projector()
        if record.is_density:
            tot = np.trace(s).real
            inside = np.trace(p0 @ s).real
        else:
            tot = np.vdot(s, s).real
            inside = np.vdot(s, p0 @ s).real
        leak.append(max(0.0, 1.0 - inside / tot))
    gaps, leak = np.array(gaps), np.array(leak)
    return AdiabaticityReport(float(gaps.min()), float(leak.max()), gaps, leak)


def with_diagnostics(record: EvolutionRecord, report: AdiabaticityReport) -> EvolutionRecord:
    return replace(record, min_gap=report.min_gap, dark_leakage=report.leakage)
