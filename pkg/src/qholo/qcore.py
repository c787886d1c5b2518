"""Labeled bases, Hermitian operators and dark-subspace extraction.

All collective states are occupation tuples ``(n_g, n_mode1, ..., [n_photon])``
where the ground mode holds whatever the excited modes do not.  Operators are
dense complex matrices; every dimension used in this package is small.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12


class NonHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledBasis:
    """Ordered, unique state labels with an index lookup.

    ``names`` are optional human-readable tags (used in CSV headers); they
    default to a compact rendering of each label.
    """

    labels: tuple
    names: tuple = ()
    modes: tuple = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(tuple(l) if isinstance(l, list) else l for l in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("basis needs at least one label")
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("basis labels must be unique")
        object.__setattr__(self, "_index", index)
        names = tuple(self.names) if self.names else tuple(_render(l) for l in labels)
        if len(names) != len(labels):
            raise ValueError("names and labels differ in length")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def lookup(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"label {label!r} not in basis") from None

    def index_of_name(self, name: str) -> int:
        return self.names.index(name)

    def ket(self, label: Hashable) -> np.ndarray:
        v = np.zeros(self.dimension, dtype=complex)
        v[self.lookup(label)] = 1.0
        return v

    def restrict(self, keep: Callable[[Hashable], bool]) -> "LabeledBasis":
        pairs = [(l, n) for l, n in zip(self.labels, self.names) if keep(l)]
        return LabeledBasis(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs), self.modes)

    def __len__(self):
        return self.dimension


def _render(label) -> str:
    if isinstance(label, tuple):
        return "|" + ",".join(str(x) for x in label) + ">"
    return str(label)


@dataclass(frozen=True)
class StateVector:
    basis: LabeledBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).copy()
        if amp.shape != (self.basis.dimension,):
            raise ValueError(
                f"amplitude length {amp.shape} does not match basis dimension {self.basis.dimension}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_label(cls, basis: LabeledBasis, label) -> "StateVector":
        return cls(basis, basis.ket(label))

    @classmethod
    def from_mapping(cls, basis: LabeledBasis, amps: dict) -> "StateVector":
        v = np.zeros(basis.dimension, dtype=complex)
        for lab, a in amps.items():
            v[basis.lookup(lab)] = a
        return cls(basis, v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / n)

    def overlap(self, other: "StateVector") -> complex:
        _check_same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class HermitianOperator:
    """Hermitian matrix on a labeled basis (rad/us for Hamiltonians)."""

    basis: LabeledBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        d = self.basis.dimension
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match basis dimension {d}")
        asym = max_asymmetry(m)
        if asym > HERMITIAN_TOL:
            raise NonHermitianError(f"operator is not Hermitian: max |A - A^H| = {asym:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def apply(self, state: StateVector) -> StateVector:
        _check_same_basis(self.basis, state.basis)
        return StateVector(self.basis, self.matrix @ state.amplitudes)

    def expectation(self, state: StateVector) -> float:
        return float(np.vdot(state.amplitudes, self.matrix @ state.amplitudes).real)


def max_asymmetry(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    zero_subspace: np.ndarray  # indices into eigenvalues
    tol_zero: float

    def zero_projector(self) -> np.ndarray:
        v = self.eigenvectors[:, self.zero_subspace]
        return v @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def min_gap(self) -> float:
        """Smallest |eigenvalue| outside the zero subspace (inf if none)."""
        mask = np.ones(len(self.eigenvalues), bool)
        mask[self.zero_subspace] = False
        if not mask.any():
            return float("inf")
        return float(np.min(np.abs(self.eigenvalues[mask])))


def eigendecompose(op, tol_zero: float | None = None) -> EigenDecomposition:
    """Full spectrum of a Hermitian operator plus the indices of its null space.

    ``tol_zero`` defaults to ``1e-6 * ||A||`` (absolute floor 1e-12).
    """
    if isinstance(op, HermitianOperator):
        m = op.matrix
    else:
        m = np.asarray(op, dtype=complex)
        asym = max_asymmetry(m)
        if asym > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(m))) if m.size else 1.0):
            raise NonHermitianError(f"operator is not Hermitian: max |A - A^H| = {asym:.3e}")
    w, v = np.linalg.eigh(m)
    if tol_zero is None:
        tol_zero = max(1e-6 * (np.max(np.abs(w)) if w.size else 0.0), 1e-12)
    zero = np.flatnonzero(np.abs(w) < tol_zero)
    return EigenDecomposition(w, v, zero, float(tol_zero))


def build_collective_basis(modes: Sequence[str], N: int, max_excitations: int,
                           with_cavity: int | None = None,
                           min_excitations: int = 0) -> LabeledBasis:
    """Symmetric collective states of ``N`` atoms with few excitations.

    Labels are ``(n_g, n_mode1, ..., n_modeK)`` with an extra photon count
    appended when ``with_cavity`` is given.  States are ordered
    lexicographically on the excited-mode occupations (then photon number).
    """
    modes = tuple(modes)
    if not modes:
        raise ValueError("mode list is empty")
    if len(set(modes)) != len(modes):
        raise ValueError("mode names must be unique")
    if max_excitations < 0 or min_excitations < 0:
        raise ValueError("excitation caps must be non-negative")
    if with_cavity is not None and with_cavity < 0:
        raise ValueError("photon cap must be non-negative")
    if N < max_excitations:
        raise ValueError(f"N={N} cannot host {max_excitations} excitations")
    occs = [occ for occ in itertools.product(range(max_excitations + 1), repeat=len(modes))
            if min_excitations <= sum(occ) <= max_excitations]
    occs.sort()
    photons = range(with_cavity + 1) if with_cavity is not None else [None]
    labels, names = [], []
    for occ in occs:
        for p in photons:
            lab = (N - sum(occ),) + occ + ((p,) if p is not None else ())
            labels.append(lab)
            parts = [f"{m}{k}" for m, k in zip(modes, occ) if k]
            tag = "".join(parts) or "g"
            if p is not None:
                tag += f"_n{p}"
            names.append(tag)
    all_modes = ("g",) + modes + (("cav",) if with_cavity is not None else ())
    return LabeledBasis(tuple(labels), tuple(names), all_modes)


def mode_lowering(basis: LabeledBasis, mode: str, exact_collective: bool = False) -> np.ndarray:
    """Lowering operator for one mode on a collective basis.

    Bosonic approximation: ``<n-1|b|n> = sqrt(n)``.  With ``exact_collective``
    the symmetric-Dicke element ``sqrt(n (n_g + 1) / N)`` is used instead,
    which moves one atom from ``mode`` back to the ground level.  The cavity
    mode is always bosonic.
    """
    k = basis.modes.index(mode)
    if k == 0:
        raise ValueError("the ground mode has no lowering operator")
    d = basis.dimension
    op = np.zeros((d, d))
    is_cavity = mode == "cav"
    stop = len(basis.modes) - (1 if "cav" in basis.modes else 0)
    for j, lab in enumerate(basis.labels):
        n = lab[k]
        if n == 0:
            continue
        new = list(lab)
        new[k] -= 1
        if not is_cavity:
            new[0] += 1
        new = tuple(new)
        if new not in basis._index:
            continue
        if exact_collective and not is_cavity:
            n_atoms = sum(lab[:stop])
            amp = np.sqrt(n * (lab[0] + 1) / n_atoms)
        else:
            amp = np.sqrt(n)
        op[basis.lookup(new), j] = amp
    return op


def number_operator(basis: LabeledBasis, mode: str) -> np.ndarray:
    k = basis.modes.index(mode)
    return np.diag([float(lab[k]) for lab in basis.labels])


def excitation_number(basis: LabeledBasis) -> np.ndarray:
    """Total non-ground atomic excitation per basis state."""
    stop = len(basis.modes) - (1 if "cav" in basis.modes else 0)
    return np.array([sum(lab[1:stop]) for lab in basis.labels])


def _check_same_basis(a: LabeledBasis, b: LabeledBasis):
    if a is not b and a.labels != b.labels:
        raise ValueError("basis mismatch")


class TimeDependentHamiltonian:
    """Hermitian-matrix-valued function of time on a fixed basis.

    ``func`` must accept a 1-D array of times and return a stack of shape
    ``(len(t), d, d)``; the integrators rely on that vectorization.
    """

    def __init__(self, basis: LabeledBasis, func: Callable[[np.ndarray], np.ndarray],
                 t_window: tuple[float, float] | None = None, name: str = ""):
        self.basis = basis
        self.func = func
        self.t_window = t_window
        self.name = name

    def matrices(self, t: Iterable[float]) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        m = np.asarray(self.func(t), dtype=complex)
        d = self.basis.dimension
        if m.shape != (len(t), d, d):
            raise ValueError(f"Hamiltonian returned shape {m.shape}, expected {(len(t), d, d)}")
        return m

    def at(self, t: float) -> HermitianOperator:
        return HermitianOperator(self.basis, self.matrices([t])[0])

    def max_norm(self, t_span: tuple[float, float], n: int = 257) -> float:
        ts = np.linspace(t_span[0], t_span[1], n)
        return float(max(np.linalg.norm(m, 2) for m in self.matrices(ts)))
