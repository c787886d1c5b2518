"""Quantum-defect Stark Hamiltonian in the hydrogen parabolic basis, and Stark maps."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..qcore import HermitianOperator, LabeledBasis
from .wigner import coefficient_matrix, q_ladder

# linear-regime bound quoted for n = 15, carried to other n by the n^-5 scaling
LINEAR_FIELD_N15 = 2.5e-7
DEFAULT_FIELD = 2e-7


class TruncationWarning(UserWarning):
    """A defect-shifted level outside the window falls near the target manifold."""


class GridTooCoarseError(RuntimeError):
    """Adjacent field points share too little overlap to track states."""


@dataclass(frozen=True)
class QuantumDefects:
    d0: float = 3.1
    d1: float = 2.6
    d2: float = 1.3
    d3: float = 0.02

    def __post_init__(self):
        if min(self.as_array()) < 0:
            raise ValueError("quantum defects must be non-negative")

    def as_array(self) -> np.ndarray:
        return np.array([self.d0, self.d1, self.d2, self.d3])

    def get(self, l: int) -> float:
        return float(self.as_array()[l]) if l < 4 else 0.0

    @classmethod
    def hydrogen(cls):
        return cls(0.0, 0.0, 0.0, 0.0)


RUBIDIUM = QuantumDefects()


def linear_field_bound(n: int) -> float:
    return LINEAR_FIELD_N15 * (15.0 / n) ** 5


@dataclass(frozen=True)
class StarkModel:
    """Window of manifolds, m sector, defects, a field grid and an operating field (a.u.)."""

    n_window: tuple = (14, 15, 16, 17, 18)
    m: int = 0
    defects: QuantumDefects = field(default_factory=QuantumDefects)
    fields: tuple = tuple(np.linspace(0.0, 5e-7, 200))
    field: float = DEFAULT_FIELD
    target: int | None = None

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_window)
        if not ns or any(b - a != 1 for a, b in zip(ns, ns[1:])):
            raise ValueError("n_window must be a non-empty contiguous ascending range")
        if abs(self.m) > ns[0] - 1:
            raise ValueError(f"|m|={abs(self.m)} not allowed in manifold n={ns[0]}")
        object.__setattr__(self, "n_window", ns)
        object.__setattr__(self, "fields", tuple(float(f) for f in self.fields))
        if self.target is None:
            object.__setattr__(self, "target", ns[1] if len(ns) > 1 else ns[0])
        elif self.target not in ns:
            raise ValueError("target manifold must lie in the window")

    @property
    def dimension(self) -> int:
        return sum(len(q_ladder(n, self.m)) for n in self.n_window)

    def basis(self) -> LabeledBasis:
        labels = [(n, int(q)) for n in self.n_window for q in q_ladder(n, self.m)]
        names = [f"n{n}q{q}" for n, q in labels]
        return LabeledBasis(labels, names, modes=("n", "q"))

    def around(self, n: int, below: int = 1, above: int = 3) -> "StarkModel":
        """Same defects and sector re-centred on n; the field keeps its n^-5 scaling."""
        f = self.field * (self.target / n) ** 5
        return StarkModel(tuple(range(n - below, n + above + 1)), self.m, self.defects,
                          self.fields, f, n)

    def missing_levels(self):
        """(n, l, n*) for defect-shifted levels outside the window within 0.5 of the target."""
        out = []
        top = self.n_window[-1]
        for l in range(abs(self.m), 4):
            d = self.defects.get(l)
            if d == 0:
                continue
            for n in range(top + 1, top + 6):
                if abs(n - d - self.target) < 0.5:
                    out.append((n, l, n - d))
        return out


def field_derivative(model: StarkModel) -> np.ndarray:
    """dH/dE = diag((3/2) n q), which is also z within each manifold."""
    return np.concatenate([1.5 * n * q_ladder(n, model.m) for n in model.n_window]).astype(float)


def defect_block(n: int, npr: int, m: int, defects: QuantumDefects) -> np.ndarray:
    """S^{n n' m} = C^{nm} D^{nn'} V^{n'm} with D_ll = -delta_l / sqrt(n^3 n'^3)."""
    ca = coefficient_matrix(n, m, 3)
    cb = coefficient_matrix(npr, m, 3)
    ls = np.arange(abs(m), abs(m) + min(ca.shape[1], cb.shape[1]))
    d = -np.array([defects.get(l) for l in ls]) / np.sqrt(float(n) ** 3 * float(npr) ** 3)
    k = len(ls)
    return (ca[:, :k] * d) @ cb[:, :k].T


def _static_part(model: StarkModel) -> np.ndarray:
    dim = model.dimension
    h = np.zeros((dim, dim))
    offs = np.cumsum([0] + [len(q_ladder(n, model.m)) for n in model.n_window])
    for i, n in enumerate(model.n_window):
        for j, npr in enumerate(model.n_window[i:], start=i):
            blk = defect_block(n, npr, model.m, model.defects)
            h[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = blk
            h[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = blk.T
    diag = np.concatenate([np.full(len(q_ladder(n, model.m)), -0.5 / n ** 2) for n in model.n_window])
    return 0.5 * (h + h.T) + np.diag(diag)


def assemble_stark_hamiltonian(model: StarkModel, E: float | None = None) -> HermitianOperator:
    if model.missing_levels():
        warnings.warn(f"window {model.n_window} omits levels near n={model.target}: "
                      f"{model.missing_levels()}", TruncationWarning, stacklevel=2)
    E = model.field if E is None else float(E)
    h = _static_part(model) + E * np.diag(field_derivative(model))
    return HermitianOperator(model.basis(), h)


def _resolve_degenerate(w, v, dh, tol):
    # inside exactly degenerate clusters pick the states the field selects
    i = 0
    while i < len(w):
        j = i + 1
        while j < len(w) and w[j] - w[j - 1] < tol:
            j += 1
        if j - i > 1:
            sub = v[:, i:j]
            _, u = np.linalg.eigh(sub.T @ (dh[:, None] * sub))
            v[:, i:j] = sub @ u
        i = j
    return v


@dataclass
class StarkMap:
    """Energies (n_fields, dim) in tracked order; column k follows one state."""

    model: StarkModel
    fields: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    tags: np.ndarray        # (n_fields, dim, 2): dominant (n, q)
    weights: np.ndarray     # (n_fields, dim): dominant |C|^2
    min_overlap: float

    def dominant(self, i_field: int, track: int):
        n, q = self.tags[i_field, track]
        return int(n), int(q), float(self.weights[i_field, track])

    def find(self, n: int, q: int, i_field: int = -1) -> int:
        """Track whose state at ``i_field`` carries the most weight on |n, q>."""
        k = self.model.basis().lookup((n, q))
        return int(np.argmax(np.abs(self.vectors[i_field, k, :]) ** 2))

    def rows(self):
        for i, f in enumerate(self.fields):
            for k in range(self.energies.shape[1]):
                n, q = self.tags[i, k]
                yield (f, k, self.energies[i, k], int(n), int(q))


def _diag(model, static, dh, E):
    w, v = np.linalg.eigh(static + E * np.diag(dh))
    return w, _resolve_degenerate(w, v, dh, 1e-12)


def stark_map(model: StarkModel, min_overlap: float = 0.5) -> StarkMap:
    fields = np.asarray(model.fields, float)
    if fields.size < 1 or np.any(np.diff(fields) <= 0):
        raise ValueError("field grid must be strictly ascending")
    if model.missing_levels():
        warnings.warn(f"window {model.n_window} omits levels near n={model.target}",
                      TruncationWarning, stacklevel=2)
    static = _static_part(model)
    dh = field_derivative(model)
    labels = np.array(model.basis().labels)
    nf, dim = fields.size, model.dimension
    energies = np.empty((nf, dim))
    vectors = np.empty((nf, dim, dim))
    worst = 1.0
    prev = None
    for i, E in enumerate(fields):
        w, v = _diag(model, static, dh, E)
        if prev is not None:
            ov = (prev.T @ v) ** 2
            # ties broken by eigenvalue proximity
            cost = -ov + 1e-9 * np.abs(energies[i - 1][:, None] - w[None, :]) / (np.ptp(w) + 1e-300)
            _, col = linear_sum_assignment(cost)
            best = ov[np.arange(dim), col]
            worst = min(worst, float(best.min()))
            if best.min() < min_overlap:
                raise GridTooCoarseError(
                    f"overlap {best.min():.3f} between E={fields[i - 1]:.4g} and E={E:.4g}; "
                    "refine the field grid")
            w, v = w[col], v[:, col]
            # fix the sign gauge along each track
            v = v * np.sign(np.sum(prev * v, axis=0))
        energies[i], vectors[i] = w, v
        prev = v
    wts = vectors ** 2
    dom = np.argmax(wts, axis=1)
    tags = labels[dom]
    return StarkMap(model, fields, energies, vectors, tags, np.take_along_axis(wts, dom[:, None, :], 1)[:, 0],
                    worst)


def outermost_state(model: StarkModel, n: int | None = None, E: float | None = None):
    """Eigenvector (in the model basis) continuing |n, m, q = n-1-|m|>, and its weight there."""
    n = model.target if n is None else n
    if n not in model.n_window:
        raise ValueError(f"n={n} not in window {model.n_window}")
    E = model.field if E is None else float(E)
    w, v = _diag(model, _static_part(model), field_derivative(model), E)
    k = model.basis().lookup((n, n - 1 - abs(model.m)))
    j = int(np.argmax(v[k] ** 2))
    return w[j], v[:, j], float(v[k, j] ** 2)
