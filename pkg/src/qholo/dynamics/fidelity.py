"""Probe-set gate fidelity for a (possibly lossy) channel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_HAAR = 20


@dataclass(frozen=True)
class FidelityReport:
    labels: tuple
    fidelities: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.fidelities, float)
        if np.any(f < -1e-12) or np.any(f > 1 + 1e-9):
            raise ValueError("fidelities must lie in [0, 1]")
        object.__setattr__(self, "fidelities", np.clip(f, 0.0, 1.0))

    @property
    def minimum(self) -> float:
        return float(self.fidelities.min())

    @property
    def worst_state(self) -> str:
        return self.labels[int(np.argmin(self.fidelities))]

    def as_dict(self) -> dict:
        return dict(zip(self.labels, map(float, self.fidelities)))


def haar_states(dim: int, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def default_probes(dim: int = 4, n_haar: int = N_HAAR, seed: int = 0,
                   basis_labels=("00", "01", "10", "11")):
    """Computational basis states (|11> included) plus seeded Haar-random states."""
    labels = [f"|{b}>" for b in basis_labels[:dim]]
    states = list(np.eye(dim, dtype=complex))
    for k, v in enumerate(haar_states(dim, n_haar, seed)):
        labels.append(f"haar{k:02d}")
        states.append(v)
    return tuple(labels), np.array(states)


def gate_fidelity(ideal_unitary, channel, probe_states=None, embedding=None,
                  labels=None) -> FidelityReport:
    """F(psi) = sqrt(<psi|U^+ L(|psi><psi|) U|psi>) over a probe set.

    ``channel`` maps a stack (B, d, d) of operators on the full space to
    their images; it is linear, so it is called once on the k^2 matrix
    units of the logical space and the probes are assembled from those.
    ``embedding`` (d x k) places the logical space inside the full one.
    """
    u = np.asarray(ideal_unitary, complex)
    k = u.shape[0]
    if u.shape != (k, k):
        raise ValueError("ideal unitary must be square")
    emb = np.eye(k) if embedding is None else np.asarray(embedding, complex)
    if emb.shape[1] != k:
        raise ValueError(f"embedding maps {emb.shape[1]} logical states, unitary acts on {k}")
    if probe_states is None:
        labels, probe_states = default_probes(k)
    probes = np.atleast_2d(np.asarray(probe_states, complex))
    if probes.size == 0:
        raise ValueError("probe set is empty")
    if probes.shape[1] != k:
        raise ValueError(f"probe dimension {probes.shape[1]} does not match unitary dimension {k}")
    if labels is None:
        labels = tuple(f"probe{i}" for i in range(len(probes)))
    d = emb.shape[0]
    # channels preserve adjoints, so only i <= j units are propagated
    upper = [(i, j) for i in range(k) for j in range(i, k)]
    units = np.array([np.outer(emb[:, i], emb[:, j].conj()) for i, j in upper])
    out = np.asarray(channel(units))
    images = np.zeros((k, k, d, d), complex)
    for (i, j), img in zip(upper, out):
        images[i, j] = img
        images[j, i] = img.conj().T
    fids = []
    for psi in probes:
        psi = psi / np.linalg.norm(psi)
        rho = np.einsum("i,j,ijab->ab", psi, psi.conj(), images)
        phi = emb @ (u @ psi)
        fids.append(np.sqrt(max(np.vdot(phi, rho @ phi).real, 0.0)))
    return FidelityReport(tuple(labels), np.array(fids))
