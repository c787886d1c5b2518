"""Pair energy shifts of outermost Stark states and the worst pair in a cloud."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from ..units import hartree_to_rad_per_us, um_to_bohr
from .dipole import z_expectation_matrix
from .hamiltonian import StarkModel, linear_field_bound, outermost_state
from .wigner import q_ladder


class NotLinearRegimeError(ValueError):
    pass


@dataclass(frozen=True)
class PairShift:
    element: float          # <z1><z2>, a_B^2
    energy_au: float        # -2 <z1><z2> / R^3
    rad_per_us: float
    R_bohr: float


def _z_mean(model: StarkModel, n: int) -> float:
    mod = model if n in model.n_window else model.around(n)
    if mod.field > 1.0 / (3.0 * n ** 5):
        raise NotLinearRegimeError(
            f"field {mod.field:.3g} a.u. exceeds the n={n} Inglis-Teller limit {1 / (3 * n ** 5):.3g}")
    _, vec, _ = outermost_state(mod, n)
    labels = mod.basis().labels
    own = sum(vec[i] ** 2 for i, lab in enumerate(labels) if lab[0] == n)
    if own <= 0.5:
        raise NotLinearRegimeError(f"outermost n={n} state keeps only {own:.3f} of its manifold")
    # z has no same-window cross-manifold part here, so sum manifold blocks
    z = 0.0
    off = 0
    for nn in mod.n_window:
        k = len(q_ladder(nn, mod.m))
        c = vec[off:off + k]
        z += float(c @ z_expectation_matrix(nn, mod.m) @ c)
        off += k
    return z


def pair_shift_outermost(n1: int, n2: int, model: StarkModel | None = None,
                         R: float = np.inf) -> PairShift:
    """Diagonal dipole-dipole shift of two outermost states, separation R (a_B) along z."""
    model = StarkModel() if model is None else model
    if model.m != 0:
        raise ValueError("pair shifts use the m = 0 sector")
    el = _z_mean(model, n1) * _z_mean(model, n2)
    e = -2.0 * el / R ** 3 if np.isfinite(R) else 0.0
    return PairShift(el, e, hartree_to_rad_per_us(e), float(R))


def cloud_min_shift(n1: int, n2: int, cloud=(6.0, 6.0, 6.0), n_atoms: int = 1000, seed: int = 0,
                    model: StarkModel | None = None, positions=None) -> float:
    """|shift| in rad/us for the most distant pair of a uniformly filled box (um)."""
    box = np.broadcast_to(np.asarray(cloud, float), (3,))
    if np.any(box <= 0):
        raise ValueError("box dimensions must be positive")
    if positions is None:
        if n_atoms < 2:
            raise ValueError("need at least two atoms")
        positions = np.random.default_rng(seed).uniform(size=(n_atoms, 3)) * box
    positions = np.asarray(positions, float)
    if len(positions) < 2:
        raise ValueError("need at least two atoms")
    r = um_to_bohr(float(pdist(positions).max()))
    return abs(pair_shift_outermost(n1, n2, model, r).rad_per_us)
