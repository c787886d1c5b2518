"""Cavity-mediated controlled phase between two ensembles.

States are ``(cloud1, cloud2, photons)`` with cloud entries drawn from
``0`` (= |0>_L), ``1`` (= |1>_L), ``r+``, ``r-``, ``a+``, ``a-``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import trapezoid

from ..pulses import ControlPath, sample
from ..qcore import HermitianOperator, LabeledBasis, TimeDependentHamiltonian

PLUS_LABELS = (("1", "0", 0), ("r+", "0", 0), ("0", "0", 1), ("0", "r+", 0), ("0", "a+", 0))
MINUS_LABELS = (("1", "1", 0), ("r+", "1", 0), ("0", "1", 1), ("0", "r-", 0), ("0", "a-", 0))
IDLE_LABELS = (("0", "0", 0), ("0", "1", 0))
LOGICAL = {"00": ("0", "0", 0), "01": ("0", "1", 0), "10": ("1", "0", 0), "11": ("1", "1", 0)}
LOGICAL_ORDER = ("00", "01", "10", "11")


def _name(lab) -> str:
    return "|" + lab[0] + lab[1] + str(lab[2]) + ">"


@dataclass(frozen=True)
class CPhaseParams:
    """Couplings in rad/us.  ``g1``/``g2`` default to ``g_plus * sqrt(N)``."""

    path: ControlPath
    omega1: float = 40.0
    omega2: float = 50.0
    omega3: float = 300.0
    g_plus: float = 20.0
    g_minus: float = 10.0
    N: int = 1000
    g1: float | None = 660.0
    g2: float | None = None
    g3: float | None = None
    phi1: float = 0.0
    phi_minus: float = 0.0  # laser phase on the minus-sector leg, held fixed

    def __post_init__(self):
        if self.g1 is None:
            object.__setattr__(self, "g1", self.g_plus * np.sqrt(self.N))
        if self.g2 is None:
            object.__setattr__(self, "g2", self.g1)
        if self.g3 is None:
            object.__setattr__(self, "g3", self.g_minus)
        for k in ("omega1", "omega2", "omega3", "g_plus", "g_minus", "g1", "g2", "g3"):
            if not getattr(self, k) > 0:
                raise ValueError(f"{k} must be positive")
        if self.phi1 != 0.0:
            raise ValueError("phi1 is fixed to 0 (gauge choice)")
        for ch in ("theta", "phi2"):
            if ch not in self.path.channels:
                raise ValueError(f"cphase path needs a {ch!r} channel")

    def with_couplings(self, **kw) -> "CPhaseParams":
        return replace(self, **kw)


def sector_basis(sector: str) -> LabeledBasis:
    labels = {"plus": PLUS_LABELS, "minus": MINUS_LABELS}.get(sector)
    if labels is None:
        raise ValueError(f"unknown sector {sector!r}; expected 'plus' or 'minus'")
    return LabeledBasis(labels, tuple(_name(l) for l in labels), ("cloud1", "cloud2", "cav"))


def _sector_couplings(params: CPhaseParams, sector: str):
    if sector == "plus":
        return params.g2, params.omega2, "phi2"
    if sector == "minus":
        return params.g3, params.omega3, None
    raise ValueError(f"unknown sector {sector!r}; expected 'plus' or 'minus'")


def _chain(params: CPhaseParams, sector: str, t) -> np.ndarray:
    """Upper triangle of the 5-level chain, vectorised over t."""
    gx, omx, phase_ch = _sector_couplings(params, sector)
    th = params.path.value("theta", t)
    ph = params.path.value(phase_ch, t) if phase_ch else np.full_like(th, params.phi_minus)
    h = np.zeros((len(th), 5, 5), complex)
    h[:, 0, 1] = params.omega1 * np.sin(th)
    h[:, 1, 2] = params.g1
    h[:, 2, 3] = gx
    h[:, 3, 4] = omx * np.cos(th) * np.exp(1j * ph)
    return h + np.conj(np.swapaxes(h, 1, 2))


def cphase_hamiltonian(params: CPhaseParams, sector: str) -> TimeDependentHamiltonian:
    basis = sector_basis(sector)
    p = params.path
    return TimeDependentHamiltonian(basis, lambda t: _chain(params, sector, t),
                                    (p.t_start, p.t_end), f"cphase-{sector}")


def h_cphase(params: CPhaseParams, t: float, sector: str) -> HermitianOperator:
    return cphase_hamiltonian(params, sector).at(t)


def _den(params, th, gx, omx):
    c2, s2 = np.cos(th) ** 2, np.sin(th) ** 2
    return (params.g1 / params.omega1) ** 2 * c2 + (gx / omx) ** 2 * s2 + c2 * s2


def cphase_dark_state(params: CPhaseParams, theta: float, phase: float, sector: str = "plus") -> np.ndarray:
    """Normalised zero-energy state of one sector (phase = phi2, or phi_minus for the minus sector)."""
    gx, omx, _ = _sector_couplings(params, sector)
    c, s = np.cos(theta), np.sin(theta)
    v = np.zeros(5, complex)
    v[0] = params.g1 / params.omega1 * c
    v[4] = np.exp(-1j * phase) * gx / omx * s
    v[2] = -c * s
    return v / np.sqrt(_den(params, theta, gx, omx))


def cphase_phase_analytic(params: CPhaseParams, n_steps: int = 4000, sector: str = "plus") -> float:
    """Loop integral of the dark state's weight on the far cloud."""
    gx, omx, phase_ch = _sector_couplings(params, sector)
    if phase_ch is None:
        params.path.require_closed()
        return 0.0  # phase channel frozen: no area
    sp = sample(params.path, n_steps)
    th = sp.values["theta"]
    w = (gx / omx) ** 2 * np.sin(th) ** 2 / _den(params, th, gx, omx)
    return float(trapezoid(w * sp.derivatives[phase_ch], sp.times))


def cavity_photon_number(params: CPhaseParams, t, initial: str = "10") -> np.ndarray:
    """Adiabatic mean photon number for |10>_L or |11>_L input."""
    sector = {"10": "plus", "11": "minus"}.get(initial)
    if sector is None:
        if initial in ("00", "01"):
            return np.zeros_like(np.asarray(t, float))
        raise ValueError(f"unknown logical input {initial!r}")
    gx, omx, _ = _sector_couplings(params, sector)
    th = params.path.value("theta", t)
    return np.cos(th) ** 2 * np.sin(th) ** 2 / _den(params, th, gx, omx)


# ---- full two-qubit space (both sectors plus the idle logical states) ----

def two_qubit_basis() -> LabeledBasis:
    labels = IDLE_LABELS + PLUS_LABELS + MINUS_LABELS
    return LabeledBasis(labels, tuple(_name(l) for l in labels), ("cloud1", "cloud2", "cav"))


def two_qubit_hamiltonian(params: CPhaseParams) -> TimeDependentHamiltonian:
    basis = two_qubit_basis()
    ip = [basis.lookup(l) for l in PLUS_LABELS]
    im = [basis.lookup(l) for l in MINUS_LABELS]
    d = basis.dimension

    def func(t):
        h = np.zeros((len(t), d, d), complex)
        h[np.ix_(range(len(t)), ip, ip)] = _chain(params, "plus", t)
        h[np.ix_(range(len(t)), im, im)] = _chain(params, "minus", t)
        return h

    p = params.path
    return TimeDependentHamiltonian(basis, func, (p.t_start, p.t_end), "cphase")


def cavity_lowering(basis: LabeledBasis) -> np.ndarray:
    a = np.zeros((basis.dimension, basis.dimension))
    for j, (c1, c2, n) in enumerate(basis.labels):
        if n > 0 and (c1, c2, n - 1) in basis.labels:
            a[basis.lookup((c1, c2, n - 1)), j] = np.sqrt(n)
    return a


def logical_embedding(basis: LabeledBasis) -> np.ndarray:
    """Isometry (d x 4) from the two-qubit logical space into ``basis``."""
    e = np.zeros((basis.dimension, 4))
    for k, name in enumerate(LOGICAL_ORDER):
        e[basis.lookup(LOGICAL[name]), k] = 1.0
    return e


def ideal_cphase(phi3: float) -> np.ndarray:
    """diag(1, 1, e^{i phi3}, 1): only |10>_L picks up the phase."""
    return np.diag([1.0, 1.0, np.exp(1j * phi3), 1.0])
