"""Monte-Carlo wave-function (quantum jump) unravelling of the master equation.

Each trajectory owns a random stream spawned from ``SeedSequence(seed)`` at
its index, and the row-wise update has a fixed summation order, so results
do not depend on how trajectories are grouped across workers.

With ``conditioned=True`` the no-jump branch (probability ``p0``) is carried
exactly and the sampled trajectories are conditioned on at least one jump,
a stratified estimator that stays unbiased and has far lower variance when
jumps are rare.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..qcore import TimeDependentHamiltonian
from .integrate import (check_dt, default_dt, iter_propagators, record_stride, rowwise_apply,
                        step_grid)
from .lindblad import effective_terms
from .schrodinger import _as_vector, _window

MAX_JUMP_PROB = 0.1


def worker_count(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get("QHOLO_THREADS", default)))
    except ValueError:
        return default


@dataclass
class TrajectoryEnsemble:
    n_traj: int
    seed: int
    times: np.ndarray
    states: np.ndarray  # (n_traj, n_rec, d), normalised
    jumps: list  # per trajectory: list of (t, channel index)
    channel_names: tuple
    p0: float  # weight of the exact no-jump branch (0 when not conditioned)
    nojump_states: np.ndarray  # (n_rec, d), unnormalised no-jump branch
    nojump_final_coarse: np.ndarray  # same branch at 2*dt, final time only
    meta: dict = field(default_factory=dict)

    def density(self, index: int = -1) -> np.ndarray:
        """Ensemble density matrix at record ``index``."""
        psi = self.states[:, index]
        rho = (1 - self.p0) * np.einsum("bi,bj->ij", psi, psi.conj()) / self.n_traj
        if self.p0 > 0:
            v = self.nojump_states[index]
            v = v / np.linalg.norm(v)
            rho = rho + self.p0 * np.outer(v, v.conj())
        return rho

    def densities(self) -> np.ndarray:
        return np.array([self.density(i) for i in range(len(self.times))])

    def fidelity_estimate(self, target: np.ndarray) -> tuple[float, float]:
        """(F, sigma) for F = sqrt(<target|rho(T)|target>).

        sigma combines the Monte-Carlo standard error with a step-doubling
        estimate of the integrator error on the deterministic branch and a
        worst-case rounding bound (n_steps * eps).
        """
        target = np.asarray(target, complex)
        x = np.abs(self.states[:, -1] @ target.conj()) ** 2
        w = 1 - self.p0
        f2 = w * x.mean()
        var = w ** 2 * (x.var(ddof=1) / self.n_traj if self.n_traj > 1 else 0.0)
        num = 0.0
        if self.p0 > 0:
            fine = abs(np.vdot(target, self.nojump_states[-1])) ** 2
            coarse = abs(np.vdot(target, self.nojump_final_coarse)) ** 2
            f2 += fine
            num = abs(fine - coarse)
        num += self.meta.get("n_steps", 0) * np.finfo(float).eps
        f = np.sqrt(max(f2, 0.0))
        sig_f2 = np.sqrt(var + num ** 2)
        sigma = sig_f2 / (2 * f) if f > 0 else sig_f2
        return float(f), float(sigma)

    def to_jsonl(self, path):
        from ..io import atomic_write_text
        lines = []
        for i, js in enumerate(self.jumps):
            for t, c in js:
                lines.append(json.dumps({"traj": i, "t": float(t), "channel": self.channel_names[c]},
                                        sort_keys=True))
        atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def _nojump(ham, extra, psi0, t0, h, n, stride):
    psi = psi0.copy()
    rec = [psi.copy()]
    for k0, props in iter_propagators(ham.matrices, t0, h, n, extra=extra):
        for j, m in enumerate(props):
            psi = m @ psi
            k = k0 + j + 1
            if k % stride == 0 or k == n:
                rec.append(psi.copy())
    return np.array(rec)


class _Group:
    def __init__(self, idx, psi0, rngs, jumps, p_floor, n_rec):
        self.idx = idx
        self.rngs = rngs
        self.jumps = jumps
        self.psi = np.tile(psi0, (len(idx), 1))
        self.log = [[] for _ in idx]
        u = np.array([r.random() for r in rngs])
        self.thresh = p_floor + (1 - p_floor) * u
        self.rec = np.zeros((len(idx), n_rec, len(psi0)), complex)
        self.rec[:, 0] = psi0

    def advance(self, props, k0, t0, h, n, stride):
        for j, m in enumerate(props):
            self.psi = rowwise_apply(m, self.psi)
            k = k0 + j + 1
            nrm = np.einsum("bi,bi->b", self.psi.conj(), self.psi).real
            for b in np.flatnonzero(nrm < self.thresh):
                self._jump(b, t0 + k * h)
            if k % stride == 0 or k == n:
                r = -(-k // stride)
                nn = np.sqrt(np.einsum("bi,bi->b", self.psi.conj(), self.psi).real)
                self.rec[:, r] = self.psi / nn[:, None]

    def _jump(self, b, t):
        psi = self.psi[b]
        cand = [L @ psi for L in self.jumps]
        w = np.array([np.vdot(c, c).real for c in cand])
        if w.sum() <= 0:
            self.thresh[b] = 0.0  # nothing to jump into
            return
        rng = self.rngs[b]
        c = int(np.searchsorted(np.cumsum(w) / w.sum(), rng.random(), side="right"))
        c = min(c, len(cand) - 1)
        self.psi[b] = cand[c] / np.sqrt(w[c])
        self.thresh[b] = rng.random()
        self.log[b].append((t, c))


def evolve_trajectories(ham: TimeDependentHamiltonian, channels, psi0, t_span=None,
                        dt: float | None = None, n_traj: int = 15, seed: int = 0,
                        conditioned: bool = False, groups: int | None = None,
                        max_records: int = 200) -> TrajectoryEnsemble:
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    t_span = _window(ham, t_span)
    psi0 = _as_vector(ham.basis, psi0)
    if abs(np.vdot(psi0, psi0).real - 1) > 1e-8:
        raise ValueError("initial state not normalised")
    if dt is None:
        dt = default_dt(ham, t_span)
    n, h = step_grid(t_span, dt)
    check_dt(ham, t_span, h)
    d = ham.basis.dimension
    anti, jumps = effective_terms(channels, d)
    active = [ch for ch in channels if ch.rate > 0]
    names = tuple(ch.name for ch in active)
    if jumps:
        rate_bound = sum(np.linalg.norm(L.conj().T @ L, 2) for L in jumps)
        if h * rate_bound > MAX_JUMP_PROB:
            raise ValueError(f"per-step jump probability bound {h * rate_bound:.3g} exceeds "
                             f"{MAX_JUMP_PROB}; reduce dt")
    stride = record_stride(n, max_records)
    n_rec = 1 - (-n // stride)
    t0 = t_span[0]
    times = t0 + h * np.minimum(np.arange(n_rec) * stride, n)

    nj = _nojump(ham, anti, psi0, t0, h, n, stride)
    n2, h2 = step_grid(t_span, 2 * h)
    nj_coarse = _nojump(ham, anti, psi0, t0, h2, n2, n2)[-1]
    p0 = float(np.vdot(nj[-1], nj[-1]).real) if conditioned else 0.0
    if conditioned and not jumps:
        p0 = 1.0

    seqs = np.random.SeedSequence(seed).spawn(n_traj)
    rngs = [np.random.Generator(np.random.PCG64(s)) for s in seqs]
    n_groups = groups or worker_count()
    parts = [p for p in np.array_split(np.arange(n_traj), min(n_groups, n_traj)) if len(p)]
    grp = [_Group(p, psi0, [rngs[i] for i in p], jumps, p0 if conditioned else 0.0, n_rec)
           for p in parts]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        for k0, props in iter_propagators(ham.matrices, t0, h, n, extra=anti):
            list(pool.map(lambda g: g.advance(props, k0, t0, h, n, stride), grp))
    states = np.zeros((n_traj, n_rec, d), complex)
    log = [None] * n_traj
    for g in grp:
        states[g.idx] = g.rec
        for i, l in zip(g.idx, g.log):
            log[i] = l
    return TrajectoryEnsemble(n_traj, seed, times, states, log, names, p0, nj, nj_coarse,
                              meta={"dt": h, "n_steps": n, "stride": stride,
                                    "conditioned": conditioned})
