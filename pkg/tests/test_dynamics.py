import csv
import warnings

import numpy as np
import pytest

from qholo.dynamics import (CollapseChannel, NonCyclicWarning, StepSizeWarning, adiabaticity_report,
                            default_probes, evolve_lindblad, evolve_schrodinger,
                            evolve_trajectories, extract_geometric_phase, gate_fidelity,
                            lindblad_propagate, with_diagnostics)
from qholo.gates import (CPhaseParams, PhaseGateParams, cavity_lowering, cphase_phase_analytic,
                         ideal_cphase, logical_embedding, phase_hamiltonian, two_qubit_hamiltonian)
from qholo.gates import presets
from qholo.qcore import LabeledBasis, TimeDependentHamiltonian

TWO = LabeledBasis(((0,), (1,)), ("g", "e"))
SX = np.array([[0, 1], [1, 0]], complex)
SM = np.array([[0, 1], [0, 0]], complex)  # |g><e|


def const_ham(m, basis=TWO, window=(0.0, 1.0)):
    m = np.asarray(m, complex)
    return TimeDependentHamiltonian(basis, lambda t: np.broadcast_to(m, (len(t),) + m.shape), window)


def chirped(omega=1.0, window=(0.0, 3.0)):
    sz = np.diag([1.0, -1.0])
    return TimeDependentHamiltonian(
        TWO, lambda t: omega * (np.cos(t)[:, None, None] * SX + (0.3 * t)[:, None, None] * sz), window)


def ket(i, d=2):
    v = np.zeros(d, complex)
    v[i] = 1
    return v


# ---- Schrodinger ----

def test_zero_hamiltonian_is_identity():
    psi0 = np.array([0.6, 0.8j])
    rec = evolve_schrodinger(const_ham(np.zeros((2, 2))), psi0, dt=0.01)
    assert np.array_equal(rec.final, psi0)


def test_rabi_oscillation():
    om = 2.0
    rec = evolve_schrodinger(const_ham(om * SX, window=(0.0, 2.0)), ket(0), dt=1e-4 / om)
    assert np.max(np.abs(rec.population("e") - np.sin(om * rec.times) ** 2)) < 1e-8
    assert rec.norm_drift < 1e-8


def test_dt_errors_and_warning():
    h = const_ham(SX)
    with pytest.raises(ValueError):
        evolve_schrodinger(h, ket(0), dt=0.0)
    with pytest.raises(ValueError):
        evolve_schrodinger(h, ket(0, 3), dt=0.01)
    with pytest.raises(ValueError):
        evolve_schrodinger(h, np.array([1.0, 1.0]), dt=0.01)
    with pytest.warns(StepSizeWarning):
        evolve_schrodinger(h, ket(0), dt=0.2)


def test_rk4_fourth_order():
    h = chirped()
    finals = [evolve_schrodinger(h, ket(0), dt=dt).final for dt in (0.04, 0.02, 0.01)]
    r = np.linalg.norm(finals[0] - finals[1]) / np.linalg.norm(finals[1] - finals[2])
    assert 16 / 1.5 < r < 16 * 1.5


def test_phase_extraction_no_drive_and_noncyclic():
    rec = evolve_schrodinger(const_ham(np.zeros((2, 2))), ket(1), dt=0.1, ref_state="e")
    est = extract_geometric_phase(rec, "e")
    assert est.value == 0.0 and est.cyclic
    rec = evolve_schrodinger(const_ham(np.pi / 4 * SX, window=(0.0, 1.0)), ket(1), dt=1e-3)
    with pytest.warns(NonCyclicWarning):
        est = extract_geometric_phase(rec, "e")
    assert not est.cyclic


def _fig4_phase(omega):
    h = phase_hamiltonian(PhaseGateParams(omega, presets.fig4_path()))
    b = h.basis
    psi0 = (b.ket(b.labels[b.index_of_name("0L")]) + b.ket(b.labels[b.index_of_name("1L")])) / np.sqrt(2)
    rec = evolve_schrodinger(h, psi0, ref_state="1L", relative_to="0L")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCyclicWarning)
        est = extract_geometric_phase(rec, "1L", relative_to="0L")
    return h, rec, est


def test_phase_gate_dynamics_converges_in_omega():
    errs = []
    for om in (20.0, 60.0, 200.0):
        _, rec, est = _fig4_phase(om)
        errs.append(abs(est.value - np.pi / 8))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3
    assert 2 * rec.population("1L")[-1] > 0.999


def test_adiabaticity_report_on_phase_loop():
    h, rec, _ = _fig4_phase(200.0)
    b = h.basis
    rec = evolve_schrodinger(h, b.ket(b.labels[b.index_of_name("1L")]))
    rep = adiabaticity_report(h, rec)
    assert rep.min_gap == pytest.approx(200.0, rel=1e-9)
    assert rep.max_leakage < 1e-3
    static = const_ham(np.diag([0.0, 1.0]))
    r2 = evolve_schrodinger(static, ket(0), dt=0.01)
    assert adiabaticity_report(static, r2).max_leakage == 0.0


def test_csv_columns(tmp_path):
    h = const_ham(np.diag([0.0, 1.0]))
    rec = evolve_schrodinger(h, ket(0), dt=0.01, ref_state="g")
    rec = with_diagnostics(rec, adiabaticity_report(h, rec))
    rec.to_csv(tmp_path / "r.csv")
    with open(tmp_path / "r.csv") as f:
        header = next(csv.reader(f))
    assert header == ["time_us", "pop_g", "pop_e", "relative_phase_rad", "leakage"]


# ---- Lindblad ----

def test_photon_decay_two_kappa_convention():
    kappa = 0.7
    rec = evolve_lindblad(const_ham(np.zeros((2, 2)), window=(0.0, 2.0)), [CollapseChannel(SM, kappa)],
                          np.diag([0.0, 1.0]), dt=1e-3)
    n = rec.expectation(np.diag([0.0, 1.0]))
    assert np.max(np.abs(n - np.exp(-2 * kappa * rec.times))) < 1e-8
    assert rec.meta["max_trace_error"] < 1e-8


def test_lindblad_kappa_zero_matches_schrodinger():
    h = chirped()
    psi = evolve_schrodinger(h, ket(0), dt=0.005).final
    rho = evolve_lindblad(h, [CollapseChannel(SM, 0.0)], np.diag([1.0, 0.0]), dt=0.005).final
    ev = np.linalg.eigvalsh(rho - np.outer(psi, psi.conj()))
    assert 0.5 * np.abs(ev).sum() < 1e-8


def test_lindblad_rejects_bad_density():
    h = const_ham(SX)
    with pytest.raises(ValueError):
        evolve_lindblad(h, [], np.diag([0.5, 0.6]))
    with pytest.raises(ValueError):
        evolve_lindblad(h, [], np.array([[1.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        evolve_lindblad(h, [], np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        CollapseChannel(SM, -1.0)


# ---- trajectories ----

def test_zero_rates_reproduce_schrodinger():
    h = chirped()
    ens = evolve_trajectories(h, [CollapseChannel(SM, 0.0)], ket(0), dt=0.01, n_traj=4)
    ref = evolve_schrodinger(h, ket(0), dt=0.01).final
    for s in ens.states[:, -1]:
        assert np.allclose(s, ref, atol=1e-12)
    assert all(not j for j in ens.jumps)


def test_two_level_decay_statistics():
    kappa, n = 0.5, 2000
    ens = evolve_trajectories(const_ham(np.zeros((2, 2)), window=(0.0, 1.0)), [CollapseChannel(SM, kappa)],
                              ket(1), dt=0.005, n_traj=n, seed=3, max_records=11)
    p = np.abs(ens.states[:, :, 1]) ** 2
    mean = p.mean(0)
    exact = np.exp(-2 * kappa * ens.times)
    se = np.sqrt(exact * (1 - exact) / n)
    assert np.all(np.abs(mean - exact) <= 3 * se + 1e-12)


def _decay_setup():
    h = const_ham(0.8 * SX, window=(0.0, 2.0))
    return h, [CollapseChannel(SM, 0.4)]


def test_trajectories_reproducible_and_group_independent():
    h, ch = _decay_setup()
    a = evolve_trajectories(h, ch, ket(1), dt=0.01, n_traj=12, seed=5, groups=1)
    b = evolve_trajectories(h, ch, ket(1), dt=0.01, n_traj=12, seed=5, groups=4)
    c = evolve_trajectories(h, ch, ket(1), dt=0.01, n_traj=12, seed=5, groups=4)
    assert np.array_equal(a.states, b.states) and np.array_equal(b.states, c.states)
    assert a.jumps == b.jumps


def test_jump_probability_guard():
    h, _ = _decay_setup()
    with pytest.raises(ValueError, match="jump probability"):
        evolve_trajectories(h, [CollapseChannel(SM, 50.0)], ket(1), dt=0.01)
    with pytest.raises(ValueError):
        evolve_trajectories(h, [], ket(1), n_traj=0)


def test_ensemble_density_invariants_and_jsonl(tmp_path):
    h, ch = _decay_setup()
    ens = evolve_trajectories(h, ch, ket(1), dt=0.01, n_traj=30, seed=1)
    for rho in ens.densities():
        assert abs(np.trace(rho).real - 1) < 1e-8
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-8
    ens.to_jsonl(tmp_path / "j.jsonl")
    lines = (tmp_path / "j.jsonl").read_text().splitlines()
    assert len(lines) == sum(len(j) for j in ens.jumps)


def test_ensemble_error_scales_as_inverse_sqrt():
    h, ch = _decay_setup()
    rho = evolve_lindblad(h, ch, np.diag([0.0, 1.0]), dt=0.01).final

    def dist2(n, seed):
        r = evolve_trajectories(h, ch, ket(1), dt=0.01, n_traj=n, seed=seed).density()
        return np.linalg.norm(r - rho) ** 2

    # E||rho_N - rho||_F^2 is exactly proportional to 1/N
    d100 = np.sqrt(np.mean([dist2(100, s) for s in range(64)]))
    d400 = np.sqrt(np.mean([dist2(400, s) for s in range(1000, 1064)]))
    slope = np.log(d100 / d400) / np.log(4)
    assert 0.35 < slope < 0.65


# ---- fidelity ----

def test_identity_channel_fidelity_one():
    labels, probes = default_probes(4, 20, 0)
    rep = gate_fidelity(np.eye(4), lambda r: r, probes, labels=labels)
    assert np.allclose(rep.fidelities, 1.0, atol=1e-14)
    assert len(rep.labels) == 24 and "|11>" in rep.labels


def test_fidelity_errors():
    with pytest.raises(ValueError):
        gate_fidelity(np.eye(4), lambda r: r, np.ones((1, 3)))
    with pytest.raises(ValueError):
        gate_fidelity(np.eye(4), lambda r: r, np.zeros((0, 4)))
    with pytest.raises(ValueError):
        gate_fidelity(np.eye(4), lambda r: r, embedding=np.eye(5)[:, :3])


def test_cphase_fidelity_decreases_with_kappa():
    p = CPhaseParams(presets.cphase_path())
    h = two_qubit_hamiltonian(p)
    a = cavity_lowering(h.basis)
    emb = logical_embedding(h.basis)
    u = ideal_cphase(cphase_phase_analytic(p))
    dt = 0.09 / h.max_norm(h.t_window)
    # |11> alone: its sector carries the conditional photon population
    u11, emb11 = u[3:, 3:], emb[:, 3:]
    f = []
    for kappa in (0.1, 0.5, 1.0, 2.0):
        ch = [CollapseChannel(a, kappa)]
        f.append(gate_fidelity(u11, lambda r: lindblad_propagate(h, ch, r, h.t_window, dt), [[1.0]],
                               embedding=emb11).minimum)
    assert np.all(np.diff(f) < 0)
