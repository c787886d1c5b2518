import numpy as np
import pytest
from scipy.integrate import solve_ivp

from qholo import units
from qholo.gates import (AdiabaticDriveWarning, CPhaseParams, PhaseGateParams, PumpParams,
                         YRotParams, berry_phase_analytic, blockade_shift_hydrogenlike,
                         cavity_drive_amplitude, cavity_photon_number, cphase_dark_state,
                         cphase_phase_analytic, h_cphase, h_phase, h_pump, h_yrot, pump_basis,
                         sector_basis, wilson_closed_form, wilson_loop, yrot_dark_states)
from qholo.gates import presets
from qholo.pulses import ControlPath, Envelope, PathNotClosedError, constant, gaussian


def static(**vals):
    return ControlPath({k: constant(v) for k, v in vals.items()}, 0.0, 1.0)


def idx(h, name):
    return h.basis.index_of_name(name)


# ---- phase gate ----

def test_phase_theta_zero_couples_only_e_aplus():
    h = h_phase(PhaseGateParams(3.0, static(theta=0.0, phi=0.8)), 0.5)
    m = h.matrix
    assert m[idx(h, "e"), idx(h, "a+")] == pytest.approx(-3.0 * np.exp(0.8j), abs=1e-15)
    mask = np.ones_like(m, bool)
    mask[idx(h, "e"), idx(h, "a+")] = mask[idx(h, "a+"), idx(h, "e")] = False
    assert np.all(m[mask] == 0)


def test_phase_equator_couples_only_e_1L():
    h = h_phase(PhaseGateParams(1.0, static(theta=np.pi / 2, phi=0.0)), 0.5)
    m = h.matrix
    assert m[idx(h, "e"), idx(h, "1L")] == pytest.approx(1.0, abs=1e-15)
    assert abs(m[idx(h, "e"), idx(h, "a+")]) < 1e-15
    z = idx(h, "0L")
    assert np.all(m[z] == 0) and np.all(m[:, z] == 0)


def test_phase_dark_state_residuals(rng):
    from qholo.gates import phase_dark_state
    om = 200.0
    for th, ph in [(0.7, 1.1)] + list(rng.uniform([0, 0], [np.pi, 2 * np.pi], size=(100, 2))):
        h = h_phase(PhaseGateParams(om, static(theta=th, phi=ph)), 0.5)
        d = phase_dark_state(h.basis, th, ph)
        assert np.linalg.norm(h.matrix @ d) < 1e-10 * om


def test_berry_phase_scale_invariance_and_gap():
    path = presets.fig4_path()
    a = berry_phase_analytic(PhaseGateParams(200.0, path))
    b = berry_phase_analytic(PhaseGateParams(400.0, path))
    assert a.abelian_phase == b.abelian_phase
    assert a.abelian_phase == pytest.approx(np.pi / 8, abs=1e-12)
    assert a.min_gap == pytest.approx(200.0, rel=1e-10)


def test_berry_phase_rejects_open_path():
    with pytest.raises(PathNotClosedError):
        berry_phase_analytic(PhaseGateParams(1.0, presets.fig4_path(window=(0.0, 3.2))))


def test_param_invariants():
    with pytest.raises(ValueError):
        PhaseGateParams(0.0, presets.fig4_path())
    with pytest.raises(ValueError):
        YRotParams(-1.0, presets.fig8_path())
    with pytest.raises(ValueError):
        CPhaseParams(presets.cphase_path(), g1=-1.0)
    with pytest.raises(ValueError):
        CPhaseParams(presets.cphase_path(), phi1=0.1)


# ---- pump ----

def test_pump_reduces_to_driven_oscillator():
    path = ControlPath({"p1": constant(0.7), "p2": constant(0.0)}, 0.0, 1.0)
    params = PumpParams(path, N=100, **{k: 0.0 for k in ("u_mm", "u_rr", "u_ff", "u_rm", "u_fm", "u_fr")})
    h = h_pump(params, 0.5)
    b = h.basis
    for k in (0, 1):
        i = b.lookup((100 - k, k, 0, 0))
        j = b.lookup((100 - k - 1, k + 1, 0, 0))
        assert h.matrix[i, j] == pytest.approx(np.sqrt(100) * 0.7 * np.sqrt(k + 1), rel=1e-14)
    # r is never reached without p2
    r_rows = [b.lookup(l) for l in b.labels if l[2] > 0]
    assert not h.matrix[np.ix_(r_rows, [i for i in range(b.dimension) if i not in r_rows])].any()


def test_pump_rejects_small_truncation():
    with pytest.raises(ValueError, match="double"):
        PumpParams(presets.pump_path(), max_excitations=1)


def test_pump_basis_hosts_leakage_states():
    p = PumpParams(presets.pump_path())
    b0, b1 = pump_basis(p), pump_basis(p, f_occupied=True)
    assert b0.dimension == b1.dimension == 6
    assert (998, 1, 1, 0) in b0.labels and (998, 1, 0, 1) in b1.labels
    h = h_pump(p, 3.0, f_occupied=True)
    i = h.basis.lookup((998, 0, 1, 1))
    assert h.matrix[i, i] == pytest.approx(p.u_fr, abs=1e-12)


# ---- y-rotation ----

def test_yrot_theta_zero_couples_only_e_aminus():
    h = h_yrot(YRotParams(2.0, static(theta=0.0, phi=0.3)), 0.5)
    m = h.matrix.copy()
    assert m[idx(h, "e"), idx(h, "a-")] == pytest.approx(2.0)
    m[idx(h, "e"), idx(h, "a-")] = m[idx(h, "a-"), idx(h, "e")] = 0
    assert np.all(m == 0)


def test_yrot_dark_states_annihilated(rng):
    om = 200.0
    pts = [(0.4, 0.9)] + list(rng.uniform([0, 0], [np.pi, 2 * np.pi], size=(100, 2)))
    for th, ph in pts:
        h = h_yrot(YRotParams(om, static(theta=th, phi=ph)), 0.5)
        d = yrot_dark_states(th, ph)
        assert np.linalg.norm(h.matrix @ d, axis=0).max() < 1e-10 * om
        assert np.allclose(d.T @ d, np.eye(2), atol=1e-14)


def _yrot_loop(a, c, w, phi_amp):
    # starts and ends at (0, pi/2)
    return ControlPath({"theta": gaussian(a, c, w), "phi": (constant(np.pi / 2), gaussian(phi_amp, c - 0.4, w))},
                       c - 2.5, c + 2.5)


def test_wilson_zero_loop_is_identity():
    p = ControlPath({"theta": constant(0.0), "phi": constant(np.pi / 2)}, 0.0, 1.0)
    u = wilson_loop(YRotParams(1.0, p), 200).dark_unitary
    assert np.allclose(u, np.eye(2), atol=1e-15)


def test_wilson_pi_over_4():
    u = wilson_loop(YRotParams(200.0, presets.fig8_path())).dark_unitary
    r = np.sqrt(0.5)
    assert np.linalg.norm(u - np.array([[r, r], [-r, r]])) < 1e-6
    assert np.max(np.abs(u.imag)) < 1e-12


def test_wilson_random_loops_match_closed_form(rng):
    from qholo.pulses import loop_area_cos
    for _ in range(5):
        a, c, w, amp = rng.uniform([0.3, 1.5, 0.08, 1.0], [1.4, 2.5, 0.2, 3.0])
        p = _yrot_loop(a, c, w, amp)
        u = wilson_loop(YRotParams(1.0, p), 10_000).dark_unitary
        assert np.linalg.norm(u - wilson_closed_form(loop_area_cos(p, 20_000))) < 1e-8
        assert np.max(np.abs(u.imag)) < 1e-12
        assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-8)


def test_wilson_rejects_wrong_start():
    p = ControlPath({"theta": constant(0.0), "phi": constant(0.0)}, 0.0, 1.0)
    with pytest.raises(ValueError, match="start"):
        wilson_loop(YRotParams(1.0, p))


# ---- cavity drive ----

def test_cavity_zero_drive():
    d = cavity_drive_amplitude(constant(0.0), 100.0, 1.0, 5.0, 500)
    assert np.all(d.exact == 0) and np.all(d.approx == 0)


def test_cavity_steady_state():
    ramp = Envelope("piecewise-linear", 1.0, points=((0.0, 0.0), (1.0, 2.0), (30.0, 2.0)))
    d = cavity_drive_amplitude(ramp, 5.0, 2.0, 30.0, 30_000)
    assert d.exact[-1] == pytest.approx(2.0 / (5j + 1.0), abs=1e-9)


def test_cavity_gaussian_against_ode():
    delta, kappa, w = 100.0, 0.0, 1.0
    env = gaussian(1.0, 4.0, w)
    d = cavity_drive_amplitude(env, delta, kappa, 8.0, 40_000)
    lam = -1j * delta - kappa / 2

    def rhs(t, y):
        a = y[0] + 1j * y[1]
        da = lam * a + env.value(t)
        return [da.real, da.imag]

    sol = solve_ivp(rhs, (0, 8.0), [0.0, 0.0], t_eval=d.times[::400], rtol=1e-11, atol=1e-13,
                    method="DOP853")
    ref = sol.y[0] + 1j * sol.y[1]
    assert np.max(np.abs(d.exact[::400] - ref)) < 1e-8
    assert d.relative_error() < 2 / (delta * w)


def test_cavity_errors_and_warning():
    with pytest.raises(ValueError):
        cavity_drive_amplitude(constant(0.0), 1.0, -0.1, 1.0)
    with pytest.warns(AdiabaticDriveWarning):
        cavity_drive_amplitude(constant(0.0), 1.0, 0.1, 1.0, 10, timescale=1.0)


# ---- controlled phase ----

def test_cphase_theta_zero():
    p = CPhaseParams(static(theta=0.0, phi2=0.3))
    h = h_cphase(p, 0.5, "plus")
    b = h.basis
    i = b.index_of_name("|100>")
    assert np.all(h.matrix[i] == 0)
    assert h.matrix[b.index_of_name("|r+00>"), b.index_of_name("|001>")] == 660.0


def test_cphase_published_couplings_loaded():
    p = CPhaseParams(presets.cphase_path())
    assert (p.g1, p.g2, p.omega1, p.omega2, p.g3) == (660.0, 660.0, 40.0, 50.0, 10.0)
    assert CPhaseParams(presets.cphase_path(), g1=None).g1 == pytest.approx(20 * np.sqrt(1000))


def test_cphase_dark_state_residuals(rng):
    p = CPhaseParams(presets.cphase_path())
    pts = [(0.6, 0.3)] + list(rng.uniform([0, 0], [np.pi, 2 * np.pi], size=(100, 2)))
    for th, ph in pts:
        for sector, key in (("plus", "phi2"), ("minus", None)):
            q = static(theta=th, phi2=ph)
            pp = CPhaseParams(q, phi_minus=0.0)
            h = h_cphase(pp, 0.5, sector)
            d = cphase_dark_state(pp, th, ph if key else 0.0, sector)
            assert np.linalg.norm(h.matrix @ d) < 1e-10 * 660


def test_cphase_analytic_phase():
    p = CPhaseParams(presets.cphase_path())
    phi3 = cphase_phase_analytic(p)
    assert abs(phi3 - np.pi / 16) / (np.pi / 16) < 0.05
    assert phi3 == pytest.approx(0.19570635372256126, abs=1e-9)
    # rescaling every laser and cavity coupling leaves the loop integral unchanged
    q = p.with_couplings(omega1=80.0, omega2=100.0, omega3=600.0, g1=1320.0, g2=1320.0, g3=20.0)
    assert cphase_phase_analytic(q) == pytest.approx(phi3, abs=1e-14)
    flat = CPhaseParams(ControlPath({"theta": constant(0.0), "phi2": gaussian(1.0, 2.0, 0.5)}, -2, 6))
    assert cphase_phase_analytic(flat) == 0.0
    assert cphase_phase_analytic(p, sector="minus") == 0.0


def test_cphase_sectors_disjoint():
    plus, minus = sector_basis("plus"), sector_basis("minus")
    assert not set(plus.labels) & set(minus.labels)
    with pytest.raises(ValueError):
        sector_basis("zero")
    with pytest.raises(ValueError):
        h_cphase(CPhaseParams(presets.cphase_path()), 1.0, "other")


def test_photon_number_range(rng):
    p = CPhaseParams(presets.cphase_path())
    t = np.linspace(-1.6, 5.45, 2001)
    for lab in ("10", "11"):
        n = cavity_photon_number(p, t, lab)
        assert np.all((n >= 0) & (n <= 1))
    for om1 in rng.uniform(1, 500, 20):
        for th in (0.0, np.pi / 2):
            q = CPhaseParams(static(theta=th, phi2=0.0), omega1=om1)
            for lab in ("10", "11"):
                assert np.all(np.abs(cavity_photon_number(q, t[:5], lab)) < 1e-25)
    assert np.all(cavity_photon_number(p, t, "00") == 0)
    with pytest.raises(ValueError):
        cavity_photon_number(p, t, "12")


# ---- blockade ----

def test_blockade_formula():
    rad, au = blockade_shift_hydrogenlike(2, 2, 1e4)
    assert au == pytest.approx(-4.5 * 4 / 1e12, rel=1e-15)
    assert rad == pytest.approx(units.hartree_to_rad_per_us(au), rel=1e-15)
    with pytest.raises(ValueError):
        blockade_shift_hydrogenlike(70, 70, 0.0)
    with pytest.raises(ValueError):
        blockade_shift_hydrogenlike(1, 70, 1.0)
