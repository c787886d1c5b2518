import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qholo.gates import PhaseGateParams, YRotParams, h_phase, h_yrot
from qholo.pulses import ControlPath, constant
from qholo.qcore import (HermitianOperator, LabeledBasis, NonHermitianError, StateVector,
                         build_collective_basis, eigendecompose, mode_lowering)


def _static(**vals):
    return ControlPath({k: constant(v) for k, v in vals.items()}, 0.0, 1.0)


def test_phase_hamiltonian_spectrum_at_equator():
    h = h_phase(PhaseGateParams(1.0, _static(theta=np.pi / 2, phi=0.0)), 0.5)
    ed = eigendecompose(h)
    # the decoupled |0>_L adds a second zero
    assert np.allclose(ed.eigenvalues, [-1, 0, 0, 1], atol=1e-12)


def test_zero_matrix_is_all_dark():
    b = LabeledBasis(((0,), (1,), (2,)))
    ed = eigendecompose(HermitianOperator(b, np.zeros((3, 3))))
    assert np.array_equal(ed.eigenvalues, np.zeros(3))
    assert list(ed.zero_subspace) == [0, 1, 2]


def test_yrot_dark_space_at_start_point():
    h = h_yrot(YRotParams(1.0, _static(theta=0.0, phi=np.pi / 2)), 0.5)
    ed = eigendecompose(h)
    assert len(ed.zero_subspace) == 2
    p = ed.zero_projector()
    b = h.basis
    for name in ("0L", "1L"):
        v = b.ket(b.labels[b.index_of_name(name)])
        assert np.allclose(p @ v, v, atol=1e-12)


def test_non_hermitian_rejected_with_asymmetry():
    b = LabeledBasis(((0,), (1,)))
    with pytest.raises(NonHermitianError, match="max \\|A - A\\^H\\|"):
        HermitianOperator(b, np.array([[0, 1.0], [0, 0]]))
    with pytest.raises(NonHermitianError):
        eigendecompose(np.array([[0, 1j], [1j, 0]]))


@pytest.mark.parametrize("modes, cap, size", [(["e", "s", "a+"], 1, 4), (["e", "s", "a+"], 0, 1),
                                              (["r", "m", "s"], 2, 10)])
def test_collective_basis_sizes(modes, cap, size):
    assert build_collective_basis(modes, 1000, cap).dimension == size


def test_collective_basis_errors():
    with pytest.raises(ValueError):
        build_collective_basis([], 10, 1)
    with pytest.raises(ValueError):
        build_collective_basis(["e"], 10, -1)
    with pytest.raises(ValueError):
        build_collective_basis(["e"], 10, 1, with_cavity=-1)


@given(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=4, unique=True),
       st.integers(0, 3), st.one_of(st.none(), st.integers(0, 2)))
def test_lookup_round_trip(modes, cap, cav):
    b = build_collective_basis(modes, 50, cap, with_cavity=cav)
    assert all(b.lookup(lab) == i for i, lab in enumerate(b.labels))
    assert list(b.labels) == sorted(b.labels, key=lambda l: (l[1:],))


@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_reconstruct_and_orthonormality(d, seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))
    a = a + a.conj().T
    ed = eigendecompose(a)
    v = ed.eigenvectors
    assert np.linalg.norm(ed.reconstruct() - a) < 1e-9 * np.linalg.norm(a)
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
    assert np.all(np.diff(ed.eigenvalues) >= 0)
    for lam, col in zip(ed.eigenvalues, v.T):
        assert np.linalg.norm(a @ col - lam * col) < 1e-9 * np.linalg.norm(a, 2)


@pytest.mark.parametrize("N", [5, 40, 1000])
def test_truncated_commutator_matches_dicke_algebra(N):
    b = build_collective_basis(["s"], N, 3)
    S = mode_lowering(b, "s", exact_collective=True)
    comm = S @ S.T - S.T @ S
    for i, lab in enumerate(b.labels):
        n = lab[1]
        if n < 3:
            assert comm[i, i] == pytest.approx(1 - 2 * n / N, abs=1e-14)
    off = comm - np.diag(np.diag(comm))
    assert np.max(np.abs(off)) == 0.0


def test_state_vector_normalize():
    b = build_collective_basis(["e", "s"], 10, 1)
    v = StateVector(b, np.array([1.0, 2j, -0.5])).normalize()
    assert abs(v.norm() - 1) < 1e-10
    with pytest.raises(ValueError):
        StateVector(b, np.ones(4))


def test_basis_rejects_duplicates():
    with pytest.raises(ValueError):
        LabeledBasis(((0,), (0,)))
