import numpy as np
import pytest
from hypothesis import given
from numpy.testing import assert_allclose

from netnl.bloch import (PAULIS, BlochState, DensityOperator, from_bloch, ordered_singulars, phi_minus,
                         phi_plus, preset_state, to_bloch)
from netnl.errors import InvalidDensity
from netnl.oracle.sampling import haar_pure, haar_unitary_2

from strategies import bloch_states, density_matrices


def ket(*amps):
    v = np.array(amps, dtype=complex)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def direct_expectations(rho):
    """Nine Pauli correlations by explicit trace, independent of the package."""
    I = np.eye(2)
    a = [np.trace(rho @ np.kron(P, I)).real for P in PAULIS]
    b = [np.trace(rho @ np.kron(I, P)).real for P in PAULIS]
    W = [[np.trace(rho @ np.kron(P, Q)).real for Q in PAULIS] for P in PAULIS]
    return np.array(a), np.array(b), np.array(W)


def test_max_mixed_has_no_correlations():
    s = to_bloch(np.eye(4) / 4)
    assert not s.a.any() and not s.b.any() and not s.W.any()


def test_phi_minus_tensor():
    rho = ket(1, 0, 0, -1)
    a, b, W = direct_expectations(rho)
    s = to_bloch(rho)
    assert_allclose(W, np.diag([-1, 1, 1]), atol=1e-15)
    assert_allclose(s.W, W, atol=1e-15)
    assert_allclose(s.a, a, atol=1e-15)
    assert_allclose(s.b, b, atol=1e-15)


def test_phi_plus_tensor():
    s = to_bloch(ket(1, 0, 0, 1))
    assert_allclose(s.W, np.diag([1, -1, 1]), atol=1e-15)
    assert s.allclose(phi_plus())


def test_presets_match_kets():
    assert preset_state("bell-phi-").allclose(phi_minus())
    assert_allclose(preset_state("bell-psi-").W, -np.eye(3), atol=1e-15)
    assert_allclose(preset_state("bell-psi+").W, np.diag([1, 1, -1]), atol=1e-15)
    with pytest.raises(KeyError):
        preset_state("bell-omega")


@pytest.mark.parametrize("bad", [
    np.diag([0.5, 0.5, 0.5, 0.5]) + 0.1j * np.eye(4)[::-1] * np.array([1, 1, -1, 1]),
    np.diag([0.5, 0.5, 0.5, 0.0]),
    np.diag([1.2, -0.2, 0.0, 0.0]),
])
def test_invalid_density_rejected(bad):
    with pytest.raises(InvalidDensity):
        to_bloch(bad)


def test_from_bloch_examples():
    assert_allclose(from_bloch(BlochState(np.zeros(3), np.zeros(3), np.zeros((3, 3)))).matrix,
                    np.eye(4) / 4, atol=1e-15)
    d = from_bloch(phi_plus())
    assert d.physical
    assert_allclose(d.matrix, ket(1, 0, 0, 1), atol=1e-15)


def test_unphysical_tensor_is_flagged_not_rejected():
    d = from_bloch(BlochState(np.zeros(3), np.zeros(3), np.eye(3)))
    assert not d.physical
    assert np.linalg.eigvalsh(d.matrix)[0] == pytest.approx(-0.5, abs=1e-14)


def test_ordered_singulars_examples():
    assert ordered_singulars(np.diag([1, -1, 1])) == pytest.approx((1, 1, 1), abs=1e-15)
    assert ordered_singulars(np.diag([0.5, 0, 0.3])) == pytest.approx((0.5, 0.3, 0), abs=1e-15)
    # one-sided damping (0.2, 0.2, 0.2) on |Φ+> with b = 0
    W = np.array([[0.2, 0, 0], [0, 0, 0], [0, 0, 0.4]])
    assert ordered_singulars(W) == pytest.approx((0.4, 0.2, 0.0), abs=1e-15)


@given(density_matrices())
def test_round_trip_preserves_singulars(rho):
    s = to_bloch(rho)
    back = to_bloch(from_bloch(s))
    assert_allclose(ordered_singulars(back.W), ordered_singulars(s.W), atol=1e-12)
    assert_allclose(from_bloch(s).matrix, rho, atol=1e-12)


@given(bloch_states())
def test_state_invariants(s):
    assert s.within_bloch_ball()
    E = ordered_singulars(s.W)
    assert E.E1 >= E.E2 >= E.E3 >= 0
    assert E.E1 <= 1 + 1e-10


def test_local_unitary_invariance(rng):
    for rho in haar_pure(rng, 50):
        U, V = haar_unitary_2(rng, 2)
        K = np.kron(U, V)
        rotated = to_bloch(K @ rho @ K.conj().T)
        assert_allclose(ordered_singulars(rotated.W), ordered_singulars(to_bloch(rho).W), atol=1e-10)


def test_thousand_haar_states(rng):
    for rho in haar_pure(rng, 1000):
        s = to_bloch(rho)
        E = ordered_singulars(s.W)
        assert E.E1 >= E.E2 >= E.E3 >= 0
        assert E.E1 <= 1 + 1e-10
        assert np.max(np.abs(s.W)) <= 1 + 1e-10


def test_density_operator_checked_accepts_valid():
    d = DensityOperator.checked(np.eye(4) / 4)
    assert d.physical
