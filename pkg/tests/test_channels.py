import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from netnl.bloch import PAULIS, BlochState, from_bloch, phi_plus, to_bloch
from netnl.channels import (IDENTITY, PauliDampingChannel, QubitChannelAffine, RandomUnitaryChannel, apply,
                            choi_matrix, dephasing, depolarizing, is_completely_positive, is_proper,
                            kraus_from_choi, nu_to_affine, ru_kraus, ru_to_affine, s_factors)
from netnl.config import DEFAULT
from netnl.errors import DomainError, InvalidChannel, NormViolation
from netnl.oracle.density import apply_state

from strategies import bloch_states, damping_channels, ru_channels

X, Y, Z = PAULIS
I2 = np.eye(2)


def transfer_by_conjugation(kraus, weights):
    """T_ij = Tr[σ_i N(σ_j)] / 2 with N applied operator by operator."""
    T = np.empty((3, 3))
    for j, P in enumerate(PAULIS):
        out = sum(w * K @ P @ K.conj().T for w, K in zip(weights, kraus))
        for i, Q in enumerate(PAULIS):
            T[i, j] = 0.5 * np.trace(Q @ out).real
    return T


def test_identity_parameters():
    A = ru_to_affine(RandomUnitaryChannel(1, 0))
    assert_allclose(A.T, np.eye(3), atol=0)
    assert not A.t.any()


def test_depolarizing_half_against_pauli_kraus():
    q = 0.5
    kraus = [I2, X, Y, Z]
    weights = [1 - 3 * q / 4, q / 4, q / 4, q / 4]
    expected = transfer_by_conjugation(kraus, weights)
    assert_allclose(expected, 0.5 * np.eye(3), atol=1e-15)
    assert_allclose(ru_to_affine(depolarizing(q)).T, expected, atol=1e-12)


@pytest.mark.parametrize("p, diag", [(0.5, (0.5, 0.5, 1.0)), (1.0, (0.0, 0.0, 1.0)), (0.0, (1, 1, 1))])
def test_dephasing_against_kraus(p, diag):
    expected = transfer_by_conjugation([I2, Z], [1 - p / 2, p / 2])
    assert_allclose(expected, np.diag(diag), atol=1e-15)
    assert_allclose(ru_to_affine(dephasing(p)).T, expected, atol=1e-12)


def test_full_depolarization_is_zero_map():
    assert_allclose(ru_to_affine(depolarizing(1.0)).T, np.zeros((3, 3)), atol=1e-15)


def test_norm_violation():
    with pytest.raises(NormViolation):
        ru_to_affine(RandomUnitaryChannel(1, 0.1))
    with pytest.raises(NormViolation):
        ru_kraus(RandomUnitaryChannel(0.5, 0.5))


def test_signed_diagonal():
    # alpha = i: T = diag(-1, -1, 1), a z-rotation by pi
    assert_allclose(np.diag(ru_to_affine(RandomUnitaryChannel(1j, 0)).T), [-1, -1, 1], atol=1e-15)


def test_s_factors_depolarizing_04():
    sf = s_factors(depolarizing(0.4))
    assert sf.M == pytest.approx((0.7, 0.1, 0.1, 0.1), abs=1e-15)
    assert (sf.s1, sf.s2, sf.s3) == pytest.approx((0.6, 0.6, 0.6), abs=1e-15)
    assert sf.M_max == pytest.approx(0.7) and sf.M_min == pytest.approx(0.1)


def test_s_factors_examples():
    assert s_factors(RandomUnitaryChannel(1, 0))[:3] == (1, 1, 1)
    sf = s_factors(RandomUnitaryChannel((1 + 1j) / np.sqrt(2), 0))
    assert (sf.s1, sf.s2, sf.s3) == pytest.approx((0, 0, 1), abs=1e-15)


def test_depolarizing_parameters():
    c = depolarizing(0.4)
    assert c.alpha == pytest.approx(complex(np.sqrt(0.7), np.sqrt(0.1)))
    assert c.beta == pytest.approx(np.sqrt(0.1) * (1 + 1j))
    assert depolarizing(0.0).alpha == 1 and depolarizing(0.0).beta == 0


@pytest.mark.parametrize("bad", [-0.01, 1.01, float("nan")])
def test_constructor_domains(bad):
    with pytest.raises(DomainError):
        depolarizing(bad)
    with pytest.raises(DomainError):
        dephasing(bad)


@pytest.mark.parametrize("q", np.linspace(0, 1, 21))
def test_depolarizing_is_uniform_contraction(q):
    A = ru_to_affine(depolarizing(q))
    assert_allclose(A.T, (1 - q) * np.eye(3), atol=1e-12)
    assert not A.t.any()


def test_kraus_identity_and_completeness():
    for w, U in ru_kraus(RandomUnitaryChannel(1, 0)):
        assert w == 0.25
        assert_allclose(U, I2, atol=0)


@given(ru_channels())
def test_kraus_unitary_and_complete(c):
    ops = ru_kraus(c)
    assert len(ops) == 4
    total = sum(w * U.conj().T @ U for w, U in ops)
    assert_allclose(total, I2, atol=1e-12)
    for _, U in ops:
        assert_allclose(U.conj().T @ U, I2, atol=1e-12)


def test_kraus_vs_affine_on_phi_plus():
    c = depolarizing(0.4)
    assert apply(c, None, phi_plus()).allclose(apply_state(c, None, phi_plus()), atol=1e-12)


def test_pauli_damping_affine_forms():
    A = nu_to_affine(PauliDampingChannel(0.2, 0.2, 0.2))
    assert_allclose(A.t, [0, 0, 0.2])
    assert_allclose(A.T, np.diag([0.2, 0, 0.2]))
    ident = nu_to_affine(PauliDampingChannel(0, 1, 1, lambda2=1))
    assert_allclose(ident.T, np.eye(3))


@pytest.mark.parametrize("params", [(0.5, 0.6, 0.6), (0.0, 1.0, 1.0), (0.0, 1.1, 0.0), (0.5, 0.8, 0.1)])
def test_invalid_pauli_damping(params):
    c = PauliDampingChannel(*params)
    assert not c.is_valid()
    with pytest.raises(InvalidChannel):
        nu_to_affine(c)


def test_apply_identity_is_noop(rng):
    s = to_bloch(np.diag([0.4, 0.3, 0.2, 0.1]))
    assert apply(None, None, s).allclose(s, atol=0)
    assert apply(IDENTITY, IDENTITY, s).allclose(s, atol=0)


def test_one_side_damping_on_phi_plus():
    out = apply(PauliDampingChannel(0.2, 0.2, 0.2), None, phi_plus())
    assert_allclose(out.W, np.diag([0.2, 0, 0.2]), atol=1e-15)
    assert_allclose(out.a, [0, 0, 0.2], atol=1e-15)
    assert apply_state(PauliDampingChannel(0.2, 0.2, 0.2), None, phi_plus()).allclose(out, atol=1e-12)


def test_both_sides_damping_on_phi_plus():
    out = apply(PauliDampingChannel(0.2, 0.2, 0.2), PauliDampingChannel(0.2, 0.2, 0.2), phi_plus())
    assert_allclose(out.W, np.diag([0.04, 0, 0.08]), atol=1e-15)


@given(damping_channels(), bloch_states())
def test_one_side_matrix_structure(c, s):
    # in the frame where W is diagonal the transformed tensor has the documented rows
    U, S, Vt = np.linalg.svd(s.W)
    s = BlochState(U.T @ s.a, Vt @ s.b, np.diag(S))
    W = apply(c, None, s).W
    w1, w3, b = S[0], S[2], s.b
    expected = np.array([[c.lambda1 * w1, 0, 0], [0, 0, 0],
                         [c.t * b[0], c.t * b[1], c.t * b[2] + c.lambda3 * w3]])
    assert_allclose(W, expected, atol=1e-14)


@given(damping_channels(), bloch_states())
def test_both_side_matrix_structure(c, s):
    U, S, Vt = np.linalg.svd(s.W)
    s = BlochState(U.T @ s.a, Vt @ s.b, np.diag(S))
    W = apply(c, c, s).W
    a, b, t, l1, l3 = s.a, s.b, c.t, c.lambda1, c.lambda3
    S1 = t**2 + t * l3 * (b[2] + a[2]) + l3**2 * S[2]
    expected = np.array([[l1**2 * S[0], 0, a[0] * l1 * t], [0, 0, 0], [b[0] * l1 * t, 0, S1]])
    assert_allclose(W, expected, atol=1e-14)


@given(ru_channels(), bloch_states())
def test_path_equivalence_unital(c, s):
    for sides in ((c, None), (None, c), (c, c)):
        assert apply(*sides, s).allclose(apply_state(*sides, s), atol=1e-12)


@given(damping_channels(), bloch_states())
def test_path_equivalence_damping(c, s):
    for sides in ((c, None), (None, c), (c, c)):
        assert apply(*sides, s).allclose(apply_state(*sides, s), atol=1e-12)


@given(damping_channels())
def test_valid_damping_is_completely_positive(c):
    assert np.linalg.eigvalsh(choi_matrix(c))[0] >= -1e-10
    assert is_completely_positive(c)


def test_choi_examples():
    ev = np.linalg.eigvalsh(choi_matrix(IDENTITY))
    assert_allclose(ev, [0, 0, 0, 1], atol=1e-15)
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert_allclose(choi_matrix(IDENTITY), np.outer(phi, phi), atol=1e-15)
    assert_allclose(np.linalg.eigvalsh(choi_matrix(depolarizing(1.0))), [0.25] * 4, atol=1e-15)
    bad = QubitChannelAffine([0, 0, 0.5], np.diag([0.8, 0, 0.1]))
    assert np.linalg.eigvalsh(choi_matrix(bad))[0] < -1e-3
    assert not is_completely_positive(bad)


def test_kraus_from_choi_reconstructs():
    c = PauliDampingChannel(0.3, 0.4, 0.5)
    ops = kraus_from_choi(c)
    assert_allclose(sum(K.conj().T @ K for K in ops), I2, atol=1e-12)


@given(ru_channels())
def test_s_factors_are_absolute_diagonal(c):
    sf = s_factors(c)
    assert (sf.s1, sf.s2, sf.s3) == tuple(np.abs(np.diag(ru_to_affine(c).T)))
    assert max(sf.s1, sf.s2, sf.s3) <= 1 + 1e-12


@given(ru_channels())
def test_unital_fixes_maximally_mixed(c):
    zero = BlochState(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
    assert apply(c, c, zero).allclose(zero, atol=1e-15)


@given(damping_channels())
def test_damping_shift_shows_up(c):
    zero = BlochState(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
    out = apply(None, c, zero)
    assert out.b[2] == c.t
    assert (abs(c.t) > 0) == (not out.allclose(zero, atol=0))


@pytest.mark.parametrize("z, expected", [(0.3 + 0.4j, True), (0.5, False), (1e-15 + 0.2j, False), (0.2j, False)])
def test_is_proper(z, expected):
    assert is_proper(z) is expected


def test_is_proper_eps():
    assert is_proper(1e-6 + 1e-6j, eps=1e-7)
    assert not is_proper(1e-6 + 1e-6j, eps=1e-5)
    assert DEFAULT.proper == 1e-12
