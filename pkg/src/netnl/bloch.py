"""Two-qubit states in Bloch form.

A two-qubit density operator is stored either as a 4x4 matrix or as the
triple ``(a, b, W)``::

    rho = 1/4 (I⊗I + a·σ⊗I + I⊗b·σ + sum_ij W_ij σ_i⊗σ_j)

with ``a_i = Tr[rho σ_i⊗I]``, ``b_j = Tr[rho I⊗σ_j]`` and
``W_ij = Tr[rho σ_i⊗σ_j]``. The network bounds depend on a state only through
the ordered singular values of ``W``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import InvalidDensity

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)
# PAULI_BASIS[mu] for mu = 0..3 is (I, X, Y, Z)
PAULI_BASIS = np.stack([I2, SX, SY, SZ])
# PAULI_PAIRS[mu, nu] = sigma_mu ⊗ sigma_nu, shape (4, 4, 4, 4)
PAULI_PAIRS = np.einsum("aij,bkl->abikjl", PAULI_BASIS, PAULI_BASIS).reshape(4, 4, 4, 4)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """4x4 two-qubit density matrix plus a physicality flag.

    Objects built through :meth:`checked` satisfy the Hermiticity, trace and
    positivity invariants; :func:`from_bloch` may produce ``physical=False``.
    """

    matrix: np.ndarray
    physical: bool = True

    @classmethod
    def checked(cls, matrix, tol: Tolerances = DEFAULT) -> "DensityOperator":
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidDensity(f"expected a 4x4 matrix, got shape {m.shape}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > tol.herm:
            raise InvalidDensity(f"not Hermitian (max |M - M^dagger| = {herm:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol.trace:
            raise InvalidDensity(f"trace is {tr!r}, expected 1")
        low = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if low < -tol.psd:
            raise InvalidDensity(f"not positive semidefinite (min eigenvalue {low:.3e})")
        return cls(m, True)


@dataclass(frozen=True, eq=False)
class BlochState:
    a: np.ndarray
    b: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(3))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float).reshape(3))
        object.__setattr__(self, "W", np.asarray(self.W, dtype=float).reshape(3, 3))

    def allclose(self, other: "BlochState", atol: float = 1e-12) -> bool:
        return (
            np.allclose(self.a, other.a, rtol=0, atol=atol)
            and np.allclose(self.b, other.b, rtol=0, atol=atol)
            and np.allclose(self.W, other.W, rtol=0, atol=atol)
        )

    def within_bloch_ball(self, tol: Tolerances = DEFAULT) -> bool:
        lim = 1.0 + tol.bloch
        return (
            np.linalg.norm(self.a) <= lim
            and np.linalg.norm(self.b) <= lim
            and np.max(np.abs(self.W)) <= lim
        )

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist(), "W": self.W.tolist()}


class OrderedSingulars(NamedTuple):
    E1: float
    E2: float
    E3: float


def to_bloch(rho, tol: Tolerances = DEFAULT) -> BlochState:
    """Pauli expectations of a validated density operator."""
    if isinstance(rho, DensityOperator):
        m = rho.matrix
        if rho.physical:
            DensityOperator.checked(m, tol)
    else:
        m = DensityOperator.checked(rho, tol).matrix
    coeffs = pauli_coefficients(m)
    return BlochState(coeffs[1:, 0], coeffs[0, 1:], coeffs[1:, 1:])


def pauli_coefficients(rho: np.ndarray) -> np.ndarray:
    """``C[mu, nu] = Tr[rho σ_mu⊗σ_nu]``; works on stacks ``(..., 4, 4)``."""
    return np.einsum("...ij,abji->...ab", rho, PAULI_PAIRS).real


def from_bloch(s: BlochState, tol: Tolerances = DEFAULT) -> DensityOperator:
    coeffs = np.zeros((4, 4))
    coeffs[0, 0] = 1.0
    coeffs[1:, 0] = s.a
    coeffs[0, 1:] = s.b
    coeffs[1:, 1:] = s.W
    m = 0.25 * np.einsum("ab,abij->ij", coeffs, PAULI_PAIRS)
    low = np.linalg.eigvalsh(m)[0]
    return DensityOperator(m, bool(low >= -tol.psd))


def ordered_singulars(W) -> OrderedSingulars:
    s = singular_values(np.asarray(W, dtype=float))
    return OrderedSingulars(float(s[0]), float(s[1]), float(s[2]))


def singular_values(W: np.ndarray) -> np.ndarray:
    """Descending singular values of one 3x3 matrix or a stack ``(..., 3, 3)``."""
    W = np.asarray(W, dtype=float)
    if not np.all(np.isfinite(W)):
        raise ValueError("correlation tensor has non-finite entries")
    return np.linalg.svd(W, compute_uv=False)


# Named two-qubit states. W for the Bell states follows from
# Tr[|Φ±><Φ±| σ_i⊗σ_i] = (±1, ∓1, 1) and Tr[|Ψ-><Ψ-| σ_i⊗σ_i] = -1.
def _ket_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


_S = 1 / np.sqrt(2)
PRESET_KETS = {
    "bell-phi+": np.array([_S, 0, 0, _S]),
    "bell-phi-": np.array([_S, 0, 0, -_S]),
    "bell-psi+": np.array([0, _S, _S, 0]),
    "bell-psi-": np.array([0, _S, -_S, 0]),
}
PRESETS = (*PRESET_KETS, "max-mixed")


def preset_state(name: str) -> BlochState:
    key = name.lower()
    if key == "max-mixed":
        return BlochState(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
    if key not in PRESET_KETS:
        raise KeyError(f"unknown state preset {name!r}; known: {sorted([*PRESET_KETS, 'max-mixed'])}")
    return to_bloch(_ket_state(PRESET_KETS[key]))


def phi_plus() -> BlochState:
    return BlochState(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))


def phi_minus() -> BlochState:
    return BlochState(np.zeros(3), np.zeros(3), np.diag([-1.0, 1.0, 1.0]))
