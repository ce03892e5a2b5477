"""Seeded random states and channels.

All samplers take a ``numpy.random.Generator`` and return stacks, so a whole
batch of scenarios is produced by one call.
"""
from __future__ import annotations

import numpy as np

from ..bloch import BlochState, pauli_coefficients
from ..channels import PauliDampingChannel, RandomUnitaryChannel
from ..config import DEFAULT, Tolerances


def haar_pure(rng: np.random.Generator, size: int) -> np.ndarray:
    """Haar-random pure two-qubit density matrices, shape ``(size, 4, 4)``."""
    return ket_density(haar_kets(rng, size))


def wishart_mixed(rng: np.random.Generator, size: int, rank: int | None = None) -> np.ndarray:
    """Random mixed states ``G G^dagger / Tr``; ``rank`` defaults to a random value in 1..4."""
    ranks = rng.integers(1, 5, size=size) if rank is None else np.full(size, rank)
    G = rng.normal(size=(size, 4, 4)) + 1j * rng.normal(size=(size, 4, 4))
    # zeroing trailing columns gives rank-r states from the same draw
    G *= (np.arange(4)[None, None, :] < ranks[:, None, None])
    rho = G @ G.conj().transpose(0, 2, 1)
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def haar_unitary_2(rng: np.random.Generator, size: int) -> np.ndarray:
    z = rng.normal(size=(size, 2, 2)) + 1j * rng.normal(size=(size, 2, 2))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


_BELL_KETS = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex) / np.sqrt(2)


def haar_kets(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.normal(size=(size, 4)) + 1j * rng.normal(size=(size, 4))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def structured_kets(rng: np.random.Generator, size: int, rotate: bool = True) -> np.ndarray:
    """Bell states (W = diag of ±1 entries), optionally under random local unitaries."""
    kets = _BELL_KETS[rng.integers(0, 4, size=size)]
    if rotate:
        U, V = haar_unitary_2(rng, size), haar_unitary_2(rng, size)
        local = np.einsum("nab,ncd->nacbd", U, V).reshape(size, 4, 4)
        kets = np.einsum("nij,nj->ni", local, kets)
    return kets


def ket_density(kets: np.ndarray) -> np.ndarray:
    return kets[..., :, None] * kets.conj()[..., None, :]


def bloch_arrays(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = pauli_coefficients(rho)
    return c[..., 1:, 0], c[..., 0, 1:], c[..., 1:, 1:]


def random_states(rng: np.random.Generator, count: int) -> list[BlochState]:
    """Mixture of Haar-pure and Wishart states as BlochState objects."""
    half = count // 2
    rho = np.concatenate([haar_pure(rng, count - half), wishart_mixed(rng, half)])
    a, b, W = bloch_arrays(rho)
    return [BlochState(a[i], b[i], W[i]) for i in range(count)]


def random_ru_channel(rng: np.random.Generator) -> RandomUnitaryChannel:
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return RandomUnitaryChannel(complex(v[0], v[1]), complex(v[2], v[3]))


def random_pauli_damping(rng: np.random.Generator, tol: Tolerances = DEFAULT,
                         max_tries: int = 10_000) -> PauliDampingChannel:
    """Uniform rejection sample from the valid ``(t, l1, l3)`` region."""
    for _ in range(max_tries):
        t, l1, l3 = rng.uniform(-1.0, 1.0, size=3)
        c = PauliDampingChannel(float(t), float(l1), float(l3))
        if c.is_valid(tol):
            return c
    raise RuntimeError("rejection sampling failed to find a valid channel")
