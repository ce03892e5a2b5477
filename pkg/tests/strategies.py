"""Hypothesis strategies shared by the property tests."""
import numpy as np
from hypothesis import strategies as st

from netnl.bloch import BlochState, to_bloch
from netnl.channels import PauliDampingChannel, RandomUnitaryChannel

unit = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def density_matrices(draw, rank=None):
    r = rank or draw(st.integers(1, 4))
    seed = draw(st.integers(0, 2**32 - 1))
    g = np.random.default_rng(seed)
    G = g.normal(size=(4, r)) + 1j * g.normal(size=(4, r))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


@st.composite
def bloch_states(draw):
    return to_bloch(draw(density_matrices()))


@st.composite
def ru_channels(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(4)])
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v, norm = np.array([1.0, 0, 0, 0]), 1.0
    v = v / norm
    return RandomUnitaryChannel(complex(v[0], v[1]), complex(v[2], v[3]))


@st.composite
def damping_channels(draw):
    """Valid Pauli-damping parameters, built inside the constraint region."""
    l3 = draw(st.floats(-1, 1))
    t = draw(st.floats(-1, 1)) * (1 - abs(l3))
    room = max((1 - abs(l3)) ** 2 - t * t, 0.0)
    l1 = draw(st.floats(-1, 1)) * np.sqrt(room) * (1 - 1e-12)
    return PauliDampingChannel(float(t), float(l1), float(l3))


__all__ = ["BlochState", "bloch_states", "damping_channels", "density_matrices", "ru_channels", "unit"]
