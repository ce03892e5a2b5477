"""Born-rule simulation of the linear-chain correlators.

Parties ``A_1 .. A_{n+1}`` sit on a chain; source ``j`` sends its two qubits to
``A_j`` and ``A_{j+1}``. The two end parties measure a spin direction chosen
by a binary input, every intermediate party performs a Bell-state measurement
with two output bits. Outcome bits follow the convention

    Φ+ -> (0, 0),  Φ- -> (0, 1),  Ψ+ -> (1, 0),  Ψ- -> (1, 1)

and the correlators are

    I = 1/4 sum_{x, z} <A_x (-1)^{b1} ... C_z>
    J = 1/4 sum_{x, z} (-1)^{x+z} <A_x (-1)^{b2} ... C_z>

with ``b1`` and ``b2`` the first and second bits of every intermediate party.
Any other labelling only flips signs that the optimizer absorbs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ..bloch import PAULIS, from_bloch
from ..errors import DimensionError, TopologyError
from ..network import NetworkScenario, Topology

MAX_SOURCES = 3

_KETS = {
    "phi+": np.array([1, 0, 0, 1]) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1]) / math.sqrt(2),
    "psi+": np.array([0, 1, 1, 0]) / math.sqrt(2),
    "psi-": np.array([0, 1, -1, 0]) / math.sqrt(2),
}
BELL_BITS = {"phi+": (0, 0), "phi-": (0, 1), "psi+": (1, 0), "psi-": (1, 1)}


def bsm_observable(bit: int) -> np.ndarray:
    """``sum_outcomes (-1)^{bit} |outcome><outcome|`` for the chosen bit (0 or 1)."""
    out = np.zeros((4, 4), dtype=complex)
    for name, ket in _KETS.items():
        out += (-1) ** BELL_BITS[name][bit] * np.outer(ket, ket.conj())
    return out


def spin_observable(direction: np.ndarray) -> np.ndarray:
    """``P_+ - P_-`` for a projective spin measurement along a unit vector."""
    d = np.asarray(direction, dtype=float)
    dot = sum(d[i] * PAULIS[i] for i in range(3))
    plus = 0.5 * (np.eye(2) + dot)
    minus = 0.5 * (np.eye(2) - dot)
    return plus - minus


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError(f"{name} must be a unit vector, got norm {np.linalg.norm(v)!r}")
    return v


@dataclass(frozen=True, eq=False)
class MeasurementSetting:
    """Spin directions of the two end parties for inputs 0 and 1."""
    first: tuple[np.ndarray, np.ndarray]
    last: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "first", tuple(_unit(v, "first-party direction") for v in self.first))
        object.__setattr__(self, "last", tuple(_unit(v, "last-party direction") for v in self.last))

    @classmethod
    def from_angles(cls, angles) -> "MeasurementSetting":
        """Eight spherical angles ``(theta, phi)`` for ``a0, a1, c0, c1``."""
        v = _directions(np.asarray(angles, dtype=float))
        return cls((v[0], v[1]), (v[2], v[3]))


def _directions(angles: np.ndarray) -> np.ndarray:
    th, ph = angles[..., 0::2], angles[..., 1::2]
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 200
    step_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


def _check(scenario: NetworkScenario) -> None:
    if scenario.topology is not Topology.LINEAR:
        raise TopologyError("correlators are simulated for the linear chain only")
    if scenario.n > MAX_SOURCES:
        raise DimensionError(f"direct simulation is limited to n <= {MAX_SOURCES} sources, got {scenario.n}")


def joint_density(scenario: NetworkScenario) -> np.ndarray:
    return reduce(np.kron, [from_bloch(s).matrix for s in scenario.states])


def correlation_kernels(scenario: NetworkScenario) -> tuple[np.ndarray, np.ndarray]:
    """``K[j, k] = Tr[rho σ_j ⊗ B ⊗ ... ⊗ B ⊗ σ_k]`` with ``B`` the first-bit (I) or second-bit (J) observable.

    Both correlators are bilinear in the end-party directions through these
    3x3 kernels, which keeps the optimizer cheap.
    """
    _check(scenario)
    rho = joint_density(scenario)
    mids = scenario.n - 1
    kernels = []
    for bit in (0, 1):
        middle = reduce(np.kron, [bsm_observable(bit)] * mids, np.eye(1))
        K = np.empty((3, 3))
        for j in range(3):
            left = np.kron(PAULIS[j], middle)
            for k in range(3):
                K[j, k] = np.trace(rho @ np.kron(left, PAULIS[k])).real
        kernels.append(K)
    return kernels[0], kernels[1]


def simulate_linear_correlators(scenario: NetworkScenario, ms: MeasurementSetting) -> tuple[float, float]:
    _check(scenario)
    rho = joint_density(scenario)
    mids = scenario.n - 1
    I = J = 0.0
    for x in (0, 1):
        for z in (0, 1):
            A = spin_observable(ms.first[x])
            C = spin_observable(ms.last[z])
            obs_i = reduce(np.kron, [A] + [bsm_observable(0)] * mids + [C])
            obs_j = reduce(np.kron, [A] + [bsm_observable(1)] * mids + [C])
            I += 0.25 * np.trace(rho @ obs_i).real
            J += 0.25 * (-1) ** (x + z) * np.trace(rho @ obs_j).real
    return float(I), float(J)


def inequality_value(KI: np.ndarray, KJ: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """``sqrt|I| + sqrt|J|`` for one or many angle vectors."""
    v = _directions(angles)
    s_a, d_a = v[..., 0, :] + v[..., 1, :], v[..., 0, :] - v[..., 1, :]
    s_c, d_c = v[..., 2, :] + v[..., 3, :], v[..., 2, :] - v[..., 3, :]
    I = 0.25 * np.einsum("...j,jk,...k->...", s_a, KI, s_c)
    J = 0.25 * np.einsum("...j,jk,...k->...", d_a, KJ, d_c)
    return np.sqrt(np.abs(I)) + np.sqrt(np.abs(J))


def _coordinate_descent(f, x: np.ndarray, cfg: OptimizerConfig) -> tuple[float, np.ndarray]:
    best = float(f(x[None])[0])
    step = 0.5
    dims = x.size
    for _ in range(cfg.max_iters):
        if step < cfg.step_tol:
            break
        improved = False
        # all +/- moves along each coordinate, evaluated as one batch
        trial = np.repeat(x[None], 2 * dims, axis=0)
        idx = np.arange(dims)
        trial[2 * idx, idx] += step
        trial[2 * idx + 1, idx] -= step
        vals = f(trial)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, x = float(vals[i]), trial[i]
            improved = True
        if not improved:
            step *= 0.5
    return best, x


def max_inequality_over_settings(scenario: NetworkScenario,
                                 cfg: OptimizerConfig = OptimizerConfig()) -> tuple[float, MeasurementSetting]:
    """Multi-start coordinate search for the largest ``sqrt|I| + sqrt|J|``."""
    KI, KJ = correlation_kernels(scenario)
    rng = np.random.default_rng(cfg.seed)
    f = lambda a: inequality_value(KI, KJ, a)  # noqa: E731
    best, best_x = -math.inf, None
    for _ in range(cfg.restarts):
        x0 = rng.uniform(0.0, 2 * math.pi, size=8)
        val, x = _coordinate_descent(f, x0, cfg)
        if val > best:
            best, best_x = val, x
    return best, MeasurementSetting.from_angles(best_x)
