"""Single-qubit channels in affine (Bloch transfer) form.

A qubit channel acts on Bloch vectors as ``v -> t + T v``. Two families get
closed-form treatment:

* random-unitary (unital) channels, the equal-weight average of four
  unitaries fixed by complex ``alpha, beta`` with ``|alpha|^2 + |beta|^2 = 1``;
* the Pauli-damping class with shift ``(0, 0, t)`` and ``T = diag(l1, l2, l3)``
  (``l2 = 0`` throughout the criteria).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .bloch import PAULIS, BlochState, I2
from .config import DEFAULT, Tolerances
from .errors import DomainError, InvalidChannel, NormViolation


@dataclass(frozen=True, eq=False)
class QubitChannelAffine:
    t: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float).reshape(3))
        object.__setattr__(self, "T", np.asarray(self.T, dtype=float).reshape(3, 3))

    @property
    def unital(self) -> bool:
        return not np.any(self.t)

    def transfer_matrix(self) -> np.ndarray:
        """4x4 matrix acting on (1, v)."""
        m = np.zeros((4, 4))
        m[0, 0] = 1.0
        m[1:, 0] = self.t
        m[1:, 1:] = self.T
        return m

    def to_dict(self) -> dict:
        return {"kind": "affine", "t": self.t.tolist(), "T": self.T.tolist()}


IDENTITY = QubitChannelAffine(np.zeros(3), np.eye(3))


@dataclass(frozen=True)
class RandomUnitaryChannel:
    alpha: complex
    beta: complex
    label: str = "random-unitary"

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    def norm_defect(self) -> float:
        return abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0)

    def to_dict(self) -> dict:
        return {
            "kind": "random-unitary",
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "label": self.label,
        }


@dataclass(frozen=True)
class PauliDampingChannel:
    t: float
    lambda1: float
    lambda3: float
    lambda2: float = 0.0

    def violations(self, tol: Tolerances = DEFAULT) -> list[str]:
        """Which of the three necessary validity conditions fail.

        The conditions are derived for ``l2 = 0``. With ``l2 != 0`` (kept for
        exploration only) the channel is instead checked for complete
        positivity through its Choi matrix.
        """
        t, l1, l3 = abs(self.t), abs(self.lambda1), abs(self.lambda3)
        out = []
        if self.lambda2 != 0.0:
            raw = QubitChannelAffine([0.0, 0.0, self.t], np.diag([self.lambda1, self.lambda2, self.lambda3]))
            low = float(np.linalg.eigvalsh(choi_matrix(raw))[0])
            if low < -tol.psd:
                out.append(f"not completely positive (Choi eigenvalue {low:.3e})")
            return out
        if l1 > 1 + tol.eq:
            out.append(f"|l1| = {l1} > 1")
        if l3 + t > 1 + tol.eq:
            out.append(f"|l3| + |t| = {l3 + t} > 1")
        if l1**2 + t**2 > (1 - l3) ** 2 + tol.eq:
            out.append(f"l1^2 + t^2 = {l1**2 + t**2} > (1 - |l3|)^2 = {(1 - l3) ** 2}")
        return out

    def is_valid(self, tol: Tolerances = DEFAULT) -> bool:
        return not self.violations(tol)

    def validate(self, tol: Tolerances = DEFAULT) -> "PauliDampingChannel":
        bad = self.violations(tol)
        if bad:
            raise InvalidChannel("invalid Pauli-damping channel: " + "; ".join(bad))
        return self

    def to_dict(self) -> dict:
        d = {"kind": "pauli-damping", "t": self.t, "l1": self.lambda1, "l3": self.lambda3}
        if self.lambda2:
            d["l2"] = self.lambda2
        return d


Channel = Union[QubitChannelAffine, RandomUnitaryChannel, PauliDampingChannel]


class SFactors(NamedTuple):
    s1: float
    s2: float
    s3: float
    M: tuple[float, float, float, float]

    @property
    def M_max(self) -> float:
        return max(self.M)

    @property
    def M_min(self) -> float:
        return min(self.M)


def _check_norm(c: RandomUnitaryChannel, tol: Tolerances) -> None:
    defect = c.norm_defect()
    if defect > tol.norm:
        raise NormViolation(f"|alpha|^2 + |beta|^2 deviates from 1 by {defect:.3e}")


def ru_to_affine(c: RandomUnitaryChannel, tol: Tolerances = DEFAULT) -> QubitChannelAffine:
    _check_norm(c, tol)
    a, b = c.alpha, c.beta
    T = np.diag([
        (a * a + (a * a).conjugate() - b * b - (b * b).conjugate()).real / 2,
        (a * a + (a * a).conjugate() + b * b + (b * b).conjugate()).real / 2,
        abs(a) ** 2 - abs(b) ** 2,
    ])
    return QubitChannelAffine(np.zeros(3), T)


def s_factors(c: RandomUnitaryChannel, tol: Tolerances = DEFAULT) -> SFactors:
    d = np.abs(np.diag(ru_to_affine(c, tol).T))
    M = (c.alpha.real**2, c.alpha.imag**2, c.beta.real**2, c.beta.imag**2)
    return SFactors(float(d[0]), float(d[1]), float(d[2]), M)


def depolarizing(q: float) -> RandomUnitaryChannel:
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"depolarizing parameter q must lie in [0, 1], got {q}")
    alpha = complex(np.sqrt(1 - 3 * q / 4), np.sqrt(q / 4))
    beta = np.sqrt(q / 4) * (1 + 1j)
    return RandomUnitaryChannel(alpha, beta, label=f"depolarizing(q={q!r})")


def dephasing(p: float) -> RandomUnitaryChannel:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"dephasing parameter p must lie in [0, 1], got {p}")
    alpha = complex(np.sqrt(1 - p / 2), np.sqrt(p / 2))
    return RandomUnitaryChannel(alpha, 0j, label=f"dephasing(p={p!r})")


def ru_kraus(c: RandomUnitaryChannel, tol: Tolerances = DEFAULT) -> list[tuple[float, np.ndarray]]:
    _check_norm(c, tol)
    a, b = c.alpha, c.beta
    ac, bc = a.conjugate(), b.conjugate()
    unitaries = [
        np.array([[a, bc], [-b, ac]]),
        np.array([[a, -bc], [b, ac]]),
        np.array([[ac, b], [-bc, a]]),
        np.array([[ac, -b], [bc, a]]),
    ]
    return [(0.25, u) for u in unitaries]


def nu_to_affine(c: PauliDampingChannel, tol: Tolerances = DEFAULT) -> QubitChannelAffine:
    c.validate(tol)
    return QubitChannelAffine(np.array([0.0, 0.0, c.t]), np.diag([c.lambda1, c.lambda2, c.lambda3]))


def to_affine(ch: Channel | None, tol: Tolerances = DEFAULT) -> QubitChannelAffine:
    if ch is None:
        return IDENTITY
    if isinstance(ch, QubitChannelAffine):
        return ch
    if isinstance(ch, RandomUnitaryChannel):
        return ru_to_affine(ch, tol)
    if isinstance(ch, PauliDampingChannel):
        return nu_to_affine(ch, tol)
    raise TypeError(f"not a channel: {ch!r}")


def apply(chA: Channel | None, chB: Channel | None, s: BlochState,
          tol: Tolerances = DEFAULT) -> BlochState:
    """Act with ``chA`` on the first qubit and ``chB`` on the second (``None`` = identity)."""
    a, b, W = apply_arrays(to_affine(chA, tol), to_affine(chB, tol), s.a, s.b, s.W)
    return BlochState(a, b, W)


def apply_arrays(A: QubitChannelAffine, B: QubitChannelAffine, a: np.ndarray, b: np.ndarray,
                 W: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Affine two-sided action on raw arrays; ``a, b`` may be ``(..., 3)`` and ``W`` ``(..., 3, 3)``."""
    Ta = a @ A.T.T
    Tb = b @ B.T.T
    W2 = (A.T @ W @ B.T.T
          + A.t[:, None] * Tb[..., None, :]
          + Ta[..., :, None] * B.t[None, :]
          + np.outer(A.t, B.t))
    return A.t + Ta, B.t + Tb, W2


def choi_matrix(ch: Channel) -> np.ndarray:
    """``(N ⊗ id)(|φ+><φ+|)`` built from the affine data.

    Uses ``|φ+><φ+| = 1/4 sum_mu σ_mu ⊗ σ_mu^T``, ``N(I) = I + t·σ`` and
    ``N(σ_j) = sum_i T_ij σ_i``.
    """
    A = to_affine(ch)
    out = np.kron(I2 + sum(A.t[i] * PAULIS[i] for i in range(3)), I2)
    for j in range(3):
        image = sum(A.T[i, j] * PAULIS[i] for i in range(3))
        out = out + np.kron(image, PAULIS[j].T)
    return 0.25 * out


def is_completely_positive(ch: Channel, tol: Tolerances = DEFAULT) -> bool:
    return bool(np.linalg.eigvalsh(choi_matrix(ch))[0] >= -tol.psd)


def kraus_from_choi(ch: Channel, cutoff: float = 1e-14) -> list[np.ndarray]:
    """Kraus operators from the eigendecomposition of the Choi matrix."""
    vals, vecs = np.linalg.eigh(choi_matrix(ch))
    ops = []
    for lam, v in zip(vals, vecs.T):
        if lam > cutoff:
            ops.append(np.sqrt(2 * lam) * v.reshape(2, 2))
    return ops


def is_proper(z: complex, eps: float = DEFAULT.proper) -> bool:
    z = complex(z)
    return abs(z.real) > eps and abs(z.imag) > eps
