"""Density-operator (Kraus) route for channel action.

Independent of the affine formulas in :mod:`netnl.channels`: states are
evolved as 4x4 matrices with Kraus operators and only converted back to Bloch
form at the end.
"""
from __future__ import annotations

import numpy as np

from ..bloch import BlochState, DensityOperator, from_bloch, to_bloch
from ..channels import Channel, RandomUnitaryChannel, kraus_from_choi, ru_kraus
from ..config import DEFAULT, Tolerances
from ..network import NetworkScenario, Placement, UsagePattern

_ID_KRAUS = [np.eye(2, dtype=complex)]


def kraus_ops(ch: Channel | None) -> list[np.ndarray]:
    """Kraus operators with weights folded in, ``sum K^dagger K = I``."""
    if ch is None:
        return _ID_KRAUS
    if isinstance(ch, RandomUnitaryChannel):
        return [np.sqrt(w) * u for w, u in ru_kraus(ch)]
    return kraus_from_choi(ch)


def apply_two_qubit(chA: Channel | None, chB: Channel | None, rho: np.ndarray) -> np.ndarray:
    out = np.zeros((4, 4), dtype=complex)
    for ka in kraus_ops(chA):
        for kb in kraus_ops(chB):
            k = np.kron(ka, kb)
            out += k @ rho @ k.conj().T
    return out


def apply_state(chA: Channel | None, chB: Channel | None, s: BlochState,
                tol: Tolerances = DEFAULT) -> BlochState:
    rho = from_bloch(s, tol).matrix
    return to_bloch(DensityOperator(apply_two_qubit(chA, chB, rho), physical=False), tol)


def apply_usage_density(ch: Channel, scenario: NetworkScenario, u: UsagePattern,
                        tol: Tolerances = DEFAULT) -> NetworkScenario:
    sides = {
        Placement.NONE: (None, None),
        Placement.A: (ch, None),
        Placement.B: (None, ch),
        Placement.BOTH: (ch, ch),
    }
    states = [apply_state(*sides[p], s, tol) for s, p in zip(scenario.states, u.placement)]
    return NetworkScenario(scenario.topology, tuple(states))
