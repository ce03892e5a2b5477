"""Network scenarios, k-use channel placement and closed-form detection bounds.

Each of the ``n`` sources emits a two-qubit state. A usage pattern says, per
source, whether the channel touches no qubit, one qubit (``A`` = first,
``B`` = second) or both. With ``m1`` one-sided and ``m2`` two-sided sources the
channel is used ``k = m1 + 2*m2`` times.

Detection bounds, with ``E_i1 >= E_i2`` the two largest singular values of
source ``i``'s correlation tensor:

* linear chain:  ``sqrt(prod E_i1 + prod E_i2)``, violated above 1;
* star:          ``sqrt((prod E_i1)^(2/n) + (prod E_i2)^(2/n))``, violated above 1;
* trilocal star, full network nonlocality: the star form with ``n = 3``,
  violated above ``2^(1/3)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bloch import BlochState, OrderedSingulars, ordered_singulars
from .channels import Channel, apply
from .config import DEFAULT, Tolerances
from .errors import PatternMismatch, TopologyError

UNDERFLOW = 1e-300
FNN_THRESHOLD = 2.0 ** (1.0 / 3.0)


class Topology(str, enum.Enum):
    LINEAR = "linear"
    STAR = "star"
    STAR_FNN3 = "star_fnn3"

    @classmethod
    def parse(cls, text: str) -> "Topology":
        key = text.strip().lower().replace("-", "_")
        aliases = {"fnn3": "star_fnn3", "fnn": "star_fnn3", "lin": "linear"}
        return cls(aliases.get(key, key))


class Placement(str, enum.Enum):
    NONE = "none"
    A = "A"
    B = "B"
    BOTH = "both"

    @classmethod
    def parse(cls, text: str) -> "Placement":
        key = text.strip()
        aliases = {"a": "A", "b": "B", "one_side": "A", "one_side(a)": "A",
                   "one_side(b)": "B", "both_sides": "both", "": "none"}
        return cls(aliases.get(key.lower(), key))


@dataclass(frozen=True)
class UsagePattern:
    n: int
    placement: tuple[Placement, ...]

    def __post_init__(self):
        placement = tuple(p if isinstance(p, Placement) else Placement.parse(p) for p in self.placement)
        object.__setattr__(self, "placement", placement)
        if self.n < 1:
            raise PatternMismatch(f"a network needs n >= 1 sources, got {self.n}")
        if len(placement) != self.n:
            raise PatternMismatch(f"pattern lists {len(placement)} placements for n = {self.n} sources")

    @classmethod
    def canonical(cls, n: int, m1: int, m2: int) -> "UsagePattern":
        """First ``m1`` sources one-sided (qubit A), next ``m2`` both, rest untouched."""
        if m1 < 0 or m2 < 0:
            raise PatternMismatch(f"m1, m2 must be non-negative, got ({m1}, {m2})")
        if m1 + m2 > n:
            raise PatternMismatch(f"(m1, m2) = ({m1}, {m2}) needs {m1 + m2} sources but n = {n}")
        return cls(n, (Placement.A,) * m1 + (Placement.BOTH,) * m2 + (Placement.NONE,) * (n - m1 - m2))

    @classmethod
    def from_k(cls, n: int, k: int) -> "UsagePattern":
        """Spread ``k`` uses over ``n`` sources, preferring one-sided placement."""
        if not 0 <= k <= 2 * n:
            raise PatternMismatch(f"k = {k} uses do not fit in n = {n} sources (k <= 2n)")
        m2 = max(0, k - n)
        return cls.canonical(n, k - 2 * m2, m2)

    @property
    def m1(self) -> int:
        return sum(p in (Placement.A, Placement.B) for p in self.placement)

    @property
    def m2(self) -> int:
        return sum(p is Placement.BOTH for p in self.placement)

    @property
    def k(self) -> int:
        return self.m1 + 2 * self.m2

    def to_dict(self) -> dict:
        return {"n": self.n, "m1": self.m1, "m2": self.m2, "k": self.k,
                "placement": [p.value for p in self.placement]}


@dataclass(frozen=True, eq=False)
class NetworkScenario:
    topology: Topology
    states: tuple[BlochState, ...]

    def __post_init__(self):
        topology = self.topology if isinstance(self.topology, Topology) else Topology.parse(self.topology)
        object.__setattr__(self, "topology", topology)
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise PatternMismatch("a scenario needs at least one source")
        if topology is Topology.STAR_FNN3 and len(self.states) != 3:
            raise TopologyError(f"the trilocal full-network test needs n = 3 sources, got {len(self.states)}")

    @property
    def n(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class BoundReport:
    bound: float
    threshold: float
    violated: bool
    per_source_singulars: tuple[OrderedSingulars, ...]
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "threshold": self.threshold,
            "violated": self.violated,
            "per_source_singulars": [list(s) for s in self.per_source_singulars],
            "notes": list(self.notes),
        }


def apply_usage(ch: Channel, scenario: NetworkScenario, u: UsagePattern,
                tol: Tolerances = DEFAULT) -> NetworkScenario:
    if u.n != scenario.n:
        raise PatternMismatch(f"pattern is for n = {u.n} sources, scenario has {scenario.n}")
    out = []
    for state, where in zip(scenario.states, u.placement):
        if where is Placement.NONE:
            out.append(state)
        elif where is Placement.A:
            out.append(apply(ch, None, state, tol))
        elif where is Placement.B:
            out.append(apply(None, ch, state, tol))
        else:
            out.append(apply(ch, ch, state, tol))
    return NetworkScenario(scenario.topology, tuple(out))


def _product(values: Sequence[float], notes: list[str], which: str) -> float:
    p = float(np.prod(values)) if len(values) else 1.0
    if 0.0 < p < UNDERFLOW or (p == 0.0 and all(v > 0 for v in values)):
        notes.append(f"product of {which} singular values underflowed below {UNDERFLOW:g}; reported as 0")
        p = 0.0
    return p


def linear_value(E1: np.ndarray, E2: np.ndarray) -> np.ndarray:
    """Linear-chain bound from per-source singulars, last axis = sources."""
    return np.sqrt(np.prod(E1, axis=-1) + np.prod(E2, axis=-1))


def star_value(E1: np.ndarray, E2: np.ndarray) -> np.ndarray:
    """Star bound from per-source singulars, last axis = sources."""
    n = E1.shape[-1]
    return np.sqrt(np.prod(E1, axis=-1) ** (2.0 / n) + np.prod(E2, axis=-1) ** (2.0 / n))


def _report(scenario: NetworkScenario, star: bool, threshold: float) -> BoundReport:
    sing = tuple(ordered_singulars(s.W) for s in scenario.states)
    notes: list[str] = []
    p1 = _product([s.E1 for s in sing], notes, "first")
    p2 = _product([s.E2 for s in sing], notes, "second")
    if star:
        n = scenario.n
        bound = float(np.sqrt(p1 ** (2.0 / n) + p2 ** (2.0 / n)))
    else:
        bound = float(np.sqrt(p1 + p2))
    return BoundReport(bound, threshold, bool(bound > threshold), sing, tuple(notes))


def bound_linear(scenario: NetworkScenario) -> BoundReport:
    if scenario.topology is not Topology.LINEAR:
        raise TopologyError(f"bound_linear needs a linear scenario, got {scenario.topology.value}")
    return _report(scenario, star=False, threshold=1.0)


def bound_star(scenario: NetworkScenario) -> BoundReport:
    if scenario.topology is not Topology.STAR:
        raise TopologyError(f"bound_star needs a star scenario, got {scenario.topology.value}")
    return _report(scenario, star=True, threshold=1.0)


def bound_fnn3(scenario: NetworkScenario) -> BoundReport:
    if scenario.topology is not Topology.STAR_FNN3 or scenario.n != 3:
        raise TopologyError("bound_fnn3 needs a star_fnn3 scenario with n = 3")
    return _report(scenario, star=True, threshold=FNN_THRESHOLD)


def bound_for(scenario: NetworkScenario) -> BoundReport:
    return {
        Topology.LINEAR: bound_linear,
        Topology.STAR: bound_star,
        Topology.STAR_FNN3: bound_fnn3,
    }[scenario.topology](scenario)


def threshold_for(topology: Topology) -> float:
    return FNN_THRESHOLD if topology is Topology.STAR_FNN3 else 1.0
