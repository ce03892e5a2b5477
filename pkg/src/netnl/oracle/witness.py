"""Explicit input scenarios showing that a channel does not break detection.

* Unital channels with improper parameters: every source emits |Φ->; after
  the channel the transformed tensors have singular values (1, s, s) (one
  side) or (1, s^2, s^2) (both sides), so the linear bound is
  ``sqrt(1 + s^k)`` and the star bound ``sqrt(1 + s^(2k/n))``.
* Pauli-damping channels in the star network: every source emits |Φ+>; the
  touched tensors become diag(l1, 0, l3) or diag(l1^2, 0, t^2 + l3^2).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bloch import phi_minus, phi_plus
from ..channels import PauliDampingChannel, RandomUnitaryChannel, is_proper
from ..config import DEFAULT, Tolerances
from ..errors import CaseMismatch, FormulaMismatch, InvalidChannel, PatternMismatch
from ..network import (NetworkScenario, Topology, UsagePattern, apply_usage, bound_for,
                       threshold_for)
from .density import apply_usage_density

# (zero components, description); components are Re a, Im a, Re b, Im b
IMPROPER_CASES = {
    1: (("ra", "rb"), "Re(alpha) = Re(beta) = 0"),
    2: (("ia", "ib"), "Im(alpha) = Im(beta) = 0"),
    3: (("ra", "ib"), "Re(alpha) = Im(beta) = 0"),
    4: (("ia", "rb"), "Im(alpha) = Re(beta) = 0"),
    5: (("ra", "ia"), "alpha = 0"),
    6: (("rb", "ib"), "beta = 0"),
}


def _components(c: RandomUnitaryChannel) -> dict[str, float]:
    return {"ra": c.alpha.real, "ia": c.alpha.imag, "rb": c.beta.real, "ib": c.beta.imag}


def matching_cases(c: RandomUnitaryChannel, eps: float = DEFAULT.proper) -> list[int]:
    comp = _components(c)
    return [cid for cid, (zeros, _) in IMPROPER_CASES.items() if all(abs(comp[z]) <= eps for z in zeros)]


def surviving_factor(c: RandomUnitaryChannel, case_id: int) -> float:
    """The contraction left on the two non-unit singular directions."""
    ra, ia, rb, ib = (v * v for v in _components(c).values())
    return {
        1: abs(ib - ia),
        2: abs(rb - ra),
        3: abs(rb - ia),
        4: abs(ra - ib),
        5: abs(rb - ib),
        6: abs(ra - ia),
    }[case_id]


def preserving_condition(c: RandomUnitaryChannel, eps: float = DEFAULT.proper) -> bool:
    """Both parameters improper, or one of them zero."""
    null = abs(c.alpha) <= eps or abs(c.beta) <= eps
    return null or (not is_proper(c.alpha, eps) and not is_proper(c.beta, eps))


@dataclass(frozen=True, eq=False)
class Witness:
    kind: str
    input_scenario: NetworkScenario
    input_labels: tuple[str, ...]
    pattern: UsagePattern
    output_scenario: NetworkScenario
    closed_form_bound: float
    simulated_bound: float
    density_bound: float | None
    threshold: float
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.simulated_bound - self.threshold

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "topology": self.input_scenario.topology.value,
            "input_states": list(self.input_labels),
            "pattern": self.pattern.to_dict(),
            "transformed_states": [s.to_dict() for s in self.output_scenario.states],
            "closed_form_bound": self.closed_form_bound,
            "simulated_bound": self.simulated_bound,
            "density_operator_bound": self.density_bound,
            "threshold": self.threshold,
            "details": self.details,
        }


def _resolve_pattern(n: int, k: int | None, pattern: UsagePattern | None) -> UsagePattern:
    if pattern is None:
        if k is None:
            raise PatternMismatch("need either k or an explicit usage pattern")
        return UsagePattern.from_k(n, k)
    if pattern.n != n or (k is not None and pattern.k != k):
        raise PatternMismatch(f"pattern {pattern.to_dict()} does not match n = {n}, k = {k}")
    return pattern


def witness_appB(c: RandomUnitaryChannel, n: int, k: int | None = None, case_id: int | None = None,
                 topology: Topology = Topology.LINEAR, pattern: UsagePattern | None = None,
                 tol: Tolerances = DEFAULT, density: bool = True) -> Witness:
    cases = matching_cases(c, tol.proper)
    if case_id is None:
        if not cases:
            raise CaseMismatch("channel parameters match none of the six improper cases")
        case_id = cases[0]
    if case_id not in IMPROPER_CASES:
        raise CaseMismatch(f"case id must be 1..6, got {case_id}")
    if case_id not in cases:
        raise CaseMismatch(f"channel does not satisfy case {case_id} ({IMPROPER_CASES[case_id][1]})")
    topology = Topology.parse(topology) if isinstance(topology, str) else topology
    u = _resolve_pattern(n, k, pattern)
    if u.k < 1:
        raise PatternMismatch("the channel must be used at least once (k >= 1)")
    s = surviving_factor(c, case_id)
    if topology is Topology.LINEAR:
        closed = float(np.sqrt(1.0 + s ** u.k))
    else:
        closed = float(np.sqrt(1.0 + s ** (2.0 * u.k / n)))
    scenario = NetworkScenario(topology, (phi_minus(),) * n)
    out = apply_usage(c, scenario, u, tol)
    dens = bound_for(apply_usage_density(c, scenario, u, tol)).bound if density else None
    return Witness(
        kind="improper-unital",
        input_scenario=scenario,
        input_labels=("bell-phi-",) * n,
        pattern=u,
        output_scenario=out,
        closed_form_bound=closed,
        simulated_bound=bound_for(out).bound,
        density_bound=dens,
        threshold=threshold_for(topology),
        details={"case": case_id, "case_condition": IMPROPER_CASES[case_id][1], "s": s},
    )


def appE_value(c: PauliDampingChannel, n: int, m1: int, m2: int) -> float:
    """Star bound of the |Φ+> witness as a closed form in (t, l1, l3)."""
    C1, C2 = c.lambda1**2, c.lambda3**2
    C3, C4 = c.lambda1**4, (c.t**2 + c.lambda3**2) ** 2
    return float(np.sqrt(max(C1, C2) ** (m1 / n) * max(C3, C4) ** (m2 / n)
                         + min(C1, C2) ** (m1 / n) * min(C3, C4) ** (m2 / n)))


def witness_appE(c: PauliDampingChannel, n: int, m1: int, m2: int,
                 tol: Tolerances = DEFAULT, density: bool = True) -> Witness:
    c.validate(tol)
    if c.lambda2 != 0.0:
        raise InvalidChannel("the |Φ+> witness is derived for l2 = 0")
    u = UsagePattern.canonical(n, m1, m2)
    if u.k < 1:
        raise PatternMismatch("the channel must be used at least once (k >= 1)")
    scenario = NetworkScenario(Topology.STAR, (phi_plus(),) * n)
    out = apply_usage(c, scenario, u, tol)
    one = np.diag([c.lambda1, 0.0, c.lambda3])
    two = np.diag([c.lambda1**2, 0.0, c.t**2 + c.lambda3**2])
    dev = 0.0
    for s, p in zip(out.states, u.placement):
        if p.value in ("A", "B"):
            dev = max(dev, np.max(np.abs(s.W - one)))
        elif p.value == "both":
            dev = max(dev, np.max(np.abs(s.W - two)))
    if dev > 1e-15:
        raise FormulaMismatch("transformed witness tensors differ from the closed forms", dev)
    dens = bound_for(apply_usage_density(c, scenario, u, tol)).bound if density else None
    return Witness(
        kind="pauli-damping-star",
        input_scenario=scenario,
        input_labels=("bell-phi+",) * n,
        pattern=u,
        output_scenario=out,
        closed_form_bound=appE_value(c, n, m1, m2),
        simulated_bound=bound_for(out).bound,
        density_bound=dens,
        threshold=1.0,
        details={"one_side_tensor": one.tolist(), "both_sides_tensor": two.tolist()},
    )
