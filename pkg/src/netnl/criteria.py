"""Sufficient conditions for a channel to break, or to preserve, detectable
network nonlocality, evaluated as tri-state verdicts.

Every criterion here is sufficient only. When a breaking condition fails the
answer is ``inconclusive``, never "preserving"; preserving verdicts always
carry an explicit witness scenario whose bound beats the threshold.

Criterion tags:

======  =========================  ========================================
tag     channel / network          certifies
======  =========================  ========================================
thm1    unital, linear chain       breaking for k uses
thm2    unital, linear chain       preserving for every k (improper params)
thm3    Pauli-damping, linear      breaking for every k and n
thm4    unital, star               breaking for k uses, n sources
thm5    unital, star               preserving (improper params)
thm6    Pauli-damping, star        breaking for pattern (m1, m2), n sources
thm7    Pauli-damping, star        preserving for pattern (m1, m2), n sources
thm8    unital, trilocal star FNN  breaking of full network nonlocality
thm9    Pauli-damping, FNN         breaking of full network nonlocality
======  =========================  ========================================
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import PauliDampingChannel, RandomUnitaryChannel, is_proper, s_factors
from .config import DEFAULT, Tolerances
from .errors import DomainError, InvalidChannel, PatternMismatch
from .network import Topology, UsagePattern
from .oracle.witness import (IMPROPER_CASES, appE_value, matching_cases, preserving_condition,
                             surviving_factor, witness_appB, witness_appE)


class Status(str, enum.Enum):
    BREAKING = "breaking_certified"
    PRESERVING = "preserving_certified"
    INCONCLUSIVE = "inconclusive"

    @property
    def short(self) -> str:
        return {"breaking_certified": "breaking", "preserving_certified": "preserving"}.get(
            self.value, "inconclusive")


@dataclass(frozen=True)
class Verdict:
    theorem: str
    status: Status
    lhs: float
    rhs: float
    margin: float
    witness: dict | None = None
    notes: tuple[str, ...] = ()
    terms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "theorem": self.theorem,
            "status": self.status.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        d["notes"] = list(self.notes)
        if self.terms:
            d["terms"] = self.terms
        return d


def _breaking(theorem: str, lhs: float, rhs: float, tol: Tolerances, notes=(), terms=None) -> Verdict:
    ok = lhs <= rhs + tol.eq
    return Verdict(theorem, Status.BREAKING if ok else Status.INCONCLUSIVE, lhs, rhs, rhs - lhs,
                   None, tuple(notes), terms or {})


# ---------------------------------------------------------------- unital

def three_equal(M, eps: float) -> bool:
    m = sorted(M)
    return m[2] - m[0] <= eps or m[3] - m[1] <= eps


def _unital_breaking(theorem: str, c: RandomUnitaryChannel, general_rhs: float,
                     equal_rhs: float, tol: Tolerances, notes: list[str]) -> Verdict:
    sf = s_factors(c, tol)
    lhs = sf.M_max - sf.M_min
    terms = {"M": list(sf.M), "M_max": sf.M_max, "M_min": sf.M_min,
             "s": [sf.s1, sf.s2, sf.s3]}
    if not (is_proper(c.alpha, tol.proper) and is_proper(c.beta, tol.proper)):
        notes.append("criterion needs both alpha and beta proper (nonzero real and imaginary parts)")
        if preserving_condition(c, tol.proper):
            notes.append("parameters fall under the improper-parameter preserving criterion instead")
        return Verdict(theorem, Status.INCONCLUSIVE, lhs, general_rhs, general_rhs - lhs,
                       None, tuple(notes), terms)
    if three_equal(sf.M, tol.eq):
        notes.append("three of Re(alpha)^2, Im(alpha)^2, Re(beta)^2, Im(beta)^2 coincide: sharper bound used")
        rhs = equal_rhs
    else:
        rhs = general_rhs
    return _breaking(theorem, lhs, rhs, tol, notes, terms)


def _check_k(k: int, hi: int | None = None) -> None:
    if k < 1 or (hi is not None and k > hi):
        raise DomainError(f"k must satisfy 1 <= k{' <= ' + str(hi) if hi else ''}, got {k}")


def thm1_unital_linear(c: RandomUnitaryChannel, k: int, tol: Tolerances = DEFAULT) -> Verdict:
    _check_k(k)
    return _unital_breaking("thm1", c, 2.0 ** -(1 + 1 / k), 2.0 ** (-1 / k), tol,
                            [f"linear chain, k = {k} uses"])


def thm4_unital_star(c: RandomUnitaryChannel, k: int, n: int, tol: Tolerances = DEFAULT) -> Verdict:
    _check_k(k)
    if n < 2:
        raise DomainError(f"star criterion needs n >= 2 sources, got {n}")
    if k > 2 * n:
        raise PatternMismatch(f"k = {k} uses do not fit in n = {n} sources")
    return _unital_breaking("thm4", c, 2.0 ** -(1 + n / (2 * k)), 2.0 ** (-n / (2 * k)), tol,
                            [f"star network, n = {n}, k = {k} uses"])


def thm8_unital_fnn(c: RandomUnitaryChannel, k: int, tol: Tolerances = DEFAULT) -> Verdict:
    _check_k(k, 6)
    return _unital_breaking("thm8", c, 2.0 ** (-(4 * k + 9) / (6 * k)), 2.0 ** (-(9 - 2 * k) / (6 * k)), tol,
                            [f"trilocal star, full network nonlocality, k = {k} uses"])


def _unital_preserving(theorem: str, c: RandomUnitaryChannel, k: int, n: int,
                       topology: Topology, tol: Tolerances, density: bool = True) -> Verdict:
    cases = matching_cases(c, tol.proper)
    if not preserving_condition(c, tol.proper) or not cases:
        notes = ["criterion needs both parameters improper or one of them zero"]
        if is_proper(c.alpha, tol.proper) != is_proper(c.beta, tol.proper):
            notes.append("exactly one parameter is proper and neither is zero: outside all six improper cases")
        return Verdict(theorem, Status.INCONCLUSIVE, float("nan"), 1.0, float("nan"), None, tuple(notes))
    w = witness_appB(c, n, k, cases[0], topology=topology, tol=tol, density=density)
    notes = [f"improper case {cases[0]}: {IMPROPER_CASES[cases[0]][1]}",
             f"witness: {n} |Φ-> sources, k = {k}"]
    bound = w.simulated_bound
    terms = {"s": surviving_factor(c, cases[0]), "closed_form_bound": w.closed_form_bound}
    if bound - 1.0 > tol.witness:
        return Verdict(theorem, Status.PRESERVING, bound, 1.0, bound - 1.0, w.to_dict(), tuple(notes), terms)
    notes.append("surviving contraction vanishes: the |Φ-> witness does not exceed the threshold")
    return Verdict(theorem, Status.INCONCLUSIVE, bound, 1.0, bound - 1.0, None, tuple(notes), terms)


def thm2_unital_preserving(c: RandomUnitaryChannel, k: int = 1, n: int | None = None,
                           tol: Tolerances = DEFAULT, density: bool = True) -> Verdict:
    """Preserving verdict for the linear chain; the witness is built for (n, k).

    ``density=False`` skips the Kraus-path recomputation of the witness bound.
    """
    _check_k(k)
    n = n if n is not None else k
    return _unital_preserving("thm2", c, k, n, Topology.LINEAR, tol, density)


def thm5_unital_preserving_star(c: RandomUnitaryChannel, k: int = 1, n: int | None = None,
                                tol: Tolerances = DEFAULT, density: bool = True) -> Verdict:
    _check_k(k)
    n = n if n is not None else max(2, (k + 1) // 2)
    return _unital_preserving("thm5", c, k, n, Topology.STAR, tol, density)


def _one_minus_pow2(x: float) -> float:
    """``1 - 2^x`` without the cancellation of the direct subtraction."""
    return -math.expm1(x * math.log(2.0))


def depol_threshold_linear(k: int) -> float:
    _check_k(k)
    return _one_minus_pow2(-1.0 / k)


def depol_threshold_star(k: int, n: int) -> float:
    _check_k(k)
    if n < 2:
        raise DomainError(f"star threshold needs n >= 2, got {n}")
    return _one_minus_pow2(-n / (2.0 * k))


def depol_threshold_fnn(k: int) -> float:
    _check_k(k, 6)
    return _one_minus_pow2((2.0 * k - 9.0) / (6.0 * k))


# ---------------------------------------------------------------- Pauli damping

def damping_terms(c: PauliDampingChannel) -> tuple[float, float]:
    """``((|t|+|l3|)^2 + l1^2, 2 t^2 l1^2 + l1^4 + (|t|+|l3|)^4)``."""
    u = abs(c.t) + abs(c.lambda3)
    l1sq = c.lambda1**2
    return u * u + l1sq, 2 * c.t**2 * l1sq + l1sq**2 + u**4


def _check_damping(c: PauliDampingChannel, tol: Tolerances) -> None:
    c.validate(tol)
    if c.lambda2 != 0.0:
        raise InvalidChannel("the criteria are derived for l2 = 0")


def _check_pattern(m1: int, m2: int, n: int) -> None:
    if m1 < 0 or m2 < 0:
        raise PatternMismatch(f"m1, m2 must be non-negative, got ({m1}, {m2})")
    if m1 + 2 * m2 < 1:
        raise PatternMismatch("k = m1 + 2 m2 = 0: the channel is never used")
    if m1 + m2 > n:
        raise PatternMismatch(f"(m1, m2) = ({m1}, {m2}) needs {m1 + m2} sources but n = {n}")


def thm3_nonunital_linear(c: PauliDampingChannel, tol: Tolerances = DEFAULT) -> Verdict:
    _check_damping(c, tol)
    c1, c2 = damping_terms(c)
    notes = ["verdict holds for every k and every chain length n"]
    return _breaking("thm3", max(c1, c2), 1.0, tol, notes, {"lhs1": c1, "lhs2": c2})


def thm6_nonunital_star(c: PauliDampingChannel, m1: int, m2: int, n: int,
                        tol: Tolerances = DEFAULT) -> Verdict:
    _check_damping(c, tol)
    _check_pattern(m1, m2, n)
    c1, c2 = damping_terms(c)
    lhs = c2**m2 * c1**m1
    rhs = 2.0 ** ((2 - n) * (m1 + m2) / 2)
    terms = {"lhs1": c1, "lhs2": c2}
    notes = [f"star network, n = {n}, (m1, m2) = ({m1}, {m2}), k = {m1 + 2 * m2}"]
    if m2 == 0 or m1 == 0:
        reduced = c1 if m2 == 0 else c2
        terms.update(reduced_lhs=reduced, reduced_rhs=2.0 ** ((2 - n) / 2))
        notes.append(f"{'one' if m2 == 0 else 'two'}-sided pattern: criterion reduces to "
                     f"{'lhs1' if m2 == 0 else 'lhs2'} <= 2^((2-n)/2), independent of "
                     f"{'m1' if m2 == 0 else 'm2'}")
    return _breaking("thm6", lhs, rhs, tol, notes, terms)


def thm7_terms(c: PauliDampingChannel) -> dict:
    l1sq, l3sq = c.lambda1**2, c.lambda3**2
    both = (c.t**2 + l3sq) ** 2
    return {"Y1": max(l1sq, l3sq), "Y2": min(l1sq, l3sq),
            "Y3": max(l1sq**2, both), "Y4": min(l1sq**2, both)}


def thm7_nonunital_preserving_star(c: PauliDampingChannel, m1: int, m2: int, n: int,
                                   tol: Tolerances = DEFAULT, density: bool = True) -> Verdict:
    _check_damping(c, tol)
    _check_pattern(m1, m2, n)
    Y = thm7_terms(c)
    value = math.sqrt(Y["Y1"] ** (m1 / n) * Y["Y3"] ** (m2 / n) + Y["Y2"] ** (m1 / n) * Y["Y4"] ** (m2 / n))
    notes = [f"star network, n = {n}, (m1, m2) = ({m1}, {m2}); witness: {n} |Φ+> sources"]
    if value - 1.0 > tol.witness:
        w = witness_appE(c, n, m1, m2, tol, density=density)
        return Verdict("thm7", Status.PRESERVING, value, 1.0, value - 1.0, w.to_dict(), tuple(notes), Y)
    return Verdict("thm7", Status.INCONCLUSIVE, value, 1.0, value - 1.0, None, tuple(notes), Y)


def thm9_nonunital_fnn(c: PauliDampingChannel, m1: int, m2: int, tol: Tolerances = DEFAULT) -> Verdict:
    _check_damping(c, tol)
    _check_pattern(m1, m2, 3)
    c1, c2 = damping_terms(c)
    lhs = c2**m2 * c1**m1
    rhs = 2.0 ** ((2 - 3 * (m1 + m2)) / 6)
    notes = [f"trilocal star, full network nonlocality, (m1, m2) = ({m1}, {m2})"]
    return _breaking("thm9", lhs, rhs, tol, notes, {"lhs1": c1, "lhs2": c2})


# ---------------------------------------------------------------- conjecture scan

@dataclass(frozen=True)
class ConjectureScanConfig:
    samples: int = 100_000
    seed: int = 0
    grid_step: float | None = 0.01
    batch_size: int = 20_000


def _violations(t: np.ndarray, l1: np.ndarray, l3: np.ndarray, tol: Tolerances):
    """Mask of valid channels, and the conjecture margin ``1 - max(lhs1, lhs2)``."""
    at, al1, al3 = np.abs(t), np.abs(l1), np.abs(l3)
    valid = (al1 <= 1 + tol.eq) & (al3 + at <= 1 + tol.eq) & (l1**2 + t**2 <= (1 - al3) ** 2 + tol.eq)
    u = at + al3
    c1 = u * u + l1**2
    c2 = 2 * t**2 * l1**2 + l1**4 + u**4
    margin = 1.0 - np.maximum(c1, c2)
    return valid, margin


def _scan_batch(seed_seq: np.random.SeedSequence, size: int, limit: int, tol: Tolerances):
    rng = np.random.default_rng(seed_seq)
    pts = rng.uniform(-1.0, 1.0, size=(size, 3))
    valid, margin = _violations(pts[:, 0], pts[:, 1], pts[:, 2], tol)
    m = margin[valid][:limit]
    bad = int(np.count_nonzero(m < -tol.eq))
    return int(m.size), bad, float(m.min()) if m.size else math.inf


def conjecture1_scan(cfg: ConjectureScanConfig = ConjectureScanConfig(),
                     tol: Tolerances = DEFAULT) -> dict:
    """Search the valid Pauli-damping region for channels failing the thm3 condition.

    Random points are drawn uniformly from [-1, 1]^3 and kept when valid
    (rejection sampling), until ``samples`` valid channels were examined.
    Batches use seeds spawned from ``seed`` so the report does not depend on
    batch scheduling.
    """
    if cfg.samples < 1:
        raise DomainError("sample count must be >= 1")
    grid_points = grid_valid = grid_bad = 0
    grid_min = math.inf
    if cfg.grid_step:
        axis = np.linspace(-1.0, 1.0, int(round(2.0 / cfg.grid_step)) + 1)
        for t in axis:
            l1, l3 = np.meshgrid(axis, axis, indexing="ij")
            valid, margin = _violations(np.full(l1.shape, t), l1, l3, tol)
            m = margin[valid]
            grid_points += l1.size
            grid_valid += int(valid.sum())
            grid_bad += int(np.count_nonzero(m < -tol.eq))
            if m.size:
                grid_min = min(grid_min, float(m.min()))
    root = np.random.SeedSequence(cfg.seed)
    examined = bad = drawn = 0
    rand_min = math.inf
    while examined < cfg.samples:
        (child,) = root.spawn(1)
        nvalid, nbad, mmin = _scan_batch(child, cfg.batch_size, cfg.samples - examined, tol)
        drawn += cfg.batch_size
        examined += nvalid
        bad += nbad
        rand_min = min(rand_min, mmin)
    return {
        "check": "conjecture1",
        "samples": examined,
        "drawn": drawn,
        "grid_step": cfg.grid_step,
        "grid_points": grid_points,
        "grid_valid": grid_valid,
        "counterexamples": bad + grid_bad,
        "grid_counterexamples": grid_bad,
        "random_counterexamples": bad,
        "min_margin": min(grid_min, rand_min),
        "max_deviation": max(0.0, -min(grid_min, rand_min)),
        "pass": bad + grid_bad == 0,
        "seed": cfg.seed,
    }
