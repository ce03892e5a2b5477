"""Verification suites. Each returns a JSON-ready report with at least
``{check, samples, max_deviation, pass, seed}``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bloch import BlochState, ordered_singulars
from ..channels import (Channel, PauliDampingChannel, apply, dephasing,
                        depolarizing)
from ..config import DEFAULT, Tolerances
from ..criteria import (ConjectureScanConfig, Status, conjecture1_scan, thm1_unital_linear,
                        thm3_nonunital_linear, thm4_unital_star, thm6_nonunital_star)
from ..errors import FormulaMismatch
from ..network import NetworkScenario, Topology, UsagePattern, bound_linear
from .correlators import (MeasurementSetting, OptimizerConfig, max_inequality_over_settings,
                          simulate_linear_correlators)
from .density import apply_state
from .sampling import (bloch_arrays, haar_kets, ket_density, random_pauli_damping,
                       random_ru_channel, random_states, structured_kets, wishart_mixed)
from .search import SearchConfig, max_bound_over_states

SUITES = ("bloch-kraus", "eig-formulas", "bound-vs-correlators", "soundness", "conjecture1")


# ---------------------------------------------------------------- channel paths

def bloch_kraus_crosscheck(ch: Channel, samples: int = 500, seed: int = 0,
                           tol: Tolerances = DEFAULT) -> dict:
    """Affine path vs Kraus path on random states, for A-side, B-side and both sides."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for s in random_states(rng, samples):
        for sides in ((ch, None), (None, ch), (ch, ch)):
            x = apply(*sides, s, tol)
            y = apply_state(*sides, s, tol)
            dev = max(np.max(np.abs(x.a - y.a)), np.max(np.abs(x.b - y.b)), np.max(np.abs(x.W - y.W)))
            worst = max(worst, float(dev))
    return {"check": "bloch-kraus", "samples": samples, "max_deviation": worst,
            "pass": worst <= 1e-12, "seed": seed}


def _family_channel(family: str, rng: np.random.Generator) -> Channel:
    if family == "depolarizing":
        return depolarizing(float(rng.uniform()))
    if family == "dephasing":
        return dephasing(float(rng.uniform()))
    if family == "random-unitary":
        return random_ru_channel(rng)
    return random_pauli_damping(rng)


def suite_bloch_kraus(samples: int = 1000, seed: int = 0) -> dict:
    """Per family: ``samples`` random (channel, state) pairs."""
    families = {}
    root = np.random.SeedSequence(seed)
    for family, child in zip(("depolarizing", "dephasing", "random-unitary", "pauli-damping"), root.spawn(4)):
        rng = np.random.default_rng(child)
        worst = 0.0
        for _ in range(samples):
            ch = _family_channel(family, rng)
            rep = bloch_kraus_crosscheck(ch, 1, int(rng.integers(2**32)))
            worst = max(worst, rep["max_deviation"])
        families[family] = worst
    worst = max(families.values())
    return {"check": "bloch-kraus", "samples": samples, "max_deviation": worst,
            "pass": worst <= 1e-12, "seed": seed, "families": families}


# ---------------------------------------------------------------- eigenvalue closed forms

def diagonal_frame(s: BlochState) -> BlochState:
    """Rotate both local frames (proper rotations) so the correlation tensor is diagonal."""
    U, S, Vt = np.linalg.svd(s.W)
    V = Vt.T
    d = S.copy()
    if np.linalg.det(U) < 0:
        U[:, 2] *= -1
        d[2] *= -1
    if np.linalg.det(V) < 0:
        V[:, 2] *= -1
        d[2] *= -1
    return BlochState(U.T @ s.a, V.T @ s.b, np.diag(d))


def eig_closed_forms(c: PauliDampingChannel, s: BlochState, sides: str) -> dict:
    """Closed-form ``f`` terms for a state with diagonal ``W``.

    The returned ``E`` pair is ``(f_odd ± sqrt(f_even)) / 2``: the two nonzero
    eigenvalues of ``W' W'^T``, i.e. squared singular values of ``W'``.
    """
    t, l1, l3 = c.t, c.lambda1, c.lambda3
    a, b = s.a, s.b
    w1, w3 = s.W[0, 0], s.W[2, 2]
    if sides == "one":
        f_sum = t**2 * (b @ b) + (l1 * w1) ** 2 + (l3 * w3) ** 2 + 2 * t * b[2] * w3 * l3
        f_disc = f_sum**2 - 4 * ((b[1] * w1 * t * l1) ** 2 + (w1 * l1) ** 2 * (b[2] * t + w3 * l3) ** 2)
        cap = (abs(t) + abs(l3)) ** 2 + l1**2
    elif sides == "both":
        S = t**2 + t * l3 * (b[2] + a[2]) + l3**2 * w3
        f_sum = (b[0] ** 2 + a[0] ** 2) * t**2 * l1**2 + w1**2 * l1**4 + S**2
        f_disc = f_sum**2 - 4 * l1**4 * (S * w1 - a[0] * b[0] * t**2) ** 2
        cap = 2 * t**2 * l1**2 + l1**4 + (abs(t) + abs(l3)) ** 4
    else:
        raise ValueError(f"sides must be 'one' or 'both', got {sides!r}")
    root = math.sqrt(max(f_disc, 0.0))
    return {"f_sum": f_sum, "f_disc": f_disc, "cap": cap, "E": ((f_sum + root) / 2, (f_sum - root) / 2)}


def eig_formula_check(c: PauliDampingChannel, s: BlochState, sides: str = "one",
                      tol: Tolerances = DEFAULT, atol: float = 1e-10) -> dict:
    c.validate(tol)
    s = diagonal_frame(s)
    forms = eig_closed_forms(c, s, sides)
    out = apply(c, None, s, tol) if sides == "one" else apply(c, c, s, tol)
    sv = ordered_singulars(out.W)
    E1, E2 = forms["E"]
    devs = {
        "E1": abs(E1 - sv.E1**2),
        "E2": abs(E2 - sv.E2**2),
        "E3": sv.E3,
        "sum": abs(forms["f_sum"] - (sv.E1**2 + sv.E2**2)),
        # the two inequalities only count when violated
        "sqrt_disc_le_sum": max(0.0, math.sqrt(max(forms["f_disc"], 0.0)) - forms["f_sum"]),
        "negative_disc": max(0.0, -forms["f_disc"]),
        "sum_le_cap": max(0.0, forms["f_sum"] - forms["cap"]),
    }
    devs = {k: float(v) for k, v in devs.items()}
    worst = max(devs.values())
    if worst > atol:
        raise FormulaMismatch(f"closed-form eigenvalues disagree ({max(devs, key=devs.get)})", worst)
    return {"check": "eig-formula", "sides": sides, "max_deviation": worst, "deviations": devs,
            "closed_form": forms, "singulars": list(sv)}


def suite_eig_formulas(samples: int = 1000, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = 0
    for i in range(samples):
        c = random_pauli_damping(rng)
        (s,) = random_states(rng, 1) if i % 2 else _one_mixed(rng)
        for sides in ("one", "both"):
            try:
                rep = eig_formula_check(c, s, sides)
                worst = max(worst, rep["max_deviation"])
            except FormulaMismatch as exc:
                failures += 1
                worst = max(worst, exc.max_deviation)
    return {"check": "eig-formulas", "samples": samples, "max_deviation": worst,
            "pass": failures == 0, "seed": seed, "failures": failures}


def _one_mixed(rng):
    a, b, W = bloch_arrays(wishart_mixed(rng, 1))
    return [BlochState(a[0], b[0], W[0])]


# ---------------------------------------------------------------- correlators

def suite_bound_vs_correlators(samples: int = 1000, seed: int = 0, ns=(2, 3)) -> dict:
    """Random settings never beat the closed-form bound; the optimizer reaches it for Bell inputs."""
    rng = np.random.default_rng(seed)
    worst_excess = -math.inf
    per_n = {}
    for n in ns:
        excess = -math.inf
        for _ in range(samples):
            states = _random_sources(rng, n)
            sc = NetworkScenario(Topology.LINEAR, states)
            ms = MeasurementSetting.from_angles(rng.uniform(0, 2 * math.pi, size=8))
            I, J = simulate_linear_correlators(sc, ms)
            excess = max(excess, math.sqrt(abs(I)) + math.sqrt(abs(J)) - bound_linear(sc).bound)
        bell = NetworkScenario(Topology.LINEAR, _bell_sources(rng, n))
        best, _ = max_inequality_over_settings(bell, OptimizerConfig(seed=seed))
        gap = bound_linear(bell).bound - best
        per_n[n] = {"max_excess": excess, "bell_gap": gap}
        worst_excess = max(worst_excess, excess)
    ok = all(v["max_excess"] <= 1e-6 and v["bell_gap"] <= 1e-3 for v in per_n.values())
    dev = max(max(0.0, worst_excess), max(v["bell_gap"] for v in per_n.values()))
    return {"check": "bound-vs-correlators", "samples": samples, "max_deviation": dev,
            "pass": ok, "seed": seed, "per_n": {str(k): v for k, v in per_n.items()}}


def _random_sources(rng, n):
    kind = rng.integers(3)
    if kind == 0:
        rho = ket_density(haar_kets(rng, n))
    elif kind == 1:
        rho = wishart_mixed(rng, n)
    else:
        rho = ket_density(structured_kets(rng, n))
    a, b, W = bloch_arrays(rho)
    return tuple(BlochState(a[j], b[j], W[j]) for j in range(n))


def _bell_sources(rng, n):
    a, b, W = bloch_arrays(ket_density(structured_kets(rng, n, rotate=False)))
    return tuple(BlochState(a[j], b[j], W[j]) for j in range(n))


# ---------------------------------------------------------------- soundness

@dataclass(frozen=True)
class SoundnessConfig:
    channels: int = 200
    scenarios: int = 10_000
    seed: int = 0
    theorems: tuple[str, ...] = ("thm1", "thm3", "thm4", "thm6")
    max_draws: int = 100_000


def _certified_case(theorem: str, rng: np.random.Generator):
    """Draw one random (channel, pattern, topology) the theorem certifies, or ``None``."""
    if theorem in ("thm1", "thm4"):
        c = random_ru_channel(rng)
        if theorem == "thm1":
            n = int(rng.integers(1, 4))
            k = int(rng.integers(1, 2 * n + 1))
            v = thm1_unital_linear(c, k)
            topo = Topology.LINEAR
        else:
            n = int(rng.integers(2, 6))
            k = int(rng.integers(1, 2 * n + 1))
            v = thm4_unital_star(c, k, n)
            topo = Topology.STAR
        u = UsagePattern.from_k(n, k)
    else:
        c = random_pauli_damping(rng)
        if theorem == "thm3":
            n = int(rng.integers(1, 4))
            m2 = int(rng.integers(0, n + 1))
            m1 = int(rng.integers(0, n - m2 + 1))
            if m1 + m2 == 0:
                m1 = 1
            v = thm3_nonunital_linear(c)
            topo = Topology.LINEAR
        else:
            n = int(rng.integers(2, 6))
            m2 = int(rng.integers(0, n + 1))
            m1 = int(rng.integers(0, n - m2 + 1))
            if m1 + m2 == 0:
                m1 = 1
            v = thm6_nonunital_star(c, m1, m2, n)
            topo = Topology.STAR
        u = UsagePattern.canonical(n, m1, m2)
    if v.status is not Status.BREAKING:
        return None
    return c, u, topo, v


def soundness_sweep(cfg: SoundnessConfig = SoundnessConfig()) -> dict:
    """For ``cfg.channels`` certified cases, split evenly over the theorems, search for a violating input."""
    per = {t: [] for t in cfg.theorems}
    root = np.random.SeedSequence(cfg.seed)
    quota = [cfg.channels // len(cfg.theorems) + (i < cfg.channels % len(cfg.theorems))
             for i in range(len(cfg.theorems))]
    for theorem, want, child in zip(cfg.theorems, quota, root.spawn(len(cfg.theorems))):
        rng = np.random.default_rng(child)
        draws = 0
        while len(per[theorem]) < want and draws < cfg.max_draws:
            draws += 1
            case = _certified_case(theorem, rng)
            if case is None:
                continue
            c, u, topo, v = case
            res = max_bound_over_states(c, u, topo, cfg=SearchConfig(scenarios=cfg.scenarios,
                                                                      seed=int(rng.integers(2**32))))
            per[theorem].append({
                "channel": c.to_dict(),
                "pattern": u.to_dict(),
                "topology": topo.value,
                "lhs": v.lhs,
                "rhs": v.rhs,
                "sup_bound": res.sup_bound,
                "threshold": res.threshold,
                "excess": res.sup_bound - res.threshold,
            })
    summary = {}
    worst = -math.inf
    for theorem, rows in per.items():
        bad = [r for r in rows if r["excess"] > 1e-9]
        ex = max((r["excess"] for r in rows), default=-math.inf)
        worst = max(worst, ex)
        summary[theorem] = {"channels": len(rows), "violations": len(bad), "max_excess": ex,
                            "first_violation": bad[0] if bad else None}
    total = sum(len(r) for r in per.values())
    ok = all(s["violations"] == 0 for s in summary.values()) and total == cfg.channels
    return {"check": "soundness", "samples": total, "scenarios_per_channel": cfg.scenarios,
            "max_deviation": max(0.0, worst), "pass": ok, "seed": cfg.seed, "theorems": summary}


def run_suite(name: str, samples: int | None = None, seed: int = 0) -> dict:
    if name == "bloch-kraus":
        return suite_bloch_kraus(samples or 1000, seed)
    if name == "eig-formulas":
        return suite_eig_formulas(samples or 1000, seed)
    if name == "bound-vs-correlators":
        return suite_bound_vs_correlators(samples or 1000, seed)
    if name == "soundness":
        return soundness_sweep(SoundnessConfig(channels=samples or 200, seed=seed))
    if name == "conjecture1":
        return conjecture1_scan(ConjectureScanConfig(samples=samples or 100_000, seed=seed))
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
