"""Command-line interface.

Exit codes: 0 success (whatever the verdict), 1 a verification suite failed,
2 invalid input, 3 no certified witness exists for the request.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .channels import PauliDampingChannel, QubitChannelAffine, RandomUnitaryChannel
from .config import DEFAULT, Tolerances, from_environment, parse_tolerances
from .criteria import (Status, depol_threshold_fnn, depol_threshold_linear, depol_threshold_star,
                       thm1_unital_linear, thm2_unital_preserving, thm3_nonunital_linear, thm4_unital_star,
                       thm5_unital_preserving_star, thm6_nonunital_star, thm7_nonunital_preserving_star,
                       thm8_unital_fnn, thm9_nonunital_fnn)
from .errors import CaseMismatch, NetNLError
from .literals import dumps, fmt_float, load_scenario, parse_channel
from .network import Topology, UsagePattern, apply_usage, bound_for

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID, EXIT_NO_WITNESS = 0, 1, 2, 3


class NoWitness(Exception):
    pass


def _pattern_numbers(args, n: int) -> tuple[int, int, int]:
    """Resolve (m1, m2, k) from --k and/or --m1/--m2."""
    m1, m2, k = args.m1, args.m2, args.k
    if m1 is not None or m2 is not None:
        m1, m2 = m1 or 0, m2 or 0
        if k is not None and k != m1 + 2 * m2:
            raise NetNLError(f"--k {k} does not equal m1 + 2*m2 = {m1 + 2 * m2}")
        return m1, m2, m1 + 2 * m2
    if k is None:
        raise NetNLError("give --k or --m1/--m2")
    u = UsagePattern.from_k(n, k)
    return u.m1, u.m2, k


def _default_n(args, topology: Topology) -> int:
    if topology is Topology.STAR_FNN3:
        if args.n not in (None, 3):
            raise NetNLError("the trilocal star (fnn3) has exactly n = 3 sources")
        return 3
    if args.n is not None:
        if args.n < 1:
            raise NetNLError("--n must be >= 1")
        return args.n
    # smallest chain that fits the requested uses, and never below two sources
    need = (args.m1 or 0) + (args.m2 or 0)
    if args.k is not None:
        need = max(need, -(-args.k // 2))
    return max(2, need)


def classify(args, tol: Tolerances) -> dict:
    ch = parse_channel(args.channel)
    topology = Topology.parse(args.topology)
    n = _default_n(args, topology)
    verdicts = []
    if isinstance(ch, RandomUnitaryChannel):
        m1, m2, k = _pattern_numbers(args, n)
        if topology is Topology.LINEAR:
            verdicts = [thm1_unital_linear(ch, k, tol), thm2_unital_preserving(ch, k, n, tol)]
        elif topology is Topology.STAR:
            verdicts = [thm4_unital_star(ch, k, n, tol), thm5_unital_preserving_star(ch, k, n, tol)]
        else:
            verdicts = [thm8_unital_fnn(ch, k, tol)]
    elif isinstance(ch, PauliDampingChannel):
        if topology is Topology.LINEAR:
            verdicts = [thm3_nonunital_linear(ch, tol)]
            m1 = m2 = k = None
            if args.k is not None or args.m1 is not None or args.m2 is not None:
                m1, m2, k = _pattern_numbers(args, n)
        else:
            m1, m2, k = _pattern_numbers(args, n)
            if topology is Topology.STAR:
                verdicts = [thm6_nonunital_star(ch, m1, m2, n, tol), thm7_nonunital_preserving_star(ch, m1, m2, n, tol)]
            else:
                verdicts = [thm9_nonunital_fnn(ch, m1, m2, tol)]
    else:
        raise NetNLError("no criterion covers this channel; use a depolarizing, dephasing, "
                         "random-unitary or pauli-damping literal")
    return {
        "channel": ch.to_dict(),
        "topology": topology.value,
        "n": n,
        "pattern": {"m1": m1, "m2": m2, "k": k},
        "verdicts": [v.to_dict() for v in verdicts],
    }


def threshold(args) -> tuple[float, str]:
    if args.family != "depolarizing":
        raise NetNLError(f"closed-form thresholds exist for the depolarizing family only, not {args.family!r}")
    if args.k is None:
        raise NetNLError("--k is required")
    topology = Topology.parse(args.topology)
    if topology is Topology.LINEAR:
        q = depol_threshold_linear(args.k)
    elif topology is Topology.STAR:
        if args.n is None:
            raise NetNLError("--n is required for the star threshold")
        q = depol_threshold_star(args.k, args.n)
    else:
        q = depol_threshold_fnn(args.k)
    note = "all q certified" if q < 0 else f"breaking certified for q >= {fmt_float(q)}"
    return q, note


def witness(args, tol: Tolerances) -> dict:
    ch = parse_channel(args.channel)
    topology = Topology.parse(args.topology)
    n = _default_n(args, topology)
    if isinstance(ch, RandomUnitaryChannel) and topology is not Topology.STAR_FNN3:
        m1, m2, k = _pattern_numbers(args, n)
        evaluate = thm2_unital_preserving if topology is Topology.LINEAR else thm5_unital_preserving_star
        try:
            v = evaluate(ch, k, n, tol)
        except CaseMismatch as exc:
            raise NoWitness(str(exc)) from None
    elif isinstance(ch, PauliDampingChannel) and topology is Topology.STAR:
        m1, m2, _ = _pattern_numbers(args, n)
        v = thm7_nonunital_preserving_star(ch, m1, m2, n, tol)
    else:
        raise NoWitness(f"no witness construction for this channel in the {topology.value} topology")
    if v.status is not Status.PRESERVING:
        raise NoWitness("; ".join(v.notes) or "criterion not met")
    return {"theorem": v.theorem, "channel": ch.to_dict(), "witness": v.witness}


def bound(args, tol: Tolerances) -> dict:
    scenario, ch, u = load_scenario(args.scenario)
    if ch is not None:
        scenario = apply_usage(ch, scenario, u, tol)
    rep = bound_for(scenario).to_dict()
    rep["topology"] = scenario.topology.value
    rep["n"] = scenario.n
    if u is not None:
        rep["pattern"] = u.to_dict()
    return rep


def sweep_cmd(args, tol: Tolerances, out) -> int:
    from .sweep import parse_fixed, parse_grid, sweep, write_csv

    grid = parse_grid(args.grid)
    fixed = parse_fixed(args.fixed or "")
    for name in ("n", "k", "m1", "m2"):
        value = getattr(args, name)
        if value is not None and name not in grid:
            fixed[name] = value
    rows = sweep(args.criterion, grid, fixed, tol)
    if args.format == "json":
        payload = [{**r.params, "valid": r.valid, "lhs": r.verdict.lhs if r.valid else None,
                    "rhs": r.verdict.rhs if r.valid else None, "margin": r.verdict.margin if r.valid else None,
                    "verdict": r.short} for r in rows]
        out.write(dumps({"criterion": args.criterion, "rows": payload}) + "\n")
        return len(payload)
    return write_csv(args.criterion, rows, grid, fixed, out)


def verify(args) -> dict:
    from .oracle.suites import run_suite
    return run_suite(args.suite, args.samples, args.seed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netnl", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"netnl {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", default=None, help="tolerance overrides, e.g. 'eq=1e-10,psd=1e-9'")
    common.add_argument("--config", default=None, help="JSON file whose keys mirror the flags")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)

    net = argparse.ArgumentParser(add_help=False)
    net.add_argument("--topology", default="linear", help="linear, star or fnn3")
    net.add_argument("--n", type=int, default=None, help="number of sources")
    net.add_argument("--k", type=int, default=None, help="number of channel uses")
    net.add_argument("--m1", type=int, default=None, help="sources with the channel on one qubit")
    net.add_argument("--m2", type=int, default=None, help="sources with the channel on both qubits")

    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", parents=[common, net], help="evaluate the applicable criteria")
    c.add_argument("--channel", required=False, default=None,
                   help="JSON literal or shorthand such as depolarizing:0.4")
    t = sub.add_parser("threshold", parents=[common, net], help="closed-form depolarizing threshold")
    t.add_argument("--family", default="depolarizing")
    s = sub.add_parser("sweep", parents=[common, net], help="criterion over a parameter grid")
    s.add_argument("--criterion", required=False, default=None, help="thm1 .. thm9")
    s.add_argument("--grid", required=False, default=None, help="e.g. 't=0:1:0.02,l1=0:1:0.02'")
    s.add_argument("--fixed", default=None, help="e.g. 'n=4,m1=2,m2=1'")
    w = sub.add_parser("witness", parents=[common, net], help="explicit input that keeps detection alive")
    w.add_argument("--channel", required=False, default=None)
    v = sub.add_parser("verify", parents=[common], help="run an oracle verification suite")
    v.add_argument("suite", nargs="?", default=None,
                   help="bloch-kraus, eig-formulas, bound-vs-correlators, soundness or conjecture1")
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--seed", type=int, default=None, help="required")
    b = sub.add_parser("bound", parents=[common], help="detection bound of a scenario file")
    b.add_argument("scenario", nargs="?", default=None, help="scenario JSON file")
    return p


def _apply_config(args) -> None:
    if not args.config:
        return
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise NetNLError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise NetNLError("config file must hold a JSON object")
    for key, value in cfg.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise NetNLError(f"unknown config key {key!r} for '{args.command}'")
        if getattr(args, key) is None or (key == "topology" and "--topology" not in sys.argv):
            if key == "channel" and isinstance(value, dict):
                value = json.dumps(value)
            setattr(args, key, value)


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise NetNLError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _emit(text: str, args) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        tol = from_environment()
        if args.tol:
            tol = parse_tolerances(args.tol, tol)
        cmd = args.command
        if cmd == "classify":
            _require(args, "channel")
            _emit(dumps(classify(args, tol)) + "\n", args)
        elif cmd == "threshold":
            q, note = threshold(args)
            if args.format == "json":
                _emit(dumps({"family": args.family, "topology": Topology.parse(args.topology).value,
                             "k": args.k, "n": args.n, "threshold": q, "note": note}) + "\n", args)
            else:
                _emit(f"{fmt_float(q)}\t{note}\n", args)
        elif cmd == "sweep":
            _require(args, "criterion", "grid")
            if args.out:
                with open(args.out, "w", newline="") as fh:
                    sweep_cmd(args, tol, fh)
            else:
                sweep_cmd(args, tol, sys.stdout)
        elif cmd == "witness":
            _require(args, "channel")
            try:
                _emit(dumps(witness(args, tol)) + "\n", args)
            except NoWitness as exc:
                print(f"netnl: no certified witness: {exc}", file=sys.stderr)
                return EXIT_NO_WITNESS
        elif cmd == "verify":
            _require(args, "suite", "seed")
            report = verify(args)
            _emit(dumps(report) + "\n", args)
            return EXIT_OK if report["pass"] else EXIT_VERIFY_FAILED
        elif cmd == "bound":
            _require(args, "scenario")
            _emit(dumps(bound(args, tol)) + "\n", args)
    except (NetNLError, ValueError) as exc:
        print(f"netnl: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
