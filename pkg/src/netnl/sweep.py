"""Parameter-grid sweeps of a criterion into CSV rows.

A grid spec is a comma-separated list of ``axis=start:stop:step`` items (both
ends included), e.g. ``t=0:1:0.02,l1=0:1:0.02``. Fixed parameters use
``name=value``. Rows come out in grid (row-major) order.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .channels import PauliDampingChannel, dephasing, depolarizing
from .config import DEFAULT, Tolerances
from .criteria import (Status, Verdict, thm1_unital_linear, thm2_unital_preserving, thm3_nonunital_linear,
                       thm4_unital_star, thm5_unital_preserving_star, thm6_nonunital_star,
                       thm7_nonunital_preserving_star, thm8_unital_fnn, thm9_nonunital_fnn)
from .errors import DomainError, NetNLError
from .literals import fmt_float

AXES = ("q", "p", "t", "l1", "l3", "k", "n", "m1", "m2")
INTEGER_AXES = {"k", "n", "m1", "m2"}
CRITERIA = ("thm1", "thm2", "thm3", "thm4", "thm5", "thm6", "thm7", "thm8", "thm9")
UNITAL = {"thm1", "thm2", "thm4", "thm5", "thm8"}
COLUMNS_TAIL = ("valid", "lhs", "rhs", "margin", "verdict")


class GridError(NetNLError):
    """Malformed grid or fixed-parameter specification."""


def _axis_values(name: str, spec: str) -> list[float]:
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise GridError(f"axis {name!r}: expected start:stop:step, got {spec!r}") from None
    if not step > 0:
        raise GridError(f"axis {name!r}: step must be > 0")
    if stop < start:
        raise GridError(f"axis {name!r}: stop < start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def parse_grid(text: str) -> dict[str, list[float]]:
    axes: dict[str, list[float]] = {}
    for item in filter(None, (x.strip() for x in text.split(","))):
        name, eq, spec = item.partition("=")
        name = name.strip()
        if not eq:
            raise GridError(f"grid item {item!r} is not axis=start:stop:step")
        if name not in AXES:
            raise GridError(f"unknown axis {name!r}; choose from {', '.join(AXES)}")
        if name in axes:
            raise GridError(f"axis {name!r} given twice")
        axes[name] = _axis_values(name, spec)
    if not axes:
        raise GridError("empty grid")
    return axes


@dataclass(frozen=True)
class SweepRow:
    params: dict
    valid: bool
    verdict: Verdict | None

    @property
    def short(self) -> str:
        return self.verdict.status.short if self.verdict else "inconclusive"


def _int(params: dict, name: str, default: int | None = None) -> int:
    v = params.get(name, default)
    if v is None:
        raise GridError(f"parameter {name!r} is required")
    if float(v) != int(v):
        raise GridError(f"parameter {name!r} must be an integer, got {v}")
    return int(v)


def _evaluator(criterion: str) -> Callable[[dict, Tolerances], Verdict]:
    def unital_channel(p):
        if ("q" in p) == ("p" in p):
            raise GridError("unital criteria need exactly one of q (depolarizing) or p (dephasing)")
        return depolarizing(p["q"]) if "q" in p else dephasing(p["p"])

    def damping(p):
        try:
            return PauliDampingChannel(p["t"], p["l1"], p["l3"])
        except KeyError as exc:
            raise GridError(f"Pauli-damping criteria need t, l1 and l3; missing {exc}") from None

    table = {
        "thm1": lambda p, tol: thm1_unital_linear(unital_channel(p), _int(p, "k"), tol),
        "thm2": lambda p, tol: thm2_unital_preserving(unital_channel(p), _int(p, "k", 1),
                                                      _int(p, "n", None) if "n" in p else None, tol, density=False),
        "thm3": lambda p, tol: thm3_nonunital_linear(damping(p), tol),
        "thm4": lambda p, tol: thm4_unital_star(unital_channel(p), _int(p, "k"), _int(p, "n"), tol),
        "thm5": lambda p, tol: thm5_unital_preserving_star(unital_channel(p), _int(p, "k", 1),
                                                           _int(p, "n", None) if "n" in p else None, tol,
                                                           density=False),
        "thm6": lambda p, tol: thm6_nonunital_star(damping(p), _int(p, "m1"), _int(p, "m2"), _int(p, "n"), tol),
        "thm7": lambda p, tol: thm7_nonunital_preserving_star(damping(p), _int(p, "m1"), _int(p, "m2"),
                                                              _int(p, "n"), tol, density=False),
        "thm8": lambda p, tol: thm8_unital_fnn(unital_channel(p), _int(p, "k"), tol),
        "thm9": lambda p, tol: thm9_nonunital_fnn(damping(p), _int(p, "m1"), _int(p, "m2"), tol),
    }
    if criterion not in table:
        raise GridError(f"unknown criterion {criterion!r}; choose from {', '.join(CRITERIA)}")
    return table[criterion]


def sweep(criterion: str, grid: dict[str, list[float]], fixed: dict[str, float] | None = None,
          tol: Tolerances = DEFAULT) -> Iterator[SweepRow]:
    fixed = dict(fixed or {})
    overlap = set(fixed) & set(grid)
    if overlap:
        raise GridError(f"parameters both fixed and swept: {sorted(overlap)}")
    for name in fixed:
        if name not in AXES:
            raise GridError(f"unknown parameter {name!r}")
    evaluate = _evaluator(criterion)
    names = list(grid)
    for combo in itertools.product(*(grid[a] for a in names)):
        params = {**fixed, **dict(zip(names, combo))}
        try:
            v = evaluate(params, tol)
        except (DomainError, ValueError) as exc:
            if isinstance(exc, GridError):
                raise
            # points outside a channel's validity region (or the q/p range)
            yield SweepRow(params, False, None)
            continue
        yield SweepRow(params, True, v)


def columns(grid: dict, fixed: dict | None) -> list[str]:
    present = set(grid) | set(fixed or {})
    return ["criterion", *[a for a in AXES if a in present], *COLUMNS_TAIL]


def _cell(name: str, v) -> str:
    if name in INTEGER_AXES:
        return str(int(v))
    return fmt_float(float(v))


def write_csv(criterion: str, rows, grid: dict, fixed: dict | None, out) -> int:
    cols = columns(grid, fixed)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    count = 0
    for row in rows:
        vals = [criterion]
        for c in cols[1:-len(COLUMNS_TAIL)]:
            vals.append(_cell(c, row.params[c]))
        if row.valid:
            v = row.verdict
            vals += ["1", fmt_float(v.lhs), fmt_float(v.rhs), fmt_float(v.margin), row.short]
        else:
            vals += ["0", "", "", "", "inconclusive"]
        w.writerow(vals)
        count += 1
    return count


def sweep_csv(criterion: str, grid_text: str, fixed: dict | None = None, tol: Tolerances = DEFAULT) -> str:
    grid = parse_grid(grid_text)
    buf = io.StringIO()
    write_csv(criterion, sweep(criterion, grid, fixed, tol), grid, fixed, buf)
    return buf.getvalue()


def parse_fixed(text: str) -> dict[str, float]:
    fixed: dict[str, float] = {}
    for item in filter(None, (x.strip() for x in text.split(","))):
        name, eq, value = item.partition("=")
        name = name.strip()
        if not eq or name not in AXES:
            raise GridError(f"fixed parameter {item!r} is not name=value with name in {', '.join(AXES)}")
        try:
            fixed[name] = float(value)
        except ValueError:
            raise GridError(f"fixed parameter {name!r} is not a number") from None
    return fixed


__all__ = ["AXES", "CRITERIA", "GridError", "SweepRow", "columns", "parse_fixed", "parse_grid", "sweep", "sweep_csv",
           "write_csv", "Status"]
