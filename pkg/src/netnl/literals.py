"""Text forms used by the CLI: state and channel literals, scenario files and
a JSON writer that prints every float with 17 significant digits."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .bloch import PRESETS, BlochState, preset_state
from .channels import (IDENTITY, Channel, PauliDampingChannel, QubitChannelAffine, RandomUnitaryChannel,
                       dephasing, depolarizing)
from .errors import NetNLError
from .network import NetworkScenario, Placement, Topology, UsagePattern


class LiteralError(NetNLError):
    """Malformed state, channel or scenario literal."""


def _maybe_json(text: str | dict) -> Any:
    if isinstance(text, dict):
        return text
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise LiteralError(f"bad JSON literal: {exc}") from None
    return text


def parse_state(lit: str | dict) -> BlochState:
    obj = _maybe_json(lit)
    if isinstance(obj, str):
        try:
            return preset_state(obj)
        except KeyError:
            raise LiteralError(f"unknown state preset {obj!r}; known: {', '.join(PRESETS)}") from None
    try:
        return BlochState(obj.get("a", [0, 0, 0]), obj.get("b", [0, 0, 0]), obj["W"])
    except (KeyError, ValueError, TypeError) as exc:
        raise LiteralError(f"state literal needs a, b and a 3x3 W: {exc}") from None


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise LiteralError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _shorthand(text: str) -> dict:
    """``depolarizing:0.4``, ``dephasing:p=0.5``, ``pauli-damping:0.2,0.2,0.2``, ``identity``."""
    name, _, rest = text.partition(":")
    name = name.strip().lower()
    args = [a.strip() for a in rest.split(",") if a.strip()]
    keys = {"depolarizing": ["q"], "dephasing": ["p"], "pauli-damping": ["t", "l1", "l3"], "identity": []}
    if name not in keys:
        raise LiteralError(f"unknown channel {text!r}")
    out: dict = {"kind": name}
    for i, a in enumerate(args):
        k, eq, v = a.partition("=")
        if not eq:
            if i >= len(keys[name]):
                raise LiteralError(f"too many arguments for {name}")
            k, v = keys[name][i], a
        out[k.strip()] = float(v)
    return out


def parse_channel(lit: str | dict) -> Channel:
    obj = _maybe_json(lit)
    if isinstance(obj, str):
        obj = _shorthand(obj)
    kind = str(obj.get("kind", "")).lower()
    try:
        if kind == "depolarizing":
            return depolarizing(float(obj["q"]))
        if kind == "dephasing":
            return dephasing(float(obj["p"]))
        if kind == "random-unitary":
            return RandomUnitaryChannel(_complex(obj["alpha"]), _complex(obj["beta"]))
        if kind == "pauli-damping":
            return PauliDampingChannel(float(obj["t"]), float(obj["l1"]), float(obj["l3"]),
                                       float(obj.get("l2", 0.0)))
        if kind == "affine":
            return QubitChannelAffine(obj["t"], obj["T"])
        if kind == "identity":
            return IDENTITY
    except KeyError as exc:
        raise LiteralError(f"channel literal of kind {kind!r} is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, NetNLError):
            raise
        raise LiteralError(f"bad channel literal: {exc}") from None
    raise LiteralError(f"unknown channel kind {kind!r}")


def parse_scenario(obj: dict) -> tuple[NetworkScenario, Channel | None, UsagePattern | None]:
    """Scenario object: ``{topology, n?, states, channel?, placements?}``."""
    try:
        topology = Topology.parse(obj["topology"])
        states = tuple(parse_state(s) for s in obj["states"])
    except KeyError as exc:
        raise LiteralError(f"scenario is missing {exc}") from None
    except ValueError as exc:
        raise LiteralError(str(exc)) from None
    if "n" in obj and int(obj["n"]) != len(states):
        raise LiteralError(f"scenario says n = {obj['n']} but lists {len(states)} states")
    scenario = NetworkScenario(topology, states)
    ch = parse_channel(obj["channel"]) if obj.get("channel") is not None else None
    u = None
    if obj.get("placements") is not None:
        u = UsagePattern(len(states), tuple(Placement.parse(p) for p in obj["placements"]))
    elif ch is not None:
        raise LiteralError("a scenario with a channel also needs 'placements'")
    return scenario, ch, u


def load_scenario(path: str | Path):
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise LiteralError(f"cannot read scenario file {path}: {exc}") from None
    return parse_scenario(obj)


def _plain(x: Any) -> Any:
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def fmt_float(x: float) -> str:
    """17 significant digits; non-finite values become ``null`` in JSON."""
    return format(x, ".17g")


def dumps(obj: Any, indent: int | None = 2, _level: int = 0) -> str:
    obj = _plain(obj)
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        kv = ": " if indent is not None else ":"
        items = [pad + json.dumps(str(k)) + kv + dumps(v, indent, _level + 1) for k, v in obj.items()]
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + ",".join(pad + dumps(v, indent, _level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
