"""Numerical tolerances shared by every module.

All comparisons that the exact-arithmetic criteria phrase as ``=``, ``<=`` or
"nonzero" go through one :class:`Tolerances` record so the CLI can override
them in one place (``--tol`` or the ``NETNL_TOL`` environment variable).
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "NETNL_TOL"


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-12      # max |M - M^dagger| for density operators
    trace: float = 1e-12     # |Tr rho - 1|
    psd: float = 1e-10       # smallest admissible eigenvalue is -psd
    eq: float = 1e-12        # equality of reals (three-equal test, boundary comparisons)
    proper: float = 1e-12    # |Re z|, |Im z| above this count as nonzero
    norm: float = 1e-9       # | |alpha|^2 + |beta|^2 - 1 |
    bloch: float = 1e-10     # slack on |a|, |b| <= 1 and |W_ij| <= 1
    witness: float = 1e-9    # a witness must beat its threshold by more than this

    def replace(self, **changes: float) -> "Tolerances":
        return dataclasses.replace(self, **changes)


DEFAULT = Tolerances()


def parse_tolerances(text: str, base: Tolerances = DEFAULT) -> Tolerances:
    """Parse ``"eq=1e-10,psd=1e-9"``; a bare number overrides ``eq``."""
    text = text.strip()
    if not text:
        return base
    names = {f.name for f in dataclasses.fields(Tolerances)}
    changes: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if "=" not in item:
            changes["eq"] = float(item)
            continue
        key, value = (s.strip() for s in item.split("=", 1))
        if key not in names:
            raise ValueError(f"unknown tolerance {key!r}; expected one of {sorted(names)}")
        changes[key] = float(value)
    for key, value in changes.items():
        if not value >= 0:
            raise ValueError(f"tolerance {key} must be non-negative, got {value}")
    return base.replace(**changes)


def from_environment(base: Tolerances = DEFAULT) -> Tolerances:
    return parse_tolerances(os.environ.get(ENV_VAR, ""), base)
