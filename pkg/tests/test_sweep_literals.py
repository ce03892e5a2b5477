import csv
import io
import json
import math

import numpy as np
import pytest

from netnl.bloch import phi_plus
from netnl.channels import IDENTITY, PauliDampingChannel, QubitChannelAffine, RandomUnitaryChannel
from netnl.criteria import depol_threshold_linear
from netnl.config import DEFAULT, parse_tolerances
from netnl.literals import LiteralError, dumps, fmt_float, parse_channel, parse_scenario, parse_state
from netnl.sweep import GridError, parse_fixed, parse_grid, sweep, sweep_csv


# ---- grids

def test_grid_includes_both_ends():
    g = parse_grid("t=0:1:0.25, k=1:3:1")
    assert g["t"] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert g["k"] == [1.0, 2.0, 3.0]


def test_grid_step_002_has_51_points():
    assert len(parse_grid("t=0:1:0.02")["t"]) == 51


def test_single_value_axis():
    assert parse_grid("l1=0.3")["l1"] == [0.3]


@pytest.mark.parametrize("text", ["", "t", "t=0:1", "t=0:1:-0.1", "t=1:0:0.1", "t=0:1:0.1,t=0:1:0.5",
                                  "z=0:1:0.1", "t=a:b:c"])
def test_malformed_grids(text):
    with pytest.raises(GridError):
        parse_grid(text)


def test_fixed_parameters():
    assert parse_fixed("n=4, m1=2,m2=1") == {"n": 4.0, "m1": 2.0, "m2": 1.0}
    with pytest.raises(GridError):
        parse_fixed("n=four")
    with pytest.raises(GridError):
        parse_fixed("colour=1")


def test_sweep_rejects_overlap_and_unknown_criterion():
    with pytest.raises(GridError):
        list(sweep("thm3", parse_grid("t=0:1:0.5"), {"t": 0.1}))
    with pytest.raises(GridError):
        list(sweep("thm42", parse_grid("t=0:1:0.5")))


def test_sweep_requires_integer_patterns():
    with pytest.raises(GridError):
        list(sweep("thm6", parse_grid("t=0,l1=0.1,l3=0.1"), {"n": 4, "m1": 1.5, "m2": 0}))
    with pytest.raises(GridError):
        list(sweep("thm6", parse_grid("t=0,l1=0.1,l3=0.1"), {"n": 4, "m1": 1}))


def test_unital_sweep_needs_one_family():
    with pytest.raises(GridError):
        list(sweep("thm1", parse_grid("k=1:2:1")))
    with pytest.raises(GridError):
        list(sweep("thm1", parse_grid("q=0.1,p=0.1,k=1")))


def test_invalid_points_are_marked():
    rows = list(sweep("thm3", parse_grid("t=0.5,l1=0.9,l3=0.5")))
    assert len(rows) == 1 and not rows[0].valid
    assert rows[0].short == "inconclusive"


def test_csv_layout_and_order():
    text = sweep_csv("thm1", "q=0:1:0.5,k=1:2:1")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["criterion", "q", "k", "valid", "lhs", "rhs", "margin", "verdict"]
    assert [(r[1], r[2]) for r in rows[1:]] == [("0", "1"), ("0", "2"), ("0.5", "1"), ("0.5", "2"),
                                                 ("1", "1"), ("1", "2")]
    assert {r[-1] for r in rows[1:]} <= {"breaking", "preserving", "inconclusive"}


def test_csv_row_matches_verdict():
    text = sweep_csv("thm3", "t=0.2,l1=0.2,l3=0.2")
    row = list(csv.DictReader(io.StringIO(text)))[0]
    assert row["verdict"] == "breaking"
    assert float(row["lhs"]) == pytest.approx(0.2, abs=1e-12)
    assert float(row["rhs"]) == 1.0


# ---- literals

def test_channel_shorthands():
    assert parse_channel("depolarizing:0.4").label == "depolarizing(q=0.4)"
    assert abs(parse_channel("dephasing:p=0.5").beta) == 0
    assert parse_channel("pauli-damping:0.2,0.3,0.4") == PauliDampingChannel(0.2, 0.3, 0.4)
    assert parse_channel("identity") is IDENTITY


def test_channel_json():
    c = parse_channel('{"kind": "random-unitary", "alpha": [0.6, 0], "beta": [0, 0.8]}')
    assert c == RandomUnitaryChannel(0.6, 0.8j)
    a = parse_channel({"kind": "affine", "t": [0, 0, 0.1], "T": np.eye(3).tolist()})
    assert isinstance(a, QubitChannelAffine)


@pytest.mark.parametrize("lit", ["warp:1", "depolarizing:0.1,0.2", '{"kind": "dephasing"}',
                                 '{"kind": "random-unitary", "alpha": [1, 2, 3], "beta": 0}', "{bad", '{"kind": "x"}'])
def test_bad_channel_literals(lit):
    with pytest.raises(LiteralError):
        parse_channel(lit)


def test_state_literals():
    assert np.allclose(parse_state("bell-phi+").W, phi_plus().W)
    s = parse_state({"W": np.diag([1, -1, 1]).tolist()})
    assert np.allclose(s.a, 0)
    with pytest.raises(LiteralError):
        parse_state("bell-omega")
    with pytest.raises(LiteralError):
        parse_state('{"a": [0, 0, 0]}')


def test_scenario_literal():
    sc, ch, u = parse_scenario({"topology": "star", "states": ["bell-phi+"] * 3,
                                "channel": "depolarizing:0.1", "placements": ["A", "both", "none"]})
    assert sc.n == 3 and u.k == 3
    assert isinstance(ch, RandomUnitaryChannel)


# ---- output format

def test_seventeen_significant_digits():
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(depol_threshold_linear(2)) == "0.29289321881345248"
    assert float(fmt_float(math.pi)) == math.pi


def test_dumps_round_trip_and_non_finite():
    obj = {"x": 0.1, "y": [1, 2.5, None], "z": float("inf"), "w": np.float64(0.3), "b": np.bool_(True)}
    text = dumps(obj)
    back = json.loads(text)
    assert back["x"] == 0.1 and back["z"] is None and back["b"] is True
    assert "0.10000000000000001" in text
    assert dumps({}, indent=None) == "{}"


# ---- tolerances

def test_tolerance_parsing():
    assert parse_tolerances("1e-6").eq == 1e-6
    t = parse_tolerances("psd=1e-8, witness=0")
    assert t.psd == 1e-8 and t.witness == 0 and t.eq == DEFAULT.eq
    for bad in ("nope=1", "eq=-1", "eq=x"):
        with pytest.raises(ValueError):
            parse_tolerances(bad)
