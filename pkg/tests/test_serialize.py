"""Snapshot schema: shape, losslessness, library/transcript agreement."""

import json

import pytest

from rcam.crumble import crumble_translate
from rcam.machine import init, run_forward, step_forward, structural_image
from rcam.parser import parse
from rcam.serialize import SnapshotError, state_from_snapshot, state_snapshot

FIG5_TEXT = "(\\x. x (x x)) \\y. y"


def machine_for(text):
    return init(crumble_translate(parse(text)))


def test_snapshot_shape_initial():
    doc = state_snapshot(machine_for(FIG5_TEXT))
    assert [e["id"] for e in doc["active"]] == ["*", "z1", "z2"]
    assert doc["evaluated"] == []
    assert doc["history"] == []
    assert doc["readback"] == FIG5_TEXT
    assert doc["counters"] == {"p": 0, "sea": 0, "back": 0}
    assert doc["initial"] and not doc["final"]


def test_snapshot_bite_shapes():
    doc = state_snapshot(machine_for(FIG5_TEXT))
    star, z1, z2 = doc["active"]
    assert star["bite"] == {
        "kind": "app",
        "left": {"kind": "env", "id": "z1"},
        "right": {"kind": "env", "id": "z2"},
    }
    assert z1["bite"]["kind"] == "lam"
    assert z1["bite"]["param"].startswith("x#")
    assert z2["bite"]["kind"] == "lamid"
    assert z2["bite"]["ret"] == {"kind": "bound", "var": z2["bite"]["param"]}


def test_snapshot_history_top_first():
    s = machine_for(FIG5_TEXT)
    run_forward(s)
    doc = state_snapshot(s)
    kinds = [h["kind"] for h in doc["history"]]
    assert kinds == ["principal", "principal", "principal", "search", "search"]
    assert doc["history"][0] == {"kind": "principal", "x": "z2", "y": "z4"}
    assert doc["final"] and not doc["initial"]


def test_snapshot_round_trip_is_lossless():
    s = machine_for(FIG5_TEXT)
    for _ in range(3):
        step_forward(s)
    doc = state_snapshot(s)
    rebuilt = state_from_snapshot(json.loads(json.dumps(doc)))
    assert state_snapshot(rebuilt) == doc
    assert structural_image(rebuilt) == structural_image(s)


def test_rebuilt_machine_steps_identically():
    s = machine_for(FIG5_TEXT)
    step_forward(s)
    step_forward(s)
    clone = state_from_snapshot(state_snapshot(s))
    while True:
        a = step_forward(s)
        b = step_forward(clone)
        assert a == b
        assert state_snapshot(clone) == state_snapshot(s)
        if a is None:
            break


def test_snapshot_rejects_garbage():
    with pytest.raises(SnapshotError):
        state_from_snapshot({"active": [{"id": "zz", "bite": {}}]})
    with pytest.raises(SnapshotError):
        state_from_snapshot({"nope": 1})
