"""JSON image of machine states: the wire format of the step server.

Schema::

    snapshot = {"active": [entry...], "evaluated": [entry...],
                "history": [{"kind": "search"} |
                            {"kind": "principal", "x": id, "y": id}...],
                "readback": str, "counters": {"p": n, "sea": n, "back": n},
                "final": bool, "initial": bool}
    entry    = {"id": str, "bite": bite}
    bite     = {"kind": "app", "left": name, "right": name}
             | {"kind": "lam", "param": str, "headBite": bite, "tail": [entry...]}
             | {"kind": "lamid", "param": str, "ret": name}
    name     = {"kind": "bound", "var": str} | {"kind": "env", "id": str}

Entry ids render as ``z<n>`` (the return slot as ``*``); bound variables as
``<name>#<ordinal>`` so distinct binders with equal source names stay
distinct on the wire.  History is listed top (most recent) first.  The
snapshot determines the state exactly: ``state_from_snapshot`` rebuilds a
steppable machine, and re-serializing it gives the same document (bite
sharing and the copy-work tally are not part of the image).
"""

from __future__ import annotations

from .crumble import (
    STAR_UID,
    Binder,
    Bite,
    BoundVar,
    Crumble,
    Entry,
    EnvRef,
    IdGen,
    LamGen,
    LamId,
    Name,
    VarApp,
)
from .machine import SEARCH, MachineState, Principal, read_back_state
from .parser import print_term


class SnapshotError(ValueError):
    """The document does not match the snapshot schema."""


def _uid_str(uid: int) -> str:
    return "*" if uid == STAR_UID else f"z{uid}"


def _uid_parse(s: str) -> int:
    if s == "*":
        return STAR_UID
    if s.startswith("z") and s[1:].isdigit():
        return int(s[1:])
    raise SnapshotError(f"bad entry id {s!r}")


def _binder_str(b: Binder) -> str:
    return f"{b.name}#{b.uid}"


def name_to_json(n: Name) -> dict:
    if isinstance(n, BoundVar):
        return {"kind": "bound", "var": _binder_str(n.binder)}
    return {"kind": "env", "id": _uid_str(n.uid)}


def bite_to_json(b: Bite) -> dict:
    if isinstance(b, VarApp):
        return {"kind": "app", "left": name_to_json(b.left), "right": name_to_json(b.right)}
    if isinstance(b, LamId):
        return {"kind": "lamid", "param": _binder_str(b.param), "ret": name_to_json(b.ret)}
    return {
        "kind": "lam",
        "param": _binder_str(b.param),
        "headBite": bite_to_json(b.body.head),
        "tail": [entry_to_json(e) for e in b.body.tail],
    }


def entry_to_json(e: Entry) -> dict:
    return {"id": _uid_str(e.uid), "bite": bite_to_json(e.bite)}


def state_snapshot(s: MachineState) -> dict:
    return {
        "active": [entry_to_json(e) for e in s.active],
        "evaluated": [entry_to_json(e) for e in s.evaluated],
        "history": [
            {"kind": "search"} if h is SEARCH else
            {"kind": "principal", "x": _uid_str(h.x), "y": _uid_str(h.y)}
            for h in reversed(s.history)
        ],
        "readback": print_term(read_back_state(s)),
        "counters": {
            "p": s.counters.principal,
            "sea": s.counters.search,
            "back": s.counters.backward,
        },
        "final": s.is_final,
        "initial": s.is_initial,
    }


# --------------------------------------------------------------------------
# Rebuilding a machine from a snapshot


class _Reader:
    def __init__(self):
        self.binders: dict[int, Binder] = {}
        self.max_entry = 0
        self.max_binder = 0

    def binder(self, text) -> Binder:
        if not isinstance(text, str) or "#" not in text:
            raise SnapshotError(f"bad binder {text!r}")
        name, _, ordinal = text.rpartition("#")
        if not ordinal.isdigit() or not name:
            raise SnapshotError(f"bad binder {text!r}")
        uid = int(ordinal)
        self.max_binder = max(self.max_binder, uid)
        binder = self.binders.get(uid)
        if binder is None:
            binder = Binder(uid, name)
            self.binders[uid] = binder
        return binder

    def uid(self, text) -> int:
        uid = _uid_parse(text)
        self.max_entry = max(self.max_entry, uid)
        return uid

    def name(self, doc) -> Name:
        match doc:
            case {"kind": "bound", "var": var}:
                return BoundVar(self.binder(var))
            case {"kind": "env", "id": ref}:
                return EnvRef(self.uid(ref))
        raise SnapshotError(f"bad name {doc!r}")

    def bite(self, doc, ids: IdGen) -> Bite:
        match doc:
            case {"kind": "app", "left": left, "right": right}:
                return VarApp(self.name(left), self.name(right))
            case {"kind": "lamid", "param": param, "ret": ret}:
                return LamId(self.binder(param), self.name(ret))
            case {"kind": "lam", "param": param, "headBite": head, "tail": tail}:
                body = Crumble(
                    self.bite(head, ids),
                    tuple(self.entry(e, ids) for e in tail),
                    ids,
                )
                return LamGen(self.binder(param), body)
        raise SnapshotError(f"bad bite {doc!r}")

    def entry(self, doc, ids: IdGen) -> Entry:
        match doc:
            case {"id": ref, "bite": bite}:
                return Entry(self.uid(ref), self.bite(bite, ids))
        raise SnapshotError(f"bad entry {doc!r}")


def state_from_snapshot(doc: dict) -> MachineState:
    """Rebuild a steppable machine from its snapshot."""
    if not isinstance(doc, dict):
        raise SnapshotError("snapshot must be an object")
    reader = _Reader()
    ids = IdGen()
    try:
        active = [reader.entry(e, ids) for e in doc["active"]]
        evaluated = [reader.entry(e, ids) for e in doc["evaluated"]]
        history = []
        for h in reversed(doc["history"]):
            match h:
                case {"kind": "search"}:
                    history.append(SEARCH)
                case {"kind": "principal", "x": x, "y": y}:
                    history.append(Principal(reader.uid(x), reader.uid(y)))
                case _:
                    raise SnapshotError(f"bad history record {h!r}")
        counters = doc["counters"]
        p, sea, back = counters["p"], counters["sea"], counters["back"]
    except (KeyError, TypeError) as err:
        raise SnapshotError(f"snapshot missing field: {err}") from err
    # allocated ids are contiguous, so the cursor sits past the largest live
    ids.next_entry = reader.max_entry + 1
    ids.next_binder = reader.max_binder + 1
    state = MachineState(active, evaluated, history, ids)
    state.counters.principal = p
    state.counters.search = sea
    state.counters.backward = back
    state.hist_max = len(history)
    return state
