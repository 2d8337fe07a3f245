"""The reversible machine over crumbled environments.

A state is a zipper: the active environment exposes its rightmost entry,
the evaluated environment its leftmost, and shifting an entry across the
split point is O(1).  Every step pushes one history record — empty for a
search step, a pair of entry ids for a principal step — and that record is
exactly enough to undo the step, so running the history down restores the
initial state bit for bit.

Entries are mutated in place (a principal step overwrites the applied
bite), hence one state must only be stepped from a single thread at a
time.  Distinct sessions are fully independent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .crumble import (
    STAR_UID,
    Bite,
    BoundVar,
    Crumble,
    Entry,
    EnvRef,
    IdGen,
    LamGen,
    LamId,
    VarApp,
    alpha_copy,
    check_well_named,
    count_body_entries,
    crumble_size,
    entries_as_crumble,
    fv_crumble,
    fv_entries,
    is_value_bite,
    read_back,
    render_entry,
)
from .terms import FuelExhausted, Term


class OpenCrumbleError(Exception):
    """The machine only runs closed, well-named crumbles."""


class MachineInvariantError(Exception):
    """The state violates a reachability invariant: internal bug or a
    hand-built unreachable state."""


class _Search:
    __slots__ = ()

    def __repr__(self):
        return "Search"


SEARCH = _Search()


@dataclass(frozen=True)
class Principal:
    x: int
    y: int


HistoryEntry = _Search | Principal

FORWARD_RULES = ("sea", "m1", "m2")
BACKWARD_RULES = ("sea_b", "m1_b", "m2_b")


@dataclass
class StepCounters:
    principal: int = 0
    search: int = 0
    backward: int = 0
    copy_work: int = 0

    def summary(self, hist_max: int) -> str:
        return (
            f"p={self.principal} sea={self.search} back={self.backward} "
            f"work={self.copy_work} hist_max={hist_max}"
        )


class MachineState:
    """Zipper of (active, evaluated) entries plus the history stack."""

    __slots__ = ("active", "evaluated", "history", "ids", "counters", "hist_max", "_index", "debug")

    def __init__(self, active, evaluated, history, ids: IdGen):
        self.active: deque[Entry] = deque(active)
        self.evaluated: deque[Entry] = deque(evaluated)
        self.history: list[HistoryEntry] = list(history)
        self.ids = ids
        self.counters = StepCounters()
        self.hist_max = len(self.history)
        self._index = {e.uid: e for e in self.evaluated}
        self.debug = False

    @property
    def is_final(self) -> bool:
        return not self.active

    @property
    def is_initial(self) -> bool:
        return not self.history

    def entries(self) -> list[Entry]:
        return list(self.active) + list(self.evaluated)

    def lookup_evaluated(self, uid: int) -> Entry:
        entry = self._index.get(uid)
        if entry is None:
            raise MachineInvariantError(
                f"z{uid} is not in the evaluated environment; state unreachable"
            )
        return entry

    def _shift_to_evaluated(self, entry: Entry) -> None:
        popped = self.active.pop()
        assert popped is entry
        self.evaluated.appendleft(entry)
        self._index[entry.uid] = entry

    def _shift_to_active(self) -> Entry:
        if not self.evaluated:
            raise MachineInvariantError("evaluated environment empty; state unreachable")
        entry = self.evaluated.popleft()
        del self._index[entry.uid]
        self.active.append(entry)
        return entry

    def _push(self, record: HistoryEntry) -> None:
        self.history.append(record)
        if len(self.history) > self.hist_max:
            self.hist_max = len(self.history)


def init(c: Crumble) -> MachineState:
    """Load a closed, well-named crumble; the input is not mutated."""
    free = fv_crumble(c)
    if free:
        raise OpenCrumbleError(f"crumble not closed: {sorted(map(str, free))}")
    if not check_well_named(c):
        raise OpenCrumbleError("crumble is not well-named")
    star = Entry(STAR_UID, c.head)
    active = [star] + [Entry(e.uid, e.bite) for e in c.tail]
    return MachineState(active, [], [], c.ids)


def step_forward(s: MachineState) -> str | None:
    """Apply the one enabled forward rule; returns its name, or None when
    the state is final.  Mutates the state."""
    if not s.active:
        return None
    entry = s.active[-1]
    bite = entry.bite

    if is_value_bite(bite):
        s._shift_to_evaluated(entry)
        s._push(SEARCH)
        s.counters.search += 1
        return "sea"

    assert isinstance(bite, VarApp)
    left, right = bite.left, bite.right
    if not isinstance(left, EnvRef) or not isinstance(right, EnvRef):
        raise MachineInvariantError(f"application of unresolved names {bite}; term not closed")
    fun = s.lookup_evaluated(left.uid).bite

    if isinstance(fun, VarApp):
        raise MachineInvariantError(
            f"z{left.uid} is bound to an application in the evaluated environment"
        )

    if s.debug:
        if not check_forward_deterministic(s):
            raise MachineInvariantError("more than one rule enabled")
        # the overwrite below destroys the applied bite; the history pair
        # must be enough to rebuild it
        assert VarApp(EnvRef(left.uid), EnvRef(right.uid)) == bite

    if isinstance(fun, LamGen):
        before = s.ids.next_entry
        head, copied = alpha_copy(fun.body, fun.param, right, s.ids)
        if s.debug:
            assert s.ids.next_entry - before == count_body_entries(fun.body)
        entry.bite = head
        s.active.extend(copied)
        s.counters.copy_work += crumble_size(fun.body)
        s._push(Principal(left.uid, right.uid))
        s.counters.principal += 1
        return "m1"

    # identity/constant shape: rewrite with the value the body returns
    target = right if isinstance(fun.ret, BoundVar) and fun.ret.binder is fun.param else fun.ret
    if isinstance(target, BoundVar):
        raise MachineInvariantError(f"return name {target} escapes its binder; term not closed")
    value = s.lookup_evaluated(target.uid).bite
    if not is_value_bite(value):
        raise MachineInvariantError(f"z{target.uid} is not bound to a value")
    entry.bite = value  # shared by reference; bites are immutable
    s._shift_to_evaluated(entry)
    s._push(Principal(left.uid, right.uid))
    s.counters.principal += 1
    return "m2"


def step_backward(s: MachineState) -> str | None:
    """Undo the step recorded on top of the history; returns the backward
    rule name, or None when the state is initial.  Mutates the state."""
    if not s.history:
        return None
    record = s.history[-1]

    if record is SEARCH:
        s._shift_to_active()
        rule = "sea_b"
    else:
        fun = s.lookup_evaluated(record.x).bite
        restored = VarApp(EnvRef(record.x), EnvRef(record.y))
        if isinstance(fun, VarApp):
            raise MachineInvariantError("the input state is not reachable")
        if isinstance(fun, LamGen):
            spliced = len(fun.body.tail)
            if len(s.active) <= spliced:
                raise MachineInvariantError("active environment too short to undo")
            for _ in range(spliced):
                s.active.pop()
            s.ids.rollback_entries(count_body_entries(fun.body))
            s.active[-1].bite = restored
            rule = "m1_b"
        else:
            entry = s._shift_to_active()
            entry.bite = restored
            rule = "m2_b"

    s.history.pop()
    s.counters.backward += 1
    return rule


def run_forward(s: MachineState, fuel: int = 100_000) -> StepCounters:
    """Step forward until final; raises FuelExhausted after ``fuel`` steps,
    leaving the state valid (it can be resumed or reversed)."""
    steps = 0
    while not s.is_final:
        if steps >= fuel:
            raise FuelExhausted(steps)
        step_forward(s)
        steps += 1
    return s.counters


def run_backward(s: MachineState) -> MachineState:
    """Undo every recorded step; terminates in exactly len(history) steps."""
    while step_backward(s) is not None:
        pass
    return s


def read_back_state(s: MachineState) -> Term:
    """Read back the concatenation of active and evaluated environments."""
    entries = s.entries()
    if not entries:
        raise MachineInvariantError("state has no entries")
    if entries[0].uid != STAR_UID:
        raise MachineInvariantError("leftmost entry is not the return slot")
    return read_back(entries_as_crumble(entries, s.ids))


def forward_candidates(s: MachineState) -> list[str]:
    if not s.active:
        return []
    bite = s.active[-1].bite
    out = []
    if is_value_bite(bite):
        out.append("sea")
    if isinstance(bite, VarApp) and isinstance(bite.left, EnvRef):
        fun = s._index.get(bite.left.uid)
        if fun is not None:
            if isinstance(fun.bite, LamGen):
                out.append("m1")
            if isinstance(fun.bite, LamId):
                out.append("m2")
    return out


def backward_candidates(s: MachineState) -> list[str]:
    if not s.history:
        return []
    record = s.history[-1]
    if record is SEARCH:
        return ["sea_b"] if s.evaluated else []
    fun = s._index.get(record.x)
    if fun is None:
        return []
    out = []
    if isinstance(fun.bite, LamGen) and len(s.active) > len(fun.bite.body.tail):
        out.append("m1_b")
    if isinstance(fun.bite, LamId) and s.evaluated:
        out.append("m2_b")
    return out


def check_forward_deterministic(s: MachineState) -> bool:
    """At most one forward and at most one backward rule applies."""
    return len(forward_candidates(s)) <= 1 and len(backward_candidates(s)) <= 1


def check_state_invariants(s: MachineState) -> None:
    """Reachability invariants; raises MachineInvariantError on violation."""
    entries = s.entries()
    if entries and entries[0].uid != STAR_UID:
        raise MachineInvariantError("leftmost entry is not the return slot")
    for entry in s.evaluated:
        if not is_value_bite(entry.bite):
            raise MachineInvariantError(f"evaluated entry z{entry.uid} holds a non-value")
    if entries:
        if not check_well_named(entries_as_crumble(entries, s.ids)):
            raise MachineInvariantError("state is not well-named")
        if fv_entries(entries):
            raise MachineInvariantError("state is not closed")
    if set(s._index) != {e.uid for e in s.evaluated}:
        raise MachineInvariantError("evaluated index out of sync")
    c = s.counters
    if len(s.history) != c.principal + c.search - c.backward:
        raise MachineInvariantError("history length does not match step tallies")
    if not check_forward_deterministic(s):
        raise MachineInvariantError("more than one rule enabled")


# --------------------------------------------------------------------------
# Structural identity and rendering


def _image_name(n) -> tuple:
    if isinstance(n, BoundVar):
        return ("b", n.binder.uid)
    return ("e", n.uid)


def _image_bite(b: Bite) -> tuple:
    if isinstance(b, VarApp):
        return ("app", _image_name(b.left), _image_name(b.right))
    if isinstance(b, LamId):
        return ("lamid", b.param.uid, _image_name(b.ret))
    return ("lam", b.param.uid, _image_crumble(b.body))


def _image_crumble(c: Crumble) -> tuple:
    return (_image_bite(c.head), tuple((e.uid, _image_bite(e.bite)) for e in c.tail))


def structural_image(s: MachineState) -> tuple:
    """Canonical image of the state for identity comparisons: environments,
    history, and the fresh-id cursor; step counters excluded."""
    return (
        tuple((e.uid, _image_bite(e.bite)) for e in s.active),
        tuple((e.uid, _image_bite(e.bite)) for e in s.evaluated),
        tuple(("sea",) if h is SEARCH else ("p", h.x, h.y) for h in s.history),
        s.ids.next_entry,
    )


def render_env(entries) -> str:
    entries = list(entries)
    if not entries:
        return "eps"
    return "".join(render_entry(e.uid, e.bite) for e in entries)


def render_state(s: MachineState) -> str:
    return f"{render_env(s.active)} || {render_env(s.evaluated)} | H={len(s.history)}"
