"""Crumbled forms: flat environments of explicit substitutions.

A crumble is a head bite (the anonymous return slot, written ``*``) plus a
sequence of environment entries ``[z <- bite]``.  Bites are only
variable-variable applications and abstractions; abstractions split into the
general shape ``\\x. <crumble>`` and the identity/constant shape
``\\x. *<-y`` whose body is a bare name.  Entries bind the occurrences to
their *left*: a well-named crumble never mentions an entry at or after its
own definition.

This module owns the translation from terms, the read-back to terms, the
size/length measures, well-formedness checks, and ``cr_step`` — the
calculus-level reduction used as a mid-level oracle for the machine.  The
machine shares the data model and the alpha-copy, but keeps its own zipper
state in ``machine.py``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import App, Lam, Term, Var, fresh_name

# Entry id reserved for the top-level return slot; never referenced by any
# name, rendered "*".
STAR_UID = 0


class DanglingReferenceError(Exception):
    """An environment reference does not resolve within the crumble."""


class LookupMissError(Exception):
    """cr_step looked up a name absent from the evaluated suffix.

    Impossible for crumbles reachable from closed terms; signals a bug or a
    hand-built open crumble.
    """


class IdGen:
    """Session-scoped allocator for entry ids and binder ids.

    Entry ids are monotone and can be rolled back when an undo discards the
    entries a copy allocated, so that a rerun allocates identical ids.
    """

    def __init__(self, start: int = 1):
        self.next_entry = start
        self.next_binder = 1

    def fresh_entry(self) -> int:
        uid = self.next_entry
        self.next_entry += 1
        return uid

    def rollback_entries(self, count: int) -> None:
        self.next_entry -= count
        assert self.next_entry >= 1

    def fresh_binder(self) -> int:
        uid = self.next_binder
        self.next_binder += 1
        return uid


class Binder:
    """A lambda-bound variable. Distinct objects are distinct variables."""

    __slots__ = ("uid", "name")

    def __init__(self, uid: int, name: str):
        self.uid = uid
        self.name = name

    def __repr__(self):
        return f"Binder({self.name}#{self.uid})"


@dataclass(frozen=True)
class BoundVar:
    binder: Binder


@dataclass(frozen=True)
class EnvRef:
    uid: int


Name = BoundVar | EnvRef


@dataclass(frozen=True)
class VarApp:
    left: Name
    right: Name


@dataclass(frozen=True)
class LamGen:
    param: Binder
    body: "Crumble"


@dataclass(frozen=True)
class LamId:
    param: Binder
    ret: Name


Bite = VarApp | LamGen | LamId


def is_value_bite(b: Bite) -> bool:
    return isinstance(b, (LamGen, LamId))


class Entry:
    """One explicit substitution. The bite is mutable: the machine rewrites
    it in place and restores it on undo."""

    __slots__ = ("uid", "bite")

    def __init__(self, uid: int, bite: Bite):
        self.uid = uid
        self.bite = bite

    def __repr__(self):
        return f"Entry(z{self.uid})"


@dataclass
class Crumble:
    head: Bite
    tail: tuple[Entry, ...]
    ids: IdGen = field(default_factory=IdGen, repr=False)


# --------------------------------------------------------------------------
# Translation


def crumble_translate(t: Term, ids: IdGen | None = None) -> Crumble:
    """Translate a term to its finest crumbled form.

    Free term variables become free BoundVar names so that open terms (and
    open bodies during recursion) translate cleanly; closedness is the
    caller's concern.
    """
    ids = ids or IdGen()
    scope: dict[str, Binder] = {}

    def name_of(var: str) -> Name:
        binder = scope.get(var)
        if binder is None:
            # free occurrence: one floating binder per distinct name
            binder = Binder(ids.fresh_binder(), var)
            scope[var] = binder
        return BoundVar(binder)

    def translate(u: Term) -> tuple[Bite, list[Entry]]:
        match u:
            case Var(x):
                # bare variables only occur under the LamId clause
                raise AssertionError("variable is not a crumble on its own")
            case Lam(x, Var(y)):
                binder = Binder(ids.fresh_binder(), x)
                saved = scope.get(x)
                scope[x] = binder
                ret = name_of(y)
                _restore(scope, x, saved)
                return LamId(binder, ret), []
            case Lam(x, body):
                binder = Binder(ids.fresh_binder(), x)
                saved = scope.get(x)
                scope[x] = binder
                head, tail = translate(body)
                _restore(scope, x, saved)
                return LamGen(binder, Crumble(head, tuple(tail), ids)), []
            case App(Var(x), Var(y)):
                return VarApp(name_of(x), name_of(y)), []
            case App(fun, Var(y)):
                x_id = ids.fresh_entry()
                head, tail = translate(fun)
                return VarApp(EnvRef(x_id), name_of(y)), [Entry(x_id, head), *tail]
            case App(Var(x), arg):
                y_id = ids.fresh_entry()
                head, tail = translate(arg)
                return VarApp(name_of(x), EnvRef(y_id)), [Entry(y_id, head), *tail]
            case App(fun, arg):
                x_id = ids.fresh_entry()
                y_id = ids.fresh_entry()
                f_head, f_tail = translate(fun)
                a_head, a_tail = translate(arg)
                return (
                    VarApp(EnvRef(x_id), EnvRef(y_id)),
                    [Entry(x_id, f_head), *f_tail, Entry(y_id, a_head), *a_tail],
                )
        raise TypeError(f"not a term: {u!r}")

    if isinstance(t, Var):
        # No clause produces a head for a bare variable: a bite is never a
        # bare name.  Closed terms are never variables, so reject.
        raise ValueError("a bare variable has no finest crumbled form")
    head, tail = translate(t)
    return Crumble(head, tuple(tail), ids)


def _restore(scope: dict, key: str, saved) -> None:
    if saved is None:
        del scope[key]
    else:
        scope[key] = saved


# --------------------------------------------------------------------------
# Read-back


def read_back(c: Crumble) -> Term:
    """Fire all explicit substitutions, recovering the term."""
    memo: dict[int, Term] = {}
    names: dict[int, str] = {}
    used: set[str] = set()

    # Free names are fixed; claim them first so no binder shadows them.
    free = sorted(
        (n.binder for n in fv_crumble(c) if isinstance(n, BoundVar)),
        key=lambda b: b.uid,
    )
    for binder in free:
        name = fresh_name(binder.name, used)
        names[binder.uid] = name
        used.add(name)

    def binder_name(binder: Binder) -> str:
        name = names.get(binder.uid)
        if name is None:
            name = fresh_name(binder.name, used)
            names[binder.uid] = name
            used.add(name)
        return name

    def resolve_name(n: Name) -> Term:
        if isinstance(n, BoundVar):
            return Var(binder_name(n.binder))
        got = memo.get(n.uid)
        if got is None:
            raise DanglingReferenceError(f"z{n.uid} does not resolve")
        return got

    def resolve_bite(b: Bite) -> Term:
        match b:
            case VarApp(left, right):
                return App(resolve_name(left), resolve_name(right))
            case LamId(param, ret):
                name = binder_name(param)
                return Lam(name, resolve_name(ret))
            case LamGen(param, body):
                name = binder_name(param)
                return Lam(name, resolve_crumble(body))
        raise TypeError(f"not a bite: {b!r}")

    def resolve_crumble(c: Crumble) -> Term:
        # entries reference rightward, so resolve right to left
        for entry in reversed(c.tail):
            if entry.uid not in memo:
                memo[entry.uid] = resolve_bite(entry.bite)
        return resolve_bite(c.head)

    return resolve_crumble(c)


def entries_as_crumble(entries, ids: IdGen | None = None) -> Crumble:
    """View an entry sequence whose first entry is the return slot as a
    crumble; the first entry's id must be unreferenced."""
    entries = list(entries)
    if not entries:
        raise ValueError("an empty entry sequence is not a crumble")
    return Crumble(entries[0].bite, tuple(entries[1:]), ids or IdGen())


# --------------------------------------------------------------------------
# Measures, free names, well-formedness


def bite_size(b: Bite) -> int:
    match b:
        case VarApp():
            return 2
        case LamId():
            return 2
        case LamGen(_, body):
            return crumble_size(body) + 1
    raise TypeError(f"not a bite: {b!r}")


def crumble_size(c: Crumble) -> int:
    return bite_size(c.head) + sum(bite_size(e.bite) for e in c.tail)


def measure_entries(entries) -> tuple[int, int]:
    entries = list(entries)
    return sum(bite_size(e.bite) for e in entries), len(entries)


def env_measures(e) -> tuple[int, int]:
    """(size, length) of a crumble or an entry sequence; a crumble's head
    slot counts as one entry."""
    if isinstance(e, Crumble):
        return crumble_size(e), 1 + len(e.tail)
    return measure_entries(e)


def max_body_length(c: Crumble) -> int:
    """Longest entry-count of any abstraction body, at any depth; 0 when
    the crumble has no abstractions (a LamId body counts 1)."""

    def of_bite(b: Bite) -> int:
        match b:
            case VarApp():
                return 0
            case LamId():
                return 1
            case LamGen(_, body):
                return max(1 + len(body.tail), of_crumble(body))
        raise TypeError(f"not a bite: {b!r}")

    def of_crumble(c: Crumble) -> int:
        return max(of_bite(c.head), *(of_bite(e.bite) for e in c.tail), 0)

    return of_crumble(c)


def fv_bite(b: Bite) -> frozenset[Name]:
    match b:
        case VarApp(left, right):
            return frozenset((left, right))
        case LamId(param, ret):
            return frozenset((ret,)) - {BoundVar(param)}
        case LamGen(param, body):
            return fv_crumble(body) - {BoundVar(param)}
    raise TypeError(f"not a bite: {b!r}")


def fv_entries(entries, seed: frozenset[Name] = frozenset()) -> frozenset[Name]:
    """Free names of an entry sequence: each entry binds to its left."""
    free = seed
    for entry in entries:
        free = (free - {EnvRef(entry.uid)}) | fv_bite(entry.bite)
    return free


def fv_crumble(c: Crumble) -> frozenset[Name]:
    # the head is the leftmost slot, bound by every entry after it
    return fv_entries(c.tail, seed=fv_bite(c.head))


def fv_env(e) -> frozenset[Name]:
    """Free names of a crumble or of an entry sequence."""
    if isinstance(e, Crumble):
        return fv_crumble(e)
    return fv_entries(e)


def check_well_named(c: Crumble) -> bool:
    """Domains pairwise distinct, no entry referenced at or after its own
    definition; checked recursively inside abstraction bodies."""

    def ok_entries(entries) -> bool:
        uids = [e.uid for e in entries]
        if len(set(uids)) != len(uids):
            return False
        for i, entry in enumerate(entries):
            me = EnvRef(entry.uid)
            if me in fv_bite(entry.bite):
                return False
            if me in fv_entries(entries[i + 1 :]):
                return False
        return all(ok_bite(e.bite) for e in entries)

    def ok_bite(b: Bite) -> bool:
        if isinstance(b, LamGen):
            return ok_crumble(b.body)
        return True

    def ok_crumble(c: Crumble) -> bool:
        return ok_bite(c.head) and ok_entries(list(c.tail))

    return ok_crumble(c)


# --------------------------------------------------------------------------
# Alpha-copy with in-flight substitution


def count_body_entries(c: Crumble) -> int:
    """Entries a copy of this crumble allocates, at every depth."""

    def of_bite(b: Bite) -> int:
        return count_body_entries(b.body) if isinstance(b, LamGen) else 0

    return len(c.tail) + of_bite(c.head) + sum(of_bite(e.bite) for e in c.tail)


def alpha_copy(body: Crumble, param: Binder, arg: Name, ids: IdGen) -> tuple[Bite, list[Entry]]:
    """Copy an abstraction body, renaming its entries to globally fresh ids
    and substituting ``arg`` for the abstraction's parameter.

    One traversal; binders of nested abstractions are shared with the
    original, which is sound because copies are never mutated through them.
    Returns the copied head bite and the copied tail entries.
    """
    mapping: dict[int, int] = {}

    def copy_name(n: Name) -> Name:
        if isinstance(n, BoundVar):
            return arg if n.binder is param else n
        renamed = mapping.get(n.uid)
        return EnvRef(renamed) if renamed is not None else n

    def copy_bite(b: Bite) -> Bite:
        match b:
            case VarApp(left, right):
                return VarApp(copy_name(left), copy_name(right))
            case LamId(p, ret):
                return LamId(p, copy_name(ret))
            case LamGen(p, inner):
                head, tail = copy_crumble(inner)
                return LamGen(p, Crumble(head, tuple(tail), ids))
        raise TypeError(f"not a bite: {b!r}")

    def copy_crumble(c: Crumble) -> tuple[Bite, list[Entry]]:
        for entry in c.tail:
            mapping[entry.uid] = ids.fresh_entry()
        head = copy_bite(c.head)
        return head, [Entry(mapping[e.uid], copy_bite(e.bite)) for e in c.tail]

    return copy_crumble(body)


# --------------------------------------------------------------------------
# Calculus-level reduction (the mid-level oracle)


def _subst_ret(ret: Name, param: Binder, arg: Name) -> Name:
    return arg if isinstance(ret, BoundVar) and ret.binder is param else ret


def cr_step(c: Crumble) -> Crumble | None:
    """One reduction of the crumbled calculus, or None on a v-crumble.

    The redex is the rightmost non-value entry; everything to its right is
    the evaluated suffix used for lookups.  Entries are never mutated:
    returned crumbles share untouched entries with the input.
    """
    slots: list[tuple[int, Bite]] = [(STAR_UID, c.head)]
    slots += [(e.uid, e.bite) for e in c.tail]

    pivot = None
    for i in range(len(slots) - 1, -1, -1):
        if not is_value_bite(slots[i][1]):
            pivot = i
            break
    if pivot is None:
        return None

    suffix = slots[pivot + 1 :]

    def lookup(n: Name) -> Bite:
        if isinstance(n, EnvRef):
            for uid, bite in suffix:
                if uid == n.uid:
                    return bite
        raise LookupMissError(f"{n} not bound to a value in the evaluated suffix")

    bite = slots[pivot][1]
    assert isinstance(bite, VarApp)
    fun = lookup(bite.left)
    inserted: list[Entry] = []
    if isinstance(fun, LamGen):
        new_bite, inserted = alpha_copy(fun.body, fun.param, bite.right, c.ids)
    elif isinstance(fun, LamId):
        target = _subst_ret(fun.ret, fun.param, bite.right)
        new_bite = lookup(target)
    else:
        raise LookupMissError(f"{bite.left} is bound to a non-value; state unreachable")

    if pivot == 0:
        head = new_bite
        tail = list(inserted) + list(c.tail)
    else:
        head = c.head
        tail = list(c.tail)
        tail[pivot - 1] = Entry(slots[pivot][0], new_bite)
        tail = tail[:pivot] + inserted + tail[pivot:]
    return Crumble(head, tuple(tail), c.ids)


# --------------------------------------------------------------------------
# Rendering (the textual trace notation)


def render_name(n: Name) -> str:
    if isinstance(n, BoundVar):
        return n.binder.name
    return "*" if n.uid == STAR_UID else f"z{n.uid}"


def render_bite(b: Bite) -> str:
    match b:
        case VarApp(left, right):
            return f"{render_name(left)} {render_name(right)}"
        case LamId(param, ret):
            return f"\\{param.name}. *<-{render_name(ret)}"
        case LamGen(param, body):
            return f"\\{param.name}. {render_crumble(body)}"
    raise TypeError(f"not a bite: {b!r}")


def render_entry(uid: int, bite: Bite) -> str:
    slot = "*" if uid == STAR_UID else f"z{uid}"
    return f"[{slot}<-{render_bite(bite)}]"


def render_crumble(c: Crumble) -> str:
    return render_entry(STAR_UID, c.head) + "".join(
        render_entry(e.uid, e.bite) for e in c.tail
    )
