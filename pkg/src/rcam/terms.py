"""Source language: closed weak call-by-value lambda terms.

Terms are the usual three-constructor AST over string identifiers.
Evaluation is right-to-left weak call-by-value: in an application the
argument is reduced first, then the function, and a beta step fires only
when a lambda meets a value outside any binder.  ``step_beta_v`` and
``normalize_beta_v`` form the top-level reference evaluator against which
the crumbled calculus and the machine are checked.
"""

from __future__ import annotations

from dataclasses import dataclass


class OpenTermError(Exception):
    """Raised when evaluation is attempted on a term with free variables."""

    def __init__(self, free: frozenset[str]):
        self.free = free
        super().__init__(f"term not closed, free variables: {sorted(free)}")


class FuelExhausted(Exception):
    """Raised when an iterated reduction runs out of fuel."""

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"fuel exhausted after {steps} steps")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    param: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Var | Lam | App

# Steps of a redex location, from the root down to the contracted redex.
INTO_FUN = "fun"
INTO_ARG = "arg"

RedexLocation = tuple[str, ...]


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Lam))


def free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case Lam(param, body):
            return free_vars(body) - {param}
        case App(fun, arg):
            return free_vars(fun) | free_vars(arg)
    raise TypeError(f"not a term: {t!r}")


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def size_term(t: Term) -> int:
    """|x| = 1, |lam x. t| = |t| + 1, |u u'| = |u| + |u'| + 1."""
    match t:
        case Var():
            return 1
        case Lam(_, body):
            return size_term(body) + 1
        case App(fun, arg):
            return size_term(fun) + size_term(arg) + 1
    raise TypeError(f"not a term: {t!r}")


def _canon(t: Term, binders: dict[str, int], depth: int):
    # Locally-nameless skeleton: bound occurrences become de Bruijn levels,
    # free occurrences keep their names.
    match t:
        case Var(name):
            if name in binders:
                return ("b", depth - binders[name])
            return ("f", name)
        case Lam(param, body):
            saved = binders.get(param)
            binders[param] = depth
            out = ("lam", _canon(body, binders, depth + 1))
            if saved is None:
                del binders[param]
            else:
                binders[param] = saved
            return out
        case App(fun, arg):
            return ("app", _canon(fun, binders, depth), _canon(arg, binders, depth))
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(t: Term, u: Term) -> bool:
    """Equality up to consistent renaming of bound variables."""
    return _canon(t, {}, 0) == _canon(u, {}, 0)


def fresh_name(base: str, avoid) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, x: str, v: Term) -> Term:
    """Capture-avoiding t{x <- v}."""
    match t:
        case Var(name):
            return v if name == x else t
        case App(fun, arg):
            return App(substitute(fun, x, v), substitute(arg, x, v))
        case Lam(param, body):
            if param == x:
                return t
            fv_body = free_vars(body)
            if x not in fv_body:
                return t
            fv_v = free_vars(v)
            if param in fv_v:
                renamed = fresh_name(param, fv_v | fv_body | {x})
                body = substitute(body, param, Var(renamed))
                return Lam(renamed, substitute(body, x, v))
            return Lam(param, substitute(body, x, v))
    raise TypeError(f"not a term: {t!r}")


def _step(t: Term) -> tuple[Term, RedexLocation] | None:
    # Operationalizes the right v-context grammar: in an application the
    # argument must become a value before the function side is touched.
    if is_value(t):
        return None
    fun, arg = t.fun, t.arg
    stepped = _step(arg)
    if stepped is not None:
        reduct, loc = stepped
        return App(fun, reduct), (INTO_ARG,) + loc
    stepped = _step(fun)
    if stepped is not None:
        reduct, loc = stepped
        return App(reduct, arg), (INTO_FUN,) + loc
    if isinstance(fun, Lam):
        return substitute(fun.body, fun.param, arg), ()
    # Both sides are values yet the function is not a lambda: a variable in
    # call position, impossible for closed terms.
    raise OpenTermError(free_vars(t))


def step_beta_v(t: Term) -> tuple[Term, RedexLocation] | None:
    """One rightmost beta_v step of a closed term, or None on a value."""
    fv = free_vars(t)
    if fv:
        raise OpenTermError(fv)
    return _step(t)


def normalize_beta_v(t: Term, fuel: int = 100_000) -> tuple[Term, int]:
    """Iterate step_beta_v up to ``fuel`` times; return (normal form, steps)."""
    fv = free_vars(t)
    if fv:
        raise OpenTermError(fv)
    steps = 0
    while True:
        stepped = _step(t)
        if stepped is None:
            return t, steps
        if steps >= fuel:
            raise FuelExhausted(steps)
        t = stepped[0]
        steps += 1


def subterm_at(t: Term, loc: RedexLocation) -> Term:
    for move in loc:
        if not isinstance(t, App):
            raise ValueError(f"location {loc} walks off the term")
        t = t.fun if move == INTO_FUN else t.arg
    return t


def is_right_v_context_path(t: Term, loc: RedexLocation) -> bool:
    """Does hollowing ``t`` at ``loc`` give a right v-context?

    Every into-argument move is fine (context tR); an into-function move
    requires the sibling argument to be a value (context Rv); the path may
    never enter a lambda.
    """
    for move in loc:
        if not isinstance(t, App):
            return False
        if move == INTO_FUN:
            if not is_value(t.arg):
                return False
            t = t.fun
        elif move == INTO_ARG:
            t = t.arg
        else:
            return False
    return True
