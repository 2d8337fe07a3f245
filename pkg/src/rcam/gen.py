"""Random closed term generation for tests and self-checks."""

from __future__ import annotations

import random

from .terms import App, Lam, Term, Var

_NAMES = ["a", "b", "c", "d", "e", "f"]


def _min_size(scope: list[str]) -> int:
    # smallest term under this scope: a variable, or \x. x when closed
    return 1 if scope else 2


def _build(rng: random.Random, budget: int, scope: list[str]) -> Term:
    options = []
    if scope:
        options += ["var"] * 2
    if budget >= 2:
        options += ["lam"] * 3
    if budget >= 1 + 2 * _min_size(scope):
        options += ["app"] * 4
    kind = rng.choice(options)
    if kind == "var":
        return Var(rng.choice(scope))
    if kind == "lam":
        param = rng.choice(_NAMES)
        scope.append(param)
        body = _build(rng, budget - 1, scope)
        scope.pop()
        return Lam(param, body)
    lo = _min_size(scope)
    fun_budget = rng.randint(lo, budget - 1 - lo)
    fun = _build(rng, fun_budget, scope)
    arg = _build(rng, budget - 1 - fun_budget, scope)
    return App(fun, arg)


def random_closed_term(rng: random.Random, max_size: int = 30) -> Term:
    """A uniformly scrappy closed term of size at most ``max_size``."""
    if max_size < 2:
        raise ValueError("no closed term has size < 2")
    return _build(rng, max_size, [])


def random_closed_terms(seed: int, count: int, max_size: int = 30) -> list[Term]:
    rng = random.Random(seed)
    return [random_closed_term(rng, max_size) for _ in range(count)]


def identity_chain(n: int) -> Term:
    """n-fold right-nested applications of the identity: I (I (... (I I)))."""
    t: Term = Lam("y", Var("y"))
    for _ in range(n):
        t = App(Lam("y", Var("y")), t)
    return t
