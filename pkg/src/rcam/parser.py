"""Concrete syntax for lambda terms.

Grammar::

    term  := abs | app
    abs   := ("\\" | "λ" | "lam") ident "." term
    app   := atom+ [abs]          (application is left-associative)
    atom  := ident | "(" term ")"
    ident := [a-z][a-zA-Z0-9_']*

``lam`` is a reserved word.  An abstraction may appear bare as the final
argument of an application ("(\\x. x) \\y. y"); anywhere else it needs
parentheses.  ``print_term`` emits the minimal-parentheses rendering that
``parse`` maps back to the same tree.
"""

from __future__ import annotations

import re

from .terms import App, Lam, Term, Var


class ParseError(Exception):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


_TOKEN_RE = re.compile(r"[a-z][a-zA-Z0-9_']*|λ|[\\.()]|\S")
_IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_']*\Z")
_LAMBDA_TOKENS = ("\\", "λ", "lam")


class _Tokens:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.start() != pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            self.tokens.append((m.group(), pos))
            pos = m.end()
        self.index = 0

    def peek(self) -> str | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def position(self) -> int:
        if self.index < len(self.tokens):
            return self.tokens[self.index][1]
        return self.tokens[-1][1] + len(self.tokens[-1][0]) if self.tokens else 0

    def pop(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.position())
        self.index += 1
        return tok

    def expect(self, token: str) -> None:
        got = self.peek()
        if got != token:
            raise ParseError(f"expected {token!r}, found {got!r}", self.position())
        self.index += 1


def _is_ident(tok: str) -> bool:
    return tok not in _LAMBDA_TOKENS and _IDENT_RE.match(tok) is not None


def _parse_abs(toks: _Tokens) -> Term:
    toks.pop()  # lambda introducer
    name = toks.peek()
    if name is None or not _is_ident(name):
        raise ParseError(f"expected identifier after lambda, found {name!r}", toks.position())
    toks.pop()
    toks.expect(".")
    return Lam(name, _parse_term(toks))


def _parse_atom(toks: _Tokens) -> Term | None:
    tok = toks.peek()
    if tok is None:
        return None
    if tok == "(":
        toks.pop()
        term = _parse_term(toks)
        toks.expect(")")
        return term
    if _is_ident(tok):
        toks.pop()
        return Var(tok)
    return None


def _parse_term(toks: _Tokens) -> Term:
    if toks.peek() in _LAMBDA_TOKENS:
        return _parse_abs(toks)
    term = _parse_atom(toks)
    if term is None:
        raise ParseError(f"expected a term, found {toks.peek()!r}", toks.position())
    while True:
        if toks.peek() in _LAMBDA_TOKENS:
            # Trailing abstraction swallows the rest: f x \y. y
            return App(term, _parse_abs(toks))
        arg = _parse_atom(toks)
        if arg is None:
            return term
        term = App(term, arg)


def parse(text: str) -> Term:
    toks = _Tokens(text)
    term = _parse_term(toks)
    if toks.peek() is not None:
        raise ParseError(f"trailing input {toks.peek()!r}", toks.position())
    return term


def _pp(t: Term, *, fun_side: bool, arg_side: bool, trailing: bool) -> str:
    # fun_side: function position of an application; arg_side: argument
    # position; trailing: nothing follows this subterm, so a bare
    # abstraction cannot swallow foreign tokens.
    match t:
        case Var(name):
            return name
        case Lam(param, body):
            s = f"\\{param}. {_pp(body, fun_side=False, arg_side=False, trailing=True)}"
            if fun_side or (arg_side and not trailing):
                return f"({s})"
            return s
        case App(fun, arg):
            s = (
                _pp(fun, fun_side=True, arg_side=False, trailing=False)
                + " "
                + _pp(arg, fun_side=False, arg_side=True, trailing=trailing)
            )
            if arg_side:
                return f"({s})"
            return s
    raise TypeError(f"not a term: {t!r}")


def print_term(t: Term) -> str:
    """Minimal-parentheses rendering; parse(print_term(t)) == t."""
    return _pp(t, fun_side=False, arg_side=False, trailing=True)
