"""Small closed-form expression grammar used by experiment configs.

Grammar (recursive descent):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?          # right-associative power
    unary  := '-' unary | atom
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Identifiers are the chart coordinates x1..xd (and fiber coordinates y1..yd
where an SM function is expected); the only functions are sin, cos, exp.
Expressions compile to closure trees and evaluate on anything the dual-number
arithmetic accepts: floats, numpy arrays, nested duals.
"""

from __future__ import annotations

import re

from . import dual as dm
from .errors import InputError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
                    r"|\d+(?:[eE][+-]?\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*)|([-+*/^()]))")

_FUNCTIONS = {"sin": dm.sin, "cos": dm.cos, "exp": dm.exp}


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            if src[pos:].strip() == "":
                break
            raise InputError(f"bad character in expression at position {pos}: {src[pos:]!r}")
        num, ident, dstar, op = m.groups()
        if num is not None:
            tokens.append(("num", float(num)))
        elif ident is not None:
            tokens.append(("ident", ident))
        elif dstar is not None:
            tokens.append(("op", "^"))
        else:
            tokens.append(("op", op))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None, val=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise InputError(f"expected {kind}, got {tok}")
        if val is not None and tok[1] != val:
            raise InputError(f"expected {val!r}, got {tok}")
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda f, g: (lambda env: f(env) + g(env)))(node, rhs) if op == "+" \
                else (lambda f, g: (lambda env: f(env) - g(env)))(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            op = self.take()[1]
            rhs = self.factor()
            node = (lambda f, g: (lambda env: f(env) * g(env)))(node, rhs) if op == "*" \
                else (lambda f, g: (lambda env: f(env) / g(env)))(node, rhs)
        return node

    def factor(self):
        base = self.unary()
        if self.peek() == ("op", "^"):
            self.take()
            expo = self.factor()
            return (lambda f, g: (lambda env: f(env) ** g(env)))(base, expo)
        return base

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return (lambda f: (lambda env: -f(env)))(inner)
        return self.atom()

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return (lambda c: (lambda env: c))(val)
        if kind == "ident":
            self.take()
            if self.peek() == ("op", "("):
                if val not in _FUNCTIONS:
                    raise InputError(f"unknown function {val!r} (have: {sorted(_FUNCTIONS)})")
                self.take()
                arg = self.expr()
                self.take("op", ")")
                return (lambda fn, f: (lambda env: fn(f(env))))(_FUNCTIONS[val], arg)
            if val not in self.variables:
                raise InputError(f"unknown identifier {val!r} (have: {sorted(self.variables)})")
            return (lambda n: (lambda env: env[n]))(val)
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise InputError(f"unexpected token {(kind, val)!r}")


class Expression:
    """A compiled expression; call with an env dict of variable values."""

    def __init__(self, source, variables, node):
        self.source = source
        self.variables = tuple(variables)
        self._node = node

    def __call__(self, env):
        return self._node(env)

    def __repr__(self):
        return f"Expression({self.source!r})"


def parse_expression(source, variables):
    """Compile ``source`` over the allowed variable names."""
    parser = _Parser(_tokenize(source), set(variables))
    node = parser.expr()
    parser.take("end")
    return Expression(source, variables, node)


def coordinate_names(dim, fiber=False):
    names = [f"x{i + 1}" for i in range(dim)]
    if fiber:
        names += [f"y{i + 1}" for i in range(dim)]
    return names
