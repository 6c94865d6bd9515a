"""Recursive-descent parser for polynomial and operator text.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*      # '/' only by a rational literal
    factor := ('-' | '+') factor | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NAME | '(' expr ')'

Products are composed left to right, so ``d1*x1`` is the operator d/dx1 after
multiplication by x1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex) if m.lastindex else pos
        if num is not None:
            out.append(("num", num, start))
        elif name is not None:
            out.append(("name", name, start))
        elif sym is not None:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}", text, start)
            out.append(("op", sym, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, atom: Callable[[str], object], const: Callable[[Fraction], object]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.atom_fn = atom
        self.const_fn = const

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self):
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            if op == "/":
                t = self.peek()
                if t[0] != "num":
                    self.error("division only by an integer literal")
                d = int(self.take()[1])
                if d == 0:
                    self.error("division by zero")
                v = v * Fraction(1, d)
            else:
                v = v * self.factor()
        return v

    def factor(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.factor()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.peek()
            if t[0] != "num":
                self.error("exponent must be a non-negative integer")
            v = v ** int(self.take()[1])
        return v

    def atom(self):
        t = self.peek()
        if t[0] == "num":
            self.take()
            return self.const_fn(Fraction(int(t[1])))
        if t[0] == "name":
            self.take()
            try:
                return self.atom_fn(t[1])
            except (KeyError, IndexError) as exc:
                raise ParseError(f"unknown name {t[1]!r}", self.text, t[2]) from exc
        if t[0] == "op" and t[1] == "(":
            self.take()
            v = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return v
        self.error("expected a number, name or '('")


def parse_expression(text: str, atom: Callable[[str], object], const: Callable[[Fraction], object]):
    return _Parser(text, atom, const).parse()


def variable_index(name: str, nvars: int) -> int | None:
    """1-based index for ``x1..xN`` (or ``x,y,z`` when N <= 3); None otherwise."""
    if nvars <= 3 and name in ("x", "y", "z")[:nvars]:
        return "xyz".index(name) + 1
    m = re.fullmatch(r"x(\d+)", name)
    if m and 1 <= int(m.group(1)) <= nvars:
        return int(m.group(1))
    return None


def derivation_index(name: str, nvars: int) -> int | None:
    """1-based index for ``d1..dN`` (or ``dx,dy,dz`` when N <= 3)."""
    if nvars <= 3 and name in ("dx", "dy", "dz")[:nvars]:
        return "xyz".index(name[1]) + 1
    m = re.fullmatch(r"d(\d+)", name)
    if m and 1 <= int(m.group(1)) <= nvars:
        return int(m.group(1))
    return None


def parse_poly(text: str, nvars: int):
    from .exact import Poly

    def atom(name: str):
        i = variable_index(name, nvars)
        if i is None:
            raise KeyError(name)
        return Poly.var(nvars, i)

    v = parse_expression(text, atom, lambda c: Poly.const(nvars, c))
    return v


def infer_nvars(text: str) -> int:
    """Smallest variable count under which every name in ``text`` is known."""
    names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text))
    n = 1
    for name in names:
        m = re.fullmatch(r"d?x(\d+)|d(\d+)", name)
        if m:
            n = max(n, int(m.group(1) or m.group(2)))
        elif name in ("y", "dy"):
            n = max(n, 2)
        elif name in ("z", "dz"):
            n = max(n, 3)
    return n
