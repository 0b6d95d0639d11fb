"""Structure-equation notation: ``(0,0,0,0,e12,e13,0)`` and single forms like ``e127-1/2e34``.

Indices are single digits, so ambient dimensions stop at 9.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exterior import MAX_DIM, AltForm, render
from .liealg import LieAlgebra

_MINUS = "-−"


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, text: str = ""):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    indices: tuple  # 1-based, as written


@dataclass(frozen=True)
class StructureTuple:
    dim: int
    entries: tuple  # tuple of tuples of Term


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        col = pos - (before.rfind("\n") + 1) + 1
        return line, col

    def fail(self, msg, pos=None):
        line, col = self.where(pos)
        raise ParseError(msg, line, col, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}, found {self.peek() or 'end of input'!r}")
        self.pos += 1

    def digits(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]


def _coefficient(lx: _Lexer) -> Fraction:
    start = lx.pos
    whole = lx.digits()
    if lx.pos < len(lx.text) and lx.text[lx.pos] == ".":
        lx.pos += 1
        frac = lx.digits()
        if not whole and not frac:
            lx.fail("malformed decimal coefficient", start)
        return Fraction(f"{whole or '0'}.{frac or '0'}")
    if not whole:
        return Fraction(1)
    if lx.pos < len(lx.text) and lx.text[lx.pos] == "/":
        lx.pos += 1
        den = lx.digits()
        if not den:
            lx.fail("missing denominator", lx.pos)
        if int(den) == 0:
            lx.fail("zero denominator", start)
        return Fraction(int(whole), int(den))
    return Fraction(int(whole))


def _term(lx: _Lexer, sign: int) -> Term:
    lx.skip()
    start = lx.pos
    c = _coefficient(lx)
    if lx.pos >= len(lx.text) or lx.text[lx.pos] != "e":
        if lx.pos > start and lx.text[start:lx.pos] == "0" and sign == 1:
            return Term(Fraction(0), ())
        lx.fail("expected a basis monomial 'e' followed by digits", lx.pos)
    lx.pos += 1
    at = lx.pos
    idx = lx.digits()
    if not idx:
        lx.fail("expected index digits after 'e'", at)
    if "0" in idx:
        lx.fail("basis indices start at 1", at + idx.index("0"))
    return Term(sign * c, tuple(int(ch) for ch in idx))


def _expression(lx: _Lexer, stop: str) -> tuple:
    terms = []
    sign = 1
    if lx.peek() and lx.peek() in _MINUS + "+":
        sign = 1 if lx.peek() == "+" else -1
        lx.pos += 1
    while True:
        lx.skip()
        start = lx.pos
        t = _term(lx, sign)
        if t.indices or t.coeff:
            terms.append(t)
        elif terms or sign != 1:
            lx.fail("stray '0' inside a sum", start)
        ch = lx.peek()
        if ch and ch in _MINUS + "+":
            if not terms:
                lx.fail("'0' cannot start a sum")
            sign = 1 if ch == "+" else -1
            lx.pos += 1
            continue
        if ch == "" or ch in stop:
            return tuple(terms)
        lx.fail(f"unexpected character {ch!r}")


def _validate_degree(lx: _Lexer, terms: tuple, degree: int | None, dim: int | None, pos: int) -> int | None:
    for t in terms:
        if degree is None:
            degree = len(t.indices)
        if len(t.indices) != degree:
            lx.fail(f"mixed degrees: expected {degree} indices, got {len(t.indices)}", pos)
        if len(set(t.indices)) != len(t.indices):
            lx.fail(f"repeated index in e{''.join(map(str, t.indices))}", pos)
        if dim is not None and max(t.indices) > dim:
            lx.fail(f"index {max(t.indices)} exceeds dimension {dim}", pos)
    return degree


def parse_tuple_ast(text: str) -> StructureTuple:
    lx = _Lexer(text)
    lx.take("(")
    entries = []
    starts = []
    while True:
        lx.skip()
        starts.append(lx.pos)
        entries.append(_expression(lx, ",)"))
        if lx.peek() == ",":
            lx.pos += 1
            continue
        lx.take(")")
        break
    if lx.peek():
        lx.fail("trailing input after ')'")
    dim = len(entries)
    if dim > MAX_DIM:
        lx.fail(f"dimension {dim} exceeds the single-digit limit {MAX_DIM}", 0)
    for terms, pos in zip(entries, starts):
        _validate_degree(lx, terms, 2, dim, pos)
    return StructureTuple(dim, tuple(entries))


def _to_form(dim: int, degree: int, terms: tuple) -> AltForm:
    return AltForm(dim, degree, {tuple(i - 1 for i in t.indices): t.coeff for t in terms})


def parse_structure_tuple(text: str, name: str | None = None, check: bool = True) -> LieAlgebra:
    ast = parse_tuple_ast(text)
    forms = [_to_form(ast.dim, 2, terms) for terms in ast.entries]
    return LieAlgebra(forms, name=name, check=check)


def parse_form(text: str, dim: int, degree: int | None = None) -> AltForm:
    """One form such as ``e7`` or ``e127+e347``; ``0`` requires ``degree``."""
    lx = _Lexer(text)
    lx.skip()
    terms = _expression(lx, "")
    if lx.peek():
        lx.fail("trailing input")
    deg = _validate_degree(lx, terms, degree, dim, 0)
    if deg is None:
        raise ParseError("cannot infer the degree of the zero form", 1, 1, text)
    return _to_form(dim, deg, terms)


def render_tuple(g: LieAlgebra) -> str:
    return "(" + ",".join(render(d) for d in g.differentials) + ")"


__all__ = [
    "ParseError",
    "StructureTuple",
    "Term",
    "parse_form",
    "parse_structure_tuple",
    "parse_tuple_ast",
    "render_tuple",
]
