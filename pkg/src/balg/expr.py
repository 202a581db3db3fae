"""Text grammar for elements and place functions.

Element grammar: literals ``{1,3}`` (powerset atom indices, 1-based),
``fin{0,2}`` / ``cof{1}`` (finite-cofinite), constants ``0`` and ``1``;
operators ``!`` (complement, prefix), ``&`` (meet), ``(+)`` (disjoint sum),
``|`` (join), with precedence ``!`` > ``&`` > ``(+)`` > ``|``; parentheses.
Over a free product the literal ``rect(A_EXPR,B_EXPR)`` denotes a rectangle.

Place functions read and print as ``2*chi({1,2}) + 3*chi({2,3})`` with
exact rational coefficients ``p/q``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .algebra import Algebra, Elem, FINITE_COFINITE, POWERSET
from .free_product import FreeProduct, RectForm, _canonical
from . import places

Backend = Union[Algebra, FreeProduct]


class ExprError(ValueError):
    """Malformed expression text."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_PUNCT = {"&": "AMP", "|": "PIPE", "!": "BANG", "(": "LPAREN", ")": "RPAREN",
          "{": "LBRACE", "}": "RBRACE", ",": "COMMA", "*": "STAR",
          "+": "PLUS", "-": "MINUS", "/": "SLASH"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("(+)", i):
            out.append(("OPLUS", "(+)", i))
            i += 3
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("NUM", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            out.append(("NAME", text[i:j], i))
            i = j
            continue
        kind = _PUNCT.get(ch)
        if kind is None:
            raise ExprError(f"unexpected character {ch!r}", i)
        out.append((kind, ch, i))
        i += 1
    out.append(("EOF", "", n))
    return out


class _Parser:
    """Recursive descent over a shared token stream; the backend travels as
    an argument so rect(...) can switch context for its two sides."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ExprError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    # element grammar, loosest binding first
    def element(self, backend: Backend):
        x = self.xor_level(backend)
        while self.peek()[0] == "PIPE":
            self.next()
            x = x | self.xor_level(backend)
        return x

    def xor_level(self, backend: Backend):
        x = self.and_level(backend)
        while self.peek()[0] == "OPLUS":
            self.next()
            x = x ^ self.and_level(backend)
        return x

    def and_level(self, backend: Backend):
        x = self.unary(backend)
        while self.peek()[0] == "AMP":
            self.next()
            x = x & self.unary(backend)
        return x

    def unary(self, backend: Backend):
        if self.peek()[0] == "BANG":
            self.next()
            return ~self.unary(backend)
        return self.primary(backend)

    def primary(self, backend: Backend):
        kind, value, pos = self.next()
        if kind == "LPAREN":
            x = self.element(backend)
            self.expect("RPAREN")
            return x
        if kind == "NUM" and value == "0":
            return backend.zero
        if kind == "NUM" and value == "1":
            return backend.one
        if kind == "LBRACE":
            atoms = self._numbers()
            self.expect("RBRACE")
            if not isinstance(backend, Algebra) or backend.kind != POWERSET or backend.trivial:
                raise ExprError("{...} literal outside a nontrivial powerset algebra", pos)
            return backend.subset(atoms)
        if kind == "NAME" and value in ("fin", "cof"):
            self.expect("LBRACE")
            support = self._numbers()
            self.expect("RBRACE")
            if not isinstance(backend, Algebra) or backend.kind != FINITE_COFINITE:
                raise ExprError(f"{value}{{...}} literal outside a finite_cofinite algebra", pos)
            return backend.fin(support) if value == "fin" else backend.cof(support)
        if kind == "NAME" and value == "rect":
            if not isinstance(backend, FreeProduct):
                raise ExprError("rect(...) literal outside a free product", pos)
            self.expect("LPAREN")
            left = self.element(backend.left)
            self.expect("COMMA")
            right = self.element(backend.right)
            self.expect("RPAREN")
            return backend.rect(left, right)
        raise ExprError(f"unexpected token {value!r}", pos)

    def _numbers(self) -> list[int]:
        out = []
        if self.peek()[0] == "NUM":
            out.append(int(self.next()[1]))
            while self.peek()[0] == "COMMA":
                self.next()
                out.append(int(self.expect("NUM")[1]))
        return out

    # place-function grammar
    def place(self, backend: Backend) -> "places.PlaceFunction":
        if self.peek()[0] == "NUM" and self.peek()[1] == "0" and \
                self.tokens[self.pos + 1][0] == "EOF":
            self.next()
            return places.zero(backend)
        terms = [self.place_term(backend, Fraction(1))]
        while self.peek()[0] in ("PLUS", "MINUS"):
            sign = Fraction(1) if self.next()[0] == "PLUS" else Fraction(-1)
            terms.append(self.place_term(backend, sign))
        return places.canonicalize(backend, terms)

    def place_term(self, backend: Backend, sign: Fraction):
        if self.peek()[0] == "MINUS":
            self.next()
            sign = -sign
        kind, value, _ = self.peek()
        coeff = Fraction(1)
        if kind == "NUM":
            self.next()
            num = int(value)
            den = 1
            if self.peek()[0] == "SLASH":
                self.next()
                den = int(self.expect("NUM")[1])
            coeff = Fraction(num, den)
            self.expect("STAR")
        tok = self.expect("NAME")
        if tok[1] != "chi":
            raise ExprError(f"expected chi, found {tok[1]!r}", tok[2])
        self.expect("LPAREN")
        x = self.element(backend)
        self.expect("RPAREN")
        return (sign * coeff, x)

    def finish(self, value):
        self.expect("EOF")
        return value


def parse_element(backend: Backend, text: str):
    """Parse an element expression against a backend."""
    p = _Parser(text)
    return p.finish(p.element(backend))


def parse_place(backend: Backend, text: str) -> "places.PlaceFunction":
    p = _Parser(text)
    return p.finish(p.place(backend))


# -- serialization -------------------------------------------------------------


def elem_text(x: Elem) -> str:
    alg = x.alg
    if x == alg.zero:
        return "0"
    if x == alg.one:
        return "1"
    if alg.kind == POWERSET:
        atoms = [str(i + 1) for i in range(alg.atom_count) if x.data >> i & 1]
        return "{" + ",".join(atoms) + "}"
    mode, support = x.data
    return mode + "{" + ",".join(str(n) for n in support) + "}"


def rect_text(x: RectForm) -> str:
    """Disjoint-rectangle text form, parseable by the rect grammar."""
    if x.is_zero():
        return "0"
    if x == x.fp.one:
        return "1"
    parts = [f"rect({elem_text(r.left)},{elem_text(r.right)})"
             for r in x.decompose_disjoint()]
    return " | ".join(parts)


def element_text(x) -> str:
    return rect_text(x) if isinstance(x, RectForm) else elem_text(x)


def grid_dict(x: RectForm) -> dict:
    """Report form of a grid: cell lists plus the activity matrix."""
    return {
        "left_cells": [elem_text(c) for c in x.left_cells],
        "right_cells": [elem_text(c) for c in x.right_cells],
        "matrix": [[bool(row >> j & 1) for j in range(len(x.right_cells))]
                   for row in x.rows],
    }


def rectform_from_grid(fp: FreeProduct, payload: dict) -> RectForm:
    """Rebuild an element from its report form."""
    left = [parse_element(fp.left, c) for c in payload["left_cells"]]
    right = [parse_element(fp.right, c) for c in payload["right_cells"]]
    rows = []
    for row in payload["matrix"]:
        m = 0
        for j, active in enumerate(row):
            if active:
                m |= 1 << j
        rows.append(m)
    return _canonical(fp, left, right, rows)


def place_text(f: "places.PlaceFunction") -> str:
    if not f.terms:
        return "0"
    parts = []
    for k, (coeff, support) in enumerate(f.terms):
        mag = abs(coeff)
        body = f"chi({element_text(support)})" if mag == 1 else \
            f"{mag}*chi({element_text(support)})"
        if k == 0:
            parts.append(("-" if coeff < 0 else "") + body)
        else:
            parts.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(parts)
