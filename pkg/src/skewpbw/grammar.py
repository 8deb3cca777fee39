"""Text grammar for bracket expressions and the canonical formatter.

Grammar (EBNF):

    expr      := ("+" | "-")? term (("+" | "-") term)*
    term      := factor ("*" factor | factor)*
    factor    := atom ("^" int)?
    atom      := "q" | "p" | rational | generator | "[" expr "," expr "]"
               | "(" expr ")"
    generator := x1 | x2 | x1- | x2- | g1 | g2 | f1 | f2
    rational  := int ("/" int)?

Juxtaposition means product.  Negative exponents are legal on q, p, group
generators and unit scalars only.  The tokens "x1-" and "x2-" require the
dash to be adjacent: "x1- x2" is a product while "x1 - x2" is a
difference, so whitespace around a binary minus is significant after x1/x2
(the canonical formatter always spaces binary operators).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebra import (
    Bicharacter,
    Element,
    G2,
    GROUP_NAMES,
    LETTER_NAMES,
    Monomial,
    UNIT_MONOMIAL,
    bracket,
    group_monomial,
    letter_monomial,
)
from .laurent import LaurentPoly


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at position {pos}"
        if expected:
            detail += " (expected one of: " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.pos = pos
        self.expected = expected


class EvalError(ValueError):
    pass


# -- AST ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Bracket:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Prod:
    factors: tuple["Node", ...]


@dataclass(frozen=True)
class Sum:
    signed_terms: tuple[tuple[int, "Node"], ...]


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Sym, Bracket, Prod, Sum, Pow]


# -- lexer ------------------------------------------------------------------

_GENERATORS = ("x1-", "x2-", "x1", "x2", "g1", "g2", "f1", "f2", "q", "p")
_PUNCT = {"[": "LBRACK", "]": "RBRACK", "(": "LPAREN", ")": "RPAREN",
          ",": "COMMA", "+": "PLUS", "-": "MINUS", "*": "STAR", "^": "CARET",
          "/": "SLASH"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NUM", text[i:j], i))
            i = j
            continue
        matched = None
        for name in _GENERATORS:
            if text.startswith(name, i):
                matched = name
                break
        if matched is not None:
            tokens.append(Token("GEN", matched, i))
            i += len(matched)
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(Token("EOF", "", n))
    return tokens


# -- parser -----------------------------------------------------------------

_ATOM_START = ("NUM", "GEN", "LBRACK", "LPAREN")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise ParseError(f"unexpected token {self.tok.text!r}", self.tok.pos, (kind,))
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "EOF":
            raise ParseError(f"trailing input {self.tok.text!r}", self.tok.pos, ("EOF",))
        return node

    def expr(self) -> Node:
        signed: list[tuple[int, Node]] = []
        sign = 1
        if self.tok.kind in ("PLUS", "MINUS"):
            sign = -1 if self.advance().kind == "MINUS" else 1
        signed.append((sign, self.term()))
        while self.tok.kind in ("PLUS", "MINUS"):
            sign = -1 if self.advance().kind == "MINUS" else 1
            signed.append((sign, self.term()))
        if len(signed) == 1 and signed[0][0] == 1:
            return signed[0][1]
        return Sum(tuple(signed))

    def term(self) -> Node:
        factors = [self.factor()]
        while True:
            if self.tok.kind == "STAR":
                self.advance()
                factors.append(self.factor())
            elif self.tok.kind in _ATOM_START:
                factors.append(self.factor())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return Prod(tuple(factors))

    def factor(self) -> Node:
        base = self.atom()
        if self.tok.kind == "CARET":
            self.advance()
            neg = False
            if self.tok.kind == "MINUS":
                self.advance()
                neg = True
            t = self.expect("NUM")
            expo = int(t.text)
            return Pow(base, -expo if neg else expo)
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            value = Fraction(int(t.text))
            if self.tok.kind == "SLASH":
                self.advance()
                d = self.expect("NUM")
                if int(d.text) == 0:
                    raise ParseError("zero denominator", d.pos)
                value = Fraction(int(t.text), int(d.text))
            return Num(value)
        if t.kind == "GEN":
            self.advance()
            return Sym(t.text)
        if t.kind == "LBRACK":
            self.advance()
            left = self.expr()
            self.expect("COMMA")
            right = self.expr()
            self.expect("RBRACK")
            return Bracket(left, right)
        if t.kind == "LPAREN":
            self.advance()
            inner = self.expr()
            self.expect("RPAREN")
            return inner
        raise ParseError(f"unexpected token {t.text!r}", t.pos, _ATOM_START)


def parse_ast(text: str) -> Node:
    return _Parser(_tokenize(text)).parse()


# -- evaluation ---------------------------------------------------------------

_GROUP_INDEX = {name: i for i, name in enumerate(GROUP_NAMES)}
_LETTER_INDEX = {name: i for i, name in enumerate(LETTER_NAMES)}


def _eval(node: Node, bc: Bicharacter) -> Element:
    if isinstance(node, Num):
        return Element.scalar(LaurentPoly.rational(node.value))
    if isinstance(node, Sym):
        if node.name == "q":
            return Element.scalar(LaurentPoly.q())
        if node.name == "p":
            return Element.scalar(LaurentPoly.p())
        if node.name in _GROUP_INDEX:
            grp = [0, 0, 0, 0]
            grp[_GROUP_INDEX[node.name]] = 1
            return Element.group(tuple(grp))
        return Element.letter(_LETTER_INDEX[node.name])
    if isinstance(node, Bracket):
        return bracket(_eval(node.left, bc), _eval(node.right, bc), bc)
    if isinstance(node, Prod):
        out = Element.one()
        for f in node.factors:
            out = out.mul(_eval(f, bc), bc)
        return out
    if isinstance(node, Sum):
        out = Element.zero()
        for sign, term in node.signed_terms:
            e = _eval(term, bc)
            out = out + (e if sign > 0 else -e)
        return out
    if isinstance(node, Pow):
        base = _eval(node.base, bc)
        if node.exponent >= 0:
            return base.power(node.exponent, bc)
        if len(base.terms) != 1:
            raise EvalError("negative power of a non-invertible element")
        ((mono, coeff),) = base.terms.items()
        if mono.word:
            raise EvalError("negative power of a letter-containing element")
        inv_c = coeff.inverse()
        if inv_c is None:
            raise EvalError("negative power of a non-unit coefficient")
        inv_grp = tuple(-g for g in mono.grp)
        inv = Element.from_monomial(Monomial(inv_grp, ()), inv_c)
        return inv.power(-node.exponent, bc)
    raise TypeError(f"unknown AST node {node!r}")


def parse(text: str, bc: Bicharacter = G2) -> Element:
    """Parse and evaluate an expression into a normal-ordered Element."""
    return _eval(parse_ast(text), bc)


# -- canonical formatting ------------------------------------------------------


def _coeff_pieces(c: LaurentPoly) -> tuple[int, Optional[str]]:
    """(sign, text or None) for a coefficient in front of a monomial part."""
    if c.is_monomial:
        ((eq, ep), v), = c.terms.items()
        v = Fraction(v)
        sign = -1 if v < 0 else 1
        v = abs(v)
        bits = []
        if eq:
            bits.append("q" if eq == 1 else f"q^{eq}")
        if ep:
            bits.append("p" if ep == 1 else f"p^{ep}")
        if v != 1 or not bits:
            bits.insert(0, str(v))
        return sign, "*".join(bits)
    return 1, None  # multi-term coefficients are parenthesized separately


def _monomial_body(m: Monomial) -> str:
    bits: list[str] = []
    for idx, e in enumerate(m.grp):
        if e == 0:
            continue
        bits.append(GROUP_NAMES[idx] if e == 1 else f"{GROUP_NAMES[idx]}^{e}")
    bits.extend(LETTER_NAMES[letter] for letter in m.word)
    return " ".join(bits)


def format_element(a: Element) -> str:
    """Deterministic canonical rendering; parse(format_element(a)) == a."""
    if a.is_zero:
        return "0"
    chunks: list[str] = []
    for m, c in a.sorted_terms():
        body = _monomial_body(m)
        sign, ctext = _coeff_pieces(c)
        if ctext is None:
            piece = f"({c.text()})"
            if body:
                piece += " " + body
            sign = 1
        else:
            if body:
                piece = body if ctext == "1" else f"{ctext} {body}"
            else:
                piece = ctext
        if not chunks:
            chunks.append(piece if sign > 0 else "-" + piece)
        else:
            chunks.append(("+ " if sign > 0 else "- ") + piece)
    return " ".join(chunks)
