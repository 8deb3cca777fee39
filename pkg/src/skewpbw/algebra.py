"""The free skew group algebra H<X u X^-> on four letters over a rank-4 group.

Letters are x1, x2 and their negative partners x1-, x2-.  The group H is
free abelian on (g1, g2, f1, f2); a monomial is a group word followed by a
letter word, kept in that canonical order.  Letters commute past group
elements through a bicharacter: each letter carries a character of H whose
values are unit Laurent monomials in (q, p).

Only the type-G2 bicharacter ships (p11 = q^3, p22 = q, p12 = p,
p21 = q^-3 p^-1); the table is nevertheless data, derived from a Cartan
matrix, so every operation takes it as a defaulted argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .laurent import LaurentPoly

# Letter codes.  Order encodes x1 > x2 > x1- > x2-.
X1, X2, X1N, X2N = 0, 1, 2, 3
LETTER_NAMES = ("x1", "x2", "x1-", "x2-")
POSITIVE_LETTERS = (X1, X2)
NEGATIVE_LETTERS = (X1N, X2N)

# Group generator indices over the ordered basis (g1, g2, f1, f2).
GROUP_NAMES = ("g1", "g2", "f1", "f2")
GROUP_ID = (0, 0, 0, 0)

# Image of each letter in H: x_i -> g_i, x_i- -> f_i.
_LETTER_GROUP_INDEX = (0, 1, 2, 3)

Exp = tuple[int, int]
GroupWord = tuple[int, int, int, int]
Word = tuple[int, ...]


class Bicharacter:
    """Character table for the four letters against the four H generators.

    ``chi[letter][h]`` holds the (e_q, e_p) exponents of the character of
    the letter evaluated at the h-th group generator; negative letters use
    inverse characters.
    """

    def __init__(self, pexp: tuple[tuple[Exp, Exp], tuple[Exp, Exp]]):
        self.pexp = pexp
        p11, p12 = pexp[0]
        p21, p22 = pexp[1]
        # chi^i at (g1, g2, f1, f2) = (p_i1, p_i2, p_1i, p_2i)
        chi1 = (p11, p12, p11, p21)
        chi2 = (p21, p22, p12, p22)
        neg1 = tuple((-a, -b) for a, b in chi1)
        neg2 = tuple((-a, -b) for a, b in chi2)
        self.chi = (chi1, chi2, neg1, neg2)

    @staticmethod
    def from_cartan(cartan, d) -> "Bicharacter":
        a12 = cartan[0][1]
        a21 = cartan[1][0]
        if d[0] * a12 != d[1] * a21:
            raise ValueError("Cartan matrix not symmetrized by d")
        p11 = (d[0], 0)
        p22 = (d[1], 0)
        p12 = (0, 1)
        p21 = (d[0] * a12, -1)  # so p12 * p21 = q^(d1*a12)
        return Bicharacter(((p11, p12), (p21, p22)))

    def p_value(self, i: int, j: int) -> LaurentPoly:
        eq, ep = self.pexp[i][j]
        return LaurentPoly.monomial(1, eq, ep)

    def word_character(self, word: Word) -> tuple[Exp, Exp, Exp, Exp]:
        """Exponent table of the product character of a letter word."""
        acc = [(0, 0), (0, 0), (0, 0), (0, 0)]
        for letter in word:
            row = self.chi[letter]
            acc = [(a[0] + b[0], a[1] + b[1]) for a, b in zip(acc, row)]
        return tuple(acc)


G2 = Bicharacter.from_cartan(((2, -1), (-3, 2)), (3, 1))


class Monomial(NamedTuple):
    grp: GroupWord
    word: Word

    def constitution(self) -> tuple[int, int, int, int]:
        n1 = n2 = m1 = m2 = 0
        for letter in self.word:
            if letter == X1:
                n1 += 1
            elif letter == X2:
                n2 += 1
            elif letter == X1N:
                m1 += 1
            else:
                m2 += 1
        return (n1, n2, m1, m2)

    def gamma_degree(self) -> tuple[int, int]:
        n1, n2, m1, m2 = self.constitution()
        return (n1 - m1, n2 - m2)

    def group_image_of_word(self) -> GroupWord:
        acc = [0, 0, 0, 0]
        for letter in self.word:
            acc[_LETTER_GROUP_INDEX[letter]] += 1
        return tuple(acc)


UNIT_MONOMIAL = Monomial(GROUP_ID, ())


def letter_monomial(letter: int) -> Monomial:
    return Monomial(GROUP_ID, (letter,))


def group_monomial(grp: GroupWord) -> Monomial:
    return Monomial(tuple(grp), ())


def monomial_sort_key(m: Monomial):
    """Sort key realizing the canonical descending term order.

    Primary: constitution in the left-to-right degree order with
    x1 > x2 > x1- > x2- (larger degree first).  Then group exponents in
    ascending lex (so the identity component prints first), then the word
    in the lexicographic order where a proper prefix is greater.
    """
    c = m.constitution()
    return (tuple(-v for v in c), m.grp, m.word)


def pairing(m1: Monomial, m2: Monomial, bc: Bicharacter = G2) -> LaurentPoly:
    """Bicharacter pairing: character of m1's word at m2's full group image."""
    chi = bc.word_character(m1.word)
    himg = m2.group_image_of_word()
    eq = ep = 0
    for k in range(4):
        mult = m2.grp[k] + himg[k]
        if mult:
            eq += chi[k][0] * mult
            ep += chi[k][1] * mult
    return LaurentPoly.monomial(1, eq, ep)


def _mul_monomials(m1: Monomial, m2: Monomial, bc: Bicharacter) -> tuple[LaurentPoly, Monomial]:
    """(scalar, monomial) with the group part of m2 commuted leftward."""
    if m2.grp == GROUP_ID or not m1.word:
        scalar = LaurentPoly.one()
    else:
        chi = bc.word_character(m1.word)
        eq = ep = 0
        for k in range(4):
            mult = m2.grp[k]
            if mult:
                eq += chi[k][0] * mult
                ep += chi[k][1] * mult
        scalar = LaurentPoly.monomial(1, eq, ep)
    grp = tuple(a + b for a, b in zip(m1.grp, m2.grp))
    return scalar, Monomial(grp, m1.word + m2.word)


class Element:
    """Sparse linear combination of monomials with LaurentPoly coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, LaurentPoly] | None = None, *, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {m: c for m, c in terms.items() if not c.is_zero}
        self.terms = terms

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero() -> "Element":
        return Element({}, _clean=True)

    @staticmethod
    def one() -> "Element":
        return Element({UNIT_MONOMIAL: LaurentPoly.one()}, _clean=True)

    @staticmethod
    def from_monomial(m: Monomial, coeff: LaurentPoly | None = None) -> "Element":
        coeff = LaurentPoly.one() if coeff is None else coeff
        return Element({m: coeff})

    @staticmethod
    def scalar(c: LaurentPoly) -> "Element":
        return Element({UNIT_MONOMIAL: c})

    @staticmethod
    def letter(letter: int) -> "Element":
        return Element.from_monomial(letter_monomial(letter))

    @staticmethod
    def group(grp: GroupWord) -> "Element":
        return Element.from_monomial(group_monomial(grp))

    # -- linear structure -------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(m, None)
            else:
                out[m] = s
        return Element(out, _clean=True)

    def __neg__(self) -> "Element":
        return Element({m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: LaurentPoly) -> "Element":
        if c.is_zero or self.is_zero:
            return Element.zero()
        return Element({m: v * c for m, v in self.terms.items()}, _clean=True)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- multiplicative structure ------------------------------------------
    def mul(self, other: "Element", bc: Bicharacter = G2) -> "Element":
        out: dict[Monomial, LaurentPoly] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                scalar, m = _mul_monomials(m1, m2, bc)
                c = c1 * c2 * scalar
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Element(out, _clean=True)

    def __mul__(self, other: "Element") -> "Element":
        return self.mul(other)

    def power(self, n: int, bc: Bicharacter = G2) -> "Element":
        if n < 0:
            raise ValueError("negative powers are handled by the expression layer")
        out = Element.one()
        for _ in range(n):
            out = out.mul(self, bc)
        return out

    # -- grading -----------------------------------------------------------
    def gamma_degree(self) -> Optional[tuple[int, int]]:
        """Common signed degree of all monomials, or None when inhomogeneous."""
        deg = None
        for m in self.terms:
            d = m.gamma_degree()
            if deg is None:
                deg = d
            elif deg != d:
                return None
        return deg if deg is not None else (0, 0)

    def sorted_terms(self) -> list[tuple[Monomial, LaurentPoly]]:
        return sorted(self.terms.items(), key=lambda kv: monomial_sort_key(kv[0]))

    def __repr__(self) -> str:
        from .grammar import format_element

        return f"Element({format_element(self)!r})"


def bracket(a: Element, b: Element, bc: Bicharacter = G2) -> Element:
    """Skew commutator [a, b] = ab - p(a, b) ba, extended monomial-pairwise."""
    out: dict[Monomial, LaurentPoly] = {}

    def acc(m, c):
        s = out.get(m)
        s = c if s is None else s + c
        if s.is_zero:
            out.pop(m, None)
        else:
            out[m] = s

    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            c = c1 * c2
            s12, m12 = _mul_monomials(m1, m2, bc)
            acc(m12, c * s12)
            s21, m21 = _mul_monomials(m2, m1, bc)
            acc(m21, -(c * s21 * pairing(m1, m2, bc)))
    return Element(out, _clean=True)


class TensorElement:
    """Sparse element of the tensor square, with legwise multiplication."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[Monomial, Monomial], LaurentPoly] | None = None, *, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {k: c for k, c in terms.items() if not c.is_zero}
        self.terms = terms

    @staticmethod
    def zero() -> "TensorElement":
        return TensorElement({}, _clean=True)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(k, None)
            else:
                out[k] = s
        return TensorElement(out, _clean=True)

    def scale(self, c: LaurentPoly) -> "TensorElement":
        if c.is_zero:
            return TensorElement.zero()
        return TensorElement({k: v * c for k, v in self.terms.items()}, _clean=True)

    def mul(self, other: "TensorElement", bc: Bicharacter = G2) -> "TensorElement":
        out: dict[tuple[Monomial, Monomial], LaurentPoly] = {}
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                sl, ml = _mul_monomials(l1, l2, bc)
                sr, mr = _mul_monomials(r1, r2, bc)
                c = c1 * c2 * sl * sr
                key = (ml, mr)
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = s
        return TensorElement(out, _clean=True)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))


_LETTER_COPRODUCT_GROUP = {
    X1: (1, 0, 0, 0),
    X2: (0, 1, 0, 0),
    X1N: (0, 0, 1, 0),
    X2N: (0, 0, 0, 1),
}


def coproduct(a: Element, bc: Bicharacter = G2) -> TensorElement:
    """Algebra morphism with Delta(x) = x (x) 1 + h_x (x) x and groups group-like."""
    total = TensorElement.zero()
    for m, c in a.terms.items():
        grp_mono = group_monomial(m.grp)
        acc = TensorElement({(grp_mono, grp_mono): LaurentPoly.one()})
        for letter in m.word:
            lm = letter_monomial(letter)
            hm = group_monomial(_LETTER_COPRODUCT_GROUP[letter])
            delta = TensorElement(
                {
                    (lm, UNIT_MONOMIAL): LaurentPoly.one(),
                    (hm, lm): LaurentPoly.one(),
                }
            )
            acc = acc.mul(delta, bc)
        total = total + acc.scale(c)
    return total


def counit(a: Element) -> LaurentPoly:
    """Counit: kills letters, sends group elements to 1."""
    total = LaurentPoly.zero()
    for m, c in a.terms.items():
        if not m.word:
            total = total + c
    return total


def gamma_degree(a: Element) -> Optional[tuple[int, int]]:
    return a.gamma_degree()


def mirror_letter(letter: int) -> int:
    """x_i <-> x_i- swap."""
    return {X1: X1N, X2: X2N, X1N: X1, X2N: X2}[letter]
