import random
from fractions import Fraction

import pytest

from skewpbw.algebra import (
    Element,
    GROUP_ID,
    Monomial,
    X1,
    X1N,
    X2,
    X2N,
    bracket,
)
from skewpbw.grammar import EvalError, ParseError, format_element, parse
from skewpbw.laurent import LaurentPoly

Q = LaurentPoly.q
P = LaurentPoly.p
ONE = LaurentPoly.one()


def elem(word, grp=GROUP_ID, coeff=None):
    return Element.from_monomial(Monomial(tuple(grp), tuple(word)), coeff)


class TestParse:
    def test_bracket_definition(self):
        x1 = Element.letter(X1)
        x2 = Element.letter(X2)
        assert parse("[x1,x2]") == x1 * x2 - (x2 * x1).scale(P())
        assert parse("[x2,x1]") == x2 * x1 - (x1 * x2).scale(LaurentPoly.monomial(1, -3, -1))

    def test_normal_ordering_evaluation(self):
        got = parse("(1 - q^-3) * x2- * g1 * f1")
        assert got == elem([X2N], (0, 0, 1, 0), LaurentPoly.zero()) + elem(
            [X2N], (1, 0, 1, 0), Q(3) - ONE
        )

    def test_whitespace_insensitive_within_tokens(self):
        assert parse("[x1,x2]") == parse(" [ x1 , x2 ] ")
        assert parse("q^-3p^-1x2-") == parse("q^-3 p^-1 x2-")

    def test_adjacent_dash_is_negative_letter(self):
        # "x1- x2" is a product; "x1 - x2" is a difference.
        assert parse("x1- x2") == Element.letter(X1N) * Element.letter(X2)
        assert parse("x1 - x2") == Element.letter(X1) - Element.letter(X2)

    def test_rationals_and_powers(self):
        assert parse("-1/2*q^-1*p^2") == Element.scalar(
            LaurentPoly.monomial(Fraction(-1, 2), -1, 2)
        )
        assert parse("g1^-2 f2^3") == Element.group((-2, 0, 0, 3))
        assert parse("(x2-)^2") == Element.letter(X2N) * Element.letter(X2N)
        assert parse("[x1,x2]^2") == parse("[x1,x2] [x1,x2]")

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse("[[x1,x2")
        with pytest.raises(ParseError):
            parse("x1 +")
        with pytest.raises(ParseError):
            parse("x3")
        with pytest.raises(ParseError):
            parse("q^^2")
        err = None
        try:
            parse("[x1,")
        except ParseError as e:
            err = e
        assert err is not None and err.pos == 4

    def test_eval_errors(self):
        with pytest.raises(EvalError):
            parse("x1^-1")
        with pytest.raises(EvalError):
            parse("(1 + q)^-1")
        with pytest.raises(EvalError):
            parse("(x1 + x2)^-2")


class TestFormat:
    def test_examples(self):
        one = Element.one()
        g1f1 = Element.group((1, 0, 1, 0))
        assert format_element(one - g1f1) == "1 - g1 f1"
        assert format_element(Element.zero()) == "0"
        assert format_element(elem([X1], (1, 0, 0, 0), Q(3))) == "q^3 g1 x1"

    def test_multiterm_coefficient_parenthesized(self):
        e = elem([X2N], coeff=ONE - Q(-3))
        text = format_element(e)
        assert text == "(1 - q^-3) x2-"
        assert parse(text) == e

    def test_roundtrip_random(self):
        rng = random.Random(4242)
        letters = (X1, X2, X1N, X2N)
        for _ in range(200):
            terms = {}
            for _ in range(rng.randint(0, 4)):
                word = tuple(rng.choice(letters) for _ in range(rng.randint(0, 5)))
                grp = tuple(rng.randint(-2, 2) for _ in range(4))
                coeff = LaurentPoly(
                    {
                        (rng.randint(-3, 3), rng.randint(-2, 2)): Fraction(
                            rng.randint(-6, 6), rng.randint(1, 4)
                        )
                        for _ in range(rng.randint(1, 3))
                    }
                )
                if coeff.is_zero:
                    continue
                terms[Monomial(grp, word)] = coeff
            e = Element(terms)
            assert parse(format_element(e)) == e

    def test_roundtrip_after_bracket(self):
        e = bracket(parse("[x1,x2]"), parse("[x2-,[x2-,x1-]]"))
        assert parse(format_element(e)) == e
