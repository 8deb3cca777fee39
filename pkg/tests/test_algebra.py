import random

import pytest
from hypothesis import given, settings, strategies as st

from skewpbw.algebra import (
    Element,
    G2,
    GROUP_ID,
    Monomial,
    TensorElement,
    UNIT_MONOMIAL,
    X1,
    X1N,
    X2,
    X2N,
    bracket,
    coproduct,
    counit,
    gamma_degree,
    group_monomial,
    letter_monomial,
    mirror_letter,
    pairing,
)
from skewpbw.laurent import LaurentPoly

Q = LaurentPoly.q
P = LaurentPoly.p
ONE = LaurentPoly.one()

x1 = Element.letter(X1)
x2 = Element.letter(X2)
x1n = Element.letter(X1N)
x2n = Element.letter(X2N)
g1 = Element.group((1, 0, 0, 0))
g2 = Element.group((0, 1, 0, 0))
f1 = Element.group((0, 0, 1, 0))
f2 = Element.group((0, 0, 0, 1))


def mono(word, grp=GROUP_ID):
    return Monomial(tuple(grp), tuple(word))


def elem(word, grp=GROUP_ID, coeff=None):
    return Element.from_monomial(mono(word, grp), coeff)


letters_st = st.sampled_from([X1, X2, X1N, X2N])
words_st = st.lists(letters_st, min_size=0, max_size=4).map(tuple)
grps_st = st.tuples(*[st.integers(min_value=-2, max_value=2)] * 4)
monos_st = st.builds(lambda g, w: Monomial(g, w), grps_st, words_st)


class TestPairing:
    def test_table_values(self):
        assert pairing(mono([X1]), mono([X1])) == Q(3)
        assert pairing(mono([X2]), mono([X2])) == Q()
        assert pairing(mono([X1]), mono([X2])) == P()
        assert pairing(mono([X2]), mono([X1])) == LaurentPoly.monomial(1, -3, -1)

    def test_negative_slot_rules(self):
        # p(u, v-) = p_vu, p(u-, v) = p_uv^-1, p(u-, v-) = p_vu^-1
        assert pairing(mono([X1]), mono([X2N])) == LaurentPoly.monomial(1, -3, -1)
        assert pairing(mono([X2]), mono([X1N])) == P()
        assert pairing(mono([X1N]), mono([X2])) == P(-1)
        assert pairing(mono([X1N]), mono([X2N])) == LaurentPoly.monomial(1, 3, 1)

    def test_group_monomial_is_trivial_character(self):
        gm = mono([], (2, -1, 3, 0))
        assert pairing(gm, mono([X1, X2N], (1, 1, 1, 1))) == ONE

    @settings(max_examples=120, derandomize=True, deadline=None)
    @given(words_st, words_st, monos_st)
    def test_bimultiplicative_first_slot(self, w1, w2, m3):
        lhs = pairing(mono(w1 + w2), m3)
        rhs = pairing(mono(w1), m3) * pairing(mono(w2), m3)
        assert lhs == rhs

    @settings(max_examples=120, derandomize=True, deadline=None)
    @given(monos_st, words_st, words_st)
    def test_bimultiplicative_second_slot(self, m1, w2, w3):
        lhs = pairing(m1, mono(w2 + w3))
        rhs = pairing(m1, mono(w2)) * pairing(m1, mono(w3))
        assert lhs == rhs


class TestProduct:
    def test_normal_ordering_examples(self):
        assert x1 * g1 == elem([X1], (1, 0, 0, 0), Q(3))
        assert Element.one() * x1 == x1
        assert x2n * (g1 * f1) == elem([X2N], (1, 0, 1, 0), Q(3))

    def test_unit(self):
        e = elem([X1, X2N], (0, 1, 0, -1), Q(2))
        assert Element.one() * e == e
        assert e * Element.one() == e

    @settings(max_examples=150, derandomize=True, deadline=None)
    @given(monos_st, monos_st, monos_st)
    def test_associativity(self, m1, m2, m3):
        a, b, c = map(Element.from_monomial, (m1, m2, m3))
        assert (a * b) * c == a * (b * c)


class TestBracket:
    def test_definition_examples(self):
        assert bracket(x1, x2) == x1 * x2 - (x2 * x1).scale(P())
        assert bracket(x2, x1) == x2 * x1 - (x1 * x2).scale(LaurentPoly.monomial(1, -3, -1))
        assert bracket(g1, x1) == elem([X1], (1, 0, 0, 0), ONE - Q(3))

    def test_bracket_homogeneous(self):
        u = bracket(bracket(x1, x2), x2)
        assert gamma_degree(u) == (1, 2)
        v = bracket(u, x2n)
        assert gamma_degree(v) == (1, 1)

    @settings(max_examples=120, derandomize=True, deadline=None)
    @given(words_st, words_st, monos_st.filter(lambda m: len(m.word) <= 2))
    def test_bracket_degree_additive(self, w1, w2, m):
        a = elem(w1)
        b = Element.from_monomial(m)
        d1, d2 = mono(w1).gamma_degree(), m.gamma_degree()
        out = bracket(a, b)
        if not out.is_zero:
            assert gamma_degree(out) == (d1[0] + d2[0], d1[1] + d2[1])


def _random_word(rng, letters, max_len):
    return tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))


class TestAppendixBracketIdentities:
    """The four bilinear bracket identities, with p computed via pairing."""

    def _cases(self, n=100):
        rng = random.Random(20240)
        for _ in range(n):
            u = _random_word(rng, (X1, X2), 4)
            v = _random_word(rng, (X1, X2), 4)
            w = _random_word(rng, (X1, X2), 4)
            yield u, v, w

    def test_bracket_out_of_left(self):
        # [[u,v],w-] = [u,[v,w-]] + p_wv [[u,w-],v]
        for u, v, w in self._cases():
            wn = tuple(mirror_letter(l) for l in w)
            eu, ev, ewn = elem(u), elem(v), elem(wn)
            p_wv = pairing(mono(w), mono(v))
            lhs = bracket(bracket(eu, ev), ewn)
            rhs = bracket(eu, bracket(ev, ewn)) + bracket(bracket(eu, ewn), ev).scale(p_wv)
            assert lhs == rhs

    def test_bracket_into_negative_pair(self):
        # [u,[v-,w-]] = [[u,v-],w-] + p_vu [v-,[u,w-]]
        for u, v, w in self._cases():
            vn = tuple(mirror_letter(l) for l in v)
            wn = tuple(mirror_letter(l) for l in w)
            eu, evn, ewn = elem(u), elem(vn), elem(wn)
            p_vu = pairing(mono(v), mono(u))
            lhs = bracket(eu, bracket(evn, ewn))
            rhs = bracket(bracket(eu, evn), ewn) + bracket(evn, bracket(eu, ewn)).scale(p_vu)
            assert lhs == rhs

    def test_product_in_first_slot(self):
        # [u v, w] = p_vw [u,w] v + u [v,w], with w also ranging over negatives
        for u, v, w in self._cases():
            for target in (w, tuple(mirror_letter(l) for l in w)):
                eu, ev, ew = elem(u), elem(v), elem(target)
                p_vw = pairing(mono(v), mono(target))
                lhs = bracket(eu * ev, ew)
                rhs = (bracket(eu, ew) * ev).scale(p_vw) + eu * bracket(ev, ew)
                assert lhs == rhs

    def test_product_in_second_slot(self):
        # [u, v w] = [u,v] w + p_uv v [u,w]
        for u, v, w in self._cases():
            for mid in (v, tuple(mirror_letter(l) for l in v)):
                eu, ev, ew = elem(u), elem(mid), elem(w)
                p_uv = pairing(mono(u), mono(mid))
                lhs = bracket(eu, ev * ew)
                rhs = bracket(eu, ev) * ew + (ev * bracket(eu, ew)).scale(p_uv)
                assert lhs == rhs


class TestCoproduct:
    def test_letters_and_groups(self):
        d = coproduct(x1)
        assert d == TensorElement(
            {
                (mono([X1]), UNIT_MONOMIAL): ONE,
                (mono([], (1, 0, 0, 0)), mono([X1])): ONE,
            }
        )
        gm = mono([], (1, 0, 1, 0))
        assert coproduct(Element.from_monomial(gm)) == TensorElement({(gm, gm): ONE})

    def test_bracket_coproduct_example(self):
        d = coproduct(bracket(x1, x2))
        b = bracket(x1, x2)
        expected = TensorElement.zero()
        for m, c in b.terms.items():
            expected = expected + TensorElement({(m, UNIT_MONOMIAL): c})
            expected = expected + TensorElement({(mono([], (1, 1, 0, 0)), m): c})
        expected = expected + TensorElement(
            {(mono([X2], (1, 0, 0, 0)), mono([X1])): ONE - Q(-3)}
        )
        assert d == expected

    def test_morphism_property(self):
        rng = random.Random(7)
        for _ in range(30):
            w1 = _random_word(rng, (X1, X2, X1N, X2N), 3)
            w2 = _random_word(rng, (X1, X2, X1N, X2N), 3)
            a, b = elem(w1), elem(w2)
            assert coproduct(a * b) == coproduct(a).mul(coproduct(b))

    def test_coassociativity_and_counit(self):
        rng = random.Random(99)
        gens = [x1, x2, x1n, x2n, g1, g2, f1, f2]
        words = [_random_word(rng, (X1, X2, X1N, X2N), 5) for _ in range(50)]
        cases = gens + [elem(w) for w in words]
        for a in cases:
            d = coproduct(a)
            lhs = {}
            rhs = {}
            for (l, r), c in d.terms.items():
                for (l1, l2), c2 in coproduct(Element.from_monomial(l)).terms.items():
                    key = (l1, l2, r)
                    v = lhs.get(key, LaurentPoly.zero()) + c * c2
                    if v.is_zero:
                        lhs.pop(key, None)
                    else:
                        lhs[key] = v
                for (r1, r2), c2 in coproduct(Element.from_monomial(r)).terms.items():
                    key = (l, r1, r2)
                    v = rhs.get(key, LaurentPoly.zero()) + c * c2
                    if v.is_zero:
                        rhs.pop(key, None)
                    else:
                        rhs[key] = v
            assert lhs == rhs
            # counit laws
            left = Element.zero()
            right = Element.zero()
            for (l, r), c in d.terms.items():
                left = left + Element.from_monomial(r, c * counit(Element.from_monomial(l)))
                right = right + Element.from_monomial(l, c * counit(Element.from_monomial(r)))
            assert left == a
            assert right == a


class TestGammaDegree:
    def test_examples(self):
        assert gamma_degree(elem([X1, X2N])) == (1, -1)
        assert gamma_degree(Element.one() - Element.group((1, 0, 1, 0))) == (0, 0)
        assert gamma_degree(x1 + x2) is None
