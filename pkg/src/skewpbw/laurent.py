"""Exact arithmetic in Q[q^{+-1}, p^{+-1}] and fraction-free linear algebra.

Coefficients are rationals (``fractions.Fraction``, normalized to ``int``
whenever the denominator is 1).  A Laurent polynomial is a sparse map from
exponent pairs ``(e_q, e_p)`` to rationals.  The second variable ``p``
abbreviates the free off-diagonal quantization parameter; the other one is
determined by it, so two variables suffice for every structure constant.

Linear solving is fraction-free: elimination only cross-multiplies rows and
divides by previously produced pivots when the division is exact, so no
rational-function type is ever needed.  Solutions are returned as
(numerator, denominator) pairs sharing one denominator per solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Optional, Sequence

Rational = Fraction

Exp = tuple[int, int]


def _norm_rat(c):
    """Collapse Fraction with denominator 1 to int (keeps hashing/equality)."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class LaurentPoly:
    """Immutable sparse element of Q[q^{+-1}, p^{+-1}]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[Exp, object] | None = None, *, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {e: _norm_rat(c) for e, c in terms.items() if c != 0}
        object.__setattr__(self, "_terms", terms)
        object.__setattr__(self, "_hash", None)

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "LaurentPoly":
        return _ZERO

    @staticmethod
    def one() -> "LaurentPoly":
        return _ONE

    @staticmethod
    def rational(c) -> "LaurentPoly":
        c = _norm_rat(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        return LaurentPoly({(0, 0): c}) if c else _ZERO

    @staticmethod
    def monomial(c, e_q: int = 0, e_p: int = 0) -> "LaurentPoly":
        c = _norm_rat(c)
        return LaurentPoly({(e_q, e_p): c}) if c else _ZERO

    @staticmethod
    def q(k: int = 1) -> "LaurentPoly":
        return LaurentPoly({(k, 0): 1})

    @staticmethod
    def p(k: int = 1) -> "LaurentPoly":
        return LaurentPoly({(0, k): 1})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[Exp, object]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_one(self) -> bool:
        return self._terms == {(0, 0): 1}

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def n_terms(self) -> int:
        return len(self._terms)

    def involves_p(self) -> bool:
        return any(ep for (_, ep) in self._terms)

    def coeff(self, e_q: int, e_p: int = 0):
        return self._terms.get((e_q, e_p), 0)

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm_rat(s)
            else:
                out.pop(e, None)
        return LaurentPoly(out, _clean=True)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()}, _clean=True)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if other.is_zero:
            return self
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self._terms, other._terms
        if not a or not b:
            return _ZERO
        if len(a) == 1:
            ((ea, ca),) = a.items()
            return LaurentPoly(
                {(ea[0] + e[0], ea[1] + e[1]): _norm_rat(ca * c) for e, c in b.items()},
                _clean=True,
            )
        if len(b) == 1:
            ((eb, cb),) = b.items()
            return LaurentPoly(
                {(e[0] + eb[0], e[1] + eb[1]): _norm_rat(c * cb) for e, c in a.items()},
                _clean=True,
            )
        out: dict[Exp, object] = {}
        get = out.get
        for (qa, pa), ca in a.items():
            for (qb, pb), cb in b.items():
                e = (qa + qb, pa + pb)
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly(out)

    def scale(self, c) -> "LaurentPoly":
        if c == 0 or self.is_zero:
            return _ZERO
        return LaurentPoly({e: _norm_rat(v * c) for e, v in self._terms.items()}, _clean=True)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            inv = self.inverse()
            if inv is None:
                raise ValueError("negative power of a non-unit Laurent polynomial")
            return inv ** (-n)
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def inverse(self) -> Optional["LaurentPoly"]:
        """Inverse when the polynomial is a unit (single term), else None."""
        if len(self._terms) != 1:
            return None
        ((eq, ep), c), = self._terms.items()
        return LaurentPoly({(-eq, -ep): _norm_rat(Fraction(1, 1) / Fraction(c))})

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    # -- support geometry ----------------------------------------------
    def exp_range(self) -> tuple[int, int, int, int]:
        """(min e_q, max e_q, min e_p, max e_p) over the support."""
        qs = [e[0] for e in self._terms]
        ps = [e[1] for e in self._terms]
        return min(qs), max(qs), min(ps), max(ps)

    def shift(self, dq: int, dp: int) -> "LaurentPoly":
        if self.is_zero or (dq == 0 and dp == 0):
            return self
        return LaurentPoly({(e[0] + dq, e[1] + dp): c for e, c in self._terms.items()}, _clean=True)

    def monomial_content(self) -> Exp:
        """Exponents of the largest monomial dividing all terms."""
        qmin, _, pmin, _ = self.exp_range()
        return (qmin, pmin)

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        num = 0
        den = 1
        for c in self._terms.values():
            f = Fraction(c)
            num = math.gcd(num, f.numerator)
            den = den * f.denominator // math.gcd(den, f.denominator)
        return Fraction(num, den) if num else Fraction(1)

    def evaluate(self, q0: Fraction, p0: Fraction) -> Fraction:
        """Exact evaluation at nonzero rational points (test oracle helper)."""
        total = Fraction(0)
        for (eq, ep), c in self._terms.items():
            total += Fraction(c) * q0 ** eq * p0 ** ep
        return total

    # -- canonical text -------------------------------------------------
    def text(self) -> str:
        if self.is_zero:
            return "0"
        bits: list[str] = []
        for (eq, ep) in sorted(self._terms, reverse=True):
            c = Fraction(self._terms[(eq, ep)])
            mono = _monomial_text(c, eq, ep)
            if not bits:
                bits.append(mono)
            elif mono.startswith("-"):
                bits.append("- " + mono[1:])
            else:
                bits.append("+ " + mono)
        return " ".join(bits)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.text()!r})"


def _monomial_text(c: Fraction, eq: int, ep: int) -> str:
    parts: list[str] = []
    if eq:
        parts.append("q" if eq == 1 else f"q^{eq}")
    if ep:
        parts.append("p" if ep == 1 else f"p^{ep}")
    sign = "-" if c < 0 else ""
    c = abs(c)
    if c != 1 or not parts:
        parts.insert(0, str(c))
    return sign + "*".join(parts)


_ZERO = LaurentPoly({}, _clean=True)
_ONE = LaurentPoly({(0, 0): 1}, _clean=True)


def exact_div(a: LaurentPoly, b: LaurentPoly) -> Optional[LaurentPoly]:
    """Exact quotient a/b in Q[q^{+-1}, p^{+-1}], or None when b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("division by zero LaurentPoly")
    if a.is_zero:
        return _ZERO
    if b.is_monomial:
        ((eb, cb),) = b.terms.items()
        inv = Fraction(1) / Fraction(cb)
        return LaurentPoly(
            {(e[0] - eb[0], e[1] - eb[1]): _norm_rat(Fraction(c) * inv) for e, c in a.terms.items()},
            _clean=True,
        )
    aqmin, aqmax, apmin, apmax = a.exp_range()
    bqmin, bqmax, bpmin, bpmax = b.exp_range()
    # Per-variable extremes are additive over products, bounding any quotient.
    qlo, qhi = aqmin - bqmin, aqmax - bqmax
    plo, phi = apmin - bpmin, apmax - bpmax
    if qlo > qhi or plo > phi:
        return None
    lead_b = max(b.terms)
    cb = Fraction(b.terms[lead_b])
    rem = dict(a.terms)
    out: dict[Exp, object] = {}
    while rem:
        lead_r = max(rem)
        e = (lead_r[0] - lead_b[0], lead_r[1] - lead_b[1])
        if not (qlo <= e[0] <= qhi and plo <= e[1] <= phi):
            return None
        c = _norm_rat(Fraction(rem[lead_r]) / cb)
        out[e] = c
        for eb, vb in b.terms.items():
            k = (eb[0] + e[0], eb[1] + e[1])
            s = rem.get(k, 0) - c * vb
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return LaurentPoly(out)


# -- cyclotomic analysis ------------------------------------------------

_cyclotomic_cache: dict[int, LaurentPoly] = {}


def cyclotomic(t: int) -> LaurentPoly:
    """The t-th cyclotomic polynomial in q."""
    if t < 1:
        raise ValueError("cyclotomic order must be >= 1")
    poly = _cyclotomic_cache.get(t)
    if poly is not None:
        return poly
    acc = LaurentPoly({(t, 0): 1, (0, 0): -1})
    for d in range(1, t):
        if t % d == 0:
            quot = exact_div(acc, cyclotomic(d))
            assert quot is not None
            acc = quot
    _cyclotomic_cache[t] = acc
    return acc


def vanishing_orders(a: LaurentPoly, t_max: int = 24) -> set[int]:
    """Orders t <= t_max at whose primitive roots of unity a vanishes.

    The monomial content is cleared first, then each cyclotomic polynomial is
    trial-divided out.  Rejects zero input and anything involving p.
    """
    if a.is_zero:
        raise ValueError("zero polynomial vanishes everywhere")
    if a.involves_p():
        raise ValueError("vanishing-order analysis requires a polynomial in q only")
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    dq, dp = a.monomial_content()
    body = a.shift(-dq, -dp)
    orders: set[int] = set()
    for t in range(1, t_max + 1):
        if exact_div(body, cyclotomic(t)) is not None:
            orders.add(t)
    return orders


def reduce_fraction(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Opportunistically reduced (num, den) with den sign/content normalized.

    Full reduction would need multivariate gcd; in practice denominators are
    products of monomials and small cyclotomic polynomials, which trial
    division removes.  The result has den == 1 whenever num/den is a Laurent
    polynomial.
    """
    if den.is_zero:
        raise ZeroDivisionError("fraction with zero denominator")
    if num.is_zero:
        return num, _ONE
    quot = exact_div(num, den)
    if quot is not None:
        return quot, _ONE
    for t in (1, 2, 3, 4, 6, 12):
        phi = cyclotomic(t)
        while True:
            dn = exact_div(den, phi)
            if dn is None:
                break
            nn = exact_div(num, phi)
            if nn is None:
                break
            den, num = dn, nn
    dq, dp = den.monomial_content()
    if dq or dp:
        den = den.shift(-dq, -dp)
        num = num.shift(-dq, -dp)
    cont = den.rational_content()
    lead = Fraction(den.terms[max(den.terms)])
    if lead < 0:
        cont = -cont
    if cont != 1:
        inv = Fraction(1) / cont
        den = den.scale(inv)
        num = num.scale(inv)
    quot = exact_div(num, den)
    if quot is not None:
        return quot, _ONE
    return num, den


def fraction_add(
    a: tuple[LaurentPoly, LaurentPoly], b: tuple[LaurentPoly, LaurentPoly]
) -> tuple[LaurentPoly, LaurentPoly]:
    """Exact sum of (num, den) pairs, reduced."""
    n1, d1 = a
    n2, d2 = b
    if d1 == d2:
        return reduce_fraction(n1 + n2, d1)
    return reduce_fraction(n1 * d2 + n2 * d1, d1 * d2)


# -- fraction-free linear algebra -----------------------------------------

ColKey = Hashable
Vec = dict


@dataclass
class CoeffMatrix:
    """Sparse rows over a shared ordered column basis."""

    columns: list
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self._col_index = {c: i for i, c in enumerate(self.columns)}

    def add_row(self, row: Vec) -> None:
        for key in row:
            if key not in self._col_index:
                raise KeyError(f"row key {key!r} outside the column basis")
        self.rows.append({k: v for k, v in row.items() if not v.is_zero})

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def col_index(self, key) -> int:
        return self._col_index[key]


class _EchRow:
    __slots__ = ("vec", "prov", "pivot")

    def __init__(self, vec: Vec, prov: Vec, pivot):
        self.vec = vec
        self.prov = prov
        self.pivot = pivot


def _strip_content(vecs: Sequence[Vec]) -> None:
    """Divide the rows' entries jointly by monomial and rational content."""
    entries = [v for vec in vecs for v in vec.values() if not v.is_zero]
    if not entries:
        return
    dq = min(e.monomial_content()[0] for e in entries)
    dp = min(e.monomial_content()[1] for e in entries)
    num = 0
    den = 1
    for e in entries:
        f = e.rational_content()
        num = math.gcd(num, f.numerator)
        den = den * f.denominator // math.gcd(den, f.denominator)
    cont = Fraction(num, den)
    if dq == 0 and dp == 0 and cont == 1:
        return
    inv = Fraction(1) / cont
    for vec in vecs:
        for k in list(vec):
            vec[k] = vec[k].shift(-dq, -dp).scale(inv)


def _try_divide(vecs: Sequence[Vec], d: LaurentPoly) -> bool:
    """Divide all entries of all vecs by d when every division is exact."""
    if d.is_one or d.is_zero:
        return False
    quots: list[tuple[Vec, object, LaurentPoly]] = []
    for vec in vecs:
        for k, v in vec.items():
            if v.is_zero:
                continue
            qt = exact_div(v, d)
            if qt is None:
                return False
            quots.append((vec, k, qt))
    for vec, k, qt in quots:
        vec[k] = qt
    return True


def _row_op(groups: Sequence[tuple[Vec, Vec]], piv: LaurentPoly, m: LaurentPoly) -> None:
    """In place: tgt := piv*tgt - m*src for each (tgt, src) pair."""
    for tgt, src in groups:
        for k in set(tgt) | set(src):
            nv = tgt.get(k, _ZERO) * piv - m * src.get(k, _ZERO)
            if nv.is_zero:
                tgt.pop(k, None)
            else:
                tgt[k] = nv


class Echelon:
    """Fraction-free fully reduced row echelon form with provenance tracking.

    Pivot policy: leftmost column (in the given column order) holding a
    nonzero entry; among candidate rows the entry with the fewest terms,
    ties broken by insertion order (realized by feeding rows through
    :func:`_insertion_order`).  Row updates cross-multiply and then divide
    by the previous pivot whenever that division is exact (sparse Bareiss
    style); monomial and rational content is always stripped.  Rows are
    kept mutually reduced, so a single pass eliminates any target.
    """

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self.rows: list[_EchRow] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _eliminate(self, vec: Vec, extras: Sequence[Vec]) -> None:
        hint = _ONE
        for row in self.rows:
            m = vec.get(row.pivot)
            if m is None or m.is_zero:
                continue
            piv = row.vec[row.pivot]
            groups = [(vec, row.vec), (extras[0], row.prov)]
            for extra in extras[1:]:
                groups.append((extra, {}))
            _row_op(groups, piv, m)
            all_vecs = (vec, *extras)
            if not _try_divide(all_vecs, hint):
                _strip_content(all_vecs)
            hint = piv
        for k in [k for k, v in vec.items() if v.is_zero]:
            del vec[k]

    def insert(self, vec: Vec, prov: Vec | None = None) -> bool:
        """Reduce a row and keep it when independent.  True if a pivot was added.

        Rows are kept in insertion order and never touched again.  Every row
        has zeros at the pivots of all earlier rows, so a single pass over
        the rows in insertion order fully eliminates any target.
        """
        vec = {k: v for k, v in vec.items() if not v.is_zero}
        prov = dict(prov) if prov is not None else {}
        self._eliminate(vec, (prov,))
        if not vec:
            return False
        _strip_content((vec, prov))
        pivot = min(vec)
        self.rows.append(_EchRow(vec, prov, pivot))
        return True

    def reduce_target(self, target: Vec) -> tuple[Vec, Vec, LaurentPoly]:
        """Eliminate target; returns (residual, provenance, scale).

        Invariant over the fraction field:
        ``scale * target = residual - sum(prov[i] * inserted_row_i)``
        where inserted_row_i are the rows given to :meth:`insert` under
        their provenance keys.
        """
        vec = {k: v for k, v in target.items() if not v.is_zero}
        prov: Vec = {}
        scale_box: Vec = {"#scale": _ONE}
        self._eliminate(vec, (prov, scale_box))
        scale = scale_box.get("#scale", _ZERO)
        assert not scale.is_zero
        return vec, prov, scale


def _insertion_order(rows: Sequence[Vec], col_rank) -> list[int]:
    """Row processing order implementing the pivot policy deterministically."""
    def key(i: int):
        vec = rows[i]
        if not vec:
            return (len(rows) + 10 ** 9, 0, i)
        lead = min(col_rank(k) for k in vec)
        terms = min(v.n_terms for k, v in vec.items() if col_rank(k) == lead)
        return (lead, terms, i)

    return sorted(range(len(rows)), key=key)


def rank(matrix: CoeffMatrix) -> int:
    ech = Echelon(len(matrix.columns))
    order = _insertion_order(matrix.rows, matrix.col_index)
    for i in order:
        ech.insert({matrix.col_index(k): v for k, v in matrix.rows[i].items()})
    return ech.rank


def solve_in_span(
    target: Vec, matrix: CoeffMatrix, *, verify: bool = True
) -> Optional[list[tuple[LaurentPoly, LaurentPoly]]]:
    """Coordinates c with sum(c_i * row_i) == target, or None if unsolvable.

    Coordinates are (numerator, denominator) pairs of Laurent polynomials
    sharing a common nonzero denominator.  The combination is re-checked by
    back-substitution before returning.
    """
    ech = Echelon(len(matrix.columns))
    order = _insertion_order(matrix.rows, matrix.col_index)
    for i in order:
        ech.insert({matrix.col_index(k): v for k, v in matrix.rows[i].items()}, {i: _ONE})
    tvec = {matrix.col_index(k): v for k, v in target.items() if not v.is_zero}
    residual, prov, scale = ech.reduce_target(tvec)
    if residual:
        return None
    coords = [(-prov.get(i, _ZERO), scale) for i in range(len(matrix.rows))]
    if verify:
        acc: Vec = {}
        for (num, _), row in zip(coords, matrix.rows):
            if num.is_zero:
                continue
            for k, v in row.items():
                s = acc.get(k, _ZERO) + num * v
                if s.is_zero:
                    acc.pop(k, None)
                else:
                    acc[k] = s
        want = {k: scale * v for k, v in target.items() if not v.is_zero}
        if acc != {k: v for k, v in want.items() if not v.is_zero}:
            raise ArithmeticError("solve_in_span back-substitution check failed")
    return coords
