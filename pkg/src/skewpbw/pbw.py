"""PBW structure of both Borel halves and the triangular normal form.

Each Borel half of the big algebra is the free algebra on its two letters
modulo the component of the two-sided ideal generated by the quantum Serre
elements.  Per multidegree component everything is finite dimensional, so
normal forms are computed by exact linear algebra: the span of the ideal
rows plus the expansions of the ordered root-vector products covers the
whole component, and the coordinates along the root-vector products are
the PBW coordinates.

The triangular normal form first straightens mixed words (negative letters
in front of positive ones) through the cross relation, then takes PBW
coordinates on both sides independently, yielding the unique coordinates
in the basis {group element . negative PBW monomial . positive PBW
monomial}.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional

from .algebra import (
    Bicharacter,
    Element,
    G2,
    GROUP_ID,
    Monomial,
    NEGATIVE_LETTERS,
    POSITIVE_LETTERS,
    UNIT_MONOMIAL,
    X1,
    X1N,
    X2,
    X2N,
    bracket,
    group_monomial,
    letter_monomial,
    mirror_letter,
    pairing,
)
from .laurent import (
    CoeffMatrix,
    Echelon,
    LaurentPoly,
    exact_div,
    fraction_add,
    reduce_fraction,
)

Side = Literal["pos", "neg"]
Deg = tuple[int, int]
Exps = tuple[int, int, int, int, int, int]

ZERO_EXPS: Exps = (0, 0, 0, 0, 0, 0)

# Root vector names in ascending PBW order (smallest first).
GEN_NAMES = ("F", "E", "D", "C", "B", "A")
GEN_DEGREES: tuple[Deg, ...] = ((0, 1), (1, 3), (1, 2), (2, 3), (1, 1), (1, 0))

# Height metadata at a primitive t-th root of unity (never used in computation).
HEIGHT_RULES = {
    "A": "t if 3 does not divide t else t/3",
    "B": "t",
    "C": "t if 3 does not divide t else t/3",
    "D": "t",
    "E": "t if 3 does not divide t else t/3",
    "F": "t",
}


class CapExceeded(Exception):
    """A component outside the configured degree or dimension caps was requested."""


class InternalInconsistency(Exception):
    """A PBW solve failed; this would contradict the PBW basis theorem."""


@dataclass(frozen=True)
class CartanConfig:
    cartan: tuple[tuple[int, int], tuple[int, int]] = ((2, -1), (-3, 2))
    d: tuple[int, int] = (3, 1)

    def bicharacter(self) -> Bicharacter:
        return Bicharacter.from_cartan(self.cartan, self.d)


@dataclass(frozen=True)
class Caps:
    max_m1: int = 4
    max_m2: int = 8
    max_free_dim: int = 1000


G2_CONFIG = CartanConfig()


@dataclass(frozen=True)
class PbwGen:
    name: str
    side: Side
    expansion: Element
    degree: Deg
    height_generic: float = float("inf")
    height_root_of_unity: str = ""


@dataclass(frozen=True)
class PbwMonomial:
    side: Side
    exps: Exps

    @property
    def degree(self) -> Deg:
        d1 = sum(e * g[0] for e, g in zip(self.exps, GEN_DEGREES))
        d2 = sum(e * g[1] for e, g in zip(self.exps, GEN_DEGREES))
        return (d1, d2)


@dataclass
class ComponentReport:
    side: Side
    multidegree: Deg
    dim_free: int
    rank_ideal: int
    n_pbw: int
    ok: bool


def _combine_fractions(fracs: dict) -> tuple[dict, LaurentPoly]:
    """Rewrite {key: (num, den)} over one common denominator, jointly reduced."""
    common = LaurentPoly.one()
    for _, d in fracs.values():
        if d.is_one or exact_div(common, d) is not None:
            continue
        if exact_div(d, common) is not None:
            common = d
        else:
            common = common * d
    nums: dict = {}
    for key, (n, d) in fracs.items():
        if n.is_zero:
            continue
        factor = exact_div(common, d)
        assert factor is not None
        nums[key] = n * factor
    if common.is_one or not nums:
        return nums, LaurentPoly.one() if nums else LaurentPoly.one()
    # joint reduction of all numerators against the common denominator
    keys = list(nums)
    probe = common
    for key in keys:
        _, probe = reduce_fraction(nums[key], probe)
        if probe.is_one:
            break
    # probe is the part of common that genuinely cannot be cancelled somewhere;
    # redo a joint pass: divide everything by common/probe when exact for all.
    junk = exact_div(common, probe)
    if junk is not None and not junk.is_one:
        divided = {}
        for key in keys:
            qv = exact_div(nums[key], junk)
            if qv is None:
                break
            divided[key] = qv
        else:
            nums = divided
            common = probe
    return nums, common


class TriangularForm:
    """Coordinates in the basis group-word x negative-PBW x positive-PBW.

    Represents (1/den) * sum(terms[key] * basis monomial).  The denominator
    is 1 for every catalogued computation; it becomes a nontrivial product
    of cyclotomic factors only for arbitrary inputs whose PBW coordinates
    genuinely live in the fraction field (this happens from per-side
    degree (2,4) on).  Equality compares values by cross multiplication.
    """

    __slots__ = ("terms", "den")

    def __init__(self, terms: dict | None = None, den: LaurentPoly | None = None, *, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {k: c for k, c in terms.items() if not c.is_zero}
        self.terms = terms
        self.den = LaurentPoly.one() if den is None else den
        if self.den.is_zero:
            raise ZeroDivisionError("TriangularForm with zero denominator")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriangularForm):
            return NotImplemented
        if self.den == other.den:
            return self.terms == other.terms
        if set(self.terms) != set(other.terms):
            return False
        return all(
            self.terms[k] * other.den == other.terms[k] * self.den for k in self.terms
        )

    __hash__ = None

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def scale(self, c: LaurentPoly) -> "TriangularForm":
        """The form representing c times this form's value."""
        if c.is_zero:
            return TriangularForm()
        fracs = {k: reduce_fraction(v * c, self.den) for k, v in self.terms.items()}
        nums, den = _combine_fractions(fracs)
        return TriangularForm(nums, den, _clean=True)

    def __add__(self, other: "TriangularForm") -> "TriangularForm":
        fracs: dict = {}
        for k, v in self.terms.items():
            fracs[k] = (v, self.den)
        for k, v in other.terms.items():
            cur = fracs.get(k)
            if cur is None:
                fracs[k] = (v, other.den)
            else:
                fracs[k] = fraction_add(cur, (v, other.den))
        nums, den = _combine_fractions({k: f for k, f in fracs.items() if not f[0].is_zero})
        return TriangularForm(nums, den, _clean=True)

    def __sub__(self, other: "TriangularForm") -> "TriangularForm":
        return self + other.scale(LaurentPoly.rational(-1))

    def blocks(self) -> dict:
        """Numerator coordinates grouped by (group word, neg degree, pos degree).

        Dropping the global denominator is harmless for membership tests:
        membership in a subalgebra is invariant under nonzero scalars.
        """
        out: dict = {}
        for (grp, ne, pe), c in self.terms.items():
            nd = PbwMonomial("neg", ne).degree
            pd = PbwMonomial("pos", pe).degree
            out.setdefault((grp, nd, pd), {})[(ne, pe)] = c
        return out

    def to_json_obj(self) -> list:
        out = []
        for (grp, ne, pe), c in self.sorted_items():
            num, den = reduce_fraction(c, self.den)
            coeff = num.text() if den.is_one else f"({num.text()}) / ({den.text()})"
            out.append({"group": list(grp), "neg": list(ne), "pos": list(pe), "coeff": coeff})
        return out


def _multiset_words(letters: tuple[int, int], deg: Deg) -> list[tuple[int, ...]]:
    """All words with deg[0] copies of letters[0] and deg[1] of letters[1].

    Sorted ascending as integer tuples, which is the canonical descending
    word order (the higher letter has the smaller code).
    """
    n = deg[0] + deg[1]
    words = []
    for positions in itertools.combinations(range(n), deg[0]):
        w = [letters[1]] * n
        for i in positions:
            w[i] = letters[0]
        words.append(tuple(w))
    words.sort()
    return words


def _enum_exps(target: Deg) -> list[Exps]:
    """Exponent vectors over (F, E, D, C, B, A) with the given total degree."""
    out: list[Exps] = []

    def rec(idx: int, rem1: int, rem2: int, acc: list[int]):
        if idx == len(GEN_DEGREES):
            if rem1 == 0 and rem2 == 0:
                out.append(tuple(acc))
            return
        d1, d2 = GEN_DEGREES[idx]
        top = min(rem1 // d1 if d1 else rem1 + rem2, rem2 // d2 if d2 else rem1 + rem2)
        for e in range(top + 1):
            acc.append(e)
            rec(idx + 1, rem1 - e * d1, rem2 - e * d2, acc)
            acc.pop()

    rec(0, target[0], target[1], [])
    out.sort()
    return out


def _binomial(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


class _Component:
    """Cached linear data of one multidegree component of one Borel half."""

    def __init__(self, engine: "PbwEngine", side: Side, deg: Deg):
        self.engine = engine
        self.side = side
        self.deg = deg
        letters = POSITIVE_LETTERS if side == "pos" else NEGATIVE_LETTERS
        self.words = _multiset_words(letters, deg)
        self.widx = {w: i for i, w in enumerate(self.words)}
        self.dim_free = len(self.words)
        self.serre_rows = self._build_serre_rows()
        self.pbw_exps = _enum_exps(deg)
        self.pbw_rows = [
            self._word_vector(engine.pbw_expansion(side, e)) for e in self.pbw_exps
        ]
        self._report: Optional[ComponentReport] = None
        self._solver: Optional[Echelon] = None

    # -- construction ------------------------------------------------------
    def _word_vector(self, a: Element) -> dict[int, LaurentPoly]:
        vec: dict[int, LaurentPoly] = {}
        for m, c in a.terms.items():
            if m.grp != GROUP_ID:
                raise ValueError("component vectors must be group-free")
            vec[self.widx[m.word]] = c
        return vec

    def _build_serre_rows(self) -> list[dict[int, LaurentPoly]]:
        rows = []
        letters = POSITIVE_LETTERS if self.side == "pos" else NEGATIVE_LETTERS
        for serre_vec, sdeg in self.engine.serre_words(self.side):
            rem = (self.deg[0] - sdeg[0], self.deg[1] - sdeg[1])
            if rem[0] < 0 or rem[1] < 0:
                continue
            for u1 in range(rem[0] + 1):
                for u2 in range(rem[1] + 1):
                    for u in _multiset_words(letters, (u1, u2)):
                        for v in _multiset_words(letters, (rem[0] - u1, rem[1] - u2)):
                            row = {
                                self.widx[u + w + v]: c for w, c in serre_vec.items()
                            }
                            rows.append(row)
        return rows

    # -- reports ------------------------------------------------------------
    def report(self) -> ComponentReport:
        if self._report is None:
            ech = Echelon(self.dim_free)
            from .laurent import _insertion_order

            order = _insertion_order(self.serre_rows, lambda k: k)
            for i in order:
                ech.insert(dict(self.serre_rows[i]))
            rank_ideal = ech.rank
            added = sum(ech.insert(dict(r)) for r in self.pbw_rows)
            ok = (self.dim_free == rank_ideal + len(self.pbw_rows)) and (
                added == len(self.pbw_rows)
            )
            self._report = ComponentReport(
                self.side, self.deg, self.dim_free, rank_ideal, len(self.pbw_rows), ok
            )
        return self._report

    # -- solving -------------------------------------------------------------
    def _build_solver(self) -> Echelon:
        ech = Echelon(self.dim_free)
        from .laurent import _insertion_order

        order = _insertion_order(self.serre_rows, lambda k: k)
        for i in order:
            ech.insert(dict(self.serre_rows[i]), {("I", i): LaurentPoly.one()})
        for j, row in enumerate(self.pbw_rows):
            ech.insert(dict(row), {("P", j): LaurentPoly.one()})
        return ech

    def coords_of_vector(self, vec: dict[int, LaurentPoly]) -> dict[Exps, LaurentPoly]:
        if self._solver is None:
            self._solver = self._build_solver()
        residual, prov, scale = self._solver.reduce_target(dict(vec))
        if residual:
            raise InternalInconsistency(
                f"vector outside the ideal+PBW span in component {self.side} {self.deg}"
            )
        # Mandatory back-substitution: sum(-prov)*rows must equal scale*vec.
        acc: dict[int, LaurentPoly] = {}

        def add_scaled(row: dict[int, LaurentPoly], c: LaurentPoly):
            for k, v in row.items():
                s = acc.get(k, LaurentPoly.zero()) + c * v
                if s.is_zero:
                    acc.pop(k, None)
                else:
                    acc[k] = s

        for key, c in prov.items():
            kind, idx = key
            row = self.serre_rows[idx] if kind == "I" else self.pbw_rows[idx]
            add_scaled(row, c)
        add_scaled(vec, scale)
        if acc:
            raise InternalInconsistency(
                f"back-substitution failed in component {self.side} {self.deg}"
            )
        coords: dict[Exps, LaurentPoly] = {}
        for key, c in prov.items():
            kind, idx = key
            if kind != "P" or c.is_zero:
                continue
            quot = exact_div(-c, scale)
            if quot is None:
                raise InternalInconsistency(
                    f"non-polynomial PBW coordinate in component {self.side} {self.deg}"
                )
            coords[self.pbw_exps[idx]] = quot
        return coords


class PbwEngine:
    """Computes PBW data, cross straightening and triangular normal forms."""

    def __init__(self, config: CartanConfig = G2_CONFIG, caps: Caps = Caps()):
        self.config = config
        self.caps = caps
        self.bc = config.bicharacter()
        self._lock = threading.RLock()
        self._components: dict[tuple[Side, Deg], _Component] = {}
        self._gen_cache: dict[Side, tuple[PbwGen, ...]] = {}
        self._serre_cache: dict[Side, list[tuple[dict, Deg]]] = {}
        self._pbw_expansion_cache: dict[tuple[Side, Exps], Element] = {}
        self._word_coords_cache: dict[tuple[Side, tuple], dict] = {}
        self._straighten_cache: dict[tuple, Element] = {}

    # -- generator tables ----------------------------------------------------
    def generators(self, side: Side) -> tuple[PbwGen, ...]:
        gens = self._gen_cache.get(side)
        if gens is not None:
            return gens
        bc = self.bc
        if side == "pos":
            l1, l2 = X1, X2
        else:
            l1, l2 = X1N, X2N
        e1, e2 = Element.letter(l1), Element.letter(l2)
        A = e1
        B = bracket(e1, e2, bc)
        D = bracket(B, e2, bc)
        E = bracket(D, e2, bc)
        C = bracket(B, D, bc)
        F = e2
        table = {"A": A, "B": B, "C": C, "D": D, "E": E, "F": F}
        gens = tuple(
            PbwGen(
                name,
                side,
                table[name],
                GEN_DEGREES[i],
                float("inf"),
                HEIGHT_RULES[name],
            )
            for i, name in enumerate(GEN_NAMES)
        )
        for g in gens:
            got = g.expansion.gamma_degree()
            want = g.degree if side == "pos" else (-g.degree[0], -g.degree[1])
            assert got == want, f"generator {g.name} degree mismatch"
        self._gen_cache[side] = gens
        return gens

    def serre_words(self, side: Side) -> list[tuple[dict, Deg]]:
        cached = self._serre_cache.get(side)
        if cached is not None:
            return cached
        bc = self.bc
        if side == "pos":
            e1, e2 = Element.letter(X1), Element.letter(X2)
        else:
            e1, e2 = Element.letter(X1N), Element.letter(X2N)
        s1 = bracket(e1, bracket(e1, e2, bc), bc)
        s2 = bracket(
            bracket(bracket(bracket(e1, e2, bc), e2, bc), e2, bc), e2, bc
        )
        out = []
        for s, deg in ((s1, (2, 1)), (s2, (1, 4))):
            vec = {m.word: c for m, c in s.terms.items()}
            out.append((vec, deg))
        self._serre_cache[side] = out
        return out

    def serre_elements(self, side: Side) -> list[Element]:
        return [
            Element({Monomial(GROUP_ID, w): c for w, c in vec.items()})
            for vec, _ in self.serre_words(side)
        ]

    # -- PBW monomials ---------------------------------------------------------
    def pbw_monomials(self, side: Side, deg: Deg) -> list[PbwMonomial]:
        return [PbwMonomial(side, e) for e in _enum_exps(deg)]

    def pbw_expansion(self, side: Side, exps: Exps) -> Element:
        key = (side, tuple(exps))
        cached = self._pbw_expansion_cache.get(key)
        if cached is not None:
            return cached
        gens = self.generators(side)
        out = Element.one()
        for i, e in enumerate(exps):
            for _ in range(e):
                out = out.mul(gens[i].expansion, self.bc)
        self._pbw_expansion_cache[key] = out
        return out

    # -- components -------------------------------------------------------------
    def _check_caps(self, deg: Deg) -> None:
        if deg[0] > self.caps.max_m1 or deg[1] > self.caps.max_m2:
            raise CapExceeded(f"multidegree {deg} beyond caps {self.caps}")
        if _binomial(deg[0] + deg[1], deg[0]) > self.caps.max_free_dim:
            raise CapExceeded(f"free dimension at {deg} beyond cap")

    def component(self, side: Side, deg: Deg) -> _Component:
        deg = (int(deg[0]), int(deg[1]))
        if deg[0] < 0 or deg[1] < 0:
            raise ValueError("multidegree must be componentwise nonnegative")
        self._check_caps(deg)
        key = (side, deg)
        comp = self._components.get(key)
        if comp is None:
            with self._lock:
                comp = self._components.get(key)
                if comp is None:
                    comp = _Component(self, side, deg)
                    self._components[key] = comp
        return comp

    def serre_ideal_component(self, side: Side, deg: Deg) -> CoeffMatrix:
        comp = self.component(side, deg)
        matrix = CoeffMatrix(list(comp.words))
        for row in comp.serre_rows:
            matrix.add_row({comp.words[i]: c for i, c in row.items()})
        return matrix

    def component_check(self, side: Side, deg: Deg) -> ComponentReport:
        return self.component(side, deg).report()

    # -- PBW coordinates -----------------------------------------------------------
    def _word_coords(self, side: Side, word: tuple[int, ...]) -> dict[Exps, LaurentPoly]:
        if not word:
            return {ZERO_EXPS: LaurentPoly.one()}
        key = (side, word)
        cached = self._word_coords_cache.get(key)
        if cached is not None:
            return cached
        deg = _word_degree(word)
        comp = self.component(side, deg)
        coords = comp.coords_of_vector({comp.widx[word]: LaurentPoly.one()})
        self._word_coords_cache[key] = coords
        return coords

    def borel_coords(self, a: Element, side: Side) -> dict[PbwMonomial, LaurentPoly]:
        expected = POSITIVE_LETTERS if side == "pos" else NEGATIVE_LETTERS
        out: dict[PbwMonomial, LaurentPoly] = {}
        for m, c in a.terms.items():
            if m.grp != GROUP_ID:
                raise ValueError("borel_coords requires group-free input")
            if any(l not in expected for l in m.word):
                raise ValueError(f"letter outside the {side} side")
            for exps, v in self._word_coords(side, m.word).items():
                mono = PbwMonomial(side, exps)
                s = out.get(mono, LaurentPoly.zero()) + c * v
                if s.is_zero:
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return out

    # -- straightening ----------------------------------------------------------
    def _straighten_word(self, word: tuple[int, ...]) -> Element:
        """Rewrite x_i x_j- -> p_ji x_j- x_i + delta_ij (1 - g_i f_i), to a fixed point."""
        cached = self._straighten_cache.get(word)
        if cached is not None:
            return cached
        pos = -1
        for i in range(len(word) - 1):
            if word[i] in POSITIVE_LETTERS and word[i + 1] in NEGATIVE_LETTERS:
                pos = i
                break
        if pos < 0:
            result = Element.from_monomial(Monomial(GROUP_ID, word))
        else:
            xi, xjn = word[pos], word[pos + 1]
            swap = pairing(letter_monomial(xi), letter_monomial(xjn), self.bc)
            repl = Element.from_monomial(Monomial(GROUP_ID, (xjn, xi)), swap)
            if mirror_letter(xi) == xjn:
                gidx = (1, 0, 0, 0) if xi == X1 else (0, 1, 0, 0)
                fidx = (0, 0, 1, 0) if xi == X1 else (0, 0, 0, 1)
                gifi = tuple(a + b for a, b in zip(gidx, fidx))
                repl = repl + Element.one() - Element.group(gifi)
            prefix = Element.from_monomial(Monomial(GROUP_ID, word[:pos]))
            suffix = Element.from_monomial(Monomial(GROUP_ID, word[pos + 2:]))
            expanded = prefix.mul(repl, self.bc).mul(suffix, self.bc)
            result = Element.zero()
            for m, c in expanded.terms.items():
                sub = self._straighten_word(m.word)
                glued = Element.group(m.grp).mul(sub, self.bc).scale(c)
                result = result + glued
        self._straighten_cache[word] = result
        return result

    def cross_straighten(self, a: Element) -> Element:
        out = Element.zero()
        for m, c in a.terms.items():
            s = self._straighten_word(m.word)
            out = out + Element.group(m.grp).mul(s, self.bc).scale(c)
        return out

    # -- triangular normal form ---------------------------------------------------
    def triangular_nf(self, a: Element) -> TriangularForm:
        straight = self.cross_straighten(a)
        out: dict = {}
        for m, c in straight.terms.items():
            split = len(m.word)
            for i, letter in enumerate(m.word):
                if letter in POSITIVE_LETTERS:
                    split = i
                    break
            negword, posword = m.word[:split], m.word[split:]
            assert all(l in NEGATIVE_LETTERS for l in negword)
            assert all(l in POSITIVE_LETTERS for l in posword)
            ncoords = self._word_coords("neg", negword)
            pcoords = self._word_coords("pos", posword)
            for ne, nc in ncoords.items():
                cn = c * nc
                for pe, pc in pcoords.items():
                    key = (m.grp, ne, pe)
                    s = out.get(key, LaurentPoly.zero()) + cn * pc
                    if s.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = s
        return TriangularForm(out, _clean=True)

    def expand(self, tf: TriangularForm) -> Element:
        out = Element.zero()
        for (grp, ne, pe), c in tf.terms.items():
            e = Element.group(grp)
            e = e.mul(self.pbw_expansion("neg", ne), self.bc)
            e = e.mul(self.pbw_expansion("pos", pe), self.bc)
            out = out + e.scale(c)
        return out


def _word_degree(word: tuple[int, ...]) -> Deg:
    a = sum(1 for l in word if l in (X1, X1N))
    b = sum(1 for l in word if l in (X2, X2N))
    return (a, b)
