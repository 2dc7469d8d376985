"""Rewriting classes in S-variables and positivity reports.

For a character w the variable S_w = T^w - 1.  A class fraction whose
denominator weights all belong to a chosen alphabet rewrites into a fraction

    (polynomial in the S_w and d) / (monomial in the S_w)

by replacing every numerator exponent m with the product
prod (1 + S_{w_i})^{c_i} for the deterministic representation
m = sum c_i w_i.  Among nonnegative integer representations the
lexicographically smallest coefficient tuple (in the user's alphabet order)
is used, found by depth-first search; positivity of the result therefore
depends on the alphabet and its order whenever the alphabet has relations,
and the report says so.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .coeffs import DFrac, DPoly
from .errors import PoleError, RepresentationError, ZeroWeightError
from .laurent import (Character, ClassFraction, LaurentPoly, character,
                      grlex_key, is_zero_char)
from .lattice import (_polar_rays_fulldim, _span_restriction, dot, mat_rank,
                      solve_combination)

SExponent = tuple[int, ...]


class SVariableSet:
    """An ordered alphabet of nonzero characters naming variables S_w."""

    __slots__ = ("chars", "denominator_chars", "_rep_cache", "_dfs_data",
                 "_dfs_memo")

    def __init__(self, chars, denominator_chars=None):
        cs = []
        for w in chars:
            w = character(w)
            if is_zero_char(w):
                raise ZeroWeightError("zero character in the S alphabet")
            if w in cs:
                raise RepresentationError(f"duplicate alphabet character {w}")
            cs.append(w)
        self.chars = tuple(cs)
        if denominator_chars is None:
            self.denominator_chars = self.chars
        else:
            dc = tuple(character(w) for w in denominator_chars)
            for w in dc:
                if w not in self.chars:
                    raise RepresentationError(
                        f"denominator character {w} is not in the alphabet")
            self.denominator_chars = dc
        self._rep_cache: dict[Character, tuple[int, ...] | None] = {}
        self._dfs_data = None
        self._dfs_memo: dict = {}

    def __len__(self):
        return len(self.chars)

    @property
    def rank(self) -> int:
        return len(self.chars[0])

    def has_relations(self) -> bool:
        """True when the alphabet characters are Z-linearly dependent."""
        return mat_rank(self.chars) < len(self.chars)

    # -- exponent representation ------------------------------------------------

    def _prepare(self):
        if self._dfs_data is not None:
            return self._dfs_data
        n = self.rank
        lattice, coords = _span_restriction(list(self.chars), n)
        d = len(coords[0]) if coords else 0
        normals = _polar_rays_fulldim(coords, d)
        if not normals or mat_rank(normals) != d:
            raise RepresentationError(
                "alphabet does not span a pointed cone; representations "
                "would not terminate")
        xi = tuple(sum(u[k] for u in normals) for k in range(d))
        weights = [dot(xi, c) for c in coords]
        if any(wv <= 0 for wv in weights):
            raise RepresentationError("alphabet cone is not pointed")
        self._dfs_data = (lattice, coords, xi, weights)
        return self._dfs_data

    def representation(self, m) -> tuple[int, ...]:
        """Lexicographically minimal c >= 0 with sum c_i w_i = m."""
        m = character(m)
        if m in self._rep_cache:
            rep = self._rep_cache[m]
            if rep is None:
                raise RepresentationError(f"exponent {m} is not representable")
            return rep
        lattice, coords, xi, weights = self._prepare()
        x = solve_combination(lattice, m)
        if x is None or any(c.denominator != 1 for c in x):
            self._rep_cache[m] = None
            raise RepresentationError(
                f"exponent {m} is not a nonnegative combination of the alphabet")
        target = tuple(int(c) for c in x)
        memo = self._dfs_memo

        def dfs(i: int, residual: SExponent):
            if all(v == 0 for v in residual):
                return (0,) * (len(coords) - i)
            if i == len(coords):
                return None
            key = (i, residual)
            if key in memo:
                return memo[key]
            hv = dot(xi, residual)
            out = None
            if hv >= 0:
                bound = hv // weights[i]
                cur = residual
                for c in range(0, bound + 1):
                    sub = dfs(i + 1, cur)
                    if sub is not None:
                        out = (c,) + sub
                        break
                    cur = tuple(a - b for a, b in zip(cur, coords[i]))
            memo[key] = out
            return out

        rep = dfs(0, target)
        self._rep_cache[m] = rep
        if rep is None:
            raise RepresentationError(
                f"exponent {m} is not a nonnegative combination of the alphabet")
        return rep


class SPolynomial:
    """Polynomial in the alphabet variables S_w and d with rational coefficients.

    Keys are (S-multiexponent, d-exponent); no zero coefficients are stored
    and term order is graded-lex over the S-exponents, then d-degree.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean: dict[tuple[SExponent, int], Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for (sexp, dexp), c in items:
                sexp = tuple(int(x) for x in sexp)
                if len(sexp) != nvars:
                    raise ValueError("S-exponent of wrong length")
                c = Fraction(c)
                if c == 0:
                    continue
                key = (sexp, int(dexp))
                if key in clean:
                    s = clean[key] + c
                    if s == 0:
                        del clean[key]
                    else:
                        clean[key] = s
                else:
                    clean[key] = c
        self.terms = clean

    @staticmethod
    def zero(nvars: int) -> "SPolynomial":
        return SPolynomial(nvars)

    @staticmethod
    def constant(nvars: int, c) -> "SPolynomial":
        return SPolynomial(nvars, {((0,) * nvars, 0): Fraction(c)})

    @staticmethod
    def variable(nvars: int, i: int) -> "SPolynomial":
        e = tuple(int(j == i) for j in range(nvars))
        return SPolynomial(nvars, {(e, 0): Fraction(1)})

    @staticmethod
    def delta(nvars: int) -> "SPolynomial":
        return SPolynomial(nvars, {((0,) * nvars, 1): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (grlex_key(kv[0][0]), kv[0][1]))

    def __eq__(self, other):
        if not isinstance(other, SPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.sorted_terms())))

    def __repr__(self):
        return f"SPolynomial({self.nvars}, {dict(self.sorted_terms())!r})"

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPolynomial.constant(self.nvars, other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Fraction(0)) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return SPolynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SPolynomial(self.nvars,
                           {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPolynomial.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SPolynomial(self.nvars,
                               {k: c * other for k, c in self.terms.items()})
        out: dict[tuple[SExponent, int], Fraction] = {}
        for (e1, d1), c1 in self.terms.items():
            for (e2, d2), c2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(e1, e2)), d1 + d2)
                s = out.get(key, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return SPolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SPolynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def permute_variables(self, perm) -> "SPolynomial":
        """Relabel the S-variables by the permutation perm (new_i = old perm[i])."""
        out = {}
        for (sexp, dexp), c in self.terms.items():
            new = tuple(sexp[perm[i]] for i in range(self.nvars))
            out[(new, dexp)] = c
        return SPolynomial(self.nvars, out)

    def coefficients(self) -> list[Fraction]:
        return [c for _, c in self.sorted_terms()]


@dataclass(frozen=True)
class SForm:
    """A class written as an S-polynomial over a monomial in the S-variables."""

    svars: SVariableSet
    numerator: SPolynomial
    denominator: tuple  # sorted tuple of (character, multiplicity)
    exact: bool


def _one_plus_s_power(svars: SVariableSet, i: int, c: int) -> SPolynomial:
    n = len(svars)
    terms = {}
    e0 = [0] * n
    for j in range(c + 1):
        e = list(e0)
        e[i] = j
        terms[(tuple(e), 0)] = Fraction(comb(c, j))
    return SPolynomial(n, terms)


def rewrite_in_s(cf: ClassFraction, svars: SVariableSet) -> SForm:
    """Rewrite a class fraction over the S-variable alphabet.

    Every denominator factor (1 - T^w) must have w in the alphabet (it
    rewrites to -S_w); every numerator exponent must be a nonnegative
    integer combination of alphabet characters.  Numerator coefficients must
    be polynomial in d.  The result is verified by mapping back to the
    T-variables; the witness is recorded on the returned form.
    """
    n = len(svars)
    for w in cf.den:
        if w not in svars.chars:
            raise RepresentationError(
                f"denominator weight {w} is not an alphabet character")
        if w not in svars.denominator_chars:
            raise RepresentationError(
                f"denominator weight {w} is not flagged as a denominator variable")
    sign = Fraction(-1) ** len(cf.den)
    acc: dict[tuple[SExponent, int], Fraction] = {}
    power_cache: dict[tuple[int, int], SPolynomial] = {}
    for m, coeff in cf.num.sorted_terms():
        rep = svars.representation(m)
        expansion = SPolynomial.constant(n, 1)
        for i, c in enumerate(rep):
            if c:
                p = power_cache.get((i, c))
                if p is None:
                    p = _one_plus_s_power(svars, i, c)
                    power_cache[(i, c)] = p
                expansion = expansion * p
        dpoly = coeff.as_polynomial()
        for (sexp, _), q in expansion.terms.items():
            base = q * sign
            for k, qc in enumerate(dpoly.c):
                if qc:
                    key = (sexp, k)
                    s = acc.get(key, Fraction(0)) + base * qc
                    if s == 0:
                        acc.pop(key, None)
                    else:
                        acc[key] = s
    numerator = SPolynomial(n, acc)
    den_counts: dict[Character, int] = {}
    for w in cf.den:
        den_counts[w] = den_counts.get(w, 0) + 1
    denominator = tuple(sorted(den_counts.items(), key=lambda kv: grlex_key(kv[0])))
    exact = _verify_round_trip(cf, svars, numerator)
    return SForm(svars, numerator, denominator, exact)


def s_polynomial_to_laurent(p: SPolynomial, svars: SVariableSet,
                            rank: int) -> LaurentPoly:
    """Map S_w -> T^w - 1 and d-powers into coefficients."""
    # group the d-powers per S-monomial first, then expand each S-monomial
    # once with cached variable powers
    by_sexp: dict[SExponent, dict[int, Fraction]] = {}
    for (sexp, dexp), c in p.terms.items():
        by_sexp.setdefault(sexp, {})[dexp] = c
    power_cache: dict[tuple[int, int], LaurentPoly] = {}

    def s_power(i: int, e: int) -> LaurentPoly:
        got = power_cache.get((i, e))
        if got is None:
            w = svars.chars[i]
            sw = LaurentPoly(rank, {(0,) * rank: -1, w: 1})
            got = sw ** e
            power_cache[(i, e)] = got
        return got

    acc: dict = {}
    for sexp, dcoeffs in by_sexp.items():
        coeff = DFrac(DPoly([dcoeffs.get(k, 0)
                             for k in range(max(dcoeffs) + 1)]))
        mono = LaurentPoly.constant(rank, coeff)
        for i, e in enumerate(sexp):
            if e:
                mono = mono * s_power(i, e)
        for m, c in mono.terms.items():
            s = acc.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                acc.pop(m, None)
            else:
                acc[m] = s
    out = LaurentPoly.__new__(LaurentPoly)
    out.rank = rank
    out.terms = acc
    return out


def _verify_round_trip(cf: ClassFraction, svars: SVariableSet,
                       numerator: SPolynomial) -> bool:
    rebuilt = s_polynomial_to_laurent(numerator, svars, cf.rank)
    sign = Fraction(-1) ** len(cf.den)
    return rebuilt == cf.num * DFrac.coerce(sign)


@dataclass(frozen=True)
class PositivityReport:
    """All monomial coefficients of an S-polynomial plus the verdict."""

    positive: bool
    entries: tuple  # ((s-exponent, d-exponent), coefficient), canonical order
    offending: tuple  # the entries with negative coefficient, canonical order
    representation_dependent: bool

    @property
    def verdict(self) -> str:
        return "POSITIVE" if self.positive else "NOT-POSITIVE"


def positivity_report(p: SPolynomial,
                      svars: SVariableSet | None = None) -> PositivityReport:
    """List every coefficient and decide nonnegativity.

    The smallest offending monomials come first (canonical term order).  When
    the alphabet has relations among its characters the verdict depends on
    the chosen representation; the report carries that flag.
    """
    entries = tuple(p.sorted_terms())
    offending = tuple((k, c) for k, c in entries if c < 0)
    dependent = bool(svars.has_relations()) if svars is not None else False
    return PositivityReport(not offending, entries, offending, dependent)


# ---------------------------------------------------------------------------
# cohomological (t-variable) expansion
# ---------------------------------------------------------------------------

def _mv_trim(terms, order):
    return {e: c for e, c in terms.items() if sum(e) <= order and not c.is_zero()}


def _mv_mul(a, b, order, rank):
    out: dict[tuple, DFrac] = {}
    for e1, c1 in a.items():
        d1 = sum(e1)
        for e2, c2 in b.items():
            if d1 + sum(e2) > order:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, DFrac.zero()) + c1 * c2
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _linear_form(w, rank):
    out = {}
    for i, x in enumerate(w):
        if x:
            e = tuple(int(j == i) for j in range(rank))
            out[e] = DFrac.coerce(x)
    return out


def _exp_minus_linear(w, order, rank):
    """exp(-sum w_i t_i) truncated past total degree order."""
    lin = _linear_form(w, rank)
    out = {(0,) * rank: DFrac.one()}
    power = {(0,) * rank: DFrac.one()}
    for p in range(1, order + 1):
        power = _mv_mul(power, lin, order, rank)
        if not power:
            break
        scale = DFrac.coerce(Fraction((-1) ** p, factorial(p)))
        for e, c in power.items():
            s = out.get(e, DFrac.zero()) + c * scale
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _unit_factor(w, order, rank):
    """(1 - exp(-l_w))/l_w: the unit series with constant term 1."""
    lin = _linear_form(w, rank)
    out = {(0,) * rank: DFrac.one()}
    power = {(0,) * rank: DFrac.one()}
    for p in range(1, order + 1):
        power = _mv_mul(power, lin, order, rank)
        if not power:
            break
        scale = DFrac.coerce(Fraction((-1) ** p, factorial(p + 1)))
        for e, c in power.items():
            s = out.get(e, DFrac.zero()) + c * scale
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _mv_inverse(a, order, rank):
    """Invert a series whose constant term is an invertible coefficient."""
    zero = (0,) * rank
    c0 = a.get(zero)
    if c0 is None or c0.is_zero():
        raise ZeroDivisionError("series has no unit constant term")
    c0inv = c0.inverse()
    rest = {e: c * c0inv for e, c in a.items() if e != zero}
    out = {zero: DFrac.one()}
    # degree by degree: inv_k = -sum_{j>=1} rest_j * inv_{k-j}
    by_deg_rest: dict[int, dict] = {}
    for e, c in rest.items():
        by_deg_rest.setdefault(sum(e), {})[e] = c
    by_deg_inv: dict[int, dict] = {0: {zero: DFrac.one()}}
    for k in range(1, order + 1):
        acc: dict[tuple, DFrac] = {}
        for j, rj in by_deg_rest.items():
            if j > k:
                continue
            prev = by_deg_inv.get(k - j)
            if not prev:
                continue
            for e, c in _mv_mul(rj, prev, order, rank).items():
                s = acc.get(e, DFrac.zero()) + c
                if s.is_zero():
                    acc.pop(e, None)
                else:
                    acc[e] = s
        layer = {e: -c for e, c in acc.items()}
        if layer:
            by_deg_inv[k] = layer
            out.update(layer)
    return {e: c * c0inv for e, c in out.items()}


def _divide_homogeneous_by_linear(terms, w, rank):
    """Exact division of a homogeneous layer by the linear form of w."""
    j = next(i for i, x in enumerate(w) if x)
    aj = DFrac.coerce(w[j])
    rem = dict(terms)
    quo: dict[tuple, DFrac] = {}
    while rem:
        e = max(rem, key=lambda e: (e[j], e))
        c = rem.pop(e)
        if e[j] == 0:
            return None
        qe = tuple(x - int(i == j) for i, x in enumerate(e))
        qc = c / aj
        s = quo.get(qe, DFrac.zero()) + qc
        if s.is_zero():
            quo.pop(qe, None)
        else:
            quo[qe] = s
        for i, x in enumerate(w):
            if x and i != j:
                te = tuple(y + int(ii == i) for ii, y in enumerate(qe))
                s = rem.get(te, DFrac.zero()) - qc * x
                if s.is_zero():
                    rem.pop(te, None)
                else:
                    rem[te] = s
    return quo


def _divide_by_linear(terms, w, rank):
    out: dict[tuple, DFrac] = {}
    layers: dict[int, dict] = {}
    for e, c in terms.items():
        layers.setdefault(sum(e), {})[e] = c
    for deg in sorted(layers):
        q = _divide_homogeneous_by_linear(layers[deg], w, rank)
        if q is None:
            raise PoleError(
                "pole at t = 0 not cancelled (class is not regular); "
                f"layer of degree {deg} is not divisible by the linear form of {w}")
        out.update(q)
    return out


def cohomology_expansion(cf: ClassFraction, order: int) -> dict[tuple, DFrac]:
    """Expansion of the class under T^w = exp(-sum w_i t_i), through the
    requested total degree.

    The class must be regular at t = 0 (every denominator linear form must
    divide out); otherwise a PoleError reports the failure.  The result maps
    exponent tuples of the t-variables to coefficients in Q(d).
    """
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    rank = cf.rank
    k = len(cf.den)
    work = order + k
    num = {}
    for m, c in cf.num.terms.items():
        for e, v in _exp_minus_linear(m, work, rank).items():
            s = num.get(e, DFrac.zero()) + c * v
            if s.is_zero():
                num.pop(e, None)
            else:
                num[e] = s
    units = {(0,) * rank: DFrac.one()}
    for w in cf.den:
        units = _mv_mul(units, _unit_factor(w, work, rank), work, rank)
    result = _mv_mul(num, _mv_inverse(units, work, rank), work, rank)
    for w in cf.den:
        result = _divide_by_linear(result, w, rank)
    return _mv_trim(result, order)
