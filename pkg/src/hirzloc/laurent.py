"""Lattice-graded Laurent polynomials and factored class fractions.

A character w of the rank-r torus is an integer vector of length r; the
associated K-theory variable is T^w (the trace of the one dimensional
representation, T^w = e^{-w} under the Chern character).  LaurentPoly is a
finite sum of DFrac-multiples of such monomials.  ClassFraction is the shape
every localized class takes: a LaurentPoly numerator over a multiset of
factors (1 - T^w) with w nonzero.

Equality of fractions is decided by cross multiplication, never numerically.
Canonical form cancels every denominator factor that divides the numerator
exactly; the exact-division attempts run in a deterministic order so printing
is reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .coeffs import DFrac, DPoly
from .errors import (DivisionNotExactError, NotPolynomialError,
                     RankMismatchError, ZeroWeightError)

Character = tuple[int, ...]


def character(v: Iterable[int]) -> Character:
    w = tuple(int(x) for x in v)
    return w


def grlex_key(w: Character):
    """Graded-lex key on exponent vectors: total degree, then lex."""
    return (sum(w), w)


def is_zero_char(w: Character) -> bool:
    return all(x == 0 for x in w)


def add_char(a: Character, b: Character) -> Character:
    return tuple(x + y for x, y in zip(a, b))


def neg_char(a: Character) -> Character:
    return tuple(-x for x in a)


class LaurentPoly:
    """Finite map from characters (exponents of T^w) to DFrac coefficients."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms=None):
        self.rank = rank
        clean: dict[Character, DFrac] = {}
        if terms:
            for w, c in (terms.items() if isinstance(terms, dict) else terms):
                w = character(w)
                if len(w) != rank:
                    raise RankMismatchError(
                        f"exponent {w} has length {len(w)}, expected {rank}")
                c = DFrac.coerce(c)
                if c.is_zero():
                    continue
                if w in clean:
                    s = clean[w] + c
                    if s.is_zero():
                        del clean[w]
                    else:
                        clean[w] = s
                else:
                    clean[w] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(rank: int) -> "LaurentPoly":
        return LaurentPoly(rank)

    @staticmethod
    def constant(rank: int, c) -> "LaurentPoly":
        return LaurentPoly(rank, {(0,) * rank: DFrac.coerce(c)})

    @staticmethod
    def one(rank: int) -> "LaurentPoly":
        return LaurentPoly.constant(rank, 1)

    @staticmethod
    def monomial(w: Character, c=1) -> "LaurentPoly":
        w = character(w)
        return LaurentPoly(len(w), {w: DFrac.coerce(c)})

    @staticmethod
    def one_minus(w: Character) -> "LaurentPoly":
        """The polynomial 1 - T^w."""
        w = character(w)
        return LaurentPoly(len(w), {(0,) * len(w): 1, w: -1})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return set(self.terms) == {(0,) * self.rank}

    def constant_value(self) -> DFrac:
        if not self.terms:
            return DFrac.zero()
        if not self.is_constant():
            raise ValueError("Laurent polynomial is not constant")
        return self.terms[(0,) * self.rank]

    def sorted_terms(self) -> list[tuple[Character, DFrac]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.terms.items(),
                                             key=lambda kv: grlex_key(kv[0])))))

    def __repr__(self):
        return f"LaurentPoly({self.rank}, {dict(self.sorted_terms())!r})"

    def _check_rank(self, other: "LaurentPoly"):
        if self.rank != other.rank:
            raise RankMismatchError(
                f"rank {self.rank} vs {other.rank}")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, DFrac, DPoly)):
            other = LaurentPoly.constant(self.rank, DFrac.coerce(other))
        self._check_rank(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        res = LaurentPoly.__new__(LaurentPoly)
        res.rank = self.rank
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = LaurentPoly.__new__(LaurentPoly)
        res.rank = self.rank
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, DFrac, DPoly)):
            other = LaurentPoly.constant(self.rank, DFrac.coerce(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, DFrac, DPoly)):
            c = DFrac.coerce(other)
            if c.is_zero():
                return LaurentPoly.zero(self.rank)
            res = LaurentPoly.__new__(LaurentPoly)
            res.rank = self.rank
            res.terms = {w: v * c for w, v in self.terms.items()}
            return res
        self._check_rank(other)
        out: dict[Character, DFrac] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = add_char(w1, w2)
                c = c1 * c2
                s = out.get(w)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
        res = LaurentPoly.__new__(LaurentPoly)
        res.rank = self.rank
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly.one(self.rank)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shifted(self, w: Character) -> "LaurentPoly":
        """Multiply by the monomial T^w."""
        w = character(w)
        res = LaurentPoly.__new__(LaurentPoly)
        res.rank = self.rank
        res.terms = {add_char(m, w): c for m, c in self.terms.items()}
        return res

    # -- substitution and evaluation --------------------------------------------

    def substitute_delta(self, value) -> "LaurentPoly":
        """Evaluate every coefficient at d = value."""
        out: dict[Character, DFrac] = {}
        for w, c in self.terms.items():
            v = DFrac.coerce(Fraction(c.evaluate(value)))
            if not v.is_zero():
                out[w] = v
        res = LaurentPoly.__new__(LaurentPoly)
        res.rank = self.rank
        res.terms = out
        return res

    def evaluate(self, tvals, delta) -> Fraction:
        """Exact evaluation at T_i = tvals[i], d = delta (test oracle hook)."""
        tvals = [Fraction(x) for x in tvals]
        total = Fraction(0)
        for w, c in self.terms.items():
            mono = Fraction(1)
            for x, e in zip(tvals, w):
                mono *= x ** e
            total += c.evaluate(delta) * mono
        return total

    # -- exact division -----------------------------------------------------------

    def div_exact_one_minus(self, w: Character) -> Optional["LaurentPoly"]:
        """Divide exactly by (1 - T^w); return None when not divisible."""
        w = character(w)
        if is_zero_char(w):
            raise ZeroWeightError("division by (1 - T^0) = 0")
        if self.is_zero():
            return self
        if grlex_key(w) > grlex_key((0,) * self.rank):
            q = self._div_exact_tw_minus_one(w)
            return None if q is None else -q
        # 1 - T^w = -T^w (1 - T^{-w}) with -w graded-lex positive
        q = self._div_exact_tw_minus_one(neg_char(w))
        return None if q is None else q.shifted(neg_char(w))

    def _div_exact_tw_minus_one(self, w: Character) -> Optional["LaurentPoly"]:
        # w is graded-lex positive here.  Shift into the polynomial ring,
        # then ordinary multivariate division by (T^w - 1); graded-lex is a
        # well order on nonnegative exponents so the loop terminates.
        shift = tuple(min(m[i] for m in self.terms) for i in range(self.rank))
        g = dict(self.shifted(neg_char(shift)).terms)
        quotient: dict[Character, DFrac] = {}
        while g:
            m = max(g, key=grlex_key)
            c = g[m]
            qm = tuple(a - b for a, b in zip(m, w))
            if any(x < 0 for x in qm):
                return None
            quotient[qm] = quotient.get(qm, DFrac.zero()) + c
            # g -= c T^qm (T^w - 1) = g - c T^m + c T^qm
            del g[m]
            s = g.get(qm, DFrac.zero()) + c
            if s.is_zero():
                g.pop(qm, None)
            else:
                g[qm] = s
        return LaurentPoly(self.rank, quotient).shifted(shift)


class ClassFraction:
    """A K-normalized local class: LaurentPoly over a product of (1 - T^w).

    The denominator is kept as a sorted multiset of nonzero characters; each
    entry w stands for one factor (1 - T^w).  Every arithmetic result is
    canonicalized: the factor multiset is sorted and any factor dividing the
    numerator exactly has been cancelled.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Iterable[Character] = (),
                 canonical: bool = False):
        den = tuple(sorted((character(w) for w in den), key=grlex_key))
        for w in den:
            if len(w) != num.rank:
                raise RankMismatchError(
                    f"denominator weight {w} has wrong length for rank {num.rank}")
            if is_zero_char(w):
                raise ZeroWeightError("zero character in a denominator factor")
        self.num = num
        self.den = den
        if not canonical:
            self._cancel()

    def _cancel(self):
        if self.num.is_zero():
            self.den = ()
            return
        remaining = list(self.den)
        changed = True
        while changed and remaining:
            changed = False
            for i, w in enumerate(remaining):
                q = self.num.div_exact_one_minus(w)
                if q is not None:
                    self.num = q
                    del remaining[i]
                    changed = True
                    break
        self.den = tuple(remaining)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(rank: int) -> "ClassFraction":
        return ClassFraction(LaurentPoly.zero(rank), (), canonical=True)

    @staticmethod
    def one(rank: int) -> "ClassFraction":
        return ClassFraction(LaurentPoly.one(rank), (), canonical=True)

    @staticmethod
    def constant(rank: int, c) -> "ClassFraction":
        return ClassFraction(LaurentPoly.constant(rank, c), (), canonical=True)

    @staticmethod
    def from_laurent(p: LaurentPoly) -> "ClassFraction":
        return ClassFraction(p, (), canonical=True)

    # -- structure -------------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.num.rank

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_poly(self) -> LaurentPoly:
        out = LaurentPoly.one(self.rank)
        for w in self.den:
            out = out * LaurentPoly.one_minus(w)
        return out

    def __repr__(self):
        return f"ClassFraction({self.num!r}, den={list(self.den)!r})"

    def _check_rank(self, other: "ClassFraction"):
        if self.rank != other.rank:
            raise RankMismatchError(f"rank {self.rank} vs {other.rank}")

    # -- equality ----------------------------------------------------------------

    def equals(self, other: "ClassFraction") -> bool:
        """Exact equality by cross multiplication to a common denominator."""
        other = _coerce_class(other, self.rank)
        self._check_rank(other)
        if self.den == other.den:
            return self.num == other.num
        left = self.num
        for w in other.den:
            left = left * LaurentPoly.one_minus(w)
        right = other.num
        for w in self.den:
            right = right * LaurentPoly.one_minus(w)
        return left == right

    def __eq__(self, other):
        if isinstance(other, ClassFraction):
            return self.equals(other)
        if isinstance(other, (int, Fraction, DFrac, DPoly)):
            return self.equals(ClassFraction.constant(self.rank, other))
        return NotImplemented

    def __hash__(self):
        # only canonical conversion data; classes equal by cross
        # multiplication but with different factorizations hash apart, so
        # dict usage is restricted to canonical values (never relied on).
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------------------

    def __add__(self, other):
        other = _coerce_class(other, self.rank)
        self._check_rank(other)
        union = _multiset_max(self.den, other.den)
        left = self.num
        for w in _multiset_diff(union, self.den):
            left = left * LaurentPoly.one_minus(w)
        right = other.num
        for w in _multiset_diff(union, other.den):
            right = right * LaurentPoly.one_minus(w)
        return ClassFraction(left + right, union)

    __radd__ = __add__

    def __neg__(self):
        return ClassFraction(-self.num, self.den, canonical=True)

    def __sub__(self, other):
        return self + (-_coerce_class(other, self.rank))

    def __rsub__(self, other):
        return _coerce_class(other, self.rank) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, DFrac, DPoly)):
            c = DFrac.coerce(other)
            if c.is_zero():
                return ClassFraction.zero(self.rank)
            return ClassFraction(self.num * c, self.den, canonical=True)
        other = _coerce_class(other, self.rank)
        self._check_rank(other)
        return ClassFraction(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a class fraction")
        out = ClassFraction.one(self.rank)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- specialization ---------------------------------------------------------------

    def substitute_delta(self, value) -> "ClassFraction":
        """Specialize d to a rational value, recanonicalizing."""
        return ClassFraction(self.num.substitute_delta(value), self.den)

    def substitute_y(self, value) -> "ClassFraction":
        """Specialize y to a rational value (d = -1 - y)."""
        return self.substitute_delta(Fraction(-1) - Fraction(value))

    def evaluate(self, tvals, delta) -> Fraction:
        """Exact evaluation at a rational point (test oracle hook)."""
        den = Fraction(1)
        tvals = [Fraction(x) for x in tvals]
        for w in self.den:
            mono = Fraction(1)
            for x, e in zip(tvals, w):
                mono *= x ** e
            den *= 1 - mono
        if den == 0:
            raise ZeroDivisionError("evaluation point lies on a denominator factor")
        return self.num.evaluate(tvals, delta) / den

    # -- extraction --------------------------------------------------------------------

    def as_constant(self) -> DFrac:
        """The value of a class with empty denominator and constant numerator."""
        if self.den:
            raise DivisionNotExactError(
                f"class has a nontrivial denominator {list(self.den)}")
        return self.num.constant_value()

    def as_polynomial_in_d(self) -> DPoly:
        c = self.as_constant()
        if not c.is_polynomial():
            raise NotPolynomialError(f"constant {c!r} is not polynomial in d")
        return c.num


def _coerce_class(x, rank: int) -> ClassFraction:
    if isinstance(x, ClassFraction):
        return x
    if isinstance(x, LaurentPoly):
        return ClassFraction.from_laurent(x)
    if isinstance(x, (int, Fraction, DFrac, DPoly)):
        return ClassFraction.constant(rank, x)
    raise TypeError(f"cannot coerce {type(x).__name__} into a class fraction")


def sum_fractions(fracs, rank: int) -> ClassFraction:
    """Sum many class fractions over one common denominator.

    Equivalent to repeated addition but with a single cross multiplication
    and a single canonicalization at the end; used by the face sums, where
    every denominator is a subset of one ray set.
    """
    fracs = list(fracs)
    if not fracs:
        return ClassFraction.zero(rank)
    common: tuple = ()
    for f in fracs:
        common = _multiset_max(common, f.den)
    num = LaurentPoly.zero(rank)
    for f in fracs:
        part = f.num
        for w in _multiset_diff(common, f.den):
            part = part * LaurentPoly.one_minus(w)
        num = num + part
    return ClassFraction(num, common)


def _multiset_max(a: tuple, b: tuple) -> tuple:
    out = []
    seen = set()
    for w in a + b:
        if w in seen:
            continue
        seen.add(w)
        out.append((w, max(a.count(w), b.count(w))))
    flat = []
    for w, k in out:
        flat.extend([w] * k)
    return tuple(sorted(flat, key=grlex_key))


def _multiset_diff(a: tuple, b: tuple) -> tuple:
    out = list(a)
    for w in b:
        out.remove(w)
    return tuple(out)
