"""Coefficient arithmetic over Q(d), where d = -1 - y is the genus variable.

Internally everything is written in d.  The classical variable y is a
presentation alias: p(y) and p(d) are exchanged by the involution
y = -1 - d, which is its own inverse.

DPoly is a univariate polynomial over Q stored as a coefficient tuple
(low degree first, no trailing zeros).  DFrac is a reduced fraction of two
DPoly with monic denominator; this is the coefficient ring of every class in
the library.  Fractions genuinely occur only in intermediate hypersurface
computations (units with constant term -d get inverted); published results
always clear back to polynomials.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import CoefficientPoleError, NotPolynomialError

_F0 = Fraction(0)
_F1 = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into Q")


class DPoly:
    """Univariate polynomial over Q in the variable d."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        c = [_as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "DPoly":
        return DPoly(())

    @staticmethod
    def one() -> "DPoly":
        return DPoly((1,))

    @staticmethod
    def d() -> "DPoly":
        return DPoly((0, 1))

    @staticmethod
    def monomial(k: int, coeff=1) -> "DPoly":
        return DPoly((0,) * k + (coeff,))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def degree(self) -> int:
        """Degree, with degree(0) = -1."""
        return len(self.c) - 1

    def leading(self) -> Fraction:
        if not self.c:
            return _F0
        return self.c[-1]

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.c):
            return self.c[k]
        return _F0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = DPoly(other)
        if not isinstance(other, DPoly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"DPoly({list(self.c)!r})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DPoly(other)
        n = max(len(self.c), len(other.c))
        return DPoly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return DPoly([-x for x in self.c])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DPoly(other)
        return self + (-other)

    def __rsub__(self, other):
        return DPoly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DPoly(other)
        if self.is_zero() or other.is_zero():
            return DPoly(())
        out = [_F0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return DPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = DPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "DPoly"):
        """Euclidean division; other must be nonzero."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = DPoly(())
        r = self
        dlead = other.leading()
        while not r.is_zero() and r.degree() >= other.degree():
            shift = r.degree() - other.degree()
            coeff = r.leading() / dlead
            mono = DPoly.monomial(shift, coeff)
            q = q + mono
            r = r - mono * other
        return q, r

    def monic(self) -> "DPoly":
        if self.is_zero():
            return self
        lead = self.leading()
        return DPoly([x / lead for x in self.c])

    @staticmethod
    def gcd(a: "DPoly", b: "DPoly") -> "DPoly":
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, value) -> Fraction:
        value = _as_fraction(value)
        acc = _F0
        for coeff in reversed(self.c):
            acc = acc * value + coeff
        return acc

    def compose_linear(self, a, b) -> "DPoly":
        """Return p(a + b*x); with a = b = -1 this is the y <-> d swap."""
        a = _as_fraction(a)
        b = _as_fraction(b)
        acc = DPoly(())
        lin = DPoly((a, b))
        for coeff in reversed(self.c):
            acc = acc * lin + DPoly(coeff)
        return acc

    def to_other_basis(self) -> "DPoly":
        """Swap between the d and y presentations (an involution)."""
        return self.compose_linear(-1, -1)


class DFrac:
    """Reduced fraction of DPoly with monic denominator: an element of Q(d)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, DFrac) and den is None:
            self.num, self.den = num.num, num.den
            return
        if not isinstance(num, DPoly):
            num = DPoly(num)
        if den is None:
            self.num = num
            self.den = DPoly.one()
            return
        if not isinstance(den, DPoly):
            den = DPoly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in Q(d)")
        if den.degree() == 0:
            lead = den.leading()
            self.num = num if lead == 1 else num * (1 / lead)
            self.den = DPoly.one()
            return
        g = DPoly.gcd(num, den)
        if not g.is_zero() and g.degree() > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.leading()
        if lead != 1:
            num = num * (1 / lead)
            den = den * (1 / lead)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero() -> "DFrac":
        return DFrac(DPoly.zero())

    @staticmethod
    def one() -> "DFrac":
        return DFrac(DPoly.one())

    @staticmethod
    def d() -> "DFrac":
        return DFrac(DPoly.d())

    @staticmethod
    def y() -> "DFrac":
        """The alias y = -1 - d."""
        return DFrac(DPoly((-1, -1)))

    @staticmethod
    def coerce(x) -> "DFrac":
        if isinstance(x, DFrac):
            return x
        if isinstance(x, DPoly):
            return DFrac(x)
        if isinstance(x, (int, Fraction)):
            return DFrac(DPoly(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into Q(d)")

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.c == (_F1,)

    def as_polynomial(self) -> DPoly:
        if not self.is_polynomial():
            raise NotPolynomialError(f"{self!r} is not a polynomial in d")
        return self.num

    def __eq__(self, other) -> bool:
        try:
            other = DFrac.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"DFrac({list(self.num.c)!r})"
        return f"DFrac({list(self.num.c)!r}, {list(self.den.c)!r})"

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = DFrac.coerce(other)
        if self.is_polynomial() and other.is_polynomial():
            out = DFrac.__new__(DFrac)
            out.num = self.num + other.num
            out.den = self.den
            return out
        return DFrac(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = DFrac.__new__(DFrac)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        return self + (-DFrac.coerce(other))

    def __rsub__(self, other):
        return DFrac.coerce(other) + (-self)

    def __mul__(self, other):
        other = DFrac.coerce(other)
        if self.is_polynomial() and other.is_polynomial():
            out = DFrac.__new__(DFrac)
            out.num = self.num * other.num
            out.den = self.den
            return out
        return DFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = DFrac.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(d)")
        return DFrac(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return DFrac.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return DFrac.one() / self ** (-k)
        out = DFrac.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "DFrac":
        return DFrac.one() / self

    # -- evaluation --------------------------------------------------------------

    def evaluate(self, value) -> Fraction:
        """Evaluate at d = value.  Raises if the denominator vanishes there."""
        dv = self.den.evaluate(value)
        if dv == 0:
            raise CoefficientPoleError(
                f"coefficient {self!r} has a pole at d = {value}")
        return self.num.evaluate(value) / dv

    def evaluate_y(self, value) -> Fraction:
        """Evaluate at y = value, i.e. d = -1 - value."""
        return self.evaluate(Fraction(-1) - _as_fraction(value))


def y_polynomial_coeffs(p: DPoly) -> tuple[Fraction, ...]:
    """Coefficients of p rewritten in the y presentation, low degree first."""
    return p.to_other_basis().c


def from_y_coeffs(coeffs) -> DPoly:
    """Build the internal d-polynomial from y-presentation coefficients."""
    return DPoly(coeffs).to_other_basis()
