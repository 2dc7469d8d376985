"""Truncated series in one variable and the residue calculus at h = 0.

The substitution U = e^{-h} - 1 = -h + h^2/2 - h^3/6 + ... turns a finite
Laurent expansion in U into a Laurent series in h; the residue of interest is
the coefficient of h^{-1}.  Coefficients may be rationals, DFrac values, or
whole ClassFraction values (the latter is how an independent character
variable S = T_s - 1 enters the integrand).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .coeffs import DFrac
from .errors import TruncationError


class Series:
    """Truncated Laurent series: coefficients for degrees low..order inclusive.

    Arithmetic on two series is valid through the smaller resulting order and
    the result records that order.  Coefficients live in any commutative ring
    implemented with Python operators (Fraction, DFrac, ClassFraction).
    """

    __slots__ = ("var", "low", "coeffs", "order")

    def __init__(self, var: str, low: int, coeffs, order: int):
        coeffs = list(coeffs)
        if order - low + 1 != len(coeffs):
            raise ValueError("coefficient list does not match degree range")
        # normalize: drop leading structural zeros (keep order)
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            low += 1
        self.var = var
        self.low = low
        self.coeffs = coeffs
        self.order = order

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_terms(var: str, terms: dict[int, object], order: int) -> "Series":
        if not terms:
            return Series(var, order + 1, [], order)
        low = min(terms)
        coeffs = [terms.get(k, 0) for k in range(low, order + 1)]
        return Series(var, low, coeffs, order)

    def __getitem__(self, k: int):
        if k > self.order:
            raise TruncationError(
                f"coefficient of {self.var}^{k} beyond valid order {self.order}")
        if k < self.low:
            return 0
        return self.coeffs[k - self.low]

    def degrees(self):
        return range(self.low, self.order + 1)

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __repr__(self):
        return (f"Series({self.var!r}, low={self.low}, "
                f"coeffs={self.coeffs!r}, order={self.order})")

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: "Series"):
        if self.var != other.var:
            raise ValueError(f"series variables differ: {self.var} vs {other.var}")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        coeffs = [_add(self[k] if k <= self.order else 0,
                       other[k] if k <= other.order else 0)
                  for k in range(low, order + 1)]
        return Series(self.var, low, coeffs, order)

    def __neg__(self) -> "Series":
        return Series(self.var, self.low, [_neg(c) for c in self.coeffs],
                      self.order)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        low = self.low + other.low
        order = min(self.order + other.low, other.order + self.low)
        n = order - low + 1
        if n <= 0:
            return Series(self.var, order + 1, [], order)
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            da = self.low + i
            for j, b in enumerate(other.coeffs):
                k = da + other.low + j
                if k > order:
                    break
                out[k - low] = _add(out[k - low], _mul(a, b))
        return Series(self.var, low, out, order)

    __rmul__ = __mul__

    def scale(self, c) -> "Series":
        return Series(self.var, self.low, [_mul(x, c) for x in self.coeffs],
                      self.order)

    def shift(self, k: int) -> "Series":
        return Series(self.var, self.low + k, list(self.coeffs), self.order + k)

    def truncate(self, order: int) -> "Series":
        if order >= self.order:
            return self
        coeffs = self.coeffs[: max(0, order - self.low + 1)]
        return Series(self.var, min(self.low, order + 1), coeffs, order)

    def __pow__(self, k: int) -> "Series":
        if k < 0:
            return self.inverse() ** (-k)
        rel = self.order - self.low
        out = Series(self.var, 0, [1] + [0] * rel, rel)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Series":
        """Invert a series whose lowest coefficient is a unit."""
        if not self.coeffs or _is_zero(self.coeffs[0]):
            raise ZeroDivisionError("series has no invertible lowest term")
        c0 = self.coeffs[0]
        c0inv = _inv(c0)
        n = self.order - self.low  # relative order of the unit part
        # invert the unit part 1 + g with g of positive relative degree
        unit = [_mul(c, c0inv) for c in self.coeffs]
        inv = [1] + [0] * n
        for k in range(1, n + 1):
            acc = 0
            for j in range(1, min(k, len(unit) - 1) + 1):
                acc = _add(acc, _mul(unit[j], inv[k - j]))
            inv[k] = _neg(acc)
        inv = [_mul(c, c0inv) for c in inv]
        return Series(self.var, -self.low, inv, -self.low + n)


def _is_zero(c) -> bool:
    if isinstance(c, int):
        return c == 0
    if isinstance(c, Fraction):
        return c == 0
    z = getattr(c, "is_zero", None)
    if callable(z):
        return z()
    return c == 0


def _add(a, b):
    if isinstance(a, int) and a == 0:
        return b
    if isinstance(b, int) and b == 0:
        return a
    return a + b


def _mul(a, b):
    return a * b


def _neg(a):
    if isinstance(a, int) and a == 0:
        return 0
    return -a


def _inv(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(1) / c
    if isinstance(c, DFrac):
        return c.inverse()
    raise TypeError(f"cannot invert coefficient of type {type(c).__name__}")


def u_of_h(order: int) -> Series:
    """The substitution series U(h) = e^{-h} - 1, exact through h^order."""
    coeffs = [Fraction((-1) ** k, factorial(k)) for k in range(1, order + 1)]
    return Series("h", 1, coeffs, order)


def residue_inverse_u_power(m: int, substitution_order: int | None = None) -> Fraction:
    """Res_{h=0} of 1/U(h)^m, computed through the series substitution."""
    if m <= 0:
        raise ValueError("pole order must be positive")
    need = m + 1
    if substitution_order is None:
        substitution_order = need
    if substitution_order < need:
        raise TruncationError(
            f"substitution order {substitution_order} < required {need}")
    u = u_of_h(substitution_order)
    inv = u.inverse()          # h^{-1} series
    p = inv ** m               # h^{-m} series, valid well past h^{-1}
    return Fraction(p[-1])


def residue(f: Series, substitution_order: int | None = None):
    """Res_{h=0} f(U(h)) for a finite Laurent expansion f in U.

    Only the principal part contributes: positive powers of U vanish at
    h = 0.  Coefficients may be DFrac or ClassFraction values; the result has
    the same type (rational residue weights are exact).
    """
    if f.var != "U":
        raise ValueError("residue expects a series in U")
    pole = max(0, -f.low)
    if substitution_order is not None and substitution_order < pole + 1:
        raise TruncationError(
            f"substitution order {substitution_order} < required {pole + 1}")
    total = 0
    for m in range(1, pole + 1):
        c = f[-m]
        if _is_zero(c):
            continue
        total = _add(total, _mul(c, residue_inverse_u_power(m)))
    return total


def one_plus_u_power(k: int, order: int) -> Series:
    """(1 + U)^k as an exact polynomial series in U (k >= 0)."""
    from math import comb

    terms = {j: Fraction(comb(k, j)) for j in range(0, min(k, order) + 1)}
    return Series.from_terms("U", terms, order)


def geometric_inverse_s_minus_u(s_inverse_powers, order: int) -> Series:
    """1/(S - U) = sum_{i>=0} U^i / S^{i+1}, truncated at U^order.

    s_inverse_powers(i) must return the coefficient value 1/S^{i+1} in the
    caller's coefficient ring.
    """
    return Series("U", 0, [s_inverse_powers(i) for i in range(order + 1)], order)
