"""Constructors for K-normalized local Hirzebruch classes.

Every class here is the restriction of an equivariant Hirzebruch class to a
fixed point divided by the equivariant Euler class of the ambient tangent
space.  In that normalization a smooth one dimensional chart contributes

    full line        (1 + y T^w) / (1 - T^w)
    punctured line   (1 + y) T^w / (1 - T^w)
    logarithmic line (1 + y) / (1 - T^w)

with y = -1 - d, and pushing forward along a resolution is a plain sum over
source fixed points.  All operations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeffs import DFrac, DPoly
from .errors import (ConeError, DivisionNotExactError, HirzlocError,
                     RankMismatchError, ZeroWeightError)
from .laurent import (Character, ClassFraction, LaurentPoly, character,
                      is_zero_char, sum_fractions)
from .lattice import (Cone, LatticeBasis, closed_generating_function,
                      dual_cone, faces, interior_generating_function,
                      is_pointed, mat_rank, minus_delta_power)
from .series import Series, residue

_Y = DFrac([-1, -1])          # y = -1 - d
_DELTA = DFrac([0, 1])
_MINUS_DELTA = DFrac([0, -1])  # 1 + y


class DegreeError(HirzlocError):
    """Polynomial degree outside the hypothesis of the cone formula."""


# ---------------------------------------------------------------------------
# one dimensional building blocks
# ---------------------------------------------------------------------------

def _check_weight(w) -> Character:
    w = character(w)
    if is_zero_char(w):
        raise ZeroWeightError("zero weight is not allowed here")
    return w


def full_line(w) -> ClassFraction:
    """(1 + y T^w)/(1 - T^w): a full invariant line of weight w."""
    w = _check_weight(w)
    rank = len(w)
    num = LaurentPoly(rank, {(0,) * rank: 1, w: _Y})
    return ClassFraction(num, (w,))


def punctured_line(w) -> ClassFraction:
    """(1 + y) T^w/(1 - T^w): the line minus the origin."""
    w = _check_weight(w)
    num = LaurentPoly(len(w), {w: _MINUS_DELTA})
    return ClassFraction(num, (w,))


def log_line(w) -> ClassFraction:
    """(1 + y)/(1 - T^w): the logarithmic factor of a divisor direction."""
    w = _check_weight(w)
    rank = len(w)
    num = LaurentPoly(rank, {(0,) * rank: _MINUS_DELTA})
    return ClassFraction(num, (w,))


# ---------------------------------------------------------------------------
# localization of the chi_y genus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointData:
    """Tangent weights of an isolated smooth fixed point."""

    tangent_weights: tuple[Character, ...]
    label: str = ""

    def __init__(self, tangent_weights, label: str = ""):
        ws = tuple(_check_weight(w) for w in tangent_weights)
        object.__setattr__(self, "tangent_weights", ws)
        object.__setattr__(self, "label", label)


def smooth_local_class(point: FixedPointData | list, rank: int | None = None) -> ClassFraction:
    """Product of full-line factors over the tangent weights of a smooth point."""
    if not isinstance(point, FixedPointData):
        point = FixedPointData(tuple(point))
    if point.tangent_weights:
        rank = len(point.tangent_weights[0])
    elif rank is None:
        raise RankMismatchError("empty weight list needs an explicit rank")
    out = ClassFraction.one(rank)
    for w in point.tangent_weights:
        out = out * full_line(w)
    return out


def chi_from_local(contribs) -> DPoly:
    """Sum the local contributions and assert rigidity.

    The sum over all fixed points must be free of the T variables; the
    constant value is returned as a polynomial in d.  A T-dependent residue
    signals an inconsistent fixed point dataset and is reported.
    """
    contribs = list(contribs)
    if not contribs:
        return DPoly.zero()
    total = contribs[0]
    for c in contribs[1:]:
        total = total + c
    if total.den or not total.num.is_constant():
        raise DivisionNotExactError(
            f"fixed point sum is not T-free; residual class {total!r}")
    return total.as_polynomial_in_d()


def solve_singular_contribution(chi_target: DPoly, known_contribs,
                                singular_denom_weights) -> LaurentPoly:
    """Recover the numerator of the one unknown singular contribution.

    chi_target is the global genus as a polynomial in d; the unknown local
    class is (returned numerator) / prod (1 - T^{w_i}) over the given
    denominator weights.  The division must be exact.
    """
    known_contribs = list(known_contribs)
    weights = [_check_weight(w) for w in singular_denom_weights]
    if known_contribs:
        rank = known_contribs[0].rank
    elif weights:
        rank = len(weights[0])
    else:
        raise RankMismatchError("no data to infer the torus rank from")
    remainder = ClassFraction.constant(rank, DFrac(chi_target))
    for c in known_contribs:
        remainder = remainder - c
    product = remainder
    for w in weights:
        product = product * ClassFraction.from_laurent(LaurentPoly.one_minus(w))
    if product.den:
        raise DivisionNotExactError(
            "target minus known contributions is not a Laurent polynomial over "
            f"the stated denominator; leftover factors {list(product.den)}")
    return product.num


# ---------------------------------------------------------------------------
# simple normal crossing catalogue
# ---------------------------------------------------------------------------

_SNC_VARIANTS = ("space", "complement", "log", "divisor")


def snc_local_class(n: int, k: int, weights, variant: str) -> ClassFraction:
    """Local class of the standard SNC model in C^n.

    The divisor is the union of the first k coordinate hyperplanes; weights
    lists the torus weights of the n coordinates.  Variants:

      space       C^n itself
      complement  C^n minus the divisor
      log         the logarithmic sheaf class of the pair
      divisor     the coordinate subspace x_1 = ... = x_k = 0
    """
    if variant not in _SNC_VARIANTS:
        raise HirzlocError(f"unknown SNC variant {variant!r}")
    if not (0 <= k <= n):
        raise HirzlocError(f"need 0 <= k <= n, got k={k}, n={n}")
    ws = [_check_weight(w) for w in weights]
    if len(ws) != n:
        raise HirzlocError(f"expected {n} weights, got {len(ws)}")
    rank = len(ws[0]) if ws else 1
    divisor_factor = {"space": full_line, "complement": punctured_line,
                      "log": log_line, "divisor": None}[variant]
    out = ClassFraction.one(rank)
    for w in ws[:k]:
        if divisor_factor is not None:
            out = out * divisor_factor(w)
        # for the coordinate subspace the first k directions are normal
        # directions and cancel against the Euler class
    for w in ws[k:]:
        out = out * full_line(w)
    return out


@dataclass(frozen=True)
class IdentityWitness:
    """Both sides of a verified identity, for reporting."""

    lhs: ClassFraction
    rhs: ClassFraction

    @property
    def equal(self) -> bool:
        return self.lhs.equals(self.rhs)


def snc_log_expansion_check(n: int, k: int, weights) -> IdentityWitness:
    """Check: complement class = sum over I of d^{|I|} (log class of D_I).

    The log-stratum class of the face D_I keeps a logarithmic factor for
    every divisor direction outside I and a full factor for the transverse
    directions.
    """
    ws = [_check_weight(w) for w in weights]
    rank = len(ws[0]) if ws else 1
    lhs = snc_local_class(n, k, ws, "complement")
    rhs = ClassFraction.zero(rank)
    for mask in range(1 << k):
        size = bin(mask).count("1")
        term = ClassFraction.constant(rank, _DELTA ** size)
        for i in range(k):
            if not (mask >> i) & 1:
                term = term * log_line(ws[i])
        for w in ws[k:]:
            term = term * full_line(w)
        rhs = rhs + term
    return IdentityWitness(lhs, rhs)


# ---------------------------------------------------------------------------
# toric germs
# ---------------------------------------------------------------------------

def _dual_side_rays(cone: Cone, basis: LatticeBasis) -> list[Character]:
    if cone.side == "dual":
        return list(cone.rays)
    if not basis.is_standard():
        raise ConeError(
            "primal input requires the standard character lattice; "
            "pass the dual cone directly for quotient lattices")
    return list(dual_cone(cone).rays)


def toric_local_class(cone: Cone, basis: LatticeBasis | None = None) -> ClassFraction:
    """Localized class of an affine toric germ at its torus fixed point.

    The sum runs over the faces of the dual cone; a face F of dimension k
    contributes (-d)^k times the generating function of its relative
    interior lattice points.  The zero face contributes the constant 1.
    """
    if basis is None:
        basis = LatticeBasis.standard(cone.ambient_dim)
    dual_rays = _dual_side_rays(cone, basis)
    dcoords = sorted({basis.coords_direction(r) for r in dual_rays})
    n = basis.dim
    if mat_rank(dcoords) != n:
        raise ConeError("dual cone is not full-dimensional over the working lattice")
    if not is_pointed(dcoords):
        raise ConeError("dual cone is not pointed")
    amb_rays = [basis.from_coords(c) for c in dcoords]
    cone_canonical = Cone(amb_rays, side="dual")
    parts = []
    for f in faces(cone_canonical):
        frays = [cone_canonical.rays[i] for i in f.ray_indices]
        term = interior_generating_function(frays, basis)
        parts.append(term * minus_delta_power(f.dim))
    return sum_fractions(parts, basis.rank)


def toric_y0_check(cone: Cone, basis: LatticeBasis | None = None) -> IdentityWitness:
    """Structure sheaf comparison for a toric germ.

    At y = 0 the localized class must equal the generating function of all
    lattice points of the closed dual cone (computed by an independent
    half-open decomposition of the closed cone).
    """
    if basis is None:
        basis = LatticeBasis.standard(cone.ambient_dim)
    lhs = toric_local_class(cone, basis).substitute_y(0)
    rhs = closed_generating_function(_dual_side_rays(cone, basis), basis)
    return IdentityWitness(lhs, rhs)


# ---------------------------------------------------------------------------
# cones over projective hypersurfaces (one dimensional torus)
# ---------------------------------------------------------------------------

def hypersurface_numerator(n: int, d: int) -> Series:
    """Numerator polynomial f with class(Y in P^{n-1}) = h^n f(U)/U^n.

    Y is a smooth degree-d hypersurface in P^{n-1}; f is computed modulo U^n
    inside Q(d)[U] (the division inverts units with constant term 1 + y) and
    must clear to polynomial coefficients, which is asserted.
    """
    if n < 2:
        raise DegreeError("the ambient projective space needs n >= 2")
    if d < 0:
        raise DegreeError("hypersurface degree must be nonnegative")
    order = n - 1
    one_plus_u = Series.from_terms("U", {0: DFrac.one(), 1: DFrac.one()}, order)
    a = Series.from_terms("U", {0: DFrac.one() + _Y, 1: _Y}, order) ** n
    upd = one_plus_u ** d
    b = Series.from_terms("U", {0: DFrac.one()}, order) - upd
    c = Series.from_terms("U", {0: DFrac.one()}, order) + upd.scale(_Y)
    f = a * b * c.inverse()
    f = f.scale(DFrac.coerce((-1) ** n) / _MINUS_DELTA)
    coeffs = []
    for k in f.degrees():
        v = DFrac.coerce(f[k])
        coeffs.append(DFrac(v.as_polynomial()))  # asserts polynomial in d
    return Series("U", f.low, coeffs, f.order)


def chi_of_projective_class(f: Series, n: int) -> DPoly:
    """The genus of the projective class h^n f(U)/U^n, via the residue at h=0."""
    _check_u_poly(f, n)
    value = residue(f.shift(-n))
    value = DFrac.coerce(value if not isinstance(value, int) else Fraction(value))
    return value.as_polynomial()


def _check_u_poly(f: Series, n: int):
    if f.var != "U":
        raise DegreeError("expected a polynomial in U")
    if f.low < 0:
        raise DegreeError("f must be a polynomial, not a Laurent series")
    top = max((k for k in f.degrees() if not DFrac.coerce(f[k]).is_zero()),
              default=0)
    if top >= n:
        raise DegreeError(f"degree {top} of f violates the bound < n = {n}")


def cone_class(f: Series, n: int, chi_y: DPoly, closed: bool) -> ClassFraction:
    """K-normalized class of the affine cone in C^n over a projective class.

    The one dimensional diagonal torus acts; with S = T - 1 the open cone
    (vertex removed) is d*(chi - f(S)/S^n), and the closed cone adds the
    vertex contribution 1.
    """
    _check_u_poly(f, n)
    rank = 1
    t: Character = (1,)
    s_poly = LaurentPoly(rank, {(0,): -1, (1,): 1})  # S = T - 1
    num = LaurentPoly.zero(rank)
    for k in f.degrees():
        c = DFrac.coerce(f[k])
        if c.is_zero():
            continue
        num = num + (s_poly ** k) * c
    f_over_sn = ClassFraction(num * DFrac.coerce((-1) ** n), (t,) * n)
    out = (ClassFraction.constant(rank, DFrac(chi_y)) - f_over_sn) * _DELTA
    if closed:
        out = out + ClassFraction.one(rank)
    return out


def structure_sheaf_cone_class(n: int, d: int) -> ClassFraction:
    """(1 - T^d)/(1 - T)^n: the Todd-times-structure-sheaf comparison class."""
    rank = 1
    if d == 0:
        return ClassFraction.zero(rank)
    num = LaurentPoly(rank, {(0,): 1, (d,): -1})
    return ClassFraction(num, ((1,),) * n)


def cone_structure_sheaf_comparison(n: int, d: int) -> IdentityWitness:
    """Compare the y=0 cone class with the structure sheaf class.

    Equality holds exactly for degrees d <= n and fails beyond.
    """
    f = hypersurface_numerator(n, d)
    chi = chi_of_projective_class(f, n)
    actual = cone_class(f, n, chi, closed=True).substitute_y(0)
    return IdentityWitness(actual, structure_sheaf_cone_class(n, d))


def quadric_recursion(n: int) -> tuple[ClassFraction, ClassFraction]:
    """Classes of the quadric cone in C^n and of its complement.

    Assembled by the two-step recursion in the cone formula's own terms;
    base cases are the point (n = 1) and the coordinate cross (n = 2).
    Serves as an independent oracle against cone_class with d = 2.
    """
    if n < 1:
        raise DegreeError("need n >= 1")
    t: Character = (1,)
    closed_by_n: dict[int, ClassFraction] = {}
    comp_by_n: dict[int, ClassFraction] = {}
    closed_by_n[1] = ClassFraction.one(1)
    comp_by_n[1] = punctured_line(t)
    if n >= 2:
        closed_by_n[2] = full_line(t) * 2 - ClassFraction.one(1)
        comp_by_n[2] = punctured_line(t) * punctured_line(t)
    base = 1 if n % 2 else 2
    full = full_line(t)
    # d S (2 + S) (d + S + d S)^{n-2} / S^n = d (2 + S)/S * full^{n-2}
    two_plus_s_over_s = ClassFraction(
        LaurentPoly(1, {(0,): -1, (1,): -1}), (t,))  # (2+S)/S = -(1+T)/(1-T)
    for m in range(base + 2, n + 1, 2):
        head = two_plus_s_over_s * (full ** (m - 2)) * _DELTA
        closed_by_n[m] = head + closed_by_n[m - 2] * (DFrac.one() + _DELTA)
        comp_head = punctured_line(t) * punctured_line(t) * (full ** (m - 2))
        comp_by_n[m] = comp_head + comp_by_n[m - 2] * (DFrac.one() + _DELTA)
    return closed_by_n[n], comp_by_n[n]


# ---------------------------------------------------------------------------
# resolution assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartTerm:
    """One chart of user-supplied resolution data.

    factors is a tuple of ("full", w), ("punctured", w) or
    ("custom", ClassFraction) entries; the term contributes
    sign * multiplicity * product(factors).
    """

    sign: int
    multiplicity: int
    factors: tuple

    def __init__(self, sign: int, multiplicity: int, factors):
        if sign not in (1, -1):
            raise HirzlocError("sign must be +1 or -1")
        if multiplicity < 1:
            raise HirzlocError("multiplicity must be a positive integer")
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "multiplicity", multiplicity)
        object.__setattr__(self, "factors", tuple(factors))


def assemble(terms, rank: int) -> ClassFraction:
    """Sum of chart contributions: pushforward in the K-normalized picture."""
    total = ClassFraction.zero(rank)
    for term in terms:
        part = ClassFraction.constant(rank, term.sign * term.multiplicity)
        for kind, payload in _iter_factors(term):
            if kind == "full":
                part = part * full_line(payload)
            elif kind == "punctured":
                part = part * punctured_line(payload)
            elif kind == "custom":
                part = part * payload
            else:
                raise HirzlocError(f"unknown chart factor kind {kind!r}")
        total = total + part
    return total


def _iter_factors(term: ChartTerm):
    for f in term.factors:
        kind = f[0]
        payload = f[1]
        yield kind, payload


# ---------------------------------------------------------------------------
# structure sheaf comparison for the plane cusp curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CuspComparison:
    actual: ClassFraction
    naive: ClassFraction

    @property
    def equal(self) -> bool:
        return self.actual.equals(self.naive)


def cusp_comparison(n: int) -> CuspComparison:
    """The curve x^2 = y^{2n+1} in C^2 at y = 0.

    The honest class is the normalization pushforward 1/(1 - T); the
    structure sheaf guess is (1 - T^{2(2n+1)})/((1 - T^{2n+1})(1 - T^2)).
    They differ for every n >= 1.
    """
    if n < 1:
        raise DegreeError("need n >= 1")
    actual = assemble([ChartTerm(1, 1, (("full", (1,)),))], 1).substitute_y(0)
    naive = ClassFraction(
        LaurentPoly(1, {(0,): 1, (2 * (2 * n + 1),): -1}),
        ((2 * n + 1,), (2,)))
    return CuspComparison(actual, naive)
