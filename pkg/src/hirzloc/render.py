"""Deterministic text rendering and JSON serialization.

The text grammar is fixed so golden files are stable:

  * rationals            3, -3/2
  * the genus variable   d (or y in the y basis; y = -1 - d)
  * coefficients         bare rationals, (1 + 2*d), ((1 + d)/(d))
  * monomials            T[1,-2] for T_1 T_2^-2, S[2,0] for S_{2 t_1}
  * Laurent polynomials  terms in graded-lex order, explicit *
  * class fractions      (N) / ((1 - T[w])^k * ...)

JSON documents round-trip exactly: parse(emit(x)) == x.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import DFrac, DPoly
from .errors import JobError
from .laurent import ClassFraction, LaurentPoly, grlex_key
from .sform import PositivityReport, SPolynomial, SVariableSet


def frac_str(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def dpoly_str(p: DPoly, var: str = "d") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.c):
        if c == 0:
            continue
        if k == 0:
            parts.append(frac_str(c))
            continue
        v = var if k == 1 else f"{var}^{k}"
        if c == 1:
            parts.append(v)
        elif c == -1:
            parts.append(f"-{v}")
        else:
            parts.append(f"{frac_str(c)}*{v}")
    return _join_terms(parts)


def coeff_str(c: DFrac, basis: str = "delta") -> str:
    num, den = c.num, c.den
    if basis == "y":
        num, den = num.to_other_basis(), den.to_other_basis()
        lead = den.leading()
        if not den.is_zero() and lead not in (0, 1):
            num = num * (1 / lead)
            den = den * (1 / lead)
    var = "y" if basis == "y" else "d"
    if den.degree() == 0:
        if num.degree() <= 0:
            return frac_str(num[0]) if not num.is_zero() else "0"
        return f"({dpoly_str(num, var)})"
    return f"(({dpoly_str(num, var)})/({dpoly_str(den, var)}))"


def monomial_str(w, sym: str = "T") -> str:
    return f"{sym}[{','.join(str(x) for x in w)}]"


def laurent_str(p: LaurentPoly, basis: str = "delta") -> str:
    if p.is_zero():
        return "0"
    parts = []
    zero = (0,) * p.rank
    for w, c in p.sorted_terms():
        cs = coeff_str(c, basis)
        if w == zero:
            parts.append(cs)
        else:
            parts.append(f"{cs} * {monomial_str(w)}")
    return _join_terms(parts)


def class_str(cf: ClassFraction, basis: str = "delta") -> str:
    num = laurent_str(cf.num, basis)
    if not cf.den:
        return num
    counts: dict = {}
    for w in cf.den:
        counts[w] = counts.get(w, 0) + 1
    factors = []
    for w in sorted(counts, key=grlex_key):
        base = f"(1 - {monomial_str(w)})"
        k = counts[w]
        factors.append(base if k == 1 else f"{base}^{k}")
    return f"({num}) / ({' * '.join(factors)})"


def spoly_term_str(sexp, dexp: int, coeff: Fraction,
                   svars: SVariableSet, basis: str = "delta") -> str:
    var = "y" if basis == "y" else "d"
    parts = []
    for i, e in enumerate(sexp):
        if e:
            m = monomial_str(svars.chars[i], "S")
            parts.append(m if e == 1 else f"{m}^{e}")
    if dexp:
        parts.append(var if dexp == 1 else f"{var}^{dexp}")
    if not parts:
        return frac_str(coeff)
    body = " * ".join(parts)
    return f"{frac_str(coeff)} * {body}"


def spoly_str(p: SPolynomial, svars: SVariableSet, basis: str = "delta") -> str:
    if p.is_zero():
        return "0"
    parts = [spoly_term_str(sexp, dexp, c, svars, basis)
             for (sexp, dexp), c in p.sorted_terms()]
    return _join_terms(parts)


# ---------------------------------------------------------------------------
# JSON encoding (exact, round-tripping)
# ---------------------------------------------------------------------------

def frac_to_json(q: Fraction) -> str:
    return frac_str(q)


def frac_from_json(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise JobError(f"expected a rational string, got {s!r}")


def dfrac_to_json(c: DFrac):
    out = {"num": [frac_to_json(x) for x in c.num.c]}
    if not c.is_polynomial():
        out["den"] = [frac_to_json(x) for x in c.den.c]
    return out


def dfrac_from_json(obj) -> DFrac:
    if isinstance(obj, (int, str)):
        return DFrac(DPoly((frac_from_json(obj),)))
    num = DPoly([frac_from_json(x) for x in obj["num"]])
    den = DPoly([frac_from_json(x) for x in obj.get("den", [1])])
    return DFrac(num, den)


def laurent_to_json(p: LaurentPoly):
    return {
        "rank": p.rank,
        "terms": [[list(w), dfrac_to_json(c)] for w, c in p.sorted_terms()],
    }


def laurent_from_json(obj) -> LaurentPoly:
    rank = int(obj["rank"])
    return LaurentPoly(rank, {tuple(int(x) for x in w): dfrac_from_json(c)
                              for w, c in obj["terms"]})


def class_to_json(cf: ClassFraction):
    return {
        "numerator": laurent_to_json(cf.num),
        "denominator": [list(w) for w in cf.den],
    }


def class_from_json(obj) -> ClassFraction:
    num = laurent_from_json(obj["numerator"])
    den = [tuple(int(x) for x in w) for w in obj["denominator"]]
    return ClassFraction(num, den)


def spoly_to_json(p: SPolynomial):
    return {
        "nvars": p.nvars,
        "terms": [[list(sexp), dexp, frac_to_json(c)]
                  for (sexp, dexp), c in p.sorted_terms()],
    }


def spoly_from_json(obj) -> SPolynomial:
    nvars = int(obj["nvars"])
    return SPolynomial(nvars, {(tuple(int(x) for x in sexp), int(dexp)):
                               frac_from_json(c)
                               for sexp, dexp, c in obj["terms"]})


def report_to_json(rep: PositivityReport, svars: SVariableSet | None):
    out = {
        "verdict": rep.verdict,
        "representation_dependent": rep.representation_dependent,
        "terms": [[list(sexp), dexp, frac_to_json(c)]
                  for (sexp, dexp), c in rep.entries],
        "offending": [[list(sexp), dexp, frac_to_json(c)]
                      for (sexp, dexp), c in rep.offending],
    }
    if svars is not None:
        out["alphabet"] = [list(w) for w in svars.chars]
    return out


def report_text_lines(rep: PositivityReport, svars: SVariableSet,
                      basis: str = "delta") -> list[str]:
    lines = [f"verdict: {rep.verdict}",
             f"representation-dependent: {'yes' if rep.representation_dependent else 'no'}",
             f"terms: {len(rep.entries)}"]
    for (sexp, dexp), c in rep.entries:
        lines.append("  " + spoly_term_str(sexp, dexp, c, svars, basis))
    if rep.offending:
        lines.append(f"offending: {len(rep.offending)}")
        for (sexp, dexp), c in rep.offending:
            lines.append("  " + spoly_term_str(sexp, dexp, c, svars, basis))
    return lines
