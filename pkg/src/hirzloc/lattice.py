"""Rational polyhedral cones and exact lattice-point machinery.

Everything here is exact integer / rational linear algebra at desk scale
(ambient dimension <= 4).  The main products are:

  * dual_cone       -- facet-normal enumeration over (d-1)-subsets of rays
  * faces           -- the full face lattice of a pointed cone
  * box_points      -- lattice points of the half-open fundamental
                       parallelepiped of a simplicial cone
  * interior_generating_function / closed_generating_function --
    the exact rational sums of T^m over the (relatively open or closed)
    cone, assembled from a deterministic half-open simplicial decomposition.

Triangulation rule: lexicographic pulling from the smallest ray in the
canonical (graded-lex) order; a shared facet of two pieces is kept by the
piece that contains a perturbed interior reference point weighted toward the
pulled ray.  The decomposition is validated by brute-force partition tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from .coeffs import DFrac
from .errors import ConeError, LatticeError, UnsupportedDimensionError, ZeroWeightError
from .laurent import (Character, ClassFraction, LaurentPoly, character,
                      grlex_key, sum_fractions)

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# integer / rational linear algebra
# ---------------------------------------------------------------------------

def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def primitive(v) -> Vec:
    """Divide by the positive content; direction is preserved."""
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        return v
    return tuple(x // g for x in v)


def primitive_from_rational(v) -> Vec:
    """Clear denominators of a rational vector and make it primitive."""
    v = [Fraction(x) for x in v]
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    return primitive(int(x * lcm) for x in v)


def mat_rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def solve_combination(rows, target):
    """Solve x * rows = target over Q; None when inconsistent."""
    if not rows:
        return [] if all(Fraction(t) == 0 for t in target) else None
    n = len(rows)
    ncols = len(rows[0])
    # augmented system: columns of rows^T
    aug = [[Fraction(rows[i][c]) for i in range(n)] + [Fraction(target[c])]
           for c in range(ncols)]
    piv_cols = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, ncols) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        pv = aug[rank][col]
        aug[rank] = [a / pv for a in aug[rank]]
        for i in range(ncols):
            if i != rank and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[rank])]
        piv_cols.append(col)
        rank += 1
    for i in range(rank, ncols):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(piv_cols):
        x[col] = aug[r][n]
    return x


def right_nullspace(rows):
    """Rational basis of {u : <row, u> = 0 for all rows}."""
    if not rows:
        return []
    ncols = len(rows[0])
    m = [[Fraction(x) for x in r] for r in rows]
    piv_of_col = {}
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [a / pv for a in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        piv_of_col[col] = rank
        rank += 1
    free = [c for c in range(ncols) if c not in piv_of_col]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for col, r in piv_of_col.items():
            v[col] = -m[r][fc]
        basis.append(v)
    return basis


def mat_inverse(rows):
    """Exact inverse of a square matrix given as a list of rows."""
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [a / pv for a in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [r[n:] for r in m]


def det(rows) -> Fraction:
    n = len(rows)
    m = [[Fraction(x) for x in r] for r in rows]
    out = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            out = -out
        pv = m[col][col]
        out *= pv
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return out


def hnf_rows(rows, cols: int | None = None):
    """Row Hermite normal form; the nonzero rows are a Z-basis of the row span.

    When cols is given, row reduction uses only the first `cols` columns for
    pivoting (the remainder rides along as a transform block).
    """
    M = [list(int(x) for x in r) for r in rows]
    if not M:
        return []
    ncols = len(M[0]) if cols is None else cols
    nrows = len(M)
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        while True:
            nz = [i for i in range(row, nrows) if M[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(M[i][col]), i))
            if i0 != row:
                M[row], M[i0] = M[i0], M[row]
            p = M[row][col]
            changed = False
            for i in range(row + 1, nrows):
                if M[i][col] != 0:
                    q = M[i][col] // p
                    if q:
                        M[i] = [a - q * b for a, b in zip(M[i], M[row])]
                    if M[i][col] != 0:
                        changed = True
            if not changed:
                break
        if M[row][col] == 0:
            continue
        if M[row][col] < 0:
            M[row] = [-a for a in M[row]]
        p = M[row][col]
        for i in range(row):
            q = M[i][col] // p
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[row])]
        row += 1
    return M


def row_space_basis(rows):
    """Z-basis (HNF rows) of the lattice generated by the given rows."""
    H = hnf_rows(rows)
    return [tuple(r) for r in H if any(r)]


def integer_kernel(constraint_rows, n: int):
    """Z-basis of {x in Z^n : <a, x> = 0 for every constraint row a}.

    The kernel of an integer matrix is saturated, so this doubles as a
    basis of (rational span-orthogonal) intersected with Z^n.
    """
    k = len(constraint_rows)
    aug = [[constraint_rows[j][i] for j in range(k)] +
           [int(i == j) for j in range(n)] for i in range(n)]
    H = hnf_rows(aug, cols=k)
    out = [tuple(r[k:]) for r in H if all(x == 0 for x in r[:k])]
    return out


def span_lattice_basis(vectors, n: int):
    """Z-basis of (rational span of vectors) intersected with Z^n (saturated)."""
    perp = [primitive_from_rational(u) for u in right_nullspace(vectors)]
    return integer_kernel(perp, n)


# ---------------------------------------------------------------------------
# lattices and cones
# ---------------------------------------------------------------------------

class LatticeBasis:
    """A working sublattice M' of Z^r given by the Z-span of generators.

    The generators may be redundant; a Hermite basis is extracted once.
    Membership and coordinates are exact integer linear algebra.
    """

    __slots__ = ("rank", "generators", "basis")

    def __init__(self, rank: int, generators=None):
        self.rank = rank
        if generators is None:
            gens = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
        else:
            gens = [character(g) for g in generators]
            for g in gens:
                if len(g) != rank:
                    raise LatticeError(f"generator {g} has length != {rank}")
        self.generators = tuple(gens)
        self.basis = tuple(row_space_basis(gens))

    @staticmethod
    def standard(rank: int) -> "LatticeBasis":
        return LatticeBasis(rank)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_standard(self) -> bool:
        return self.basis == tuple(
            tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    def coords(self, v) -> Vec:
        """Integer coordinates of v in the Hermite basis; error if v not in M'."""
        v = character(v)
        x = solve_combination(self.basis, v)
        if x is None:
            raise LatticeError(f"{v} is not in the span of the lattice")
        out = []
        for c in x:
            if c.denominator != 1:
                raise LatticeError(f"{v} is not a lattice point of M'")
            out.append(int(c))
        return tuple(out)

    def contains(self, v) -> bool:
        try:
            self.coords(v)
            return True
        except LatticeError:
            return False

    def coords_direction(self, v) -> Vec:
        """Primitive integer coordinates of the ray direction through v."""
        x = solve_combination(self.basis, character(v))
        if x is None:
            raise LatticeError(f"{tuple(v)} is not in the span of the lattice")
        return primitive_from_rational(x)

    def from_coords(self, c) -> Character:
        out = [0] * self.rank
        for coeff, row in zip(c, self.basis):
            for i, x in enumerate(row):
                out[i] += coeff * x
        return tuple(out)


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by primitive integer ray generators.

    The side marker records whether the rays live in the cocharacter lattice
    (primal) or the character lattice (dual).  Rays are canonicalized:
    primitive, distinct, graded-lex sorted.
    """

    rays: tuple[Character, ...]
    side: str = "primal"

    def __init__(self, rays, side: str = "primal"):
        if side not in ("primal", "dual"):
            raise ConeError(f"unknown cone side {side!r}")
        clean = []
        for r in rays:
            r = primitive(character(r))
            if all(x == 0 for x in r):
                raise ZeroWeightError("zero vector is not a valid ray")
            if r not in clean:
                clean.append(r)
        clean.sort(key=grlex_key)
        object.__setattr__(self, "rays", tuple(clean))
        object.__setattr__(self, "side", side)

    @property
    def ambient_dim(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    def dim(self) -> int:
        return mat_rank(self.rays) if self.rays else 0


@dataclass(frozen=True)
class Face:
    """A face of a cone, identified by the rays lying on it."""

    ray_indices: tuple[int, ...]
    dim: int


# ---------------------------------------------------------------------------
# polar cones, facets, faces
# ---------------------------------------------------------------------------

def _polar_rays_fulldim(rays, d: int):
    """Facet normals of a full-dimensional cone in Z^d, primitive, sorted.

    The result generates the polar cone {u : <u, v> >= 0 for v in the cone}.
    """
    rays = [tuple(r) for r in rays]
    if mat_rank(rays) != d:
        raise ConeError("cone is not full-dimensional in its ambient space")
    if d == 1:
        dirs = {primitive(r) for r in rays}
        if len(dirs) > 1:
            return []  # a full line; polar is the zero cone
        return [next(iter(dirs))]
    found = set()
    for subset in combinations(range(len(rays)), d - 1):
        sub = [rays[i] for i in subset]
        if mat_rank(sub) != d - 1:
            continue
        null = right_nullspace(sub)
        if len(null) != 1:
            continue
        u = primitive_from_rational(null[0])
        signs = [dot(u, r) for r in rays]
        if all(s >= 0 for s in signs):
            found.add(u)
        elif all(s <= 0 for s in signs):
            found.add(tuple(-x for x in u))
    return sorted(found, key=grlex_key)


def _span_restriction(rays, n: int):
    """Coordinates of the rays in the saturated lattice of their span.

    Returns (lattice_rows, coord_vectors); lattice_rows express the span
    lattice basis in the ambient coordinates.
    """
    L = span_lattice_basis(rays, n)
    coords = []
    for r in rays:
        x = solve_combination(L, r)
        if x is None or any(c.denominator != 1 for c in x):
            raise LatticeError("ray does not lie in its own saturated span lattice")
        coords.append(tuple(int(c) for c in x))
    return L, coords


def is_pointed(rays) -> bool:
    """A cone is pointed when 0 is not a positive combination of rays."""
    rays = [tuple(r) for r in rays]
    if not rays:
        return True
    n = len(rays[0])
    d = mat_rank(rays)
    if d == 0:
        return True
    _, coords = _span_restriction(rays, n)
    normals = _polar_rays_fulldim(coords, d)
    return bool(normals) and mat_rank(normals) == d


def dual_cone(c: Cone, basis: LatticeBasis | None = None) -> Cone:
    """Primitive ray generators of the polar cone, graded-lex sorted.

    The cone must be pointed and full-dimensional with respect to the lattice
    it lives in.  When a nonstandard basis is given the rays are interpreted
    through its coordinates and the result is expressed in the coordinates of
    the dual basis.
    """
    if basis is None:
        basis = LatticeBasis.standard(c.ambient_dim)
    if basis.is_standard():
        rays = list(c.rays)
        d = c.ambient_dim
    else:
        rays = [basis.coords_direction(r) for r in c.rays]
        d = basis.dim
    if d > 4:
        raise UnsupportedDimensionError(f"dimension {d} above the supported envelope")
    normals = _polar_rays_fulldim(rays, d)
    if not normals or mat_rank(normals) != d:
        raise ConeError("cone is not pointed; its dual is not full-dimensional")
    side = "dual" if c.side == "primal" else "primal"
    return Cone(normals, side=side)


def faces(c: Cone) -> list[Face]:
    """All faces of a pointed cone, including the origin and the cone itself.

    Faces are listed by (dimension, ray-index tuple); each face is identified
    with the set of rays lying on it.
    """
    rays = list(c.rays)
    if not rays:
        return [Face((), 0)]
    n = c.ambient_dim
    d = mat_rank(rays)
    _, coords = _span_restriction(rays, n)
    normals = _polar_rays_fulldim(coords, d)
    if d > 0 and (not normals or mat_rank(normals) != d):
        raise ConeError("cone is not pointed")
    found = {tuple(range(len(rays)))}
    for k in range(1, len(normals) + 1):
        for subset in combinations(range(len(normals)), k):
            idxs = tuple(i for i, r in enumerate(coords)
                         if all(dot(normals[j], r) == 0 for j in subset))
            found.add(idxs)
    found.add(())
    out = []
    for idxs in found:
        fdim = mat_rank([coords[i] for i in idxs]) if idxs else 0
        out.append(Face(idxs, fdim))
    out.sort(key=lambda f: (f.dim, f.ray_indices))
    return out


# ---------------------------------------------------------------------------
# half-open boxes and triangulation
# ---------------------------------------------------------------------------

def _box_points_coords(vs, strict):
    """Lattice points of the parallelepiped sum lambda_i v_i with
    lambda_i in (0, 1] where strict[i] else [0, 1)."""
    d = len(vs)
    inv = mat_inverse(vs)
    los = [sum(min(0, v[k]) for v in vs) for k in range(d)]
    his = [sum(max(0, v[k]) for v in vs) for k in range(d)]
    out = []
    for m in product(*[range(lo, hi + 1) for lo, hi in zip(los, his)]):
        lam = [sum(Fraction(m[i]) * inv[i][j] for i in range(d)) for j in range(d)]
        ok = True
        for lmb, s in zip(lam, strict):
            if s:
                if not (0 < lmb <= 1):
                    ok = False
                    break
            else:
                if not (0 <= lmb < 1):
                    ok = False
                    break
        if ok:
            out.append(tuple(m))
    out.sort(key=grlex_key)
    return out


def box_points(rays, basis: LatticeBasis) -> list[Character]:
    """Interior-variant box points of a simplicial cone, as ambient characters.

    All barycentric coordinates lie in (0, 1]; the count equals the index of
    the sublattice spanned by the rays inside the span lattice.
    """
    rays = [character(r) for r in rays]
    coords = [basis.coords_direction(r) for r in rays]
    if mat_rank(coords) != len(coords):
        raise ConeError("box points require linearly independent rays")
    L, rcoords = _span_restriction(coords, basis.dim)
    pts = _box_points_coords(rcoords, [True] * len(rcoords))
    out = []
    for p in pts:
        mc = [0] * basis.dim
        for coeff, row in zip(p, L):
            for i, x in enumerate(row):
                mc[i] += coeff * x
        out.append(basis.from_coords(mc))
    return out


def _facets_of_subcone(all_coords, idxs):
    """Facet ray-index subsets of the subcone spanned by idxs (within its span)."""
    sub = [all_coords[i] for i in idxs]
    n = len(sub[0])
    d = mat_rank(sub)
    _, coords = _span_restriction(sub, n)
    normals = _polar_rays_fulldim(coords, d)
    out = []
    for u in normals:
        f = tuple(idxs[i] for i, r in enumerate(coords) if dot(u, r) == 0)
        out.append(f)
    return sorted(set(out))


def _pulling_triangulation(all_coords, idxs):
    """Lexicographic pulling triangulation; returns sorted ray-index tuples.

    Within every face the pulled ray is the first in the global canonical
    order, so triangulations of shared faces agree and the pieces form a
    simplicial fan.
    """
    idxs = tuple(sorted(idxs))
    vecs = [all_coords[i] for i in idxs]
    d = mat_rank(vecs)
    if len(idxs) == d:
        return [idxs]
    v0 = idxs[0]
    out = set()
    for facet in _facets_of_subcone(all_coords, idxs):
        if v0 in facet:
            continue
        for simplex in _pulling_triangulation(all_coords, facet):
            out.add(tuple(sorted((v0,) + simplex)))
    return sorted(out)


def _simplex_facet_normals(vs):
    """Inward facet normals of a full-dimensional simplicial cone.

    normals[j] vanishes on every ray but the j-th and is positive there.
    """
    out = []
    for j in range(len(vs)):
        others = [v for i, v in enumerate(vs) if i != j]
        null = right_nullspace(others) if others else [[Fraction(1)]]
        u = primitive_from_rational(null[0])
        s = dot(u, vs[j])
        if s < 0:
            u = tuple(-x for x in u)
        elif s == 0:
            raise ConeError("degenerate simplicial piece")
        out.append(u)
    return out


def _perturbed_sign(u, apex, rho, d: int) -> int:
    """Sign of <u, xi> for the perturbed interior reference point
    xi = N*apex + rho + sum eps^i e_i  (N >> 1 >> eps)."""
    s = dot(u, apex)
    if s != 0:
        return 1 if s > 0 else -1
    s = dot(u, rho)
    if s != 0:
        return 1 if s > 0 else -1
    for i in range(d):
        if u[i] != 0:
            return 1 if u[i] > 0 else -1
    raise ConeError("zero normal vector")


def _half_open_pieces(coords, interior: bool):
    """Deterministic half-open simplicial decomposition of a full-dimensional
    pointed cone in Z^d.

    Yields (piece ray-index tuple, strictness flags per piece ray).  The
    reference point xi is a generic interior point weighted toward the pulled
    ray.  A piece keeps a wall closed exactly when xi lies strictly inside
    (closed variant, partitioning the closed cone) or strictly outside
    (interior variant, partitioning the relative interior); the two rules are
    reciprocal and walls on the cone boundary always end up closed in the
    first case and strict in the second.
    """
    d = len(coords[0])
    idxs = tuple(range(len(coords)))
    pieces = _pulling_triangulation(coords, idxs)
    apex = coords[min(idxs)]
    rho = tuple(sum(v[k] for v in coords) for k in range(d))
    for piece in pieces:
        vs = [coords[i] for i in piece]
        normals = _simplex_facet_normals(vs)
        strict = []
        for u in normals:
            inside = _perturbed_sign(u, apex, rho, d) > 0
            strict.append(inside if interior else not inside)
        yield piece, strict


def _genfun(rays_ambient, basis: LatticeBasis, interior: bool) -> ClassFraction:
    rank = basis.rank
    if not rays_ambient:
        return ClassFraction.one(rank)
    coords = sorted({basis.coords_direction(r) for r in rays_ambient},
                    key=grlex_key)
    n = basis.dim
    d = mat_rank(coords)
    L, rcoords = _span_restriction(coords, n)

    def to_ambient(m) -> Character:
        mc = [0] * n
        for coeff, row in zip(m, L):
            for i, x in enumerate(row):
                mc[i] += coeff * x
        return basis.from_coords(mc)

    if not is_pointed(rcoords):
        raise ConeError("generating function requires a pointed cone")
    parts = []
    for piece, strict in _half_open_pieces(rcoords, interior):
        vs = [rcoords[i] for i in piece]
        pts = _box_points_coords(vs, strict)
        num = LaurentPoly(rank, {to_ambient(p): 1 for p in pts})
        den = [to_ambient(v) for v in vs]
        parts.append(ClassFraction(num, den, canonical=True))
    return sum_fractions(parts, rank)


def interior_generating_function(rays, basis: LatticeBasis) -> ClassFraction:
    """Sum of T^m over the relative interior lattice points of the cone.

    The cone is triangulated without new rays; half-open facets are chosen
    deterministically so the pieces partition the relative interior.  Each
    piece contributes its box-point numerator over factors (1 - T^{w_i}).
    """
    return _genfun([character(r) for r in rays], basis, interior=True)


def closed_generating_function(rays, basis: LatticeBasis) -> ClassFraction:
    """Sum of T^m over all lattice points of the closed cone."""
    return _genfun([character(r) for r in rays], basis, interior=False)


def ray_sublattice_index(rays, basis: LatticeBasis) -> int:
    """Index of the sublattice spanned by independent rays inside the
    saturated lattice of their span."""
    coords = [basis.coords_direction(r) for r in rays]
    if mat_rank(coords) != len(coords):
        raise ConeError("index requires linearly independent rays")
    _, rcoords = _span_restriction(coords, basis.dim)
    return abs(int(det(rcoords)))


def minus_delta_power(k: int) -> DFrac:
    """(-d)^k as a coefficient."""
    return DFrac([0, -1]) ** k
