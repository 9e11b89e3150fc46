"""Rational polytopes: exact facets, polar duality, faces and lattice points."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, floor
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, PolytopeError
from .lattice import (
    RationalVector,
    fmt_vec,
    gcd_of,
    is_integral,
    nullspace,
    pairing,
    rank_rational,
    scale_to_primitive,
    sub,
    to_int_vector,
)


@dataclass(frozen=True)
class Facet:
    """Inequality ``<normal, x> >= rhs`` with a primitive integral normal."""

    normal: tuple[int, ...]
    rhs: Fraction
    vertex_indices: tuple[int, ...]

    def value(self, x):
        return pairing(self.normal, x) - self.rhs


@dataclass(frozen=True, eq=False)
class Face:
    parent: "Polytope"
    vertex_indices: tuple[int, ...]
    dim: int

    @property
    def vertices(self) -> list[RationalVector]:
        return [self.parent.vertices[i] for i in self.vertex_indices]

    def __eq__(self, other):
        return (
            isinstance(other, Face)
            and other.parent is self.parent
            and other.vertex_indices == self.vertex_indices
        )

    def __hash__(self):
        return hash((id(self.parent), self.vertex_indices))

    def __repr__(self):
        pts = ", ".join(fmt_vec(v) for v in self.vertices)
        return f"Face(dim={self.dim}, vertices=[{pts}])"


def _affine_rank(points: Sequence[RationalVector]) -> int:
    if not points:
        return -1
    return rank_rational([sub(p, points[0]) for p in points[1:]]) if len(points) > 1 else 0


class Polytope:
    """Full-dimensional rational polytope in a lattice of rank ``d``.

    Construct with :meth:`from_vertices`; both the V- and the H-representation
    are kept, the face lattice and lattice points are computed on first use.
    """

    def __init__(self, rank: int, vertices: Sequence[RationalVector], facets: Sequence[Facet]):
        self.rank = rank
        self.vertices = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        self.facets = tuple(facets)
        self._dual: Polytope | None = None

    # -- construction ---------------------------------------------------

    @classmethod
    def from_vertices(cls, rank: int, points: Iterable[Sequence]) -> "Polytope":
        pts: list[RationalVector] = []
        seen = set()
        for p in points:
            q = tuple(Fraction(x) for x in p)
            if len(q) != rank:
                raise DegenerateInputError(f"point {fmt_vec(q)} does not have length {rank}")
            if q not in seen:
                seen.add(q)
                pts.append(q)
        hull_dim = _affine_rank(pts)
        if hull_dim < rank:
            raise DegenerateInputError(
                f"convex hull has affine dimension {hull_dim}, expected {rank}"
            )

        found: dict[tuple[int, ...], Fraction] = {}
        for subset in combinations(range(len(pts)), rank):
            base = pts[subset[0]]
            diffs = [sub(pts[i], base) for i in subset[1:]]
            ker = nullspace(diffs, rank)
            if len(ker) != 1:
                continue
            normal = scale_to_primitive(ker[0])
            c = pairing(normal, base)
            vals = [pairing(normal, p) - c for p in pts]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                normal = tuple(-x for x in normal)
                c = -c
            else:
                continue
            found.setdefault(normal, c)

        incidences = {
            normal: [i for i, p in enumerate(pts) if pairing(normal, p) == c]
            for normal, c in found.items()
        }
        keep = []
        for i, p in enumerate(pts):
            normals = [n for n, inc in incidences.items() if i in inc]
            if normals and rank_rational(normals) == rank:
                keep.append(i)
        vertices = [pts[i] for i in keep]
        facets = []
        for normal, c in found.items():
            idx = tuple(j for j, v in enumerate(vertices) if pairing(normal, v) == c)
            facets.append(Facet(normal, Fraction(c), idx))
        facets.sort(key=lambda f: (f.vertex_indices, f.normal))
        return cls(rank, vertices, facets)

    # -- basic queries ------------------------------------------------------

    def __repr__(self):
        return f"Polytope(rank={self.rank}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    @property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    def contains(self, x) -> bool:
        return all(f.value(x) >= 0 for f in self.facets)

    def tight_facets(self, x) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.facets) if f.value(x) == 0)

    def on_boundary(self, x) -> bool:
        return self.contains(x) and bool(self.tight_facets(x))

    def origin_interior(self) -> bool:
        return all(f.rhs < 0 for f in self.facets)

    # -- duality ------------------------------------------------------------

    @property
    def dual(self) -> "Polytope":
        if self._dual is None:
            self._dual = dual_polytope(self)
        return self._dual

    # -- faces ---------------------------------------------------------------

    @cached_property
    def face_lattice(self) -> dict[frozenset, int]:
        """Map from vertex-index set to dimension, over all nonempty proper faces."""
        facet_sets = [frozenset(f.vertex_indices) for f in self.facets]
        faces = set(facet_sets)
        frontier = set(facet_sets)
        while frontier:
            nxt = set()
            for face in frontier:
                for fs in facet_sets:
                    meet = face & fs
                    if meet and meet != face and meet not in faces:
                        nxt.add(meet)
            faces |= nxt
            frontier = nxt
        return {f: _affine_rank([self.vertices[i] for i in sorted(f)]) for f in faces}

    def faces(self, dim: int) -> list[Face]:
        if not 0 <= dim <= self.rank - 1:
            raise PolytopeError(f"face dimension {dim} out of range 0..{self.rank - 1}")
        out = [Face(self, tuple(sorted(s)), d) for s, d in self.face_lattice.items() if d == dim]
        out.sort(key=lambda f: f.vertex_indices)
        return out

    def face(self, vertex_points: Iterable[Sequence]) -> Face:
        """The smallest face containing the given points (which must lie in the polytope)."""
        pts = [tuple(Fraction(x) for x in p) for p in vertex_points]
        tight = set(range(len(self.facets)))
        for p in pts:
            if not self.contains(p):
                raise PolytopeError(f"point {fmt_vec(p)} is not in the polytope")
            tight &= set(self.tight_facets(p))
        if not tight:
            raise PolytopeError("points do not lie on a common proper face")
        idx = set(range(len(self.vertices)))
        for t in tight:
            idx &= set(self.facets[t].vertex_indices)
        key = frozenset(idx)
        return Face(self, tuple(sorted(key)), self.face_lattice[key])

    def facets_containing(self, face: Face) -> list[int]:
        s = set(face.vertex_indices)
        return [i for i, f in enumerate(self.facets) if s <= set(f.vertex_indices)]

    # -- lattice points -------------------------------------------------------

    @cached_property
    def _lattice_points(self) -> tuple[tuple[int, ...], ...]:
        d = self.rank
        lo = [floor(min(v[j] for v in self.vertices)) for j in range(d)]
        hi = [ceil(max(v[j] for v in self.vertices)) for j in range(d)]
        A = [list(f.normal) for f in self.facets]
        b = [ceil(f.rhs) for f in self.facets]
        box = max(max(abs(x) for x in lo + hi), 1)
        amax = max(abs(x) for row in A for x in row)
        if _kernels.int64_safe(amax * box * (d + 1), *b):
            arr = _kernels.lattice_points_in(np.array(A), np.array(b), np.array(lo), np.array(hi))
            pts = [tuple(int(x) for x in row) for row in arr]
        else:
            pts = list(_lattice_points_exact(A, b, lo, hi))
        pts.sort()
        return tuple(pts)

    def lattice_points(self) -> list[tuple[int, ...]]:
        return list(self._lattice_points)

    def interior_lattice_points(self, face: "Face | Polytope | None" = None) -> list[tuple[int, ...]]:
        """Lattice points in the relative interior of ``face`` (default: the polytope)."""
        if face is None or face is self:
            tight_needed: set[int] = set()
        else:
            if face.parent is not self:
                raise PolytopeError("face belongs to a different polytope")
            tight_needed = set(self.facets_containing(face))
        return [p for p in self._lattice_points if set(self.tight_facets(p)) == tight_needed]

    # -- edges ----------------------------------------------------------------

    def edge_points_ordered(self, edge: Face) -> list[tuple[int, ...]]:
        if edge.dim != 1:
            raise PolytopeError(f"expected an edge, got a {edge.dim}-face")
        a, b = edge.vertices
        if not (is_integral(a) and is_integral(b)):
            raise PolytopeError("edge endpoints are not lattice points")
        a, b = sorted([to_int_vector(a), to_int_vector(b)])
        diff = sub(b, a)
        g = gcd_of(diff)
        step = tuple(x // g for x in diff)
        return [tuple(ai + j * si for ai, si in zip(a, step)) for j in range(g + 1)]


def _lattice_points_exact(A, b, lo, hi):
    """Python-int version of the pruned box scan, used when int64 could overflow."""
    d = len(lo)
    m = len(A)
    smax = [[0] * (d + 1) for _ in range(m)]
    for k in range(m):
        for j in range(d - 1, -1, -1):
            smax[k][j] = smax[k][j + 1] + max(A[k][j] * lo[j], A[k][j] * hi[j])

    def rec(j, prefix, partial):
        if j == d:
            if all(partial[k] >= b[k] for k in range(m)):
                yield tuple(prefix)
            return
        low, high = lo[j], hi[j]
        for k in range(m):
            need = b[k] - partial[k] - smax[k][j + 1]
            a = A[k][j]
            if a > 0:
                low = max(low, -((-need) // a))
            elif a < 0:
                high = min(high, need // a)
            elif need > 0:
                return
        for x in range(low, high + 1):
            yield from rec(j + 1, prefix + [x], [partial[k] + A[k][j] * x for k in range(m)])

    yield from rec(0, [], [0] * m)


# -- module-level operations ------------------------------------------------------


def from_vertices(rank: int, points) -> Polytope:
    return Polytope.from_vertices(rank, points)


def dual_polytope(P: Polytope) -> Polytope:
    """The polar ``{n : <m, n> >= -1 for all m in P}``."""
    if not P.origin_interior():
        raise PolytopeError("origin is not strictly interior; the dual is unbounded")
    dual_vertices = [tuple(Fraction(x) / -f.rhs for x in f.normal) for f in P.facets]
    facets = []
    for i, v in enumerate(P.vertices):
        w = scale_to_primitive(v)
        # v = c * w with c > 0, so <v, n> >= -1  <=>  <w, n> >= -1/c
        c = next(Fraction(a) / b for a, b in zip(v, w) if b != 0)
        idx = tuple(j for j, f in enumerate(P.facets) if i in f.vertex_indices)
        facets.append(Facet(w, Fraction(-1) / c, idx))
    Q = Polytope(P.rank, dual_vertices, facets)
    Q._dual = P
    return Q


def reflexive_diagnostic(P: Polytope) -> str | None:
    """``None`` when ``P`` is reflexive, otherwise the first failing condition."""
    if not P.origin_interior():
        return "origin is not strictly interior"
    if not P.is_lattice:
        bad = next(v for v in P.vertices if not is_integral(v))
        return f"vertex {fmt_vec(bad)} is not a lattice point"
    if not P.dual.is_lattice:
        bad = next(v for v in P.dual.vertices if not is_integral(v))
        return f"dual vertex {fmt_vec(bad)} is not a lattice point"
    interior = P.interior_lattice_points()
    if interior != [(0,) * P.rank]:
        return f"interior lattice points are {interior}, expected only the origin"
    return None


def is_reflexive(P: Polytope) -> bool:
    return reflexive_diagnostic(P) is None


def lattice_points(P: Polytope):
    return P.lattice_points()


def faces(P: Polytope, dim: int):
    return P.faces(dim)


def interior_lattice_points(F: "Face | Polytope"):
    if isinstance(F, Polytope):
        return F.interior_lattice_points()
    return F.parent.interior_lattice_points(F)


def dual_face(P: Polytope, F: Face) -> Face:
    """``F* = {n in P° : <m, n> = -1 for all m in F}`` as a face of ``P.dual``."""
    if F.parent is not P:
        raise PolytopeError("face belongs to a different polytope")
    why = reflexive_diagnostic(P)
    if why is not None:
        raise PolytopeError(f"dual_face needs a reflexive polytope: {why}")
    Q = P.dual
    idx = tuple(
        j
        for j, w in enumerate(Q.vertices)
        if all(pairing(m, w) == -1 for m in F.vertices)
    )
    dim = Q.face_lattice.get(frozenset(idx))
    if dim is None:
        raise PolytopeError("dual vertex set is not a face (is F a proper face?)")
    return Face(Q, idx, dim)


def edge_points_ordered(P: Polytope, E: Face):
    return P.edge_points_ordered(E)
