"""Simplicial fans: construction, exact validation of the fan axioms, cone geometry.

Cone intersections are computed exactly by the double description method on
the union of the two H-representations.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import FanError
from .lattice import (
    LatticeVector,
    fmt_vec,
    gcd_of,
    nullspace,
    pairing,
    primitive,
    rank_rational,
    scale_to_primitive,
    solve,
)
from .polytope import Polytope


@dataclass(frozen=True, order=True)
class Cone:
    ray_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        # cones of a validated fan are simplicial
        return len(self.ray_indices)

    def __contains__(self, i):
        return i in self.ray_indices


class Fan:
    """Primitive ray generators and maximal cones given as ray-index sets."""

    def __init__(self, rank: int, rays: Iterable[Sequence[int]], max_cones: Iterable[Iterable[int]]):
        self.rank = rank
        self.rays: tuple[LatticeVector, ...] = tuple(tuple(int(x) for x in r) for r in rays)
        for r in self.rays:
            if len(r) != rank:
                raise FanError(f"ray {fmt_vec(r)} does not have length {rank}")
        self.max_cones: tuple[Cone, ...] = tuple(Cone(tuple(sorted(set(c)))) for c in max_cones)
        for c in self.max_cones:
            if any(not 0 <= i < len(self.rays) for i in c.ray_indices):
                raise FanError(f"cone {c.ray_indices} refers to a missing ray")
        self._hrep: dict[tuple[int, ...], tuple[list, list]] = {}

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.rank == other.rank
            and self.rays == other.rays
            and self.max_cones == other.max_cones
        )

    def __hash__(self):
        return hash((self.rank, self.rays, self.max_cones))

    def __getstate__(self):
        return {"rank": self.rank, "rays": self.rays, "max_cones": self.max_cones, "_hrep": {}}

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def generators(self, cone: Cone) -> list[LatticeVector]:
        return [self.rays[i] for i in cone.ray_indices]

    def ray_index(self, v) -> int | None:
        v = tuple(int(x) for x in v)
        try:
            return self.rays.index(v)
        except ValueError:
            return None

    def hrep(self, cone: Cone) -> tuple[list, list]:
        """(equations, inequalities) describing the cone; memoized."""
        key = cone.ray_indices
        if key not in self._hrep:
            self._hrep[key] = simplicial_hrep(self.generators(cone), self.rank)
        return self._hrep[key]


# -- cone geometry --------------------------------------------------------------


def simplicial_hrep(gens: Sequence[Sequence], d: int) -> tuple[list, list]:
    """H-representation of the cone on linearly independent ``gens``.

    Returns ``(eqs, ineqs)`` such that the cone is ``{x : e.x = 0, u.x >= 0}``.
    The equations cut out the linear span; ``ineqs[i]`` is a positive multiple
    of the functional dual to ``gens[i]``.  All rows are primitive integer
    vectors.
    """
    gens = [list(g) for g in gens]
    if not gens:
        return [list(r) for r in _unit_rows(d)], []
    if rank_rational(gens) != len(gens):
        raise FanError(f"generators {[fmt_vec(g) for g in gens]} are not linearly independent")
    eqs = [list(_normalize(w)) for w in nullspace(gens, d)]
    ineqs = []
    for i in range(len(gens)):
        rhs = [Fraction(int(i == j)) for j in range(len(gens))]
        ineqs.append(list(_normalize(solve(gens, rhs))))
    return eqs, ineqs


def _unit_rows(d):
    return [tuple(int(i == j) for j in range(d)) for i in range(d)]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _normalize(v):
    return scale_to_primitive(v)


def extreme_rays(eqs: Sequence[Sequence], ineqs: Sequence[Sequence], d: int) -> tuple[list, list]:
    """Double description for ``{x in Q^d : E x = 0, A x >= 0}``.

    Returns ``(rays, lineality)``: primitive integral extreme rays (sorted) and
    a basis of the lineality space (empty for pointed cones).  Rational input
    rows are rescaled to integers first, so the elimination runs on ints.
    """
    basis = [_normalize(b) for b in nullspace([list(e) for e in eqs], d)] if eqs else _unit_rows(d)
    p = len(basis)
    if p == 0:
        return [], []

    # constraints in the coordinates y of x = sum_k y_k basis[k]
    cons = []
    for a in ineqs:
        row = [_dot(a, b) for b in basis]
        cons.append(list(_normalize(row)) if any(row) else row)
    lin = [list(v) for v in _unit_rows(p)]
    rays: list[tuple] = []
    done: list[list] = []
    for a in cons:
        if all(x == 0 for x in a):
            continue
        k = next((i for i, l in enumerate(lin) if _dot(a, l) != 0), None)
        if k is not None:
            l0 = lin.pop(k)
            c0 = _dot(a, l0)
            if c0 < 0:
                l0 = [-x for x in l0]
                c0 = -c0
            lin = [list(_normalize([c0 * x - _dot(a, l) * y for x, y in zip(l, l0)])) for l in lin]
            rays = [_normalize([c0 * x - _dot(a, r) * y for x, y in zip(r, l0)]) for r in rays]
            rays.append(_normalize(l0))
            done.append(a)
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        new = [r for r, v in zip(rays, vals) if v >= 0]
        need = p - len(lin) - 2
        for rp in pos:
            zp = {i for i, c in enumerate(done) if _dot(c, rp) == 0}
            for rn in neg:
                common = [done[i] for i in zp if _dot(done[i], rn) == 0]
                if len(common) < need:
                    continue
                if (rank_rational(common) if common else 0) != need:
                    continue
                ap, an = _dot(a, rp), _dot(a, rn)
                new.append(_normalize([ap * y - an * x for x, y in zip(rp, rn)]))
        rays = list(dict.fromkeys(new))
        done.append(a)

    def lift(y):
        return tuple(sum(yk * bk[i] for yk, bk in zip(y, basis)) for i in range(d))

    out = sorted({scale_to_primitive(lift(r)) for r in rays})
    return out, [lift(l) for l in lin]


def cone_intersection(F: Fan, s1: Cone, s2: Cone) -> list[LatticeVector]:
    """Extreme rays of ``s1 ∩ s2`` as primitive integer vectors, sorted."""
    e1, i1 = F.hrep(s1)
    e2, i2 = F.hrep(s2)
    rays, lin = extreme_rays(e1 + e2, i1 + i2, F.rank)
    if lin:
        raise FanError("intersection of pointed cones contains a line")
    return rays


def is_face(F: Fan, tau: Cone, sigma: Cone) -> bool:
    """True iff ``tau`` is a face of the simplicial cone ``sigma``.

    The certificate is the sum of the dual functionals of the rays of
    ``sigma`` outside ``tau``: zero on ``tau`` and positive on the rest.
    """
    if not set(tau.ray_indices) <= set(sigma.ray_indices):
        return False
    try:
        _, ineqs = F.hrep(sigma)
    except FanError:
        return False
    u = [0] * F.rank
    for pos, i in enumerate(sigma.ray_indices):
        if i not in tau.ray_indices:
            u = [a + b for a, b in zip(u, ineqs[pos])]
    return all(
        (pairing(u, F.rays[i]) == 0) if i in tau.ray_indices else (pairing(u, F.rays[i]) > 0)
        for i in sigma.ray_indices
    )


# -- validation --------------------------------------------------------------------


@dataclass
class ValidationReport:
    entries: list[dict] = field(default_factory=list)

    def add(self, check: str, ok: bool, detail: str = ""):
        self.entries.append({"check": check, "status": "pass" if ok else "fail", "detail": detail})

    @property
    def ok(self) -> bool:
        return all(e["status"] == "pass" for e in self.entries)

    def failures(self) -> list[dict]:
        return [e for e in self.entries if e["status"] == "fail"]

    def to_json(self) -> list[dict]:
        return list(self.entries)

    def __bool__(self):
        return self.ok


def _check_pair(F: Fan, a: int, b: int) -> str | None:
    s1, s2 = F.max_cones[a], F.max_cones[b]
    common = Cone(tuple(sorted(set(s1.ray_indices) & set(s2.ray_indices))))
    got = cone_intersection(F, s1, s2)
    want = sorted(F.rays[i] for i in common.ray_indices)
    if got != want:
        return (
            f"cones {a} {list(s1.ray_indices)} and {b} {list(s2.ray_indices)} meet in "
            f"{[fmt_vec(r) for r in got]}, not on their common rays {[fmt_vec(r) for r in want]}"
        )
    if not (is_face(F, common, s1) and is_face(F, common, s2)):
        return f"common rays of cones {a} and {b} do not span a common face"
    return None


def _check_pairs(args):
    F, pairs = args
    return [(a, b, _check_pair(F, a, b)) for a, b in pairs]


def default_jobs() -> int:
    env = os.environ.get("TORIC_EMBED_JOBS")
    return max(1, int(env)) if env else 1


def validate_fan(F: Fan, jobs: int | None = None) -> ValidationReport:
    """Check simpliciality, primitive distinct rays and pairwise face intersections."""
    report = ValidationReport()
    bad = [i for i, r in enumerate(F.rays) if gcd_of(r) != 1]
    report.add(
        "primitive_rays",
        not bad,
        "" if not bad else "non-primitive rays: " + ", ".join(fmt_vec(F.rays[i]) for i in bad),
    )
    dup = len(set(F.rays)) != len(F.rays)
    report.add("distinct_rays", not dup, "duplicate rays present" if dup else "")
    nonsimp = [
        c.ray_indices for c in F.max_cones if rank_rational([list(g) for g in F.generators(c)]) != c.dim
    ]
    report.add(
        "simplicial",
        not nonsimp,
        "" if not nonsimp else f"cones with dependent generators: {[list(c) for c in nonsimp]}",
    )
    if nonsimp:
        report.add("intersections", False, "skipped: fan is not simplicial")
        return report

    pairs = list(combinations(range(len(F.max_cones)), 2))
    jobs = default_jobs() if jobs is None else jobs
    if jobs > 1 and len(pairs) > 1:
        chunks = [pairs[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = [r for part in ex.map(_check_pairs, [(F, c) for c in chunks]) for r in part]
        results.sort()
    else:
        results = _check_pairs((F, pairs))
    failures = [(a, b, msg) for a, b, msg in results if msg]
    for a, b, msg in failures:
        report.add(f"intersection[{a},{b}]", False, msg)
    report.add("intersections", not failures, f"{len(pairs)} pairs checked, {len(failures)} failing")
    return report


# -- constructions ------------------------------------------------------------------


def face_fan(P: Polytope) -> Fan:
    """Fan over the faces of a lattice polytope containing the origin in its interior."""
    if not P.origin_interior():
        raise FanError("origin is not interior to the polytope")
    if not P.is_lattice:
        raise FanError("face fan needs a lattice polytope")
    rays = [primitive([int(x) for x in v]) for v in P.vertices]
    cones = []
    for f in P.facets:
        if len(f.vertex_indices) != P.rank:
            pts = ", ".join(fmt_vec(P.vertices[i]) for i in f.vertex_indices)
            raise FanError(f"facet with normal {fmt_vec(f.normal)} is not simplicial: {pts}")
        cones.append(f.vertex_indices)
    return Fan(P.rank, rays, cones)


def _coefficients(gens, r):
    """Coefficients of r in the basis gens, or None if r is outside their span."""
    cols = [[g[i] for g in gens] for i in range(len(r))]
    return solve(cols, [Fraction(x) for x in r])


def star_subdivide(F: Fan, r: Sequence[int]) -> Fan:
    """Stellar subdivision of ``F`` at the primitive vector ``r``."""
    r = tuple(int(x) for x in r)
    if len(r) != F.rank:
        raise FanError(f"ray {fmt_vec(r)} does not have length {F.rank}")
    if gcd_of(r) != 1:
        raise FanError(f"ray {fmt_vec(r)} is not primitive")
    if r in F.rays:
        return F
    new_index = len(F.rays)
    cones = []
    hit = False
    for c in F.max_cones:
        coeffs = _coefficients(F.generators(c), r)
        if coeffs is None or any(x < 0 for x in coeffs):
            cones.append(c.ray_indices)
            continue
        hit = True
        for i, x in zip(c.ray_indices, coeffs):
            if x > 0:
                cones.append(tuple(j for j in c.ray_indices if j != i) + (new_index,))
    if not hit:
        raise FanError(f"ray {fmt_vec(r)} is not in the support of the fan")
    return Fan(F.rank, F.rays + (r,), cones)


def completeness_issues(F: Fan) -> list[str]:
    d = F.rank
    dims = {c.dim for c in F.max_cones}
    if dims != {d}:
        return [f"fan is not pure of dimension {d}: maximal cone dimensions {sorted(dims)}"]
    count: dict[tuple[int, ...], int] = {}
    for c in F.max_cones:
        for wall in combinations(c.ray_indices, d - 1):
            count[wall] = count.get(wall, 0) + 1
    return [
        f"wall {list(w)} lies in {n} maximal cone(s)" for w, n in sorted(count.items()) if n != 2
    ]


def is_complete(F: Fan) -> bool:
    return not completeness_issues(F)
