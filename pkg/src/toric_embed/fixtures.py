"""Worked examples bundled with the package.

Each fixture is a complete simplicial fan whose rays lie on the boundary of a
reflexive ``Δ°``, an anticanonical hypersurface and, where one exists, the
edge of ``Δ°`` used for the embedding.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .embed import EdgeSelection, select_edge_by_rays
from .fan import Fan, face_fan, star_subdivide
from .grading import Polynomial
from .lattice import pairing, primitive
from .polytope import Polytope, from_vertices

FIXTURE_NAMES = ("p11222", "p11226", "remark41", "p2_cubic", "p3_quartic")


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    description: str
    fan: Fan
    dual: Polytope  # Δ°, containing the rays on its boundary
    hypersurface: Polynomial
    edge: tuple[tuple[int, ...], tuple[int, ...]] | None

    @property
    def delta(self) -> Polytope:
        return self.dual.dual

    @property
    def x_names(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.fan.n_rays))

    def selection(self) -> EdgeSelection:
        if self.edge is None:
            raise ValueError(f"fixture {self.name} has no edge with interior lattice points")
        a, b = (self.fan.ray_index(p) for p in self.edge)
        return select_edge_by_rays(self.fan, self.dual, a, b)


def _resolved(vertices, extra) -> tuple[Fan, Polytope]:
    dual = from_vertices(len(vertices[0]), vertices)
    F = face_fan(dual)
    for r in extra:
        F = star_subdivide(F, r)
    return F, dual


def vertex_hypersurface(F: Fan, delta: Polytope) -> Polynomial:
    """Sum of the monomials ``prod x_i^{1+<m,e_i>}`` over the vertices m of Δ."""
    names = tuple(f"x{i + 1}" for i in range(F.n_rays))
    f = Polynomial(names)
    for m in sorted(tuple(int(x) for x in v) for v in delta.vertices):
        exps = tuple(1 + pairing(m, r) for r in F.rays)
        f = f + Polynomial(names, [((exps, ""), 1)])
    return f.sorted()


def _build(name: str) -> Fixture:
    units4 = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    if name == "p11222":
        F, dual = _resolved([(-1, -2, -2, -2)] + units4, [(0, -1, -1, -1)])
        f = Polynomial.parse("x1^8*x6^4 + x2^8*x6^4 + x3^4 + x4^4 + x5^4", [f"x{i}" for i in range(1, 7)])
        return Fixture(name, "crepant resolution of P(1,1,2,2,2) with its Fermat octic", F, dual, f,
                       ((-1, -2, -2, -2), (1, 0, 0, 0)))
    if name == "p11226":
        F, dual = _resolved([(-1, -2, -2, -6)] + units4, [(0, -1, -1, -3)])
        f = Polynomial.parse("x1^12*x6^6 + x2^12*x6^6 + x3^6 + x4^6 + x5^2", [f"x{i}" for i in range(1, 7)])
        return Fixture(name, "partial resolution of P(1,1,2,2,6) with its Fermat dodecic", F, dual, f,
                       ((-1, -2, -2, -6), (1, 0, 0, 0)))
    if name == "remark41":
        simplex = [(-2, -2, -3, -2), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 1, 2)]
        F, dual = _resolved(simplex, [(0, 0, 1, 1), (-1, -1, -1, -1), (-1, -1, -1, 0)])
        return Fixture(name, "simplex whose embedding target has a non-reflexive hull", F, dual,
                       vertex_hypersurface(F, dual.dual), ((0, 0, 1, 0), (0, 0, 1, 2)))
    if name == "p2_cubic":
        F, dual = _resolved([(1, 0), (0, 1), (-1, -1)], [])
        return Fixture(name, "plane cubic", F, dual, vertex_hypersurface(F, dual.dual), None)
    if name == "p3_quartic":
        F, dual = _resolved([(-1, -1, -1)] + [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [])
        return Fixture(name, "quartic surface in P^3", F, dual, vertex_hypersurface(F, dual.dual), None)
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")


@lru_cache(maxsize=None)
def load_fixture(name: str) -> Fixture:
    return _build(name)


def random_refinement(F: Fan, rng: random.Random, steps: int | None = None) -> Fan:
    """Star-subdivide ``F`` at random positive combinations of cone generators.

    New rays sit strictly inside existing cones, so the result is again a
    complete simplicial fan and every old ray survives.
    """
    steps = rng.randint(1, 4) if steps is None else steps
    for _ in range(steps):
        cone = rng.choice(F.max_cones)
        gens = rng.sample(F.generators(cone), rng.randint(2, cone.dim))
        weights = [rng.randint(1, 3) for _ in gens]
        v = [sum(w * g[i] for w, g in zip(weights, gens)) for i in range(F.rank)]
        F = star_subdivide(F, primitive(v))
    return F
