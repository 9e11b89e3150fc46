"""Dimension formulas, rank certificates and hypothesis checks."""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .embed import (
    EdgeSelection,
    apply_phi,
    binomial_equations,
    in_irrelevant_locus,
    phi_map,
    pullback_hypersurface,
)
from .errors import BudgetExceeded, DegenerateInputError, GradingError, PolytopeError
from .fan import Fan, completeness_issues
from .grading import Polynomial
from .lattice import fmt_vec, rank_rational
from .polytope import Polytope, dual_face, from_vertices, reflexive_diagnostic

SCAN_BUDGET = 10**7


# -- deformation space dimensions ------------------------------------------------------


@dataclass
class DimensionReport:
    rank: int
    l_delta: int
    facet_interior_sum: int
    h1_poly: int
    codim2_terms: list[dict]
    h1_nonp: int
    edge_sum: int

    def to_json(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        d = self.rank
        lines = [
            f"l(Delta)                          {self.l_delta}",
            f"d + 1                             {d + 1}",
            f"sum over facets of l*             {self.facet_interior_sum}",
            f"h1_poly = {self.l_delta} - {d + 1} - {self.facet_interior_sum}".ljust(34) + f"{self.h1_poly}",
        ]
        nonzero = [t for t in self.codim2_terms if t["product"]]
        for t in nonzero:
            lines.append(
                f"  codim-2 face {t['face']}: l*={t['l_star']} dual edge l*={t['l_star_dual']}"
            )
        lines.append(f"h1_nonp = sum of l*(G) l*(G*)".ljust(34) + f"{self.h1_nonp}")
        return "\n".join(lines)


def h1_dims(delta: Polytope) -> DimensionReport:
    why = reflexive_diagnostic(delta)
    if why is not None:
        raise PolytopeError(f"polytope is not reflexive: {why}")
    d = delta.rank
    l_delta = len(delta.lattice_points())
    facet_sum = sum(len(delta.interior_lattice_points(F)) for F in delta.faces(d - 1))
    dual = delta.dual
    terms = []
    for G in delta.faces(d - 2):
        Gs = dual_face(delta, G)
        a = len(delta.interior_lattice_points(G))
        b = len(dual.interior_lattice_points(Gs))
        terms.append({
            "face": [fmt_vec(v) for v in G.vertices],
            "l_star": a,
            "l_star_dual": b,
            "product": a * b,
        })
    h1_nonp = sum(t["product"] for t in terms)
    # independent enumeration: walk the edges of the dual polytope instead
    edge_sum = 0
    for E in dual.faces(1):
        b = len(dual.interior_lattice_points(E))
        if b:
            G = dual_face(dual, E)
            edge_sum += b * len(delta.interior_lattice_points(G))
    if edge_sum != h1_nonp:
        raise AssertionError(f"codim-2 sum {h1_nonp} disagrees with edge sum {edge_sum}")
    return DimensionReport(d, l_delta, facet_sum, l_delta - d - 1 - facet_sum, terms, h1_nonp, edge_sum)


# -- rank certificates ----------------------------------------------------------------------


@dataclass
class RankReport:
    check: str
    seed: int
    samples: int
    expected_rank: int
    failures: list[dict] = field(default_factory=list)
    number_field: str = "Q"
    inconclusive: int = 0
    identities: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and all(self.identities.values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def _jacobian(polys: Sequence[Polynomial], point) -> list[list[Fraction]]:
    labels = polys[0].variables
    return [[p.diff(v).evaluate(point) for v in labels] for p in polys]


def random_source_point(sel: EdgeSelection, rng: random.Random, p: int | None = None) -> list:
    """Nonzero entries outside a random maximal cone, random zeros inside it."""
    cone = rng.choice(sel.fan.max_cones)
    x = []
    for i in range(sel.fan.n_rays):
        if i in cone.ray_indices and rng.random() < 0.3:
            x.append(0)
        elif p is None:
            x.append(rng.choice([-1, 1]) * rng.randint(1, 9))
        else:
            x.append(rng.randint(1, p - 1))
    return x


def degenerate_points(sel: EdgeSelection, rng: random.Random) -> list[list[int]]:
    """One source point with ``x_{i_l} = 0`` for each ``l = 0..k+1``, plus all-ones."""
    pts = [[1] * sel.fan.n_rays]
    for ri in sel.ray_indices:
        x = [rng.choice([-1, 1]) * rng.randint(1, 9) for _ in range(sel.fan.n_rays)]
        x[ri] = 0
        pts.append(x)
    return pts


def quasismooth_binomial_check(sel: EdgeSelection, samples: int = 100, seed: int = 0) -> RankReport:
    rng = random.Random(seed)
    eqs = binomial_equations(sel)
    report = RankReport("binomial-rank", seed, 0, sel.k)
    points = degenerate_points(sel, rng) + [random_source_point(sel, rng) for _ in range(samples)]
    for x in points:
        if in_irrelevant_locus(sel.fan, x):
            continue
        img = apply_phi(sel, x)
        report.samples += 1
        r = rank_rational(_jacobian(eqs, img))
        if r != sel.k:
            report.failures.append({"x": [str(v) for v in x], "rank": r})
    return report


def euler_identities(sel: EdgeSelection, f: Polynomial) -> dict[str, bool]:
    """Check that the s- and t-Euler sums of the pullback are pullbacks themselves."""
    ft = pullback_hypersurface(sel, f)
    k = sel.k
    x0 = f"x{sel.ray_indices[0] + 1}"
    xk = f"x{sel.ray_indices[-1] + 1}"
    s_side = Polynomial(ft.variables)
    t_side = Polynomial(ft.variables)
    for j in range(1, k + 2):
        s_side = s_side + ft.euler(f"s{j}")
    for j in range(k + 1):
        t_side = t_side + ft.euler(f"t{j}")
    return {
        "s_sum": s_side == pullback_hypersurface(sel, f.euler(x0)),
        "t_sum": t_side == pullback_hypersurface(sel, f.euler(xk)),
    }


def _rational_root(c: Fraction, e: int) -> Fraction | None:
    """A rational v with v**e == c, if one exists."""
    if c < 0 and e % 2 == 0:
        return None
    sign = -1 if c < 0 else 1
    a, b = abs(c.numerator), c.denominator
    ra, rb = round(a ** (1 / e)), round(b ** (1 / e))
    for u in (ra - 1, ra, ra + 1):
        for w in (rb - 1, rb, rb + 1):
            if u >= 0 and w > 0 and u**e == a and w**e == b:
                return sign * Fraction(u, w)
    return None


def _solve_rational(f: Polynomial, x: list, j: int) -> Fraction | None:
    """Solve f(x) = 0 for coordinate j when f is binomial in x_j."""
    by_power: dict[int, Fraction] = {}
    for (e, sym), c in f.terms.items():
        term = Fraction(c)
        for i, (xi, k) in enumerate(zip(x, e)):
            if i != j and k:
                term *= Fraction(xi) ** k
        by_power[e[j]] = by_power.get(e[j], Fraction(0)) + term
    by_power = {k: v for k, v in by_power.items() if v}
    powers = sorted(by_power)
    if len(powers) != 2 or powers[0] != 0:
        return None
    e = powers[1]
    return _rational_root(-by_power[0] / by_power[e], e)


def _solve_mod_p(f: Polynomial, x: list, j: int, p: int, rng: random.Random) -> int | None:
    roots = []
    for v in range(1, p):
        x[j] = v
        if f.evaluate_mod(x, p) == 0:
            roots.append(v)
    return rng.choice(roots) if roots else None


def _phi_mod_p(sel: EdgeSelection, x: Sequence[int], p: int) -> list[int]:
    out = []
    for mono in phi_map(sel).values():
        v = 1
        for name, e in mono.items():
            v = v * pow(int(x[int(name[1:]) - 1]), e, p) % p
        out.append(v)
    return out


def quasismooth_ci_check(
    sel: EdgeSelection,
    f: Polynomial,
    samples: int = 20,
    seed: int = 0,
    prime: int = 101,
    attempts: int = 50,
) -> RankReport:
    """Rank of the (k+1)-row Jacobian at image points of X, plus the Euler identities.

    Rational points are tried first; when none turn up the check falls back
    to points of X over F_p.
    """
    if f.symbols:
        raise GradingError("quasismooth_ci_check needs numeric coefficients")
    rng = random.Random(seed)
    polys = binomial_equations(sel) + [pullback_hypersurface(sel, f)]
    report = RankReport("ci-rank", seed, 0, sel.k + 1)
    report.identities = euler_identities(sel, f)
    n = sel.fan.n_rays
    rational_hits = 0
    for _ in range(samples):
        found = False
        for _ in range(attempts):
            x = random_source_point(sel, rng)
            j = rng.randrange(n)
            if x[j] == 0:
                continue
            v = _solve_rational(f, x, j)
            if v is None or v == 0:
                continue
            x[j] = v
            if in_irrelevant_locus(sel.fan, x) or f.evaluate(x) != 0:
                continue
            img = apply_phi(sel, x)
            r = rank_rational(_jacobian(polys, img))
            report.samples += 1
            rational_hits += 1
            if r != sel.k + 1:
                report.failures.append({"x": [str(t) for t in x], "rank": r, "field": "Q"})
            found = True
            break
        if found:
            continue
        for _ in range(attempts):
            x = random_source_point(sel, rng, p=prime)
            nz = [i for i in range(n) if x[i]]
            j = rng.choice(nz)
            v = _solve_mod_p(f, x, j, prime, rng)
            if v is None:
                continue
            x[j] = v
            if in_irrelevant_locus(sel.fan, x):
                continue
            img = _phi_mod_p(sel, x, prime)
            jac = [[q.diff(lab).evaluate_mod(img, prime) for lab in q.variables] for q in polys]
            r = _kernels.rank_mod_p(jac, prime)
            report.samples += 1
            if r != sel.k + 1:
                report.failures.append({"x": list(x), "rank": r, "field": f"F_{prime}"})
            found = True
            break
        if not found:
            report.inconclusive += 1
    report.number_field = "Q" if rational_hits == report.samples else ("mixed" if rational_hits else f"F_{prime}")
    return report


# -- nondegeneracy ------------------------------------------------------------------------------


@dataclass
class NondegeneracyReport:
    primes: list[int]
    counts: dict[int, int]
    hits: dict[int, list[list[int]]]
    status: str
    note: str = "heuristic: finite-field scan"

    @property
    def degenerate(self) -> bool:
        return any(self.counts.values())

    def to_json(self) -> dict:
        return {
            "primes": self.primes,
            "counts": {str(p): c for p, c in self.counts.items()},
            "hits": {str(p): h for p, h in self.hits.items()},
            "status": self.status,
            "note": self.note,
        }


def nondegeneracy_scan(F: Fan, f: Polynomial, primes: Sequence[int] = (5, 7), backend=None) -> NondegeneracyReport:
    """Scan (F_p^*)^n for points where f and every x_i df/dx_i vanish."""
    if f.symbols:
        raise GradingError("nondegeneracy_scan needs numeric coefficients")
    n = F.n_rays
    if len(f.variables) != n:
        raise GradingError("polynomial variables do not match the fan's rays")
    exps = np.array([e for (e, _), _c in f.terms.items()], dtype=np.int64).reshape(-1, n)
    if (exps < 0).any():
        raise GradingError("polynomial has negative exponents")
    counts, hits = {}, {}
    for p in primes:
        if (p - 1) ** n > SCAN_BUDGET:
            raise BudgetExceeded(
                f"(p-1)^n = {(p - 1) ** n} exceeds {SCAN_BUDGET}; use a smaller prime than {p}"
            )
        coeffs = np.array(
            [c.numerator * pow(c.denominator, -1, p) % p for c in f.terms.values()], dtype=np.int64
        )
        count, found = _kernels.torus_scan(exps, coeffs, p, backend=backend)
        counts[p] = int(count)
        hits[p] = [[int(v) for v in row] for row in found]
    if any(counts.values()):
        status = "degenerate"
    elif len(primes) >= 2:
        status = "heuristically nondegenerate"
    else:
        status = "inconclusive"
    return NondegeneracyReport(list(primes), counts, hits, status)


# -- hypotheses ---------------------------------------------------------------------------------


def minimal_orbifold_check(F: Fan, dual_poly: Polytope) -> bool:
    """True iff every nonzero lattice point of the polytope off facet interiors is a ray."""
    rays = set(F.rays)
    for pt in dual_poly.lattice_points():
        if not any(pt):
            continue
        if len(dual_poly.tight_facets(pt)) == 1:
            continue
        if pt not in rays:
            return False
    return True


def missing_for_minimality(F: Fan, dual_poly: Polytope) -> list[tuple[int, ...]]:
    rays = set(F.rays)
    return [
        pt for pt in dual_poly.lattice_points()
        if any(pt) and len(dual_poly.tight_facets(pt)) != 1 and pt not in rays
    ]


@dataclass
class HypothesisReport:
    checks: list[dict]
    delta: Polytope | None
    dual: Polytope | None
    admissible_edges: list[dict]

    @property
    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "admissible_edges": self.admissible_edges}


def check_hypotheses(F: Fan) -> HypothesisReport:
    from .embed import admissible_edges

    checks = []

    def add(name, ok, detail=""):
        checks.append({"check": name, "status": "pass" if ok else "fail", "detail": detail})

    simplicial = all(rank_rational([list(g) for g in F.generators(c)]) == c.dim for c in F.max_cones)
    add("simplicial", simplicial)
    issues = completeness_issues(F)
    add("complete", not issues, "; ".join(issues[:3]))
    try:
        hull = from_vertices(F.rank, F.rays)
    except DegenerateInputError as exc:
        add("reflexive", False, str(exc))
        return HypothesisReport(checks, None, None, [])
    if not hull.origin_interior():
        add("reflexive", False, "origin is not interior to the convex hull of the rays")
        return HypothesisReport(checks, None, None, [])
    delta = hull.dual
    why = reflexive_diagnostic(delta)
    add("reflexive", why is None, why or "")
    if why is not None:
        return HypothesisReport(checks, delta, None, [])
    dual = delta.dual
    off = [fmt_vec(r) for r in F.rays if not dual.on_boundary(r)]
    add("rays_on_boundary", not off, ", ".join(off))
    edges = []
    if not off:
        for E in admissible_edges(F, dual):
            pts = dual.edge_points_ordered(E)
            edges.append({
                "endpoints": [list(pts[0]), list(pts[-1])],
                "ray_indices": [F.ray_index(p) for p in pts],
                "k": len(pts) - 2,
            })
    return HypothesisReport(checks, delta, dual, edges)
