"""Embedding of a toric variety along an edge of the dual reflexive polytope.

Given a complete simplicial fan whose rays contain every lattice point
``e_{i_0}, ..., e_{i_{k+1}}`` of an edge ``Γ*`` of ``Δ°``, this module builds
the fan ``Σ(Γ*)`` in ``N ⊕ Z^k``, the monomial map into its homogeneous
coordinates ``s_1..s_{k+1}, t_0..t_k, y_i``, the binomial complete
intersection cutting out the image, the pulled-back hypersurface and the
family of non-polynomial deformations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import GradingError, HypothesisViolation, InvariantFailure
from .fan import Cone, Fan, extreme_rays, is_complete
from .grading import Polynomial
from .lattice import LatticeVector, fmt_vec, pairing, rank_rational, solve, sub
from .polytope import Face, Polytope, dual_face


@dataclass(frozen=True)
class EdgeSelection:
    fan: Fan
    edge_points: tuple[LatticeVector, ...]
    ray_indices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.edge_points) - 2

    @property
    def step(self) -> LatticeVector:
        """(e_{i_{k+1}} - e_{i_0}) / (k + 1), exact."""
        diff = sub(self.edge_points[-1], self.edge_points[0])
        if any(x % (self.k + 1) for x in diff):
            raise InvariantFailure("edge points are not equally spaced lattice points")
        return tuple(x // (self.k + 1) for x in diff)

    @property
    def x_names(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.fan.n_rays))

    @property
    def outside(self) -> tuple[int, ...]:
        """Indices of rays not on the edge, ascending."""
        on = set(self.ray_indices)
        return tuple(i for i in range(self.fan.n_rays) if i not in on)

    @property
    def labels(self) -> tuple[str, ...]:
        k = self.k
        return (
            tuple(f"s{j}" for j in range(1, k + 2))
            + tuple(f"t{j}" for j in range(k + 1))
            + tuple(f"y{i + 1}" for i in self.outside)
        )

    def label_index(self, label: str) -> int:
        return self.labels.index(label)


# -- edge selection --------------------------------------------------------------


def rays_off_boundary(F: Fan, dual_poly: Polytope) -> list[LatticeVector]:
    return [r for r in F.rays if not dual_poly.on_boundary(r)]


def admissible_edges(F: Fan, dual_poly: Polytope) -> list[Face]:
    """Edges of ``Δ°`` with interior lattice points, all of which are rays of ``F``."""
    rays = set(F.rays)
    out = []
    for e in dual_poly.faces(1):
        if not all(v[0].denominator == 1 for v in e.vertices) or not dual_poly.is_lattice:
            continue
        pts = dual_poly.edge_points_ordered(e)
        if len(pts) > 2 and all(p in rays for p in pts):
            out.append(e)
    return out


def select_edge(
    F: Fan, dual_poly: Polytope, E: Face, check_fan: bool = True, require_boundary: bool = True
) -> EdgeSelection:
    """Order the lattice points of edge ``E`` and match them to rays of ``F``.

    ``require_boundary=False`` skips the check that every ray lies on the
    boundary of ``dual_poly``; the fan construction itself only needs the
    edge points to be rays.
    """
    if E.parent is not dual_poly:
        raise HypothesisViolation("edge is not a face of the given polytope")
    if E.dim != 1:
        raise HypothesisViolation(f"selected face has dimension {E.dim}, not 1")
    off = rays_off_boundary(F, dual_poly) if require_boundary else []
    if off:
        raise HypothesisViolation(
            "rays not on the boundary of the dual polytope: " + ", ".join(fmt_vec(r) for r in off)
        )
    if check_fan:
        if any(rank_rational([list(g) for g in F.generators(c)]) != c.dim for c in F.max_cones):
            raise HypothesisViolation("fan is not simplicial")
        if not is_complete(F):
            raise HypothesisViolation("fan is not complete")
    pts = dual_poly.edge_points_ordered(E)
    if len(pts) == 2:
        raise HypothesisViolation("edge has no interior lattice points")
    missing = [p for p in pts if F.ray_index(p) is None]
    if missing:
        raise HypothesisViolation(
            "edge lattice points missing from the rays: " + ", ".join(fmt_vec(p) for p in missing)
        )
    return EdgeSelection(F, tuple(pts), tuple(F.ray_index(p) for p in pts))


def select_edge_by_rays(
    F: Fan, dual_poly: Polytope, i: int, j: int, check_fan: bool = True, require_boundary: bool = True
) -> EdgeSelection:
    """Select the edge of ``Δ°`` whose endpoints are rays ``i`` and ``j`` (0-based)."""
    E = dual_poly.face([F.rays[i], F.rays[j]])
    if E.dim != 1 or {tuple(int(x) for x in v) for v in E.vertices} != {F.rays[i], F.rays[j]}:
        raise HypothesisViolation(
            f"rays {fmt_vec(F.rays[i])} and {fmt_vec(F.rays[j])} are not the endpoints of an edge"
        )
    return select_edge(F, dual_poly, E, check_fan=check_fan, require_boundary=require_boundary)


# -- generators and the fan Σ(Γ*) ---------------------------------------------------


def build_generators(sel: EdgeSelection) -> dict[str, LatticeVector]:
    k, d = sel.k, sel.fan.rank
    e0 = sel.edge_points[0]
    step = sel.step

    def v(j):  # standard basis vector v_j of Z^k, j = 1..k
        return (0,) * d + tuple(int(i == j - 1) for i in range(k))

    base = tuple(e0) + (0,) * k
    vsum = (0,) * d + (1,) * k
    step_ext = tuple(step) + (0,) * k
    gens: dict[str, LatticeVector] = {}
    for j in range(1, k + 1):
        gens[f"s{j}"] = v(j)
    gens[f"s{k + 1}"] = sub(base, vsum)
    for j in range(1, k + 1):
        gens[f"t{j - 1}"] = tuple(a + b for a, b in zip(v(j), step_ext))
    gens[f"t{k}"] = tuple(a + b for a, b in zip(sub(base, vsum), step_ext))
    for i in sel.outside:
        gens[f"y{i + 1}"] = tuple(sel.fan.rays[i]) + (0,) * k
    return {lab: gens[lab] for lab in sel.labels}


def decomposition_identity_holds(sel: EdgeSelection, gens: Mapping[str, LatticeVector] | None = None) -> list[int]:
    """Indices ``j`` where ``e_{i_j} != Σ_{l<j} ẽ_{t_l} + Σ_{l>j} ẽ_{s_l}`` (empty if all hold)."""
    gens = gens or build_generators(sel)
    k, d = sel.k, sel.fan.rank
    bad = []
    for j in range(k + 2):
        total = [0] * (d + k)
        for lab in [f"t{l}" for l in range(j)] + [f"s{l}" for l in range(j + 1, k + 2)]:
            total = [a + b for a, b in zip(total, gens[lab])]
        if tuple(total) != tuple(sel.edge_points[j]) + (0,) * k:
            bad.append(j)
    return bad


@dataclass(frozen=True)
class ConeImage:
    kind: str  # "i", "ii" or "iii"
    source: Cone
    target: Cone
    j: int | None


def classify_cones(sel: EdgeSelection) -> list[ConeImage]:
    """Image of each maximal cone of Σ in Σ(Γ*), in source order."""
    k = sel.k
    pos = {ri: j for j, ri in enumerate(sel.ray_indices)}
    lab = {name: i for i, name in enumerate(sel.labels)}
    out = []
    for c in sel.fan.max_cones:
        js = sorted(pos[i] for i in c.ray_indices if i in pos)
        ys = [lab[f"y{i + 1}"] for i in c.ray_indices if i not in pos]
        if not js:
            out.append(ConeImage("i", c, Cone(tuple(sorted(ys))), None))
        elif len(js) == 1:
            j = js[0]
            idx = ys + [lab[f"t{l}"] for l in range(j)] + [lab[f"s{l}"] for l in range(j + 1, k + 2)]
            out.append(ConeImage("ii", c, Cone(tuple(sorted(idx))), j))
        elif len(js) == 2 and js[1] == js[0] + 1:
            j = js[0]
            idx = ys + [lab[f"t{l}"] for l in range(j + 1)] + [lab[f"s{l}"] for l in range(j + 1, k + 2)]
            out.append(ConeImage("iii", c, Cone(tuple(sorted(idx))), j))
        else:
            pts = [fmt_vec(sel.edge_points[j]) for j in js]
            raise HypothesisViolation(
                f"cone {list(c.ray_indices)} meets the edge in non-adjacent or too many points: {pts}"
            )
    return out


@lru_cache(maxsize=64)
def build_sigma_gamma(sel: EdgeSelection) -> Fan:
    gens = build_generators(sel)
    cones = [img.target.ray_indices for img in classify_cones(sel)]
    return Fan(sel.fan.rank + sel.k, list(gens.values()), cones)


def slice_property_failures(sel: EdgeSelection) -> list[str]:
    """Cones σ' of types (ii)/(iii) with σ' ∩ (N_R ⊕ 0) != σ ⊕ 0."""
    target = build_sigma_gamma(sel)
    d, k = sel.fan.rank, sel.k
    cut = [[int(i == d + a) for i in range(d + k)] for a in range(k)]
    bad = []
    for img in classify_cones(sel):
        want = sorted(tuple(r) + (0,) * k for r in sel.fan.generators(img.source))
        if img.kind == "i":
            got = sorted(tuple(r) for r in target.generators(img.target))
        else:
            eqs, ineqs = target.hrep(img.target)
            got, lin = extreme_rays(eqs + cut, ineqs, d + k)
            if lin:
                bad.append(f"cone {list(img.source.ray_indices)}: slice contains a line")
                continue
        if got != want:
            bad.append(
                f"type ({img.kind}) image of cone {list(img.source.ray_indices)}: slice rays "
                f"{[fmt_vec(r) for r in got]} != {[fmt_vec(r) for r in want]}"
            )
    return bad


# -- the map and the equations ------------------------------------------------------


def phi_map(sel: EdgeSelection) -> dict[str, dict[str, int]]:
    """Homogeneous coordinates of the target as monomials in the x's."""
    k = sel.k
    xi = [f"x{i + 1}" for i in sel.ray_indices]
    out: dict[str, dict[str, int]] = {}
    for j in range(1, k + 2):
        out[f"s{j}"] = {xi[l]: 1 for l in range(j)}
    for j in range(k + 1):
        out[f"t{j}"] = {xi[l]: 1 for l in range(j + 1, k + 2)}
    for i in sel.outside:
        out[f"y{i + 1}"] = {f"x{i + 1}": 1}
    return {lab: out[lab] for lab in sel.labels}


def binomial_equations(sel: EdgeSelection) -> list[Polynomial]:
    labels = sel.labels
    eqs = []
    for j in range(1, sel.k + 1):
        lead = Polynomial.monomial(labels, {f"s{j + 1}": 1, f"t{j}": 1})
        tail = Polynomial.monomial(labels, {f"s{j}": 1, f"t{j - 1}": 1}, coeff=-1)
        eqs.append(lead + tail)
    return eqs


def dual_point_of_exponents(sel: EdgeSelection, exps: Sequence[int]) -> LatticeVector:
    """The m with 1 + <m, e_i> = exps[i] for all rays, or raise if none exists."""
    rays = sel.fan.rays
    m = solve([list(r) for r in rays], [Fraction(e - 1) for e in exps])
    if m is None or any(x.denominator != 1 for x in m):
        raise GradingError(f"monomial with exponents {list(exps)} is not of the form prod x_i^(1+<m,e_i>)")
    return tuple(int(x) for x in m)


def x_m_exponents(sel: EdgeSelection, m: Sequence[int]) -> dict[str, int]:
    """Closed-form s,t-monomial replacing the Γ*-part of the x-monomial of m."""
    k = sel.k
    e = sel.edge_points
    delta = pairing(m, sub(e[1], e[0]))
    out: dict[str, int] = {}

    def bump(name, x):
        if x:
            out[name] = out.get(name, 0) + x

    if delta >= 0:
        base = 1 + pairing(m, e[0])
        bump("s1", base)
        bump("t0", base)
        for j in range(k + 1):
            bump(f"t{j}", delta)
    else:
        base = 1 + pairing(m, e[k + 1])
        bump("s1", base)
        bump("t0", base)
        for j in range(1, k + 2):
            bump(f"s{j}", -delta)
    return out


def _laurent_substitution(sel: EdgeSelection, exps: Sequence[int]) -> dict[str, int]:
    """x_{i_0}=s_1, x_{i_j}=s_{j+1}/s_j, x_{i_{k+1}}=t_k applied to the Γ*-part."""
    k = sel.k
    c = [exps[i] for i in sel.ray_indices]
    out: dict[str, int] = {f"s{j}": 0 for j in range(1, k + 2)}
    out[f"t{k}"] = c[k + 1]
    out["s1"] += c[0]
    for j in range(1, k + 1):
        out[f"s{j + 1}"] += c[j]
        out[f"s{j}"] -= c[j]
    return out


def _relation_multiple(sel: EdgeSelection, diff: Mapping[str, int]) -> bool:
    """True iff ``diff`` is an integer combination of the binomial exponent relations."""
    st = [f"s{j}" for j in range(1, sel.k + 2)] + [f"t{j}" for j in range(sel.k + 1)]
    rels = []
    for j in range(1, sel.k + 1):
        r = {f"s{j + 1}": 1, f"t{j}": 1, f"s{j}": -1, f"t{j - 1}": -1}
        rels.append([r.get(v, 0) for v in st])
    target = [Fraction(diff.get(v, 0)) for v in st]
    if not rels:
        return not any(target)
    cols = [[rels[r][i] for r in range(len(rels))] for i in range(len(st))]
    sol = solve(cols, target)
    return sol is not None and all(x.denominator == 1 for x in sol)


def pullback_hypersurface(sel: EdgeSelection, f: Polynomial) -> Polynomial:
    """Polynomial on Σ(Γ*) cutting out the image of ``{f = 0}``.

    Each term ``a_m prod x_i^{1+<m,e_i>}`` becomes ``a_m X_m prod y_i^{1+<m,e_i>}``.
    The closed form is cross-checked against the Laurent substitution through
    the inverse formulas (equal modulo the binomial relations) and against the
    forward map (pulls back to the original x-monomial).
    """
    if f.variables != sel.x_names:
        raise GradingError("hypersurface must be a polynomial in x1..xn of the source fan")
    labels = sel.labels
    phi = phi_map(sel)
    out = Polynomial(labels)
    for (exps, sym), c in f.terms.items():
        m = dual_point_of_exponents(sel, exps)
        xm = x_m_exponents(sel, m)
        mono = dict(xm)
        for i in sel.outside:
            if exps[i]:
                mono[f"y{i + 1}"] = exps[i]
        if any(v < 0 for v in mono.values()):
            raise InvariantFailure(f"negative exponent in pullback of m={fmt_vec(m)}")
        lau = _laurent_substitution(sel, exps)
        diff = {v: xm.get(v, 0) - lau.get(v, 0) for v in set(xm) | set(lau)}
        if not _relation_multiple(sel, diff):
            raise InvariantFailure(f"closed form and substitution disagree for m={fmt_vec(m)}")
        term = Polynomial.monomial(labels, mono, coeff=c, symbol=sym)
        back = term.pullback(sel.x_names, phi)
        if back != Polynomial(sel.x_names, [((tuple(exps), sym), c)]):
            raise InvariantFailure(f"pullback of the image term for m={fmt_vec(m)} is not the source term")
        out = out + term
    return out


# -- points --------------------------------------------------------------------------


def in_irrelevant_locus(F: Fan, point: Sequence) -> bool:
    """True iff every maximal cone has some vanishing coordinate outside it."""
    zeros = {i for i, x in enumerate(point) if x == 0}
    return not any(zeros <= set(c.ray_indices) for c in F.max_cones)


def apply_phi(sel: EdgeSelection, x: Sequence) -> tuple[Fraction, ...]:
    x = [Fraction(v) for v in x]
    if len(x) != sel.fan.n_rays:
        raise HypothesisViolation(f"point has {len(x)} coordinates, fan has {sel.fan.n_rays} rays")
    if in_irrelevant_locus(sel.fan, x):
        raise HypothesisViolation("point lies in the irrelevant locus V(B(Σ))")
    out = []
    for lab, mono in phi_map(sel).items():
        v = Fraction(1)
        for name, e in mono.items():
            v *= x[int(name[1:]) - 1] ** e
        out.append(v)
    return tuple(out)


def binomial_residuals(sel: EdgeSelection, p: Sequence) -> list[Fraction]:
    return [eq.evaluate(p) for eq in binomial_equations(sel)]


def invert_phi_on_image(sel: EdgeSelection, p: Sequence) -> tuple[Fraction, ...]:
    """Recover x from a point of the binomial complete intersection."""
    p = [Fraction(v) for v in p]
    labels = sel.labels
    if len(p) != len(labels):
        raise HypothesisViolation(f"target point needs {len(labels)} coordinates")
    if any(binomial_residuals(sel, p)):
        raise HypothesisViolation("point does not satisfy the binomial equations")
    if in_irrelevant_locus(build_sigma_gamma(sel), p):
        raise HypothesisViolation("point lies in the irrelevant locus of Σ(Γ*)")
    k = sel.k
    val = dict(zip(labels, p))
    x = [Fraction(0)] * sel.fan.n_rays
    for i in sel.outside:
        x[i] = val[f"y{i + 1}"]
    idx = sel.ray_indices
    x[idx[0]] = val["s1"]
    x[idx[k + 1]] = val[f"t{k}"]
    for j in range(1, k + 1):
        s_j, t_j = val[f"s{j}"], val[f"t{j}"]
        if s_j != 0:
            x[idx[j]] = val[f"s{j + 1}"] / s_j
        elif t_j != 0:
            x[idx[j]] = val[f"t{j - 1}"] / t_j
        else:
            raise HypothesisViolation(f"s{j} and t{j} vanish simultaneously: not on the variety")
    return tuple(x)


# -- complete intersections and deformations ---------------------------------------


@dataclass
class CompleteIntersectionSpec:
    ambient: Fan
    labels: tuple[str, ...]
    equations: list[Polynomial]
    hypersurface: Polynomial | None = None

    def all_equations(self) -> list[Polynomial]:
        return self.equations + ([self.hypersurface] if self.hypersurface is not None else [])


@dataclass
class DeformationFamily:
    base: CompleteIntersectionSpec
    parameters: list[dict]
    deformed_equations: list[Polynomial]
    formal_hypersurface: Polynomial | None
    gamma: Face
    interior_points: list[LatticeVector]
    violations: list[str] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.parameters


@dataclass
class EmbeddingData:
    selection: EdgeSelection
    source_fan: Fan
    target_fan: Fan
    coordinate_labels: tuple[str, ...]
    generator_table: dict[str, LatticeVector]
    map: dict[str, dict[str, int]]
    cone_images: list[ConeImage]


def embed(sel: EdgeSelection) -> EmbeddingData:
    return EmbeddingData(
        selection=sel,
        source_fan=sel.fan,
        target_fan=build_sigma_gamma(sel),
        coordinate_labels=sel.labels,
        generator_table=build_generators(sel),
        map=phi_map(sel),
        cone_images=classify_cones(sel),
    )


def complete_intersection(sel: EdgeSelection, f: Polynomial | None = None) -> CompleteIntersectionSpec:
    return CompleteIntersectionSpec(
        ambient=build_sigma_gamma(sel),
        labels=sel.labels,
        equations=binomial_equations(sel),
        hypersurface=pullback_hypersurface(sel, f).sorted() if f is not None else None,
    )


def formal_anticanonical(sel: EdgeSelection, delta: Polytope) -> Polynomial:
    """``sum_m a_m prod x_i^{1+<m,e_i>}`` over all lattice points m of Δ."""
    f = Polynomial(sel.x_names)
    for idx, m in enumerate(delta.lattice_points(), start=1):
        exps = tuple(1 + pairing(m, r) for r in sel.fan.rays)
        f = f + Polynomial(sel.x_names, [((exps, f"a_{idx}"), 1)])
    return f


def deformation_family(sel: EdgeSelection, delta: Polytope, f: Polynomial | None = None) -> DeformationFamily:
    """Binomials deformed by ``λ_{u,j} prod_{e_i ∉ Γ*} y_i^{<u,e_i>}`` for u in int(Γ)."""
    dual_poly = delta.dual
    gamma_star = dual_poly.face([sel.edge_points[0], sel.edge_points[-1]])
    gamma = dual_face(dual_poly, gamma_star)
    interior = delta.interior_lattice_points(gamma)
    labels = sel.labels
    violations = []
    params = []
    deformed = []
    for j, eq in enumerate(binomial_equations(sel), start=1):
        poly = eq
        for ui, u in enumerate(interior, start=1):
            on_edge = [pairing(u, e) for e in sel.edge_points]
            if any(v != -1 for v in on_edge):
                violations.append(f"<u,e> != -1 on the edge for u={fmt_vec(u)}")
            mono = {}
            for i in sel.outside:
                a = pairing(u, sel.fan.rays[i])
                if a < 0:
                    violations.append(f"<u,e_{i + 1}> = {a} < 0 for u={fmt_vec(u)}")
                elif a:
                    mono[f"y{i + 1}"] = a
            name = f"lambda_{ui}_{j}"
            params.append({"name": name, "u": list(u), "j": j})
            poly = poly + Polynomial.monomial(labels, mono, coeff=-1, symbol=name)
        deformed.append(poly)
    base = complete_intersection(sel, f)
    return DeformationFamily(
        base=base,
        parameters=params,
        deformed_equations=deformed,
        formal_hypersurface=pullback_hypersurface(sel, formal_anticanonical(sel, delta)),
        gamma=gamma,
        interior_points=interior,
        violations=violations,
    )
