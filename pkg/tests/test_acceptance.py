"""One test per acceptance criterion; each prints a PASS/FAIL line with timing."""
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, brute_force_points
from toric_embed import embed as E
from toric_embed import verify as V
from toric_embed.errors import DegenerateInputError
from toric_embed.fan import validate_fan
from toric_embed.fixtures import load_fixture, random_refinement
from toric_embed.grading import anticanonical_class, class_group, homogeneity
from toric_embed.polytope import dual_polytope, from_vertices, reflexive_diagnostic

EDGE_FIXTURES = ("p11222", "p11226", "remark41")


def report(n, ok, detail, elapsed, limit=None):
    timing = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail} [{timing}]"
    print(line)
    ACCEPTANCE_LINES.append(line)


def test_criterion_1_p11222_dimensions():
    t = time.perf_counter()
    rep = V.h1_dims(load_fixture("p11222").delta)
    dt = time.perf_counter() - t
    ok = (rep.h1_poly, rep.h1_nonp) == (83, 3) and dt < 10
    report(1, ok, f"P(1,1,2,2,2): h1_poly={rep.h1_poly} h1_nonp={rep.h1_nonp}, want 83/3", dt, 10)
    assert ok


def test_criterion_2_p11226_dimensions():
    t = time.perf_counter()
    rep = V.h1_dims(load_fixture("p11226").delta)
    dt = time.perf_counter() - t
    ok = (rep.h1_poly, rep.h1_nonp) == (126, 2) and dt < 10
    report(2, ok, f"P(1,1,2,2,6): h1_poly={rep.h1_poly} h1_nonp={rep.h1_nonp}, want 126/2", dt, 10)
    assert ok


def test_criterion_3_generator_formula():
    t = time.perf_counter()
    sel = load_fixture("remark41").selection()
    gens = E.build_generators(sel)
    v = (0, 0, 0, 0, 1)
    e0 = (0, 0, 1, 0, 0)
    half = (0, 0, 0, 1, 0)  # (e_{i_2} - e_{i_0}) / 2
    want = {
        "s1": v,
        "s2": tuple(a - b for a, b in zip(e0, v)),
        "t0": tuple(a + b for a, b in zip(v, half)),
        "t1": tuple(a - b + c for a, b, c in zip(e0, v, half)),
    }
    exact = all(gens[k] == w for k, w in want.items())
    expected_literal = {(0, 0, 0, 0, 1), (0, 0, 1, 0, -1), (0, 0, 0, 1, 1), (0, 0, 1, 1, -1)}
    literal = {gens[k] for k in want} == expected_literal
    why = reflexive_diagnostic(from_vertices(5, list(gens.values())))
    dt = time.perf_counter() - t
    ok = exact and literal and len(gens) == 9 and why is not None
    report(3, ok, f"four generators exact={exact and literal}, 9 generators, hull non-reflexive ({why})", dt)
    assert ok


def test_criterion_4_p11222_embedding():
    t = time.perf_counter()
    fx = load_fixture("p11222")
    sel = fx.selection()
    expected_rays = {
        (1, 1, 1, 1, 1), (-1, -2, -2, -2, -1), (0, -1, -1, -1, -1), (0, 0, 0, 0, 1),
        (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0),
    }
    rays_ok = set(E.build_sigma_gamma(sel).rays) == expected_rays
    eqs = [q.render() for q in E.binomial_equations(sel)]
    eq_ok = eqs == ["s2*t1 - s1*t0"]
    pull = E.pullback_hypersurface(sel, fx.hypersurface).sorted().render()
    pull_ok = pull == "s1^4*s2^4 + t0^4*t1^4 + y3^4 + y4^4 + y5^4"
    fam = E.deformation_family(sel, fx.delta, fx.hypersurface)
    monos = set()
    for (e, sym), _c in fam.deformed_equations[0].terms.items():
        if sym:
            monos.add(" ".join(f"{sel.labels[i]}^{k}" for i, k in enumerate(e) if k))
    fam_ok = len(fam.parameters) == 3 and monos == {"y3^1", "y4^1", "y5^1"}
    dt = time.perf_counter() - t
    ok = rays_ok and eq_ok and pull_ok and fam_ok
    report(4, ok, f"rays={rays_ok} equation={eqs} pullback={pull_ok} family={len(fam.parameters)} params {sorted(monos)}", dt)
    assert ok


def _construction_failures(sel):
    out = []
    rep = validate_fan(E.build_sigma_gamma(sel))
    out += [f"validate: {f}" for f in rep.failures()]
    out += E.slice_property_failures(sel)
    out += [f"decomposition j={j}" for j in E.decomposition_identity_holds(sel)]
    return out


def test_criterion_5_fan_construction():
    t = time.perf_counter()
    failures = []
    cases = 0
    for name in EDGE_FIXTURES:
        failures += [f"{name}: {x}" for x in _construction_failures(load_fixture(name).selection())]
        cases += 1
    fx = load_fixture("p11222")
    for seed in range(20):
        F = random_refinement(fx.fan, random.Random(seed))
        a, b = F.ray_index((-1, -2, -2, -2)), F.ray_index((1, 0, 0, 0))
        sel = E.select_edge_by_rays(F, fx.dual, a, b, require_boundary=False)
        failures += [f"refinement {seed}: {x}" for x in _construction_failures(sel)]
        cases += 1
    dt = time.perf_counter() - t
    report(5, not failures, f"{cases} fans, {len(failures)} failures", dt)
    assert not failures


def test_criterion_6_roundtrip():
    t = time.perf_counter()
    failures = 0
    total = 0
    for name in EDGE_FIXTURES:
        sel = load_fixture(name).selection()
        rng = random.Random(2024)
        points = V.degenerate_points(sel, rng)
        while len(points) < 100 + sel.k + 3:
            x = V.random_source_point(sel, rng)
            x = [Fraction(v, rng.randint(1, 7)) for v in x]
            if not E.in_irrelevant_locus(sel.fan, x):
                points.append(x)
        for x in points:
            total += 1
            p = E.apply_phi(sel, x)
            if any(E.binomial_residuals(sel, p)) or E.invert_phi_on_image(sel, p) != tuple(Fraction(v) for v in x):
                failures += 1
    dt = time.perf_counter() - t
    report(6, failures == 0, f"{total} samples over {len(EDGE_FIXTURES)} fixtures incl. all patterns l=0..k+1, {failures} failures", dt)
    assert failures == 0


def test_criterion_7_quasismoothness():
    t = time.perf_counter()
    details = []
    ok = True
    for name in EDGE_FIXTURES:
        rep = V.quasismooth_binomial_check(load_fixture(name).selection(), samples=100, seed=0)
        ok &= rep.ok
        details.append(f"{name} rank={rep.expected_rank} on {rep.samples} samples")
    for name in ("p11222", "p11226"):
        fx = load_fixture(name)
        ids = V.euler_identities(fx.selection(), fx.hypersurface)
        ok &= all(ids.values())
        details.append(f"{name} euler {ids}")
    dt = time.perf_counter() - t
    report(7, ok, "; ".join(details), dt)
    assert ok


def test_criterion_8_grading_coherence():
    t = time.perf_counter()
    bad = []
    for name in EDGE_FIXTURES:
        fx = load_fixture(name)
        sel = fx.selection()
        ctx = class_group(E.build_sigma_gamma(sel), sel.labels)
        fam = E.deformation_family(sel, fx.delta, fx.hypersurface)
        emitted = fam.base.equations + [fam.base.hypersurface, fam.formal_hypersurface] + fam.deformed_equations
        for q in emitted:
            if homogeneity(ctx, q)[1] is not None:
                bad.append(f"{name}: {q.render()[:40]}")
        total = ctx.zero()
        for q in fam.base.all_equations():
            total = total + homogeneity(ctx, q)[0]
        if total != anticanonical_class(ctx):
            bad.append(f"{name}: degree sum {total.to_json()} != anticanonical")
    dt = time.perf_counter() - t
    report(8, not bad, f"{len(EDGE_FIXTURES)} fixtures, problems: {bad or 'none'}", dt)
    assert not bad


def test_criterion_9a_lattice_points_oracle():
    t = time.perf_counter()
    rng = random.Random(9)
    mismatches = 0
    n = 0
    while n < 50:
        d = rng.choice([3, 4])
        pts = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(rng.randint(d + 1, d + 5))]
        try:
            P = from_vertices(d, pts)
        except DegenerateInputError:
            continue
        n += 1
        mismatches += P.lattice_points() != brute_force_points(P)
    dt = time.perf_counter() - t
    ok = mismatches == 0 and dt < 60
    report("9a", ok, f"lattice points vs box scan on {n} random 3-4 dim polytopes, {mismatches} mismatches", dt, 60)
    assert ok


def test_criterion_9b_dual_involution():
    t = time.perf_counter()
    bad = []
    for name in ("p11222", "p11226", "remark41", "p2_cubic", "p3_quartic"):
        fx = load_fixture(name)
        for P in (fx.delta, fx.dual):
            fresh = from_vertices(P.rank, P.vertices)
            if sorted(dual_polytope(dual_polytope(fresh)).vertices) != sorted(fresh.vertices):
                bad.append(name)
    dt = time.perf_counter() - t
    ok = not bad and dt < 60
    report("9b", ok, f"dual(dual(P)) = P on 10 reflexive polytopes, failures: {bad or 'none'}", dt, 60)
    assert ok


def test_criterion_9c_quartic():
    t = time.perf_counter()
    rep = V.h1_dims(load_fixture("p3_quartic").delta)
    dt = time.perf_counter() - t
    ok = (rep.h1_poly, rep.h1_nonp) == (19, 0) and dt < 60
    report("9c", ok, f"quartic K3: h1_poly={rep.h1_poly} h1_nonp={rep.h1_nonp}, want 19/0", dt, 60)
    assert ok
