"""Command-line interface: ``toric-embed <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import embed as E
from . import verify as V
from .errors import HypothesisViolation, ToricError
from .fan import completeness_issues, face_fan, star_subdivide, validate_fan
from .fixtures import FIXTURE_NAMES, load_fixture
from .polytope import Polytope, reflexive_diagnostic
from .serialize import (
    InputError,
    ci_to_json,
    dump_json,
    fan_from_json,
    fan_to_json,
    load_json,
    parse_polynomial,
    polytope_from_json,
    polytope_to_json,
)


class UsageError(ToricError, ValueError):
    pass


def _emit(doc, out: str | None = None):
    text = dump_json(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _jobs(args) -> int:
    env = os.environ.get("TORIC_EMBED_JOBS")
    return int(env) if env else args.jobs


def _load_fan(spec: str):
    """Fan from a JSON file or a fixture name; returns (fan, fixture or None)."""
    if spec in FIXTURE_NAMES and not Path(spec).exists():
        fx = load_fixture(spec)
        return fx.fan, fx
    if not Path(spec).exists():
        raise UsageError(f"no such file or fixture: {spec}")
    return fan_from_json(load_json(spec)), None


def _load_polynomial(path: str | None, fan, fx):
    if path is None:
        return fx.hypersurface if fx is not None else None
    if not Path(path).exists():
        raise UsageError(f"no such file: {path}")
    return parse_polynomial(Path(path).read_text(), fan)


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _selection(fan, fx, edge: str | None):
    hyp = V.check_hypotheses(fan)
    if not hyp.ok:
        bad = [c for c in hyp.checks if c["status"] != "pass"]
        raise HypothesisViolation("hypotheses fail: " + "; ".join(f"{c['check']} {c['detail']}" for c in bad))
    if edge is None:
        if fx is not None and fx.edge is not None:
            return fx.selection(), hyp
        raise UsageError("--edge i,j is required")
    i, j = _parse_ints(edge, "--edge")
    n = fan.n_rays
    if not (1 <= i <= n and 1 <= j <= n):
        raise UsageError(f"--edge indices must be between 1 and {n}")
    try:
        return E.select_edge_by_rays(fan, hyp.dual, i - 1, j - 1), hyp
    except HypothesisViolation as exc:
        listing = ", ".join(
            f"{e['ray_indices'][0] + 1},{e['ray_indices'][-1] + 1}" for e in hyp.admissible_edges
        ) or "none"
        raise HypothesisViolation(f"{exc}; admissible edges (1-based ray indices): {listing}") from None


# -- commands -----------------------------------------------------------------------------


def cmd_polytope(args) -> int:
    P = polytope_from_json(load_json(args.file))
    if args.action == "dual":
        if not P.origin_interior():
            print("origin is not interior; dual is unbounded", file=sys.stderr)
            return 1
        _emit(polytope_to_json(P.dual), args.out)
    elif args.action == "points":
        _emit({"points": [list(p) for p in P.lattice_points()]}, args.out)
    elif args.action == "faces":
        doc = {str(d): [[[str(x) for x in v] for v in F.vertices] for F in P.faces(d)] for d in range(P.rank)}
        _emit({"faces": doc}, args.out)
    else:
        why = reflexive_diagnostic(P)
        _emit({"reflexive": why is None, "reason": why or ""}, args.out)
        return 0 if why is None else 1
    return 0


def cmd_fan(args) -> int:
    if args.action == "from-polytope":
        P = polytope_from_json(load_json(args.file))
        _emit(fan_to_json(face_fan(P)), args.out)
        return 0
    F, _ = _load_fan(args.file)
    if args.action == "validate":
        rep = validate_fan(F, jobs=_jobs(args))
        _emit(rep.to_json(), args.out)
        return 0 if rep.ok else 1
    if args.action == "complete":
        issues = completeness_issues(F)
        _emit({"complete": not issues, "issues": issues}, args.out)
        return 0 if not issues else 1
    if args.ray is None:
        raise UsageError("star-subdivide needs --ray")
    _emit(fan_to_json(star_subdivide(F, _parse_ints(args.ray, "--ray"))), args.out)
    return 0


def cmd_hypotheses(args) -> int:
    F, _ = _load_fan(args.fan)
    rep = V.check_hypotheses(F)
    _emit(rep.to_json(), args.out)
    return 0 if rep.ok else 1


def cmd_embed(args) -> int:
    F, fx = _load_fan(args.fan)
    sel, hyp = _selection(F, fx, args.edge)
    f = _load_polynomial(args.hypersurface, F, None)
    ci = E.complete_intersection(sel, f)
    family = E.deformation_family(sel, hyp.delta, f) if args.deform else None
    _emit(ci_to_json(sel, ci, family), args.out)
    if family is not None and family.violations:
        print("\n".join(family.violations), file=sys.stderr)
        return 1
    return 0


def cmd_dims(args) -> int:
    F, fx = _load_fan(args.fan)
    delta = fx.delta if fx is not None else V.check_hypotheses(F).delta
    if delta is None:
        raise HypothesisViolation("rays do not span a polytope with the origin in its interior")
    rep = V.h1_dims(delta)
    if args.table:
        print(rep.table())
    else:
        _emit(rep.to_json(), args.out)
    return 0


def cmd_verify(args) -> int:
    print(f"seed: {args.seed}", file=sys.stderr)
    F, fx = _load_fan(args.fan)
    if args.check == "nondegenerate":
        f = _load_polynomial(args.hypersurface, F, fx)
        if f is None:
            raise UsageError("--hypersurface is required")
        primes = _parse_ints(args.primes, "--primes")
        rep = V.nondegeneracy_scan(F, f, primes)
        _emit(rep.to_json(), args.out)
        return 1 if rep.degenerate else 0
    sel, _ = _selection(F, fx, args.edge)
    if args.check == "binomial-rank":
        rep = V.quasismooth_binomial_check(sel, args.samples, args.seed)
    else:
        f = _load_polynomial(args.hypersurface, F, fx)
        if f is None:
            raise UsageError("--hypersurface is required")
        rep = V.quasismooth_ci_check(sel, f, args.samples, args.seed)
    _emit(rep.to_json(), args.out)
    return 0 if rep.ok else 1


def example_documents(name: str) -> dict[str, dict]:
    """Golden documents for a fixture, keyed by file name."""
    fx = load_fixture(name)
    docs = {
        "fan.json": fan_to_json(fx.fan),
        "delta.json": polytope_to_json(fx.delta),
        "dual.json": polytope_to_json(fx.dual),
        "dims.json": V.h1_dims(fx.delta).to_json(),
    }
    if fx.edge is not None:
        sel = fx.selection()
        ci = E.complete_intersection(sel, fx.hypersurface)
        family = E.deformation_family(sel, fx.delta, fx.hypersurface)
        docs["ci.json"] = ci_to_json(sel, ci)
        docs["family.json"] = ci_to_json(sel, ci, family)
    return docs


def target_hull_report(sel) -> dict:
    gens = E.build_generators(sel)
    hull = Polytope.from_vertices(sel.fan.rank + sel.k, list(gens.values()))
    why = reflexive_diagnostic(hull)
    return {"generators": {k: list(v) for k, v in gens.items()}, "hull_reflexive": why is None, "reason": why or ""}


def cmd_example(args) -> int:
    fx = load_fixture(args.name)
    docs = example_documents(args.name)
    summary = {
        "fixture": fx.name,
        "description": fx.description,
        "hypersurface": fx.hypersurface.render(),
        "h1_poly": docs["dims.json"]["h1_poly"],
        "h1_nonp": docs["dims.json"]["h1_nonp"],
    }
    if fx.edge is not None:
        sel = fx.selection()
        fam = docs["family.json"]
        summary["edge"] = [list(p) for p in sel.edge_points]
        summary["equations"] = [
            q.render() for q in E.deformation_family(sel, fx.delta, fx.hypersurface).deformed_equations
        ]
        summary["pullback"] = E.complete_intersection(sel, fx.hypersurface).hypersurface.render()
        summary["parameters"] = [p["name"] for p in fam["parameters"]]
        summary["target"] = target_hull_report(sel)
    else:
        summary["edge"] = None
    if args.emit_all:
        out_dir = Path(args.out_dir or Path("fixtures") / args.name)
        out_dir.mkdir(parents=True, exist_ok=True)
        for fname, doc in docs.items():
            (out_dir / fname).write_text(dump_json(doc))
        summary["written"] = sorted(str(out_dir / f) for f in docs)
    _emit(summary)
    return 0


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric-embed", description="Toric embeddings along edges of reflexive polytopes.")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (TORIC_EMBED_JOBS overrides)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("polytope", help="polytope operations")
    sp.add_argument("action", choices=["dual", "points", "faces", "reflexive"])
    sp.add_argument("file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_polytope)

    sp = sub.add_parser("fan", help="fan operations")
    sp.add_argument("action", choices=["validate", "complete", "from-polytope", "star-subdivide"])
    sp.add_argument("file")
    sp.add_argument("--ray", help="comma-separated primitive vector")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fan)

    sp = sub.add_parser("hypotheses", help="check the embedding hypotheses and list admissible edges")
    sp.add_argument("fan")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_hypotheses)

    sp = sub.add_parser("embed", help="build the complete intersection along an edge")
    sp.add_argument("--fan", required=True, help="fan JSON file or fixture name")
    sp.add_argument("--edge", help="1-based ray indices i,j of the edge endpoints")
    sp.add_argument("--hypersurface", help="file holding a polynomial in x1..xn")
    sp.add_argument("--deform", action="store_true", help="attach the lambda family")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("dims", help="polynomial and non-polynomial deformation counts")
    sp.add_argument("--fan", required=True, help="fan JSON file or fixture name")
    sp.add_argument("--table", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_dims)

    sp = sub.add_parser("verify", help="rank certificates and nondegeneracy scan")
    sp.add_argument("check", choices=["binomial-rank", "ci-rank", "nondegenerate"])
    sp.add_argument("--fan", required=True, help="fan JSON file or fixture name")
    sp.add_argument("--edge")
    sp.add_argument("--hypersurface")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--primes", default="5,7")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("example", help="run a bundled example")
    sp.add_argument("name", choices=FIXTURE_NAMES)
    sp.add_argument("--emit-all", action="store_true", help="write golden JSON files")
    sp.add_argument("--out-dir")
    sp.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ValueError) and not isinstance(exc, HypothesisViolation) else 1


if __name__ == "__main__":
    sys.exit(main())
