"""JSON documents for polytopes, fans, polynomials and complete intersections."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .embed import CompleteIntersectionSpec, DeformationFamily, EdgeSelection, build_generators, phi_map
from .errors import GradingError, ToricError
from .fan import Fan
from .grading import DegreeClass, Polynomial, class_group, homogeneity
from .polytope import Polytope, from_vertices


class InputError(ToricError, ValueError):
    """Malformed input file."""


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _num(x: Fraction | int):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def _require(doc, keys, what):
    if not isinstance(doc, dict) or any(k not in doc for k in keys):
        raise InputError(f"{what} document needs keys {', '.join(keys)}")


# -- polytopes and fans ---------------------------------------------------------------


def polytope_to_json(P: Polytope) -> dict:
    verts = sorted(P.vertices)
    return {"rank": P.rank, "vertices": [[_num(x) for x in v] for v in verts]}


def polytope_from_json(doc) -> Polytope:
    _require(doc, ("rank", "vertices"), "polytope")
    try:
        pts = [[Fraction(x) for x in v] for v in doc["vertices"]]
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad vertex entry: {exc}") from None
    return from_vertices(int(doc["rank"]), pts)


def fan_to_json(F: Fan) -> dict:
    return {"rank": F.rank, "rays": [list(r) for r in F.rays], "max_cones": [list(c.ray_indices) for c in F.max_cones]}


def fan_from_json(doc) -> Fan:
    _require(doc, ("rank", "rays", "max_cones"), "fan")
    try:
        return Fan(int(doc["rank"]), doc["rays"], doc["max_cones"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad fan document: {exc}") from None


def degree_to_json(d: DegreeClass) -> dict:
    return d.to_json()


# -- polynomials ----------------------------------------------------------------------------


def polynomial_to_json(f: Polynomial) -> list[dict]:
    out = []
    for (e, sym), c in f.terms.items():
        if sym:
            coeff = sym if c == 1 else (f"-{sym}" if c == -1 else f"{c}*{sym}")
        else:
            coeff = str(c)
        out.append({"coeff": coeff, "exponents": {v: k for v, k in zip(f.variables, e) if k}})
    return out


def polynomial_from_json(terms, variables) -> Polynomial:
    f = Polynomial(variables)
    for t in terms:
        _require(t, ("coeff", "exponents"), "term")
        coeff = t["coeff"]
        sign, sym = 1, ""
        body = coeff.lstrip("-")
        if coeff.startswith("-"):
            sign = -1
        if "*" in body:
            num, sym = body.split("*", 1)
            c = Fraction(num)
        elif body and (body[0].isalpha()):
            c, sym = Fraction(1), body
        else:
            c = Fraction(body)
        f = f + Polynomial.monomial(variables, t["exponents"], coeff=sign * c, symbol=sym)
    return f


def parse_polynomial(text: str, F: Fan) -> Polynomial:
    """Parse a polynomial in x1..xn and check it is homogeneous for the fan's grading."""
    names = [f"x{i + 1}" for i in range(F.n_rays)]
    f = Polynomial.parse(text, names)
    _, bad = homogeneity(class_group(F), f)
    if bad is not None:
        raise GradingError(f"polynomial is not homogeneous: {bad[0]} and {bad[1]} have different degrees")
    return f


# -- complete intersections -------------------------------------------------------------


def ci_to_json(sel: EdgeSelection, ci: CompleteIntersectionSpec, family: DeformationFamily | None = None) -> dict:
    gens = build_generators(sel)
    equations = family.deformed_equations if family is not None else ci.equations
    eq_docs = [polynomial_to_json(q) for q in equations]
    if ci.hypersurface is not None:
        eq_docs.append(polynomial_to_json(ci.hypersurface))
    return {
        "ambient": fan_to_json(ci.ambient),
        "coordinates": [{"label": lab, "ray": list(gens[lab])} for lab in ci.labels],
        "map": phi_map(sel),
        "equations": eq_docs,
        "parameters": list(family.parameters) if family is not None else [],
    }


def ci_from_json(doc) -> tuple[Fan, list[str], list[Polynomial], list[dict]]:
    _require(doc, ("ambient", "coordinates", "equations"), "complete intersection")
    labels = [c["label"] for c in doc["coordinates"]]
    eqs = [polynomial_from_json(e, labels) for e in doc["equations"]]
    return fan_from_json(doc["ambient"]), labels, eqs, doc.get("parameters", [])
