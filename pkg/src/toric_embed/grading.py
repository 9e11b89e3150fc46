"""Class-group grading of the homogeneous coordinate ring, and polynomials in it.

A ``GradingContext`` fixes one Smith normal form of the pairing matrix of a
fan; every ``DegreeClass`` it produces is expressed in those coordinates, so
equality of classes is plain tuple equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import GradingError
from .fan import Cone, Fan
from .lattice import smith_normal_form, rank_rational

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class DegreeClass:
    free: tuple[int, ...]
    torsion: tuple[int, ...]
    moduli: tuple[int, ...] = ()

    def __add__(self, other: "DegreeClass") -> "DegreeClass":
        return DegreeClass(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple((a + b) % m for a, b, m in zip(self.torsion, other.torsion, self.moduli)),
            self.moduli,
        )

    def __neg__(self):
        return DegreeClass(
            tuple(-a for a in self.free),
            tuple((-a) % m for a, m in zip(self.torsion, self.moduli)),
            self.moduli,
        )

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}


class GradingContext:
    """Projection Z^n -> A_{d-1} for a fan with ``n`` rays spanning ``N_R``."""

    def __init__(self, fan: Fan, labels: Sequence[str] | None = None):
        n, d = fan.n_rays, fan.rank
        self.fan = fan
        self.labels = tuple(labels) if labels is not None else tuple(f"x{i + 1}" for i in range(n))
        if len(self.labels) != n:
            raise GradingError("one label per ray is required")
        self._index = {name: i for i, name in enumerate(self.labels)}
        pairing_matrix = [[r[a] for r in fan.rays] for a in range(d)]
        if rank_rational(pairing_matrix) != d:
            raise GradingError("rays do not span N_R")
        self.U, self.D, self.V = smith_normal_form(pairing_matrix)
        self.invariant_factors = tuple(self.D[i][i] for i in range(d))
        self._torsion_pos = tuple(i for i, f in enumerate(self.invariant_factors) if f > 1)
        self.moduli = tuple(self.invariant_factors[i] for i in self._torsion_pos)
        self.free_rank = n - d

    def __repr__(self):
        return f"GradingContext(free_rank={self.free_rank}, torsion={list(self.moduli)})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GradingError(f"unknown variable {label!r}") from None

    def degree(self, exponents: Sequence[int]) -> DegreeClass:
        n = self.fan.n_rays
        if len(exponents) != n:
            raise GradingError(f"monomial has {len(exponents)} exponents, fan has {n} rays")
        d = self.fan.rank
        b = [sum(exponents[i] * self.V[i][j] for i in range(n)) for j in range(n)]
        return DegreeClass(
            tuple(b[d:]),
            tuple(b[i] % self.invariant_factors[i] for i in self._torsion_pos),
            self.moduli,
        )

    def degree_of_named(self, exps: Mapping[str, int]) -> DegreeClass:
        vec = [0] * self.fan.n_rays
        for name, e in exps.items():
            vec[self.index(name)] += e
        return self.degree(vec)

    def zero(self) -> DegreeClass:
        return self.degree([0] * self.fan.n_rays)


def class_group(F: Fan, labels: Sequence[str] | None = None) -> GradingContext:
    return GradingContext(F, labels)


def degree(ctx: GradingContext, mono: Sequence[int]) -> DegreeClass:
    return ctx.degree(mono)


def anticanonical_class(ctx: GradingContext) -> DegreeClass:
    return ctx.degree([1] * ctx.fan.n_rays)


def beta1_sigma(ctx: GradingContext, cone: Cone) -> DegreeClass:
    vec = [0] * ctx.fan.n_rays
    for i in cone.ray_indices:
        vec[i] = 1
    return ctx.degree(vec)


# -- polynomials -----------------------------------------------------------------


_FACTOR = re.compile(
    r"(?P<num>\d+(?:/\d+)?)"
    r"|(?P<sym>lambda_\d+_\d+|a_\d+)"
    r"|(?P<var>[xsty]\d+)(?:\^(?P<exp>\d+))?"
)


class Polynomial:
    """Sparse polynomial over Q with optional formal coefficient symbols.

    Terms are keyed by ``(exponents, symbol)``; ``symbol`` is ``""`` for a
    plain rational coefficient, otherwise a formal parameter such as
    ``lambda_1_1`` or ``a_7``.  Term order is insertion order, which is what
    gets rendered.  Exponents may be negative (Laurent) internally.
    """

    def __init__(self, variables: Sequence[str], terms: Iterable | Mapping | None = None):
        self.variables = tuple(variables)
        self.terms: dict[tuple[Monomial, str], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for key, c in items:
            exps, sym = key
            self._add_term(tuple(exps), sym, Fraction(c))

    def _add_term(self, exps, sym, c):
        if len(exps) != len(self.variables):
            raise GradingError("exponent vector length does not match the variables")
        key = (exps, sym)
        total = self.terms.get(key, Fraction(0)) + c
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    @classmethod
    def monomial(cls, variables, exps: Mapping[str, int] | Sequence[int], coeff=1, symbol=""):
        variables = tuple(variables)
        if isinstance(exps, Mapping):
            vec = [0] * len(variables)
            for name, e in exps.items():
                vec[variables.index(name)] += e
            exps = vec
        return cls(variables, [((tuple(exps), symbol), coeff)])

    # arithmetic ------------------------------------------------------------

    def copy(self) -> "Polynomial":
        return Polynomial(self.variables, dict(self.terms))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_vars(other)
        out = self.copy()
        for (e, s), c in other.terms.items():
            out._add_term(e, s, c)
        return out

    def __neg__(self):
        return Polynomial(self.variables, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        return Polynomial(self.variables, {k: v * c for k, v in self.terms.items()})

    def _check_vars(self, other):
        if other.variables != self.variables:
            raise GradingError("polynomials over different variable lists")

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def symbols(self) -> list[str]:
        return list(dict.fromkeys(s for _, s in self.terms if s))

    def sorted(self) -> "Polynomial":
        """Copy with terms in descending lexicographic exponent order."""
        keys = sorted(self.terms, key=lambda k: (k[0], k[1]), reverse=True)
        return Polynomial(self.variables, [(k, self.terms[k]) for k in keys])

    def exponent_dicts(self):
        for (e, s), c in self.terms.items():
            yield {v: x for v, x in zip(self.variables, e) if x}, s, c

    # calculus ---------------------------------------------------------------

    def diff(self, var: str) -> "Polynomial":
        i = self.variables.index(var)
        out = Polynomial(self.variables)
        for (e, s), c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out._add_term(tuple(ne), s, c * e[i])
        return out

    def euler(self, var: str) -> "Polynomial":
        """``var * d/d(var)`` applied to the polynomial."""
        i = self.variables.index(var)
        out = Polynomial(self.variables)
        for (e, s), c in self.terms.items():
            if e[i]:
                out._add_term(e, s, c * e[i])
        return out

    def has_negative_exponents(self) -> bool:
        return any(x < 0 for (e, _), _c in self.terms.items() for x in e)

    # substitution -------------------------------------------------------------

    def pullback(self, target_vars: Sequence[str], mapping: Mapping[str, Mapping[str, int]]) -> "Polynomial":
        """Substitute each variable by a (Laurent) monomial in ``target_vars``."""
        target_vars = tuple(target_vars)
        cols = []
        for v in self.variables:
            img = mapping[v]
            cols.append([img.get(t, 0) for t in target_vars])
        out = Polynomial(target_vars)
        for (e, s), c in self.terms.items():
            ne = tuple(sum(e[i] * cols[i][j] for i in range(len(e))) for j in range(len(target_vars)))
            out._add_term(ne, s, c)
        return out

    def evaluate(self, point: Mapping[str, Fraction] | Sequence, symbols: Mapping[str, Fraction] | None = None):
        """Exact value at ``point``; formal symbols must be given in ``symbols``."""
        vals = [point[v] for v in self.variables] if isinstance(point, Mapping) else list(point)
        total = Fraction(0)
        for (e, s), c in self.terms.items():
            term = Fraction(c)
            if s:
                if symbols is None or s not in symbols:
                    raise GradingError(f"no value for formal symbol {s}")
                term *= symbols[s]
            for x, k in zip(vals, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def evaluate_mod(self, point: Sequence[int], p: int, symbols: Mapping[str, int] | None = None) -> int:
        total = 0
        for (e, s), c in self.terms.items():
            term = c.numerator * pow(c.denominator, -1, p)
            if s:
                term *= symbols[s]
            for x, k in zip(point, e):
                if k:
                    term = term * pow(int(x), k, p)
            total = (total + term) % p
        return total % p

    # text -------------------------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for idx, ((e, s), c) in enumerate(self.terms.items()):
            factors = [s] if s else []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k:
                    factors.append(f"{v}^{k}")
            mag = abs(c)
            if factors:
                body = "*".join(factors) if mag == 1 else f"{mag}*" + "*".join(factors)
            else:
                body = str(mag)
            if idx == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    __str__ = render

    def __repr__(self):
        return f"Polynomial({self.render()!r})"

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        """Parse ``c*sym*x1^a*x2^b + ...``; see the README for the grammar."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        src = text.replace(" ", "").replace("\t", "").replace("\n", "")
        if not src:
            raise GradingError("empty polynomial")
        chunks = re.findall(r"[+-]?[^+-]+", src)
        if "".join(chunks) != src:
            raise GradingError(f"cannot parse polynomial {text!r}")
        poly = cls(variables)
        for chunk in chunks:
            sign = -1 if chunk[0] == "-" else 1
            body = chunk.lstrip("+-")
            coeff = Fraction(sign)
            sym = ""
            exps = [0] * len(variables)
            for factor in body.split("*"):
                m = _FACTOR.fullmatch(factor)
                if not m:
                    raise GradingError(f"bad factor {factor!r} in {text!r}")
                if m.group("num"):
                    coeff *= Fraction(m.group("num"))
                elif m.group("sym"):
                    if sym:
                        raise GradingError(f"term {chunk!r} has two formal symbols")
                    sym = m.group("sym")
                else:
                    name = m.group("var")
                    if name not in index:
                        raise GradingError(f"unknown variable {name!r}")
                    exps[index[name]] += int(m.group("exp") or 1)
            key = (tuple(exps), sym)
            if key in poly.terms:
                raise GradingError(f"repeated monomial in {text!r}")
            poly._add_term(key[0], sym, coeff)
        return poly


HomogeneousPolynomial = Polynomial


def _term_degree(ctx: GradingContext, variables, exps) -> DegreeClass:
    vec = [0] * ctx.fan.n_rays
    for name, e in zip(variables, exps):
        vec[ctx.index(name)] += e
    return ctx.degree(vec)


def homogeneity(ctx: GradingContext, poly: Polynomial):
    """``(class, None)`` if homogeneous, else ``(None, (term_a, term_b))``."""
    if poly.is_zero():
        raise GradingError("homogeneity of the zero polynomial is undefined")
    first = None
    first_term = None
    for (e, s), c in poly.terms.items():
        deg = _term_degree(ctx, poly.variables, e)
        if first is None:
            first, first_term = deg, (e, s)
        elif deg != first:
            return None, (_render_term(poly, first_term), _render_term(poly, (e, s)))
    return first, None


def _render_term(poly, key):
    return Polynomial(poly.variables, [(key, poly.terms[key])]).render()


def is_homogeneous(ctx: GradingContext, poly: Polynomial) -> DegreeClass | None:
    return homogeneity(ctx, poly)[0]
