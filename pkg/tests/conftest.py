import itertools
from fractions import Fraction

import pytest

from toric_embed.fixtures import FIXTURE_NAMES, load_fixture


def brute_force_points(P):
    """Lattice points of P by scanning the vertex bounding box with the facet inequalities."""
    lo = [min(v[i] for v in P.vertices) for i in range(P.rank)]
    hi = [max(v[i] for v in P.vertices) for i in range(P.rank)]
    ranges = [range(int(Fraction(a).__floor__()), int(Fraction(b).__ceil__()) + 1) for a, b in zip(lo, hi)]
    out = []
    for x in itertools.product(*ranges):
        if all(sum(n * xi for n, xi in zip(f.normal, x)) >= f.rhs for f in P.facets):
            out.append(tuple(x))
    return sorted(out)


@pytest.fixture(params=FIXTURE_NAMES)
def fixture(request):
    return load_fixture(request.param)


@pytest.fixture(params=[n for n in FIXTURE_NAMES if load_fixture(n).edge is not None])
def edge_fixture(request):
    return load_fixture(request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
