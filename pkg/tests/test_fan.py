import pytest

from toric_embed.errors import FanError
from toric_embed.fan import (
    Cone,
    Fan,
    completeness_issues,
    extreme_rays,
    face_fan,
    is_complete,
    is_face,
    star_subdivide,
    validate_fan,
)
from toric_embed.polytope import from_vertices

P2 = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_p2_valid_and_complete():
    rep = validate_fan(P2)
    assert rep.ok
    assert all(set(e) == {"check", "status", "detail"} for e in rep.to_json())
    assert is_complete(P2)


def test_overlapping_cones_rejected():
    bad = Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    rep = validate_fan(bad)
    assert not rep.ok
    assert any(f["check"] == "intersections" for f in rep.failures())


def test_non_primitive_and_non_simplicial():
    rep = validate_fan(Fan(2, [(2, 0), (0, 1)], [(0, 1)]))
    assert any(f["check"] == "primitive_rays" for f in rep.failures())
    rep = validate_fan(Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1, 2)]))
    assert any(f["check"] == "simplicial" for f in rep.failures())


def test_parallel_validation_matches_serial():
    F = face_fan(from_vertices(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]))
    assert validate_fan(F, jobs=2).to_json() == validate_fan(F, jobs=1).to_json()


def test_incomplete_fan_diagnosed():
    half = Fan(2, [(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    assert not is_complete(half)
    assert completeness_issues(half)


def test_face_fan_of_simplex():
    F = face_fan(from_vertices(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]))
    assert len(F.max_cones) == 4 and is_complete(F)


def test_star_subdivision():
    F = star_subdivide(P2, (1, 1))
    assert F.rays[-1] == (1, 1)
    assert len(F.max_cones) == 4
    assert validate_fan(F).ok and is_complete(F)
    assert star_subdivide(F, (1, 1)) is F
    with pytest.raises(FanError):
        star_subdivide(P2, (2, 2))
    with pytest.raises(FanError):
        star_subdivide(Fan(2, [(1, 0), (0, 1)], [(0, 1)]), (-1, -1))


def test_p11222_resolution():
    dual = from_vertices(4, [(-1, -2, -2, -2), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    F = star_subdivide(face_fan(dual), (0, -1, -1, -1))
    assert F.n_rays == 6 and len(F.max_cones) == 8
    assert validate_fan(F).ok and is_complete(F)


def test_extreme_rays_of_quadrant_and_halfplane():
    rays, lin = extreme_rays([], [[1, 0], [0, 1]], 2)
    assert sorted(rays) == [(0, 1), (1, 0)] and not lin
    rays, lin = extreme_rays([], [[1, 0]], 2)
    assert lin


def test_is_face():
    assert is_face(P2, Cone((0,)), Cone((0, 1)))
    assert not is_face(P2, Cone((2,)), Cone((0, 1)))
