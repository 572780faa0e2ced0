import random

import pytest
from gmpy2 import mpq
from hypothesis import assume, given

from circlab.errors import Collinear, DegeneratePair, IrrationalShape
from circlab.generators import gen_triangle_cloud
from circlab.geometry import Point3, cross, incidence_test, is_zero_vec, norm2, sub
from circlab.triangles import (
    TriangleShape,
    _ratio_key,
    count_bruteforce,
    count_via_circles,
    cpq_circle,
    similar_triangles,
)

from conftest import nonzero_triples, rationals, triples

APEX = TriangleShape(mpq(1, 2), mpq(1, 4))
SQUARE = [Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0), Point3(0, 1, 0)]


def test_cpq_examples():
    c = cpq_circle(Point3(0, 0, 0), Point3(2, 0, 0), APEX)
    assert c.center == Point3(1, 0, 0) and c.radius_sq == 1
    assert c.normal == (1, 0, 0)
    r = Point3(1, 0, 1)
    assert incidence_test(r, c)
    sides = (4, norm2(r.t), norm2(sub(r.t, (2, 0, 0))))
    assert _ratio_key(sides) == _ratio_key(APEX.squared_sides)
    with pytest.raises(DegeneratePair):
        cpq_circle(Point3(1, 1, 1), Point3(1, 1, 1), APEX)


def ordered_ratios(p, q, r):
    a, b, c = norm2(sub(q, p)), norm2(sub(r, p)), norm2(sub(r, q))
    return (b / a, c / a)


@given(triples(), nonzero_triples(), triples(), triples(-4, 4, 2))
def test_cpq_membership_is_similarity(p, d, r, probe):
    q = tuple(a + b for a, b in zip(p, d))
    assume(not is_zero_vec(cross(d, sub(r, p))))
    shape = TriangleShape.from_points(p, q, r)
    c = cpq_circle(p, q, shape)
    assert incidence_test(Point3.of(r), c)
    target = ordered_ratios(p, q, r)
    for cand in (probe, tuple(2 * a - b for a, b in zip(c.center.t, r))):
        assert incidence_test(Point3.of(cand), c) == (ordered_ratios(p, q, cand) == target)


def test_square_fixture():
    shape = TriangleShape.from_points((0, 0, 0), (1, 0, 0), (0, 1, 0))
    assert similar_triangles(SQUARE, shape) == 4
    assert shape.symmetry_order() == 2


def test_self_triangle():
    pts = [Point3(0, 0, 0), Point3(4, 0, 0), Point3(1, 2, 3)]
    shape = TriangleShape.from_points(*pts)
    assert similar_triangles(pts, shape) == 1


def test_symmetry_orders():
    assert TriangleShape.from_sides(1, 1, 1).symmetry_order() == 6
    assert TriangleShape.from_sides(4, 9, 16).symmetry_order() == 1
    assert TriangleShape.from_sides(2, 1, 1).symmetry_order() == 2


def test_shape_rejections():
    with pytest.raises(Collinear):
        TriangleShape(0, 0)
    with pytest.raises(IrrationalShape):
        TriangleShape(0.5, 1)


def test_agreement_on_clouds():
    rng = random.Random(6)
    shapes = [
        TriangleShape.from_sides(1, 1, 2),
        TriangleShape.from_sides(1, 2, 3),
        TriangleShape.from_sides(2, 2, 2),
        TriangleShape.from_sides(1, 4, 5),
        TriangleShape.from_sides(2, 3, 5),
    ]
    for seed in range(10):
        pts = gen_triangle_cloud(rng.randint(6, 30), seed=seed)
        direct = count_bruteforce(pts, shapes[seed % 5])
        inc, factor = count_via_circles(pts, shapes[seed % 5])
        assert inc == factor * direct
