import random
from itertools import combinations

from gmpy2 import mpq
from hypothesis import assume, given

from circlab.errors import CoincidentPoints
from circlab.geometry import Point3, Sphere, circle_through_three_points, cross, incidence_test, is_zero_vec, sub
from circlab.poly import MultiPoly
from circlab.unit import EMPTY, rich_unit_circles, sigma_polynomial, sigma_surface

import pytest

from conftest import triples

x, y, z = MultiPoly.gens()


def test_sigma_cases():
    s = sigma_surface((0, 0, 0), (2, 0, 0))
    assert s == Sphere(Point3(1, 0, 0), 1)
    assert s.polynomial() == (x - 1) ** 2 + y * y + z * z - 1
    assert sigma_surface((0, 0, 0), (3, 0, 0)) is EMPTY
    q = sigma_surface((0, 0, 0), (mpq(6, 5), 0, 0))
    assert q.degree() == 4
    assert q((mpq(8, 5), mpq(4, 5), 0)) == 0
    with pytest.raises(CoincidentPoints):
        sigma_surface((1, 1, 1), (1, 1, 1))


def test_sigma_diametral_is_squared_sphere():
    o, a = (0, 0, 0), (2, 0, 0)
    S = (x - 1) ** 2 + y * y + z * z - 1
    assert sigma_polynomial(o, a) == S * S * 4


@given(triples(-3, 3, 4), triples(-3, 3, 4), triples(-3, 3, 4))
def test_sigma_vanishes_iff_unit_circumradius(o, a, w):
    assume(not is_zero_vec(cross(sub(a, o), sub(w, o))))
    c = circle_through_three_points(Point3.of(o), Point3.of(a), Point3.of(w))
    assert (sigma_polynomial(o, a)(w) == 0) == (c.radius_sq == 1)


def test_sigma_zero_on_constructed_triangles():
    rng = random.Random(3)
    from circlab.generators import _pyth_unit

    for _ in range(30):
        ts = [mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        pts = [(cx, cy, 0) for cx, cy in (_pyth_unit(t) for t in ts)]
        if len(set(pts)) < 3:
            continue
        assert sigma_polynomial(pts[0], pts[1])(pts[2]) == 0


def test_rich_unit_circles_examples():
    on = [Point3(1, 0, 0), Point3(0, 1, 0), Point3(mpq(3, 5), mpq(4, 5), 0)]
    got = rich_unit_circles(on)
    assert len(got) == 1 and got[0].radius_sq == 1
    off = [Point3(2, 0, 0), Point3(0, 2, 0), Point3(-2, 0, 0)]
    assert rich_unit_circles(off) == []


def test_rich_unit_circles_census():
    from circlab.generators import gen_unit_bundle

    inst = gen_unit_bundle(30, 12, 8, seed=1)
    got = rich_unit_circles(inst.points)
    assert len(got) == len(set(got))
    for c in got:
        assert c.radius_sq == 1
        assert sum(1 for p in inst.points if incidence_test(p, c)) >= 3
