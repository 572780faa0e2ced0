"""Unit-circle apparatus: the sigma surfaces and rich unit circles."""

from itertools import combinations

from gmpy2 import mpq

from .errors import Collinear, CoincidentPoints
from .geometry import Point3, Sphere, circle_through_three_points, norm2, scale, add
from .poly import MultiPoly


class _Empty:
    """Marker for an empty real locus."""

    def __repr__(self):
        return "Empty"


EMPTY = _Empty()


def sigma_polynomial(o, a):
    """|oa|^2 |w-o|^2 |w-a|^2 - 4 |(a-o) x (w-o)|^2 in w = (x, y, z).

    Zero exactly when o, a, w span a triangle of circumradius 1 (or w is o or a).
    """
    o, a = tuple(o), tuple(a)
    x, y, z = MultiPoly.gens()
    w = (x, y, z)
    wo = [w[i] - o[i] for i in range(3)]
    wa = [w[i] - a[i] for i in range(3)]
    e = [a[i] - o[i] for i in range(3)]
    L2 = sum(c * c for c in e)
    cr = (
        wo[2] * e[1] - wo[1] * e[2],
        wo[0] * e[2] - wo[2] * e[0],
        wo[1] * e[0] - wo[0] * e[1],
    )
    n_wo = wo[0] ** 2 + wo[1] ** 2 + wo[2] ** 2
    n_wa = wa[0] ** 2 + wa[1] ** 2 + wa[2] ** 2
    return n_wo * n_wa * L2 - (cr[0] ** 2 + cr[1] ** 2 + cr[2] ** 2) * 4


def sigma_surface(o, a):
    """Locus of w with o, a, w on a common unit circle.

    Returns EMPTY when |oa| > 2, the sphere with diameter oa when |oa| = 2,
    and otherwise the quartic polynomial.
    """
    o = o if isinstance(o, Point3) else Point3.of(o)
    a = a if isinstance(a, Point3) else Point3.of(a)
    if o == a:
        raise CoincidentPoints("o and a coincide")
    L2 = norm2(tuple(x - y for x, y in zip(a, o)))
    if L2 > 4:
        return EMPTY
    if L2 == 4:
        center = scale(add(o.t, a.t), mpq(1, 2))
        return Sphere(Point3.of(center), 1)
    return sigma_polynomial(o, a)


def rich_unit_circles(points):
    """All unit circles through at least three of the points."""
    pts = list(dict.fromkeys(p if isinstance(p, Point3) else Point3.of(p) for p in points))
    found = set()
    for a, b, c in combinations(pts, 3):
        try:
            circ = circle_through_three_points(a, b, c)
        except Collinear:
            continue
        if circ.radius_sq == 1:
            found.add(circ)
    return sorted(found, key=lambda c: (c.center.t, c.normal))
