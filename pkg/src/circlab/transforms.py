"""Inversion in the unit sphere and stereographic projection, exactly."""

from dataclasses import dataclass

from .errors import InvalidGeometry, NotThroughOrigin, OriginNotInvertible, PoleCollision
from .geometry import (
    Circle3,
    Line3,
    Plane,
    Point3,
    Sphere,
    add,
    cross,
    dot,
    incidence_test,
    is_zero_vec,
    norm2,
    scale,
    sub,
)
from .poly import MultiPoly, exact_div
from .rational import as_q, is_square, q_sqrt


def _invert(p, center, power):
    d = sub(p, center)
    r2 = norm2(d)
    if r2 == 0:
        raise OriginNotInvertible("the inversion center has no image")
    return add(center, scale(d, power / r2))


def invert_point(p, center=None, power=1):
    """p / |p|^2 (or the inversion with the given center and power)."""
    c = center.t if isinstance(center, Point3) else (tuple(center) if center else (0, 0, 0))
    return Point3.of(_invert(tuple(as_q(v) for v in p), tuple(as_q(v) for v in c), as_q(power)))


def invert_plane_or_sphere(s, center=(0, 0, 0), power=1):
    """Image of a plane or sphere under inversion; returns Plane or Sphere."""
    center = tuple(as_q(v) for v in center)
    k = as_q(power)
    if isinstance(s, Plane):
        d = s.offset - dot(s.normal, center)
        if d == 0:
            return s
        cc = scale(s.normal, k / (2 * d))
        return Sphere(Point3.of(add(center, cc)), norm2(cc))
    if isinstance(s, Sphere):
        c = sub(s.center.t, center)
        P = norm2(c) - s.radius_sq
        if P == 0:
            # 2 c . y = k in translated coordinates
            n = scale(c, 2)
            return Plane(n, k + dot(n, center))
        cc = scale(c, k / P)
        return Sphere(Point3.of(add(center, cc)), k * k * s.radius_sq / (P * P))
    raise TypeError("expected a Plane or Sphere")


def plane_sphere_circle(plane, sphere):
    n = plane.normal
    nn = norm2(n)
    lam = (plane.offset - dot(n, sphere.center.t)) / nn
    foot = add(sphere.center.t, scale(n, lam))
    r2 = sphere.radius_sq - lam * lam * nn
    if r2 <= 0:
        raise InvalidGeometry("plane and sphere do not meet in a circle")
    return Circle3(n, plane.offset, Point3.of(foot), r2)


def plane_plane_line(p1, p2):
    d = cross(p1.normal, p2.normal)
    if is_zero_vec(d):
        raise InvalidGeometry("parallel planes")
    # point on both planes: combination a n1 + b n2
    n1, n2 = p1.normal, p2.normal
    a11, a12, a22 = norm2(n1), dot(n1, n2), norm2(n2)
    det = a11 * a22 - a12 * a12
    a = (p1.offset * a22 - p2.offset * a12) / det
    b = (p2.offset * a11 - p1.offset * a12) / det
    return Line3(Point3.of(add(scale(n1, a), scale(n2, b))), d)


def intersect_surfaces(s1, s2):
    """Circle (or line) where two planes/spheres meet."""
    if isinstance(s1, Plane) and isinstance(s2, Plane):
        return plane_plane_line(s1, s2)
    if isinstance(s1, Sphere) and isinstance(s2, Plane):
        s1, s2 = s2, s1
    if isinstance(s1, Plane):
        return plane_sphere_circle(s1, s2)
    c1, c2 = s1.center.t, s2.center.t
    n = scale(sub(c2, c1), 2)
    off = norm2(c2) - norm2(c1) + s1.radius_sq - s2.radius_sq
    return plane_sphere_circle(Plane(n, off), s1)


def invert_circle(c, center=(0, 0, 0), power=1):
    """Image of a circle: a Line3 if it passes through the center, else a Circle3."""
    center = tuple(as_q(v) for v in center)
    s1 = invert_plane_or_sphere(c.plane, center, power)
    s2 = invert_plane_or_sphere(c.great_sphere(), center, power)
    return intersect_surfaces(s1, s2)


def invert_line(line, center=(0, 0, 0), power=1):
    """Image of a line: itself if it passes through the center, else a circle
    through the center."""
    center = tuple(as_q(v) for v in center)
    rel = sub(line.base.t, center)
    nrm = cross(rel, line.direction)
    if is_zero_vec(nrm):
        return line
    p1 = Plane(nrm, dot(nrm, line.base.t))
    n2 = cross(line.direction, nrm)
    p2 = Plane(n2, dot(n2, line.base.t))
    return intersect_surfaces(
        invert_plane_or_sphere(p1, center, power), invert_plane_or_sphere(p2, center, power)
    )


def invert_surface(f, check_origin=True):
    """Numerator of f composed with inversion, with every factor of
    x^2+y^2+z^2 cleared."""
    if check_origin and f.constant_term() != 0:
        raise NotThroughOrigin("f(0) must vanish")
    vars = f.vars
    E = f.degree()
    x, y, z = MultiPoly.gens(vars)
    rho = x * x + y * y + z * z
    rho_pows = [MultiPoly.const(1, vars)]
    for _ in range(E):
        rho_pows.append(rho_pows[-1] * rho)
    acc = MultiPoly({}, vars)
    for e, c in f.terms.items():
        k = sum(e)
        acc = acc + MultiPoly({e: c}, vars) * rho_pows[E - k]
    while not acc.is_zero():
        q = exact_div(acc, rho)
        if q is None:
            break
        acc = q
    return acc


@dataclass
class StereoImage:
    points: list
    circles: list
    plane: Plane
    pole: Point3


def default_pole(sphere):
    if not is_square(sphere.radius_sq):
        raise PoleCollision("north pole is irrational; supply a rational pole on the sphere")
    c = sphere.center
    return Point3(c.x, c.y, c.z + q_sqrt(sphere.radius_sq))


def stereographic_project(points, circles, sphere, pole=None):
    """Project points and circles on ``sphere`` from ``pole`` onto the plane
    through the sphere's center perpendicular to the pole direction.

    The map is inversion about the pole with power 2R^2, which fixes the
    equator and sends the antipode to the center.
    """
    pole = default_pole(sphere) if pole is None else Point3.of(tuple(pole))
    if not sphere.contains_point(pole):
        raise InvalidGeometry("pole must lie on the sphere")
    power = 2 * sphere.radius_sq
    img_points = []
    for p in points:
        if not sphere.contains_point(p):
            raise InvalidGeometry(f"point {p} is not on the sphere")
        if tuple(p) == pole.t:
            raise PoleCollision("pole coincides with an input point")
        img_points.append(invert_point(p, pole, power))
    img_circles = []
    for c in circles:
        if not c.on_sphere(sphere):
            raise InvalidGeometry("circle is not on the sphere")
        if incidence_test(pole, c):
            raise PoleCollision("pole lies on an input circle")
        img_circles.append(invert_circle(c, pole.t, power))
    axis = sub(pole.t, sphere.center.t)
    plane = Plane(axis, dot(axis, sphere.center.t))
    return StereoImage(img_points, img_circles, plane, pole)
