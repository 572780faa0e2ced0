"""Exact points, planes, spheres, circles and lines in R^3."""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from gmpy2 import mpq

from .errors import ChartMismatch, Collinear, InvalidGeometry
from .poly import MultiPoly, ST
from .rational import as_q

# vector helpers on 3-tuples of mpq ------------------------------------------


def vec(v):
    return tuple(as_q(c) for c in v)


def add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(a, k):
    return (a[0] * k, a[1] * k, a[2] * k)


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm2(a):
    return dot(a, a)


def is_zero_vec(a):
    return not (a[0] or a[1] or a[2])


def _normalise_direction(v):
    """Scale v so its first nonzero coordinate is 1."""
    for c in v:
        if c:
            return tuple(x / c for x in v), c
    raise InvalidGeometry("zero vector")


@dataclass(frozen=True)
class Point3:
    x: object
    y: object
    z: object

    def __post_init__(self):
        object.__setattr__(self, "x", as_q(self.x))
        object.__setattr__(self, "y", as_q(self.y))
        object.__setattr__(self, "z", as_q(self.z))

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __len__(self):
        return 3

    def __getitem__(self, i):
        return (self.x, self.y, self.z)[i]

    @property
    def t(self):
        return (self.x, self.y, self.z)

    @classmethod
    def of(cls, v):
        return cls(v[0], v[1], v[2])

    def __repr__(self):
        from .rational import q_str
        return f"Point3({q_str(self.x)}, {q_str(self.y)}, {q_str(self.z)})"


ORIGIN = Point3(0, 0, 0)


@dataclass(frozen=True)
class Plane:
    """The plane normal . x = offset, stored with the normal's first nonzero entry equal to 1."""

    normal: tuple
    offset: object

    def __post_init__(self):
        n = vec(self.normal)
        if is_zero_vec(n):
            raise InvalidGeometry("plane normal must be nonzero")
        n, k = _normalise_direction(n)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", as_q(self.offset) / k)

    def contains_point(self, p):
        return dot(self.normal, tuple(p)) == self.offset

    def coeff_vector(self):
        """Coefficients (x^2+y^2+z^2, x, y, z, 1) of the defining equation."""
        return (mpq(0),) + self.normal + (-self.offset,)


@dataclass(frozen=True)
class Sphere:
    center: Point3
    radius_sq: object

    def __post_init__(self):
        if not isinstance(self.center, Point3):
            object.__setattr__(self, "center", Point3.of(self.center))
        r2 = as_q(self.radius_sq)
        if r2 <= 0:
            raise InvalidGeometry("sphere radius_sq must be positive")
        object.__setattr__(self, "radius_sq", r2)

    def contains_point(self, p):
        return norm2(sub(tuple(p), self.center.t)) == self.radius_sq

    def polynomial(self):
        x, y, z = MultiPoly.gens()
        c = self.center
        return (x - c.x) ** 2 + (y - c.y) ** 2 + (z - c.z) ** 2 - self.radius_sq

    def coeff_vector(self):
        c = self.center.t
        return (mpq(1), -2 * c[0], -2 * c[1], -2 * c[2], norm2(c) - self.radius_sq)


@dataclass(frozen=True)
class Circle3:
    """Circle {p : normal . p = offset, |p - center|^2 = radius_sq}.

    The normal is rescaled so its first nonzero coordinate is 1; two
    Circle3 values compare equal iff they are the same point set.
    """

    normal: tuple
    offset: object
    center: Point3
    radius_sq: object

    def __post_init__(self):
        n = vec(self.normal)
        if is_zero_vec(n):
            raise InvalidGeometry("circle plane normal must be nonzero")
        n, k = _normalise_direction(n)
        d = as_q(self.offset) / k
        c = self.center if isinstance(self.center, Point3) else Point3.of(self.center)
        r2 = as_q(self.radius_sq)
        if dot(n, c.t) != d:
            raise InvalidGeometry("circle center is not on its plane")
        if r2 <= 0:
            raise InvalidGeometry("circle radius_sq must be positive")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", d)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius_sq", r2)

    @classmethod
    def from_center(cls, center, normal, radius_sq):
        c = Point3.of(center)
        n = vec(normal)
        return cls(n, dot(n, c.t), c, radius_sq)

    @cached_property
    def plane(self):
        return Plane(self.normal, self.offset)

    def contains(self, p):
        return incidence_test(p, self)

    def on_sphere(self, sphere):
        """True iff this circle lies on the given sphere."""
        d = sub(sphere.center.t, self.center.t)
        if not is_zero_vec(cross(d, self.normal)):
            return False
        return sphere.radius_sq == self.radius_sq + norm2(d)

    def great_sphere(self):
        """The sphere of the pencil centred at the circle's own center."""
        return Sphere(self.center, self.radius_sq)


def incidence_test(p, c):
    """True iff point p lies exactly on circle c."""
    pt = p.t if isinstance(p, Point3) else vec(p)
    if dot(c.normal, pt) != c.offset:
        return False
    return norm2(sub(pt, c.center.t)) == c.radius_sq


@dataclass(frozen=True)
class PlaneChart:
    """Affine chart origin + s*u + t*w of a plane; u, w need not be orthonormal."""

    origin: Point3
    u: tuple
    w: tuple

    def __post_init__(self):
        if not isinstance(self.origin, Point3):
            object.__setattr__(self, "origin", Point3.of(self.origin))
        u, w = vec(self.u), vec(self.w)
        if is_zero_vec(cross(u, w)):
            raise InvalidGeometry("chart vectors must be linearly independent")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @property
    def normal(self):
        return cross(self.u, self.w)

    def point(self, s, t):
        s, t = as_q(s), as_q(t)
        return Point3.of(add(self.origin.t, add(scale(self.u, s), scale(self.w, t))))

    def coordinates(self, p):
        """Chart coordinates (s, t) of a point on the chart plane."""
        d = sub(tuple(p), self.origin.t)
        uu, uw, ww = dot(self.u, self.u), dot(self.u, self.w), dot(self.w, self.w)
        du, dw = dot(d, self.u), dot(d, self.w)
        det = uu * ww - uw * uw
        s = (du * ww - dw * uw) / det
        t = (dw * uu - du * uw) / det
        if not is_zero_vec(sub(d, add(scale(self.u, s), scale(self.w, t)))):
            raise ChartMismatch("point is not on the chart plane")
        return s, t

    def matches_plane(self, normal, offset):
        n = vec(normal)
        return (
            dot(n, self.u) == 0
            and dot(n, self.w) == 0
            and dot(n, self.origin.t) == as_q(offset)
        )


def orthogonal_basis(normal):
    """Rational u, w with u, w, normal pairwise orthogonal."""
    a, b, c = normal
    if a or b:
        u = (-b, a, mpq(0))
    else:
        u = (mpq(1), mpq(0), mpq(0))
    return u, cross(normal, u)


def chart_for_circle(c):
    """Orthogonal rational chart of c's plane centred at c's center."""
    u, w = orthogonal_basis(c.normal)
    return PlaneChart(c.center, u, w)


def circle_to_conic(c, chart):
    """q(s, t) whose real zero set in chart coordinates is the circle."""
    if not chart.matches_plane(c.normal, c.offset):
        raise ChartMismatch("chart does not parametrise the circle's plane")
    s, t = MultiPoly.gens(ST)
    d = sub(chart.origin.t, c.center.t)
    comps = [MultiPoly.const(d[i], ST) + s * chart.u[i] + t * chart.w[i] for i in range(3)]
    return comps[0] ** 2 + comps[1] ** 2 + comps[2] ** 2 - c.radius_sq


def circle_through_three_points(a, b, c):
    """The unique circle through three non-collinear points."""
    a, b, c = (p.t if isinstance(p, Point3) else vec(p) for p in (a, b, c))
    u, v = sub(b, a), sub(c, a)
    w = cross(u, v)
    ww = norm2(w)
    if ww == 0:
        raise Collinear("points are collinear or coincident")
    num = cross(sub(scale(v, norm2(u)), scale(u, norm2(v))), w)
    center = add(a, scale(num, 1 / (2 * ww)))
    r2 = norm2(sub(a, center))
    return Circle3(w, dot(w, a), Point3.of(center), r2)


def _pencil_sphere(c1, c2):
    """The sphere containing both circles, or None (planes must differ)."""
    n1, n2 = c1.normal, c2.normal
    p1, p2 = c1.center.t, c2.center.t
    # centres X = p1 + a n1 = p2 + b n2 with equal power conditions
    # r1^2 + a^2 |n1|^2 = r2^2 + b^2 |n2|^2
    nn = cross(n1, n2)
    if is_zero_vec(nn):
        # parallel planes: axes must coincide
        if not is_zero_vec(cross(sub(p2, p1), n1)):
            return None
        # X = p1 + a n1, p2 = p1 + k n1
        n1n1 = norm2(n1)
        k = dot(sub(p2, p1), n1) / n1n1
        if k == 0:
            return None  # same plane
        # r1^2 + a^2 N = r2^2 + (a - k)^2 N  ->  a = (r2^2 - r1^2 + k^2 N) / (2 k N)
        a = (c2.radius_sq - c1.radius_sq + k * k * n1n1) / (2 * k * n1n1)
        X = add(p1, scale(n1, a))
        return Sphere(Point3.of(X), c1.radius_sq + a * a * n1n1)
    # axes must intersect: solve p1 + a n1 = p2 + b n2
    d = sub(p2, p1)
    if dot(d, nn) != 0:
        return None  # skew axes
    nnn = norm2(nn)
    a = dot(cross(d, n2), nn) / nnn
    b = dot(cross(d, n1), nn) / nnn
    X = add(p1, scale(n1, a))
    R1 = c1.radius_sq + a * a * norm2(n1)
    R2 = c2.radius_sq + b * b * norm2(n2)
    if R1 != R2:
        return None
    return Sphere(Point3.of(X), R1)


def max_coplanar_cospherical(circles):
    """(q, witness): the largest number of circles on one plane or sphere.

    Ties go to the witness with the lexicographically smallest coefficient
    vector over (x^2+y^2+z^2, x, y, z, 1), normalised so the leading
    nonzero coefficient is 1.
    """
    circles = list(circles)
    if not circles:
        return 0, None
    best = {}
    planes = {}
    for c in circles:
        planes[c.plane] = planes.get(c.plane, 0) + 1
    for pl, k in planes.items():
        best[pl] = k
    distinct = {}
    for c in circles:
        distinct[c] = distinct.get(c, 0) + 1
    uniq = list(distinct)
    sphere_members = {}
    for i, j in combinations(range(len(uniq)), 2):
        c1, c2 = uniq[i], uniq[j]
        if c1.plane == c2.plane:
            continue
        s = _pencil_sphere(c1, c2)
        if s is None:
            continue
        members = sphere_members.setdefault(s, set())
        members.add(i)
        members.add(j)
    for s, members in sphere_members.items():
        best[s] = sum(distinct[uniq[i]] for i in members)
    # any single circle lies on its own great sphere
    top = max(best.values())
    candidates = [w for w, k in best.items() if k == top]
    witness = min(candidates, key=lambda w: w.coeff_vector())
    return top, witness


class CapTracker:
    """Incremental version of max_coplanar_cospherical for circles added in
    groups; ``peek`` reports the maximum a group would produce without
    committing it."""

    def __init__(self, circles=()):
        self.uniq, self.index, self.mult, self.spheres_of = [], {}, [], []
        self.planes, self.spheres = {}, {}
        self.top = 0
        if circles:
            self.add(circles)

    def _plan(self, group):
        local, new, mult_add, plane_add, sphere_add = {}, [], {}, {}, {}
        base = len(self.uniq)
        for c in group:
            plane_add[c.plane] = plane_add.get(c.plane, 0) + 1
            i = self.index.get(c, local.get(c))
            if i is None:
                i = base + len(new)
                local[c] = i
                found = []
                for j, d in enumerate(self.uniq + new):
                    if d.plane == c.plane:
                        continue
                    # two non-coplanar circles share at most one sphere
                    s = next((t for t in found[-3:] if d.on_sphere(t)), None)
                    if s is None:
                        s = _pencil_sphere(d, c)
                        if s is not None:
                            found.append(s)
                    if s is not None:
                        sphere_add.setdefault(s, set()).update((i, j))
                new.append(c)
            mult_add[i] = mult_add.get(i, 0) + 1
        touched = set(sphere_add)
        for i in mult_add:
            if i < base:
                touched.update(self.spheres_of[i])
        top = self.top
        for pl, k in plane_add.items():
            top = max(top, self.planes.get(pl, 0) + k)

        def mult(i):
            return (self.mult[i] if i < base else 0) + mult_add.get(i, 0)

        for s in touched:
            members = self.spheres.get(s, set()) | sphere_add.get(s, set())
            top = max(top, sum(mult(i) for i in members))
        return (new, local, mult_add, plane_add, sphere_add), top

    def peek(self, group):
        return self._plan(list(group))[1]

    def add(self, group):
        (new, local, mult_add, plane_add, sphere_add), top = self._plan(list(group))
        for c in new:
            self.index[c] = local[c]
            self.uniq.append(c)
            self.mult.append(0)
            self.spheres_of.append(set())
        for i, k in mult_add.items():
            self.mult[i] += k
        for pl, k in plane_add.items():
            self.planes[pl] = self.planes.get(pl, 0) + k
        for s, ids in sphere_add.items():
            self.spheres.setdefault(s, set()).update(ids)
            for i in ids:
                self.spheres_of[i].add(s)
        self.top = top
        return top


@dataclass(frozen=True)
class Line3:
    """Affine line base + t*direction; equality is equality of point sets."""

    base: Point3
    direction: tuple

    def __post_init__(self):
        b = self.base.t if isinstance(self.base, Point3) else vec(self.base)
        d = vec(self.direction)
        if is_zero_vec(d):
            raise InvalidGeometry("line direction must be nonzero")
        d, _ = _normalise_direction(d)
        # canonical base: the point of the line closest to the origin
        b = sub(b, scale(d, dot(b, d) / norm2(d)))
        object.__setattr__(self, "base", Point3.of(b))
        object.__setattr__(self, "direction", d)

    def point(self, t):
        return Point3.of(add(self.base.t, scale(self.direction, as_q(t))))

    def contains(self, p):
        return is_zero_vec(cross(sub(tuple(p), self.base.t), self.direction))

    @classmethod
    def through(cls, a, b):
        return cls(Point3.of(tuple(a)), sub(tuple(b), tuple(a)))


@dataclass
class IncidenceInstance:
    points: list
    circles: list
    q: int = field(default=None)

    def __post_init__(self):
        self.points = [p if isinstance(p, Point3) else Point3.of(p) for p in self.points]
        self.circles = list(self.circles)
        if self.q is None:
            self.q = max_coplanar_cospherical(self.circles)[0] if self.circles else 0
        self.q = int(self.q)

    @property
    def m(self):
        return len(self.points)

    @property
    def n(self):
        return len(self.circles)

    def validate(self):
        """Raise InvalidGeometry unless q is a genuine cap with q <= n."""
        if self.q < 0 or self.q > max(self.n, 0) or (self.n and self.q < 1):
            raise InvalidGeometry(f"cap q={self.q} must satisfy 1 <= q <= n={self.n}")
        true_q, _ = max_coplanar_cospherical(self.circles)
        if true_q > self.q:
            raise InvalidGeometry(f"declared cap q={self.q} is below the true maximum {true_q}")
        return true_q
