"""Seeded, exactly rational instance generators."""

import random
from dataclasses import dataclass
from math import isqrt

from gmpy2 import mpq

from .errors import Collinear, InfeasibleCap
from .geometry import (
    CapTracker,
    Circle3,
    IncidenceInstance,
    Point3,
    Sphere,
    add,
    circle_through_three_points,
    cross,
    dot,
    is_zero_vec,
    norm2,
    orthogonal_basis,
    scale,
    sub,
)

KINDS = ("grid", "capped_spheres", "unit_bundle", "random", "triangle_cloud")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    m: int
    n: int = 0
    q: int = None
    seed: int = 0
    radius_sq: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be nonnegative")


def generate(spec):
    if spec.kind == "grid":
        return gen_grid(spec.m, spec.n, radius_sq=spec.radius_sq, seed=spec.seed)
    if spec.kind == "triangle_cloud":
        return IncidenceInstance(gen_triangle_cloud(spec.m, spec.seed), [], q=0)
    q = spec.n if spec.q is None else spec.q
    fn = {"capped_spheres": gen_capped_spheres, "unit_bundle": gen_unit_bundle, "random": gen_random}
    return fn[spec.kind](spec.m, spec.n, q, seed=spec.seed)


# ---------------------------------------------------------------------------
# planar grid


def gen_grid(m, n, radius_sq=None, seed=0):
    """sqrt(m) x sqrt(m) integer grid in z = 0 with the n most incident circles
    centred at grid points."""
    side = isqrt(m)
    pts = [(i, j) for i in range(side) for j in range(side)]
    points = [Point3(i, j, 0) for i, j in pts]
    if n == 0 or not pts:
        return IncidenceInstance(points, [], q=0)
    rich = []
    for cx, cy in pts:
        hist = {}
        for px, py in pts:
            d = (px - cx) ** 2 + (py - cy) ** 2
            if d:
                hist[d] = hist.get(d, 0) + 1
        if radius_sq is not None:
            rich.append((-hist.get(radius_sq, 0), radius_sq, cx, cy))
        else:
            rich.extend((-k, d, cx, cy) for d, k in hist.items())
    if not rich:
        rich = [(0, radius_sq or 1, cx, cy) for cx, cy in pts]
    rng = random.Random(seed)
    # ties among equally rich circles are broken by the seed
    keyed = sorted((k, rng.random(), d, cx, cy) for k, d, cx, cy in rich)
    circles = [
        Circle3.from_center((cx, cy, 0), (0, 0, 1), d) for _, _, d, cx, cy in keyed[:n]
    ]
    return IncidenceInstance(points, circles, q=len(circles))


# ---------------------------------------------------------------------------
# helpers for rational points on spheres and circles


def _rand_q(rng, lo=-4, hi=4, den=4):
    return mpq(rng.randint(lo * den, hi * den), rng.randint(1, den))


def sphere_point(center, radius, u, v):
    """Rational point of the sphere |x - center| = radius (radius rational)."""
    s = u * u + v * v
    d = (2 * u / (s + 1), 2 * v / (s + 1), (s - 1) / (s + 1))
    return Point3.of(add(center.t, scale(d, radius)))


def chord_point(circle, p0, direction):
    """Second intersection of the chord from p0 along ``direction`` (in the
    circle's plane) with the circle; rational by construction."""
    rel = sub(p0.t, circle.center.t)
    dd = norm2(direction)
    t = -2 * dot(rel, direction) / dd
    return Point3.of(add(p0.t, scale(direction, t)))


def _plane_direction(circle, rng):
    u, w = orthogonal_basis(circle.normal)
    while True:
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        if a or b:
            return add(scale(u, a), scale(w, b))


def _fill_points(points, circles, m, rng, anchors):
    """Extend ``points`` to m distinct points lying on the given circles."""
    seen = set(p.t for p in points)
    out = list(points)
    if not circles:
        return out[:m]
    tries = 0
    while len(out) < m and tries < 200 * m + 100:
        tries += 1
        j = rng.randrange(len(circles))
        c = circles[j]
        p0 = rng.choice(anchors[j])
        p = chord_point(c, p0, _plane_direction(c, rng))
        if p.t not in seen:
            seen.add(p.t)
            out.append(p)
            anchors[j].append(p)
    return out[:m]


def _check_cap(q):
    if q < 1:
        raise InfeasibleCap("cap q must be at least 1")


# ---------------------------------------------------------------------------
# circles on a few spheres


def gen_capped_spheres(m, n, q, seed=0):
    """Circles spread over ceil(n/q) spheres, at most q per sphere, with points
    sampled on the circles."""
    _check_cap(q)
    if q > n and n:
        q = n
    rng = random.Random(seed)
    n_spheres = -(-n // q) if n else 0
    circles, anchors = [], []
    tracker = CapTracker()
    for k in range(n_spheres):
        count = min(q, n - k * q)
        radius = mpq(rng.randint(2, 5))
        for attempt in range(50):
            center = Point3(30 * k, rng.randint(-3, 3), rng.randint(-3, 3))
            group, group_anchors = _circles_on_sphere(center, radius, count, rng)
            if tracker.peek(group) <= q:
                break
            # perturb the radius by a fresh rational to break the coincidence
            radius += mpq(1, 7 + attempt)
        else:
            raise InfeasibleCap("could not place circles under the cap")
        tracker.add(group)
        circles.extend(group)
        anchors.extend(group_anchors)
    points = []
    seen = set()
    for a in anchors:
        for p in a:
            if p.t not in seen:
                seen.add(p.t)
                points.append(p)
    rng.shuffle(points)
    points = _fill_points(points[:m], circles, m, rng, anchors)
    return IncidenceInstance(points, circles, q=q if n else 0)


def _circles_on_sphere(center, radius, count, rng):
    circles, anchors = [], []
    seen = set()
    while len(circles) < count:
        trip = [sphere_point(center, radius, _rand_q(rng), _rand_q(rng)) for _ in range(3)]
        try:
            c = circle_through_three_points(*trip)
        except Collinear:
            continue
        if c in seen:
            continue
        seen.add(c)
        circles.append(c)
        anchors.append(trip)
    return circles, anchors


# ---------------------------------------------------------------------------
# unit circles


def _pyth_unit(t):
    """((1 - t^2) / (1 + t^2), 2t / (1 + t^2)), a rational point of the unit circle."""
    s = 1 + t * t
    return (1 - t * t) / s, 2 * t / s


def _unit_vector(rng):
    """Rational unit vector from inverse stereographic projection."""
    p = sphere_point(Point3(0, 0, 0), mpq(1), _rand_q(rng, -3, 3), _rand_q(rng, -3, 3))
    return p.t


def _bundle(offset, size, rng, used_t):
    """Unit circles through offset -+ (3/5, 0, 0)."""
    P = Point3.of(add(offset, (mpq(-3, 5), 0, 0)))
    Q = Point3.of(add(offset, (mpq(3, 5), 0, 0)))
    circles = []
    while len(circles) < size:
        t = _rand_q(rng, -6, 6, 6)
        # t and -1/t give antipodal centres, i.e. the same plane
        if t in used_t or (t != 0 and -1 / t in used_t):
            continue
        used_t.add(t)
        cy, cz = _pyth_unit(t)
        center = add(offset, (0, mpq(4, 5) * cy, mpq(4, 5) * cz))
        normal = cross((1, 0, 0), (0, cy, cz))
        circles.append(Circle3.from_center(center, normal, 1))
    return circles, P, Q


def _random_unit_circle(rng):
    p0 = (rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6))
    d = _unit_vector(rng)
    while True:
        other = (rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3))
        normal = cross(d, other)
        if not is_zero_vec(normal):
            break
    c = Circle3.from_center(add(p0, d), normal, 1)
    return c, Point3.of(p0)


def gen_unit_bundle(m, n, q, seed=0, bundle_size=8):
    """Unit circles, grouped into bundles through shared point pairs when the
    cap allows (q >= 2), so the incidence graph contains K_{2,b}."""
    _check_cap(q)
    rng = random.Random(seed)
    circles, anchors, points = [], [], []
    tracker = CapTracker()
    k = 0
    while len(circles) < n:
        remaining = n - len(circles)
        for attempt in range(50):
            if q >= 2:
                size = min(bundle_size, remaining)
                offset = (20 * k, rng.randint(-2, 2), rng.randint(-2, 2))
                group, P, Q = _bundle(offset, size, rng, set())
                group_pts = [P, Q]
                group_anchors = [[P, Q] for _ in group]
            else:
                c, p0 = _random_unit_circle(rng)
                group, group_pts, group_anchors = [c], [p0], [[p0]]
            if tracker.peek(group) > q:
                continue
            break
        else:
            raise InfeasibleCap("could not place unit circles under the cap")
        tracker.add(group)
        circles.extend(group)
        anchors.extend(group_anchors)
        points.extend(group_pts)
        k += 1
    uniq = list(dict.fromkeys(points))
    pts = _fill_points(uniq[:m], circles, m, rng, anchors)
    return IncidenceInstance(pts, circles, q=min(q, n) if n else 0)


# ---------------------------------------------------------------------------
# random instances


def gen_random(m, n, q=None, seed=0, box=3):
    """Random integer points in a small box, circles through point triples,
    and extra points placed on the circles by chords."""
    q = n if q is None else q
    if n:
        _check_cap(q)
    rng = random.Random(seed)
    pool_size = max(3, m // 2) if m else 0
    pool, seen = [], set()
    while len(pool) < pool_size and len(seen) < (2 * box + 1) ** 3:
        p = (rng.randint(-box, box), rng.randint(-box, box), rng.randint(-box, box))
        if p not in seen:
            seen.add(p)
            pool.append(Point3(*p))
    circles, anchors = [], []
    if m == 0:
        # circles still need somewhere to live
        pool = [Point3(rng.randint(-box, box), rng.randint(-box, box), rng.randint(-box, box)) for _ in range(3 * n + 3)]
    tries = 0
    while len(circles) < n:
        tries += 1
        if tries > 1000 * (n + 1):
            raise InfeasibleCap("random circle generation did not converge")
        a, b, c = rng.sample(pool, 3) if len(pool) >= 3 else [Point3(*_rand_pt(rng, box)) for _ in range(3)]
        if rng.random() < 0.2:
            # off-grid point keeps some circles away from the box lattice
            a = Point3.of(add(a.t, (_rand_q(rng, 0, 1, 3), 0, _rand_q(rng, 0, 1, 5))))
        try:
            circ = circle_through_three_points(a, b, c)
        except Collinear:
            continue
        circles.append(circ)
        anchors.append([a, b, c])
    if q < n:
        _repair_cap(circles, anchors, q, rng, box)
    pts = pool[: m] if m else []
    pts = _fill_points(pts, circles, m, rng, anchors)
    return IncidenceInstance(pts, circles, q=q if n else 0)


def _rand_pt(rng, box):
    return (rng.randint(-box, box), rng.randint(-box, box), rng.randint(-box, box))


def _repair_cap(circles, anchors, q, rng, box):
    """Re-draw, in order, every circle that would push some plane or sphere
    past q circles."""
    tracker = CapTracker()
    for j in range(len(circles)):
        for _ in range(1000):
            if tracker.peek([circles[j]]) <= q:
                break
            # move all three anchors: circles sharing two points are always cospherical
            moved = [
                Point3.of(add(p.t, (_rand_q(rng, -1, 1, 7), _rand_q(rng, -1, 1, 11), _rand_q(rng, -1, 1, 13))))
                for p in anchors[j]
            ]
            try:
                circles[j] = circle_through_three_points(*moved)
            except Collinear:
                continue
            anchors[j] = moved
        else:
            raise InfeasibleCap("cap repair did not converge")
        tracker.add([circles[j]])


# ---------------------------------------------------------------------------
# point clouds for similar-triangle counting


def gen_triangle_cloud(t, seed=0, box=2):
    """t distinct integer points in a small cube; small boxes are rich in
    similar triangles."""
    rng = random.Random(seed)
    cells = [(x, y, z) for x in range(-box, box + 1) for y in range(-box, box + 1) for z in range(-box, box + 1)]
    if t > len(cells):
        box = 1
        while (2 * box + 1) ** 3 < t:
            box += 1
        return gen_triangle_cloud(t, seed, box)
    return [Point3(*p) for p in rng.sample(cells, t)]
