"""Counting triangles similar to a fixed shape, directly and through the
circles c_pq on which the third vertex must lie."""

from dataclasses import dataclass
from itertools import combinations, permutations

from gmpy2 import mpq

from .errors import Collinear, DegeneratePair, IrrationalShape, ShapeMismatch
from .geometry import Circle3, Point3, add, incidence_test, norm2, scale, sub
from .rational import as_q


@dataclass(frozen=True)
class TriangleShape:
    """Triangle uvw up to similarity: w = u + lam (v - u) + h with h orthogonal
    to v - u and |h|^2 = mu |uv|^2."""

    lam: object
    mu: object

    def __post_init__(self):
        try:
            lam, mu = as_q(self.lam), as_q(self.mu)
        except (TypeError, ValueError) as exc:
            raise IrrationalShape(f"shape parameters must be rational: {exc}") from None
        if mu <= 0:
            raise Collinear("mu must be positive for a proper triangle")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_sides(cls, uv2, uw2, vw2):
        """Shape from squared side lengths |uv|^2, |uw|^2, |vw|^2."""
        uv2, uw2, vw2 = as_q(uv2), as_q(uw2), as_q(vw2)
        lam = (uw2 + uv2 - vw2) / (2 * uv2)
        return cls(lam, uw2 / uv2 - lam * lam)

    @classmethod
    def from_points(cls, u, v, w):
        u, v, w = (tuple(p) for p in (u, v, w))
        return cls.from_sides(norm2(sub(v, u)), norm2(sub(w, u)), norm2(sub(w, v)))

    @property
    def squared_sides(self):
        """(|uv|^2, |uw|^2, |vw|^2) with |uv| = 1."""
        return (mpq(1), self.lam ** 2 + self.mu, (1 - self.lam) ** 2 + self.mu)

    def symmetry_order(self):
        """Number of vertex permutations preserving the side ratios."""
        s = self.squared_sides
        # side opposite each vertex: u -> vw, v -> uw, w -> uv
        opp = {0: s[2], 1: s[1], 2: s[0]}
        return sum(1 for perm in permutations(range(3)) if all(opp[i] == opp[perm[i]] for i in range(3)))


def _ratio_key(sides):
    s = sorted(sides)
    return (s[0] / s[2], s[1] / s[2])


def cpq_circle(p, q_pt, shape):
    """Circle of third vertices r making (p, q_pt, r) similar to the shape
    with p -> u and q_pt -> v."""
    p = p.t if isinstance(p, Point3) else tuple(as_q(c) for c in p)
    q_pt = q_pt.t if isinstance(q_pt, Point3) else tuple(as_q(c) for c in q_pt)
    d = sub(q_pt, p)
    if norm2(d) == 0:
        raise DegeneratePair("p and q coincide")
    center = add(p, scale(d, shape.lam))
    return Circle3.from_center(center, d, shape.mu * norm2(d))


def count_bruteforce(points, shape):
    key = _ratio_key(shape.squared_sides)
    pts = [(p if isinstance(p, Point3) else Point3.of(p)).t for p in points]
    total = 0
    for a, b, c in combinations(pts, 3):
        sides = (norm2(sub(a, b)), norm2(sub(a, c)), norm2(sub(b, c)))
        if sides[0] and sides[1] and sides[2] and _ratio_key(sides) == key:
            total += 1
    return total


def count_via_circles(points, shape):
    """(sum over ordered pairs of incidences with c_pq, overcount factor)."""
    pts = [p if isinstance(p, Point3) else Point3.of(p) for p in points]
    inc = 0
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            if i == j or p == q:
                continue
            c = cpq_circle(p, q, shape)
            inc += sum(1 for r in pts if incidence_test(r, c))
    return inc, shape.symmetry_order()


def similar_triangles(points, shape):
    """Unordered point triples similar to the shape; both counting routes
    must agree."""
    direct = count_bruteforce(points, shape)
    inc, factor = count_via_circles(points, shape)
    if inc % factor or inc // factor != direct:
        raise ShapeMismatch(f"direct count {direct} vs circle route {inc}/{factor}")
    return direct
