"""Ruled-surface tools: flecnode polynomials, line containment, Plücker
coordinates, ruledness verdicts and popular-point censuses."""

import random
from dataclasses import dataclass

from gmpy2 import mpq

from . import upoly
from .engine import circle_surface_crossings
from .errors import AtInfinity, DegreeTooLow, InvalidGeometry, NotContained, OffQuadric
from .geometry import Line3, Point3, add, incidence_test, scale, sub
from .poly import (
    XYZ,
    MultiPoly,
    expansion_det,
    exact_div,
    reduce_mod,
    sylvester_matrix,
)
from .rational import as_q

# ---------------------------------------------------------------------------
# flecnode polynomial

_PIVOT_ORDER = (2, 1, 0)


def _pick_pivot(f, pivot):
    if pivot is not None:
        if f.diff(pivot).is_zero():
            raise InvalidGeometry(f"partial derivative {pivot} vanishes identically")
        return pivot
    for k in _PIVOT_ORDER:
        if not f.diff(k).is_zero():
            return k
    raise DegreeTooLow("f is constant")


def _flecnode_system(grads, hess, third, k, s, zero):
    """Coefficients in s of the second and third directional derivatives along
    the tangent direction solved for the pivot coordinate k."""
    i, j = [a for a in range(3) if a != k]
    v = [None] * 3
    v[i] = s * grads[k]
    v[j] = grads[k]
    v[k] = -(grads[i] * s + grads[j])
    A = zero
    for a in range(3):
        for b in range(3):
            A = A + v[a] * v[b] * hess[a][b]
    B = zero
    for a in range(3):
        for b in range(3):
            vab = v[a] * v[b]
            for c in range(3):
                B = B + vab * v[c] * third[a][b][c]
    return A, B


def _flint_flecnode(f, k):
    import flint

    ctx = flint.fmpq_mpoly_ctx.get(XYZ + ("s",), "deglex")
    F = f.embed(XYZ + ("s",)).to_flint(ctx)
    names = XYZ
    grads = [F.derivative(n) for n in names]
    hess = [[grads[a].derivative(names[b]) for b in range(3)] for a in range(3)]
    third = [[[hess[a][b].derivative(names[c]) for c in range(3)] for b in range(3)] for a in range(3)]
    zero = ctx.from_dict({})
    one = ctx.from_dict({(0, 0, 0, 0): 1})
    s = ctx.gens()[3]
    A, B = _flint_flecnode_coeffs(_flecnode_system(grads, hess, third, k, s, zero), ctx)
    R = expansion_det(sylvester_matrix(A, B, zero), zero, one)
    R = R / grads[k] ** 6
    # normal form modulo f in degree order
    ctx3 = flint.fmpq_mpoly_ctx.get(XYZ, "deglex")
    R3 = ctx3.from_dict({tuple(int(v) for v in e[:3]): c for e, c in R.to_dict().items()})
    F3 = ctx3.from_dict({tuple(int(v) for v in e[:3]): c for e, c in F.to_dict().items()})
    _, rem = divmod(R3, F3)
    return MultiPoly.from_flint(rem, XYZ)


def _flint_flecnode_coeffs(AB, ctx):
    zero = ctx.from_dict({})
    out = []
    for P, deg in zip(AB, (2, 3)):
        coeffs = [dict() for _ in range(deg + 1)]
        for e, c in P.to_dict().items():
            coeffs[int(e[3])][tuple(int(v) for v in e[:3]) + (0,)] = c
        out.append([ctx.from_dict(t) if t else zero for t in coeffs])
    return out


def _python_flecnode(f, k):
    vars4 = XYZ + ("s",)
    F = f.embed(vars4)
    grads = [F.diff(a) for a in range(3)]
    hess = [[grads[a].diff(b) for b in range(3)] for a in range(3)]
    third = [[[hess[a][b].diff(c) for c in range(3)] for b in range(3)] for a in range(3)]
    zero = MultiPoly({}, vars4)
    s = MultiPoly.gen("s", vars4)
    A, B = _flecnode_system(grads, hess, third, k, s, zero)
    a = A.coeffs_in("s") + [zero] * 3
    b = B.coeffs_in("s") + [zero] * 4
    R = expansion_det(sylvester_matrix(a[:3], b[:4], zero), zero, MultiPoly.const(1, vars4))
    R = exact_div(R, grads[k] ** 6)
    if R is None:
        raise ArithmeticError("pivot power does not divide the resultant")
    R3 = MultiPoly({e[:3]: c for e, c in R.terms.items()}, XYZ)
    return reduce_mod(R3, f, order="grlex")


def flecnode(f, backend="flint", pivot=None):
    """Flecnode polynomial of f, reduced modulo f and made primitive.

    The tangent direction is solved for one pivot coordinate, leaving binary
    forms of degrees 2 and 3 whose resultant vanishes exactly where a
    tangent line meets the surface to third order.  The spurious factor
    (partial_k f)^6 introduced by the parametrisation is divided out.
    """
    d = f.degree()
    if d < 3:
        raise DegreeTooLow(f"flecnode needs degree >= 3, got {d}")
    if f.vars != XYZ:
        f = MultiPoly(f.terms, XYZ)
    k = _pick_pivot(f, pivot)
    fl = _flint_flecnode(f, k) if backend == "flint" else _python_flecnode(f, k)
    fl = fl.primitive() if not fl.is_zero() else fl
    if not fl.is_zero() and fl.degree() > 11 * d - 24:
        raise AssertionError(f"flecnode degree {fl.degree()} exceeds {11 * d - 24}")
    return fl


def line_in_surface(line, f):
    """True iff f vanishes identically along the line."""
    t = MultiPoly.gen("t", ("t",))
    vals = [MultiPoly.const(b, ("t",)) + t * d for b, d in zip(line.base, line.direction)]
    return f.compose(vals, ("t",)).is_zero()


def restrict_to_line(f, base, direction):
    """f(base + t direction) as a coefficient list in t."""
    t = MultiPoly.gen("t", ("t",))
    vals = [MultiPoly.const(b, ("t",)) + t * d for b, d in zip(base, direction)]
    g = f.compose(vals, ("t",))
    return g.to_univariate("t") if not g.is_zero() else []


# ---------------------------------------------------------------------------
# Plücker coordinates


def _normalise6(xs):
    for c in xs:
        if c != 0:
            return tuple(x / c for x in xs)
    raise InvalidGeometry("Plücker coordinates cannot all vanish")


@dataclass(frozen=True)
class PluckerPoint:
    """[x0:...:x5] on the quadric x0 x5 + x1 x4 + x2 x3 = 0, scaled so the
    first nonzero coordinate is 1."""

    coords: tuple

    def __post_init__(self):
        xs = tuple(as_q(c) for c in self.coords)
        if len(xs) != 6:
            raise InvalidGeometry("need six coordinates")
        xs = _normalise6(xs)
        if xs[0] * xs[5] + xs[1] * xs[4] + xs[2] * xs[3] != 0:
            raise OffQuadric("point is not on the Plücker quadric")
        object.__setattr__(self, "coords", xs)

    def __iter__(self):
        return iter(self.coords)

    def canonical_points(self):
        """The four canonical points [w:x:y:z]; zero ones are kept as zeros."""
        x0, x1, x2, x3, x4, x5 = self.coords
        z = mpq(0)
        return [
            (z, x0, x1, x2),
            (x0, z, -x3, x4),
            (x1, x3, z, -x5),
            (x2, -x4, x5, z),
        ]


def plucker_from_line(line):
    """Plücker point of an affine line: (p01, p02, p03, p12, -p13, p23) for
    the homogenised points [1:base] and [1:base+direction]."""
    a = (mpq(1),) + tuple(line.base)
    b = (mpq(1),) + tuple(add(line.base.t, line.direction))

    def p(i, j):
        return a[i] * b[j] - a[j] * b[i]

    return PluckerPoint((p(0, 1), p(0, 2), p(0, 3), p(1, 2), -p(1, 3), p(2, 3)))


def line_from_plucker(pp):
    if not isinstance(pp, PluckerPoint):
        pp = PluckerPoint(tuple(pp))
    x0, x1, x2, x3, x4, x5 = pp.coords
    if x0 == 0 and x1 == 0 and x2 == 0:
        raise AtInfinity("line lies in the plane at infinity")
    if x0 != 0:
        base = (mpq(0), -x3 / x0, x4 / x0)
    elif x1 != 0:
        base = (x3 / x1, mpq(0), -x5 / x1)
    else:
        base = (-x4 / x2, x5 / x2, mpq(0))
    return Line3(Point3.of(base), (x0, x1, x2))


def meets_absolute_conic(pp):
    """True iff the line meets x0 = 0, x1^2 + x2^2 + x3^2 = 0."""
    x0, x1, x2 = pp.coords[:3]
    if x0 == 0 and x1 == 0 and x2 == 0:
        raise AtInfinity("line lies in the plane at infinity")
    return x0 * x0 + x1 * x1 + x2 * x2 == 0


# ---------------------------------------------------------------------------
# rational points on surfaces and the ruledness verdict


def surface_points(f, budget=400, seed=0, box=12, limit=None):
    """Rational points of Z(f) found on axis-parallel lines through integer
    points and on chords through pairs of points already found."""
    rng = random.Random(seed)
    found, seen = [], set()

    def take(base, direction):
        coeffs = restrict_to_line(f, base, direction)
        if not coeffs:
            return
        for r in upoly.rational_roots(coeffs):
            p = Point3.of(add(base, scale(direction, r)))
            if p.t not in seen:
                seen.add(p.t)
                found.append(p)

    for step in range(budget):
        if limit is not None and len(found) >= limit:
            break
        if len(found) >= 2 and step % 2:
            p, q = rng.sample(found, 2)
            take(p.t, sub(q.t, p.t))
        else:
            axis = rng.randrange(3)
            base = [mpq(rng.randint(-box, box)) for _ in range(3)]
            base[axis] = mpq(0)
            direction = [0, 0, 0]
            direction[axis] = 1
            take(tuple(base), tuple(mpq(c) for c in direction))
    return found


RULED = "RuledCertified"
NOT_RULED = "NotRuledCertified"
INCONCLUSIVE = "Inconclusive"


@dataclass
class RuledVerdict:
    verdict: str
    witness: Point3 = None
    flecnode: MultiPoly = None
    points_tried: int = 0

    def to_obj(self):
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else [str(c) for c in self.witness],
            "points_tried": self.points_tried,
        }


def ruled_test(f, line_budget=400, seed=0, backend="flint"):
    """Three-valued ruledness check.

    Ruled is certified only when f divides its flecnode polynomial; not
    ruled only with an explicit rational surface point where the flecnode
    polynomial is nonzero.
    """
    d = f.degree()
    if d < 3:
        raise DegreeTooLow(f"ruled_test needs degree >= 3, got {d}")
    fl = flecnode(f, backend=backend)
    if fl.is_zero():
        return RuledVerdict(RULED, flecnode=fl)
    pts = surface_points(f, budget=line_budget, seed=seed)
    for p in pts:
        if fl(p) != 0:
            return RuledVerdict(NOT_RULED, witness=p, flecnode=fl, points_tried=len(pts))
    return RuledVerdict(INCONCLUSIVE, flecnode=fl, points_tried=len(pts))


# ---------------------------------------------------------------------------
# popular points


def popular_threshold(g):
    return 44 * g.degree() ** 2


def popular_census(g, circles, points):
    """Points on at least 44 deg(g)^2 of the given circles, each of which
    must lie on Z(g).  Returns (point, multiplicity) pairs."""
    for j, c in enumerate(circles):
        if not circle_surface_crossings(c, g).contained:
            raise NotContained(f"circle {j} is not contained in Z(g)")
    need = popular_threshold(g)
    out = []
    for p in points:
        k = sum(1 for c in circles if incidence_test(p, c))
        if k >= need:
            out.append((p, k))
    return out
