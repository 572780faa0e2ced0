"""Incidence counting: brute force, exact circle/surface crossings, and the
partition-based recursive counter."""

import json
from math import ceil, isqrt
from dataclasses import asdict, dataclass, field

from gmpy2 import iroot, mpq, mpz

from . import upoly
from .errors import BisectionFailed, BudgetTooSmall, ZeroPolynomial
from .geometry import (
    IncidenceInstance,
    Point3,
    chart_for_circle,
    circle_to_conic,
    dot,
    incidence_test,
    max_coplanar_cospherical,
    norm2,
    orthogonal_basis,
)
from .partition import build_partition, partition_from_factors
from .poly import MultiPoly, divides, restrict_to_chart, sylvester_resultant
from .rational import is_square, q_sqrt

# constant of the K_{3,2}-free sanity ceiling c * (n^(2/3) m + n)
K32_C = 2

# ---------------------------------------------------------------------------
# brute force


def _circle_key(c):
    return (c.normal, c.offset, c.center.t, c.radius_sq)


def _incident(pt, ck):
    n, d, ctr, r2 = ck
    if n[0] * pt[0] + n[1] * pt[1] + n[2] * pt[2] != d:
        return False
    a, b, c = pt[0] - ctr[0], pt[1] - ctr[1], pt[2] - ctr[2]
    return a * a + b * b + c * c == r2


def _brute(points, circles, weights=None):
    total = 0
    for ck in circles:
        for i, pt in enumerate(points):
            if _incident(pt, ck):
                total += weights[i] if weights else 1
    return total


def count_bruteforce(inst):
    """Number of incident (point, circle) pairs, by testing every pair."""
    pts = [p.t for p in inst.points]
    return _brute(pts, [_circle_key(c) for c in inst.circles])


def incidence_lists(inst):
    """For each point index, the indices of circles through it."""
    pts = [p.t for p in inst.points]
    out = [[] for _ in pts]
    for j, c in enumerate(inst.circles):
        ck = _circle_key(c)
        for i, pt in enumerate(pts):
            if _incident(pt, ck):
                out[i].append(j)
    return out


def rich_points(inst, k):
    """Points incident to at least k circles, with their multiplicities."""
    if k < 1:
        raise ValueError("k must be positive")
    return [
        (inst.points[i], len(lst))
        for i, lst in enumerate(incidence_lists(inst))
        if len(lst) >= k
    ]


def k32_bound(m, n, c=K32_C):
    """Ceiling c * (n^(2/3) m + n) for K_{3,2}-free incidence graphs."""
    if m < 0 or n < 0:
        raise ValueError("m, n must be nonnegative")
    # n^(2/3) m rounded up exactly: smallest integer v with v^3 >= n^2 m^3
    v, exact = iroot(mpz(n * n * m ** 3), 3)
    v = int(v) + (0 if exact else 1)
    return ceil(c * (v + n))


def has_k32(inst):
    """True iff some two distinct circles share three distinct instance points."""
    lists = incidence_lists(inst)
    pair_count = {}
    seen = set()
    for p, lst in zip(inst.points, lists):
        if p.t in seen:
            continue
        seen.add(p.t)
        for a in range(len(lst)):
            for b in range(a + 1, len(lst)):
                key = (lst[a], lst[b])
                pair_count[key] = pair_count.get(key, 0) + 1
                if pair_count[key] >= 3 and inst.circles[lst[a]] != inst.circles[lst[b]]:
                    return True
    return False


# ---------------------------------------------------------------------------
# circle frames: a factor restricted to a circle as A(s) + t B(s), t^2 = T(s)


class CircleFrame:
    """Orthogonal chart of a circle with the conic alpha s^2 + beta t^2 = rho."""

    __slots__ = ("circle", "u", "w", "alpha", "beta", "rho", "T", "lin", "smax_rational", "smax", "bound")

    def __init__(self, circle):
        self.circle = circle
        self.u, self.w = orthogonal_basis(circle.normal)
        self.alpha = norm2(self.u)
        self.beta = norm2(self.w)
        self.rho = circle.radius_sq
        self.T = [self.rho / self.beta, mpq(0), -self.alpha / self.beta]
        c = circle.center.t
        self.lin = [
            (upoly.trim([c[i], self.u[i]]), upoly.trim([self.w[i]])) for i in range(3)
        ]
        ratio = self.rho / self.alpha
        self.smax_rational = is_square(ratio)
        self.smax = q_sqrt(ratio) if self.smax_rational else None
        # dyadic just above smax: ceil(sqrt(ratio * 4^8)) / 2^8
        scaled = ratio * 65536
        k = isqrt(int(scaled.numerator) // int(scaled.denominator)) + 1
        self.bound = mpq(k, 256)

    def mul(self, p, q):
        a1, b1 = p
        a2, b2 = q
        a = upoly.add(upoly.mul(a1, a2), upoly.mul(self.T, upoly.mul(b1, b2)))
        b = upoly.add(upoly.mul(a1, b2), upoly.mul(a2, b1))
        return a, b

    def restrict(self, g):
        """(A, B) with g on the circle equal to A(s) + t B(s)."""
        d = max(g.degree(), 0)
        pows = []
        one = ([mpq(1)], [])
        for i in range(3):
            row = [one]
            for _ in range(d):
                row.append(self.mul(row[-1], self.lin[i]))
            pows.append(row)
        A, B = {}, {}
        cache = {}
        for (a, b, c), coef in g.terms.items():
            key = (a, b)
            xy = cache.get(key)
            if xy is None:
                xy = self.mul(pows[0][a], pows[1][b]) if a and b else (pows[0][a] if a else pows[1][b])
                cache[key] = xy
            term = self.mul(xy, pows[2][c]) if c else xy
            for k, v in enumerate(term[0]):
                A[k] = A.get(k, 0) + coef * v
            for k, v in enumerate(term[1]):
                B[k] = B.get(k, 0) + coef * v
        A = upoly.trim(A.get(k, 0) for k in range(max(A, default=-1) + 1))
        B = upoly.trim(B.get(k, 0) for k in range(max(B, default=-1) + 1))
        return A, B

    # position tests for s values ---------------------------------------
    def inside(self, s):
        return self.alpha * s * s < self.rho

    def strip_endpoints(self, p):
        """Remove the roots +-smax from p."""
        if self.smax_rational:
            for r in (self.smax, -self.smax):
                lin = [-r, mpq(1)]
                while len(p) > 1 and upoly.evaluate(p, r) == 0:
                    p = upoly.exact_quotient(p, lin)
        else:
            quad = [-self.rho, mpq(0), self.alpha]
            while len(p) > 2:
                q, rem = upoly.divmod_(p, quad)
                if rem:
                    break
                p = q
        return p

    def endpoint_zeros(self, A):
        """Number of the two chart endpoints (s = +-smax, t = 0) where A vanishes."""
        if not A:
            return 2
        if self.smax_rational:
            return sum(1 for r in (self.smax, -self.smax) if upoly.evaluate(A, r) == 0)
        _, rem = upoly.divmod_(A, [-self.rho, mpq(0), self.alpha])
        return 2 if not rem else 0


def _classify(frame, roots, counter):
    """Keep the isolated roots lying strictly inside (-smax, smax)."""
    r = frame.rho / frame.alpha
    out = []
    for rt in roots:
        checked = False
        while True:
            if rt.exact:
                if frame.inside(rt.lo):
                    out.append(rt)
                break
            lo, hi = rt.lo, rt.hi
            lo_in, hi_in = frame.inside(lo), frame.inside(hi)
            if lo_in and hi_in:
                out.append(rt)
                break
            if (lo >= 0 and not lo_in) or (hi <= 0 and not hi_in):
                break
            if not lo_in and not hi_in:
                upoly.bisect_step(rt, counter)
                continue
            right = not hi_in
            if not checked:
                # is the root on the inner side of the endpoint?
                if right:
                    n = counter.variations(lo) - counter.variations_sqrt(r)
                else:
                    n = counter.variations_sqrt(r, neg=True) - counter.variations(hi)
                if n == 0:
                    break
                checked = True
            mid = (lo + hi) / 2
            if not frame.inside(mid):
                if right:
                    rt.hi = mid
                else:
                    rt.lo = mid
            else:
                upoly.bisect_step(rt, counter)
    return out


def _prepare(frame, p):
    return upoly.squarefree(frame.strip_endpoints(p))


def _interior_count(frame, p):
    """Distinct roots of p with alpha s^2 < rho (exact Sturm count at +-smax).

    Returns the count with the reduced polynomial and its counter.
    """
    p = _prepare(frame, p)
    if len(p) <= 1:
        return 0, p, None
    counter = upoly.counter_for(p)
    r = frame.rho / frame.alpha
    return counter.variations_sqrt(r, neg=True) - counter.variations_sqrt(r), p, counter


def _interior_roots(frame, p, counter):
    roots = upoly.isolate_roots(p, -frame.bound, frame.bound, counter=counter)
    return _classify(frame, roots, counter)


@dataclass
class FactorTrace:
    contained: bool
    crossings: int


@dataclass
class CircleTrace:
    contained: bool
    crossings: int
    factor_traces: list
    cells: set = field(default_factory=set)


def _double_roots(frame, A, B, e_count):
    """Interior s where A = B = 0; each such s carries two circle points."""
    if not B:
        return e_count
    G = upoly.gcd(A, B)
    if len(G) <= 1:
        return 0
    return _interior_count(frame, G)[0]


def _semicircle_sign(A, B, T, s, eps):
    a = upoly.evaluate(A, s)
    b = upoly.evaluate(B, s) if B else 0
    if not b:
        return (a > 0) - (a < 0)
    tv = upoly.evaluate(T, s)
    a2, tb2 = a * a, tv * b * b
    if a2 > tb2:
        return (a > 0) - (a < 0)
    if a2 < tb2:
        return eps * ((b > 0) - (b < 0))
    return 0


def _merge_roots(items):
    """Sort (Root, counter, poly) items and make consecutive intervals disjoint.

    Roots of different polynomials that coincide are merged after a gcd test.
    """
    items = list(items)
    steps = 0
    while True:
        items.sort(key=lambda it: (it[0].lo, it[0].hi))
        changed = False
        k = 0
        while k < len(items) - 1:
            (a, ca, pa), (b, cb, pb) = items[k], items[k + 1]
            if a.hi < b.lo or (a.hi == b.lo and not a.exact and not b.exact):
                k += 1
                continue
            if a.exact and b.exact and a.lo == b.lo:
                del items[k + 1]
                continue
            steps += 1
            if steps > 40 and pa is not pb:
                g = upoly.gcd(pa, pb)
                lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                if len(g) > 1 and lo < hi and upoly.sturm_count(g, lo, hi) >= 1:
                    # shared root: keep the narrower interval
                    keep = k if (a.hi - a.lo) <= (b.hi - b.lo) else k + 1
                    items[k] = items[keep]
                    del items[k + 1]
                    continue
            if not a.exact and (b.exact or (a.hi - a.lo) >= (b.hi - b.lo)):
                upoly.bisect_step(a, ca)
            else:
                upoly.bisect_step(b, cb)
            changed = True
            break
        if not changed:
            return items


def _inner_sample(frame, bound, below):
    """A rational s strictly between -smax (or smax) and ``bound``."""
    outside = -frame.bound if below else frame.bound
    while True:
        mid = (bound + outside) / 2
        if frame.inside(mid):
            return mid
        outside = mid


def trace_circle(frame, factors):
    """Containment, crossings and visited sign cells of a circle."""
    T = frame.T
    traces = []
    polys = []
    contained_any = False
    total_cross = 0
    items = []
    for g in factors:
        A, B = frame.restrict(g)
        if not A and not B:
            traces.append(FactorTrace(True, 0))
            contained_any = True
            continue
        E = upoly.sub(upoly.mul(A, A), upoly.mul(T, upoly.mul(B, B)))
        n_e, e_red, counter = _interior_count(frame, E)
        cross = n_e + _double_roots(frame, A, B, n_e) + frame.endpoint_zeros(A)
        traces.append(FactorTrace(False, cross))
        total_cross += cross
        polys.append((A, B))
        if n_e:
            for rt in _interior_roots(frame, e_red, counter):
                items.append((rt, counter, e_red))
    if contained_any:
        return CircleTrace(True, total_cross, traces, set())
    roots = [it[0] for it in _merge_roots(items)]
    samples = []
    if not roots:
        samples.append(mpq(0))
    else:
        samples.append(_inner_sample(frame, roots[0].lo, below=True))
        for k in range(len(roots) - 1):
            samples.append((roots[k].hi + roots[k + 1].lo) / 2)
        samples.append(_inner_sample(frame, roots[-1].hi, below=False))
    cells = set()
    for s in samples:
        for eps in (1, -1):
            cells.add(tuple(_semicircle_sign(A, B, T, s, eps) for A, B in polys))
    return CircleTrace(False, total_cross, traces, cells)


# ---------------------------------------------------------------------------
# crossings through the resultant route


@dataclass
class Crossings:
    contained: bool
    crossings: int


def circle_surface_crossings(c, f):
    """Whether circle c lies on Z(f), and otherwise how many points they share."""
    if f.is_zero():
        raise ZeroPolynomial("crossings with the zero polynomial")
    chart = chart_for_circle(c)
    g = restrict_to_chart(f, chart)
    q = circle_to_conic(c, chart)
    if divides(q, g):
        return Crossings(True, 0)
    frame = CircleFrame(c)
    # g on the circle is A(s) + t B(s) after t^2 = T(s)
    A, B = [], []
    tp = [mpq(1)]
    for k, ck in enumerate(g.coeffs_in("t")):
        if k and k % 2 == 0:
            tp = upoly.mul(tp, frame.T)
        if ck.is_zero():
            continue
        term = upoly.mul(ck.to_univariate("s"), tp)
        if k % 2:
            B = upoly.add(B, term)
        else:
            A = upoly.add(A, term)
    if g.degree_in("t") >= 1:
        R = sylvester_resultant(g, q, "t").to_univariate("s")
    else:
        R = upoly.mul(A, A)
    n_r = _interior_count(frame, R)[0]
    # back-substitution: a root s* is one point (t = -A/B) unless A = B = 0 there
    count = n_r + _double_roots(frame, A, B, n_r) + frame.endpoint_zeros(A)
    bound = 2 * f.degree()
    if count > bound:
        raise AssertionError(f"{count} crossings exceed the Bezout bound {bound}")
    return Crossings(False, count)


# ---------------------------------------------------------------------------
# partition-based counting


@dataclass
class CountReport:
    total: int = 0
    p0_c0: int = 0
    p0_cprime: int = 0
    pprime_cprime: int = 0
    recursion_depth: int = 0
    cells_visited: int = 0
    crossing_total: int = 0
    partitions_built: int = 0
    fallbacks: int = 0
    r: int = 8
    max_cell_entries: int = 0
    cell_q: list = field(default_factory=list)

    @property
    def breakdown(self):
        return (self.p0_c0, self.p0_cprime, self.pprime_cprime)

    def to_obj(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_obj(), separators=(",", ":"), sort_keys=True)


class _Counter:
    def __init__(self, points, weights, circles, r, seed, cutoff_m, cutoff_n, track_q, report):
        self.points = points
        self.weights = weights
        self.circles = circles
        self.ckeys = [_circle_key(c) for c in circles]
        self.frames = {}
        self.r = r
        self.seed = seed
        self.cutoff_m = cutoff_m
        self.cutoff_n = cutoff_n
        self.track_q = track_q
        self.rep = report
        self.top_factors = None

    def brute(self, pids, cids):
        pts = [self.points[i] for i in pids]
        w = [self.weights[i] for i in pids]
        return _brute(pts, [self.ckeys[j] for j in cids], w)

    def frame(self, j):
        fr = self.frames.get(j)
        if fr is None:
            fr = CircleFrame(self.circles[j])
            self.frames[j] = fr
        return fr

    def count(self, pids, cids, depth):
        rep = self.rep
        rep.recursion_depth = max(rep.recursion_depth, depth)
        if not pids or not cids:
            return 0, 0, 0
        small = len(pids) <= self.cutoff_m or len(cids) <= self.cutoff_n
        if (depth > 0 and small) or len(pids) < 2:
            return 0, 0, self.brute(pids, cids)
        r_eff = min(self.r, len(pids))
        try:
            if depth == 0 and self.top_factors is not None:
                part = partition_from_factors([self.points[i] for i in pids], self.top_factors, r_eff)
            else:
                part = build_partition([self.points[i] for i in pids], r_eff, seed=self.seed + depth)
        except (BisectionFailed, BudgetTooSmall):
            rep.fallbacks += 1
            return 0, 0, self.brute(pids, cids)
        rep.partitions_built += 1
        factors = part.factors
        c0, cprime, cells_of = [], [], {}
        for j in cids:
            tr = trace_circle(self.frame(j), factors)
            if tr.contained:
                c0.append(j)
                continue
            bound = 2 * part.degree
            if tr.crossings > bound:
                raise AssertionError("Bezout bound violated")
            if len(tr.cells) > 1 + tr.crossings:
                raise AssertionError("cell-entry bound violated")
            rep.max_cell_entries = max(rep.max_cell_entries, len(tr.cells))
            rep.crossing_total += tr.crossings
            cprime.append((j, tr.crossings))
            for cell in tr.cells:
                cells_of.setdefault(cell, []).append(j)
        p0, groups = [], {}
        for local, sv in enumerate(part.sign_vectors):
            gid = pids[local]
            if 0 in sv:
                p0.append(gid)
            else:
                groups.setdefault(sv, []).append(gid)
        i00 = self.brute(p0, c0) if p0 and c0 else 0
        crossing = [j for j, k in cprime if k > 0]
        i0p = self.brute(p0, crossing) if p0 and crossing else 0
        ipp = 0
        for sv in sorted(groups):
            sub_c = cells_of.get(sv)
            if not sub_c:
                continue
            rep.cells_visited += 1
            if self.track_q:
                q, _ = max_coplanar_cospherical([self.circles[j] for j in sub_c])
                rep.cell_q.append(q)
            a, b, c = self.count(groups[sv], sub_c, depth + 1)
            ipp += a + b + c
        return i00, i0p, ipp


def count_partitioned(inst, r=8, seed=0, cutoff_m=64, cutoff_n=8, track_q=False, factors=None):
    """Incidence count through a polynomial partition, recursing into cells.

    The top level always partitions (r is capped at the number of distinct
    points); sub-instances at or below the cutoff are counted directly.
    ``factors`` replaces the top-level partition by a given factor list.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    uniq = {}
    for p in inst.points:
        uniq[p.t] = uniq.get(p.t, 0) + 1
    points = list(uniq)
    weights = [uniq[p] for p in points]
    rep = CountReport(r=r)
    counter = _Counter(points, weights, inst.circles, r, seed, cutoff_m, cutoff_n, track_q, rep)
    if factors is not None:
        counter.top_factors = list(factors)
    i00, i0p, ipp = counter.count(list(range(len(points))), list(range(len(inst.circles))), 0)
    rep.p0_c0, rep.p0_cprime, rep.pprime_cprime = i00, i0p, ipp
    rep.total = i00 + i0p + ipp
    return rep
