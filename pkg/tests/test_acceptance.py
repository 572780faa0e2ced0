"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line; the lines
are repeated in the pytest terminal summary."""

import functools
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from gmpy2 import mpq

from circlab.bounds import BoundParams, eval_bound, staging, unit_staging
from circlab.engine import circle_surface_crossings, count_bruteforce, count_partitioned
from circlab.generators import GenSpec, chord_point, gen_triangle_cloud, generate, _plane_direction
from circlab.geometry import Circle3, Line3, Point3, Sphere, circle_through_three_points, incidence_test, is_zero_vec, sub
from circlab.errors import Collinear
from circlab.io import load_instance
from circlab.partition import C_DEG, build_partition, partition_stats
from circlab.poly import MultiPoly
from circlab.ruling import (
    NOT_RULED,
    RULED,
    PluckerPoint,
    flecnode,
    line_from_plucker,
    line_in_surface,
    meets_absolute_conic,
    plucker_from_line,
    restrict_to_line,
    ruled_test,
)
from circlab.transforms import invert_circle, invert_point, invert_surface
from circlab.triangles import TriangleShape, count_bruteforce as tri_brute, count_via_circles
from circlab.unit import EMPTY, rich_unit_circles, sigma_surface

from conftest import fixture_path

RESULTS = {}
INSTANCE_FIXTURES = (
    "grid_9_1", "grid_9_4", "grid_100_50", "grid_400", "spheres_60_30_5",
    "spheres_40_20_1", "bundle_40_24_8", "random_50_40", "random_80_30_3",
)
x, y, z = MultiPoly.gens()


def criterion(num, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            t0 = time.time()
            try:
                detail = fn(*a, **kw)
            except BaseException as exc:
                line = f"criterion {num:2d} FAIL  {title}: {type(exc).__name__}: {exc}"
                RESULTS[num] = line
                print(line)
                raise
            line = f"criterion {num:2d} PASS  {title} ({detail}; {time.time() - t0:.1f}s)"
            RESULTS[num] = line
            print(line)

        return run

    return wrap


def load_fixture(name):
    return load_instance(fixture_path(name + ".json"))


def load_surfaces():
    with open(fixture_path("surfaces.json"), encoding="utf-8") as fh:
        return {k: MultiPoly.from_text(v) for k, v in json.load(fh).items()}


def rand_q(rng, lo=-6, hi=6, den=7):
    return mpq(rng.randint(lo * den, hi * den), rng.randint(1, den))


def rand_point(rng, **kw):
    return Point3(rand_q(rng, **kw), rand_q(rng, **kw), rand_q(rng, **kw))


# ---------------------------------------------------------------------------


def c1_cases():
    rng = random.Random(101)
    kinds = ("random", "random", "capped_spheres", "unit_bundle", "grid")
    cases = []
    for i in range(200):
        kind = kinds[i % len(kinds)]
        m, n = rng.randint(1, 200), rng.randint(1, 200)
        if kind == "capped_spheres":
            m = max(m, 3)
        q = n if rng.random() < 0.5 else rng.randint(1, n)
        if kind == "grid":
            q = n
        cases.append((i, kind, m, n, q, (2, 8, 32)[i % 3]))
    return cases


def c1_check(case):
    i, kind, m, n, q, r = case
    inst = generate(GenSpec(kind, m, n, q=q, seed=1000 + i))
    got = count_partitioned(inst, r=r, seed=i)
    return case, count_bruteforce(inst), got.total, sum(got.breakdown)


@criterion(1, "partition count equals brute force on 200 instances")
def test_c1_oracle_equivalence():
    t0 = time.time()
    jobs = max(1, min(4, os.cpu_count() or 1))
    with ProcessPoolExecutor(jobs) as pool:
        results = list(pool.map(c1_check, c1_cases()))
    for case, expect, total, split in results:
        assert total == expect, f"instance {case}: {total} != {expect}"
        assert split == total
    elapsed = time.time() - t0
    assert elapsed < 120, f"took {elapsed:.0f}s"
    return f"{len(results)} instances, 0 mismatches, {jobs} workers"


@criterion(2, "partition cell size, degree and component bounds on 50 point sets")
def test_c2_partition_guarantee():
    rng = random.Random(202)
    sizes = (64, 128, 256, 512, 1024, 2048, 4096)
    rs = (2, 4, 8, 16, 32, 64)
    worst = 0.0
    for i in range(50):
        m = sizes[i % len(sizes)]
        r = rs[i % len(rs)]
        if r > m:
            r = m
        box = rng.choice((10, 1000, 10 ** 6))
        seen = set()
        while len(seen) < m:
            seen.add(tuple(rng.randint(-box, box) for _ in range(3)))
        part = build_partition([Point3(*p) for p in sorted(seen)], r, seed=i)
        st = partition_stats(part)
        for cell in part.zero_free_cells().values():
            assert len(cell) <= -(-m // r)
        assert st.degree <= C_DEG * r ** (1 / 3), (m, r, st.degree)
        assert st.nonempty_cells <= (2 * st.degree) ** 3
        worst = max(worst, st.degree / r ** (1 / 3))
    return f"50 sets, max deg/r^(1/3) = {worst:.2f} <= C_DEG = {C_DEG}"


@criterion(3, "circle-surface crossings within 2 deg f over the fixture corpus")
def test_c3_bezout():
    surfaces = list(load_surfaces().values())
    calls = 0
    for name in INSTANCE_FIXTURES:
        inst = load_fixture(name)
        polys = list(surfaces)
        if inst.m >= 2:
            polys += build_partition(sorted(set(inst.points), key=lambda p: p.t), min(8, len(set(inst.points))), seed=0).factors
        for c in inst.circles:
            for f in polys:
                res = circle_surface_crossings(c, f)
                assert res.contained or res.crossings <= 2 * f.degree(), (name, f, res)
                calls += 1
    return f"{calls} circle-surface pairs, 0 violations"


def dense_poly(rng, d):
    terms = {}
    for a in range(d + 1):
        for b in range(d + 1 - a):
            for c in range(d + 1 - a - b):
                terms[(a, b, c)] = mpq(rng.randint(1, 9) * rng.choice((-1, 1)), rng.randint(1, 3))
    return MultiPoly(terms)


def cubic_cone(rng):
    f = MultiPoly()
    while f.degree() != 3:
        f = MultiPoly()
        for a in range(4):
            for b in range(4 - a):
                if rng.random() < 0.6:
                    f = f + MultiPoly({(a, b, 3 - a - b): mpq(rng.randint(-5, 5))})
    return f


def fixture_lines(f):
    from itertools import combinations

    from circlab.ruling import surface_points

    pts = surface_points(f, budget=300, seed=0, limit=40)
    found = set()
    for p, q in combinations(pts, 2):
        d = sub(q.t, p.t)
        if not is_zero_vec(d):
            ln = Line3(p, d)
            if ln not in found and line_in_surface(ln, f):
                found.add(ln)
    return found


@criterion(4, "flecnode degree, vanishing on lines, ruledness verdicts")
def test_c4_flecnode():
    rng = random.Random(404)
    for i in range(30):
        d = 3 + i % 3
        f = dense_poly(rng, d)
        assert f.degree() == d
        fl = flecnode(f)
        assert fl.degree() <= 11 * d - 24, (d, fl.degree())
    lines = 0
    for name, f in load_surfaces().items():
        if f.degree() < 3:
            continue
        fl = flecnode(f)
        for ln in fixture_lines(f):
            assert not restrict_to_line(fl, ln.base.t, ln.direction), name
            lines += 1
    assert lines > 0
    for _ in range(10):
        assert ruled_test(cubic_cone(rng)).verdict == RULED
    v = ruled_test(x ** 3 + y ** 3 + z ** 3 - 1)
    assert v.verdict == NOT_RULED and v.flecnode(v.witness) != 0
    return f"30 dense polys, {lines} surface lines, 10 cones ruled, Fermat witness {tuple(map(str, v.witness))}"


def point_on_circle(c, rng, p0):
    return chord_point(c, p0, _plane_direction(c, rng))


@criterion(5, "inversion involution, circle/line classification, surface degree")
def test_c5_inversion():
    rng = random.Random(505)
    for _ in range(1000):
        p = rand_point(rng)
        if p.t == (0, 0, 0):
            continue
        assert invert_point(invert_point(p)) == p
    origin = Point3(0, 0, 0)
    through = not_through = 0
    while through < 100 or not_through < 100:
        want_through = through < 100
        a = origin if want_through else rand_point(rng)
        b = rand_point(rng)
        try:
            c = circle_through_three_points(a, b, rand_point(rng))
        except Collinear:
            continue
        if incidence_test(origin, c) != want_through:
            continue
        img = invert_circle(c)
        samples = [b] + [point_on_circle(c, rng, b) for _ in range(6)]
        samples = [s for s in samples if s != origin]
        assert all(incidence_test(s, c) for s in samples)
        if want_through:
            assert isinstance(img, Line3)
            assert all(img.contains(invert_point(s)) for s in samples)
            through += 1
        else:
            assert isinstance(img, Circle3)
            assert all(incidence_test(invert_point(s), img) for s in samples)
            not_through += 1
    for _ in range(50):
        g = MultiPoly()
        while g.degree() != 3:
            g = MultiPoly(
                {
                    (a, b, c): mpq(rng.randint(-4, 4))
                    for a in range(4)
                    for b in range(4 - a)
                    for c in range(4 - a - b)
                    if 0 < a + b + c and rng.random() < 0.5
                }
            )
        assert invert_surface(g).degree() < 2 * g.degree()
    return "1000 points, 100 + 100 circles, 50 cubics"


@criterion(6, "Plücker quadric membership and round trip on 500 lines")
def test_c6_plucker():
    rng = random.Random(606)
    done = 0
    while done < 500:
        d = (rand_q(rng), rand_q(rng), rand_q(rng))
        if is_zero_vec(d):
            continue
        ln = Line3(rand_point(rng), d)
        pp = plucker_from_line(ln)
        c = pp.coords
        assert c[0] * c[5] + c[1] * c[4] + c[2] * c[3] == 0
        assert line_from_plucker(pp) == ln
        assert plucker_from_line(line_from_plucker(pp)) == pp
        assert PluckerPoint(tuple(k * 3 for k in c)) == pp
        assert not meets_absolute_conic(pp)
        done += 1
    return "500 lines exact"


def float_stage(m, n, num, step, off):
    """Ceiling formula for the smallest j with log m / log n <= 3/2 - num/(step j + off),
    in floats; ``near`` flags values too close to an integer to trust."""
    beta = math.log(m) / math.log(n)
    val = (num / (1.5 - beta) - off) / step
    j = max(0, math.ceil(val))
    near = abs(val - round(val)) < 1e-9
    return j, near


@criterion(7, "staging anchors, A-exponent ranges and unit ceiling formula")
def test_c7_staging():
    n = 2 ** 30
    st = staging(2 ** 34, n)
    assert [Fraction(int(a.numerator), int(a.denominator)) for a in st.alphas[:4]] == [
        Fraction(1, 3), Fraction(4, 5), Fraction(1), Fraction(10, 9)
    ]
    for m in (1, 2, 2 ** 5, 2 ** 10):
        assert staging(m, n).a_exponent == 1
    for m in (2 ** 10 + 1, 2 ** 17, 2 ** 24):
        assert staging(m, n).a_exponent == 2
    assert staging(2 ** 24 + 1, n).a_exponent == 3
    rng = random.Random(707)
    checked = 0
    while checked < 50:
        n = rng.randint(2, 10 ** 6)
        m = rng.randint(1, min(n * n, math.isqrt(n ** 3 - 1)))
        if m * m >= n ** 3:
            continue
        jf, near = float_stage(m, n, 11, 6, 10)
        if near:
            continue
        assert unit_staging(m, n).j == jf, (m, n)
        jf, near = float_stage(m, n, 7, 4, 6)
        if not near:
            assert staging(m, n).j == jf, (m, n)
        checked += 1
    return "alphas 1/3, 4/5, 1, 10/9; A^1 and A^2 ranges; 50 unit ceilings"


@criterion(8, "similar triangles: direct and circle-route counts on 50 sets")
def test_c8_triangles():
    rng = random.Random(808)
    square = [Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0), Point3(0, 1, 0)]
    iso = TriangleShape.from_sides(1, 1, 2)
    inc, factor = count_via_circles(square, iso)
    assert tri_brute(square, iso) == 4 and inc == 4 * factor
    tri = [Point3(0, 0, 0), Point3(3, 0, 0), Point3(1, 2, 5)]
    self_shape = TriangleShape.from_points(*tri)
    inc, factor = count_via_circles(tri, self_shape)
    assert tri_brute(tri, self_shape) == 1 and inc == factor
    total = 0
    for i in range(50):
        t = rng.randint(3, 40)
        pts = gen_triangle_cloud(t, seed=i)
        while True:
            a, b, c = rng.sample(pts, 3)
            try:
                shape = TriangleShape.from_points(a, b, c)
                break
            except Collinear:
                continue
        direct = tri_brute(pts, shape)
        inc, factor = count_via_circles(pts, shape)
        assert inc % factor == 0 and inc // factor == direct, (i, direct, inc, factor)
        assert direct >= 1
        total += direct
    return f"square 4, self 1, 50 clouds with {total} triangles"


@criterion(9, "sigma surface cases, rich unit circles, Milnor-Thom constant")
def test_c9_unit():
    o = Point3(0, 0, 0)
    sph = sigma_surface(o, (2, 0, 0))
    assert isinstance(sph, Sphere) and sph.center == Point3(1, 0, 0) and sph.radius_sq == 1
    assert isinstance(sigma_surface(o, (mpq(6, 5), mpq(8, 5), 0)), Sphere)
    assert sigma_surface(o, (2, 1, 0)) is EMPTY
    q = sigma_surface(o, (mpq(6, 5), 0, 0))
    assert isinstance(q, MultiPoly) and q.degree() == 4
    # w on the unit circle through o and a
    w = (mpq(8, 5), mpq(4, 5), 0)
    assert q(w) == 0
    assert circle_through_three_points(o, Point3(mpq(6, 5), 0, 0), Point3(*w)).radius_sq == 1
    inst = load_fixture("bundle_40_24_8")
    circles = rich_unit_circles(inst.points)
    assert circles
    for c in circles:
        assert c.radius_sq == 1
        assert sum(1 for p in set(inst.points) if incidence_test(p, c)) >= 3
    mt = eval_bound("MilnorThom", BoundParams(m=1, n=1, k=4, dim=3))
    assert mt == 196
    return f"3 sigma cases, {len(circles)} rich unit circles, Milnor-Thom 196"


@criterion(10, "grid lower-bound fixture at m = n = 400")
def test_c10_grid_lower_bound():
    with open(fixture_path("golden.json"), encoding="utf-8") as fh:
        gold = json.load(fh)["grid_400"]["count"]
    inst = load_fixture("grid_400")
    assert inst.m == 400 and inst.n == 400
    measured = count_bruteforce(inst)
    assert measured == gold
    floor = 0.1 * (inst.m * inst.n) ** (2 / 3)
    assert measured >= floor
    return f"{measured} incidences >= {floor:.1f}"
