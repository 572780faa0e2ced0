import json
import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from circlab.engine import (
    K32_C,
    CircleFrame,
    circle_surface_crossings,
    count_bruteforce,
    count_partitioned,
    has_k32,
    incidence_lists,
    k32_bound,
    rich_points,
    trace_circle,
)
from circlab.errors import ZeroPolynomial
from circlab.generators import GenSpec, gen_random, generate
from circlab.geometry import Circle3, IncidenceInstance, Point3, circle_through_three_points
from circlab.io import load_instance
from circlab.partition import build_partition
from circlab.poly import MultiPoly

from conftest import fixture_path

x, y, z = MultiPoly.gens()
UNIT = Circle3.from_center((0, 0, 0), (0, 0, 1), 1)


def golden():
    with open(fixture_path("golden.json"), encoding="utf-8") as fh:
        return json.load(fh)


def surfaces():
    with open(fixture_path("surfaces.json"), encoding="utf-8") as fh:
        return {k: MultiPoly.from_text(v) for k, v in json.load(fh).items()}


def test_bruteforce_examples():
    pts = [Point3(1, 0, 0), Point3(0, 1, 0), Point3(mpq(3, 5), mpq(-4, 5), 0)]
    assert count_bruteforce(IncidenceInstance(pts, [UNIT])) == 3
    assert count_bruteforce(IncidenceInstance(pts, [])) == 0


def test_golden_counts():
    for name, rec in golden().items():
        inst = load_instance(fixture_path(f"{name}.json"))
        assert count_bruteforce(inst) == rec["count"], name


def test_fixtures_regenerate_identically():
    for name, rec in golden().items():
        spec = GenSpec(rec["kind"], rec["m"], rec["n"], rec["q"], rec["seed"], rec["radius_sq"])
        from circlab.io import dumps_instance

        with open(fixture_path(f"{name}.json"), encoding="utf-8") as fh:
            assert dumps_instance(generate(spec)) == fh.read(), name


def test_crossings_examples():
    r = circle_surface_crossings(UNIT, x)
    assert (r.contained, r.crossings) == (False, 2)
    assert circle_surface_crossings(UNIT, x * x + y * y + z * z - 1).contained
    r = circle_surface_crossings(UNIT, z - 1)
    assert (r.contained, r.crossings) == (False, 0)
    with pytest.raises(ZeroPolynomial):
        circle_surface_crossings(UNIT, MultiPoly())


def test_crossings_tangent_and_multiple():
    # tangent plane meets once; a squared factor does not double-count
    assert circle_surface_crossings(UNIT, x - 1).crossings == 1
    assert circle_surface_crossings(UNIT, (x - 1) ** 2).crossings == 1
    assert circle_surface_crossings(UNIT, x * y).crossings == 4
    # irrational crossings: x = 1/2 meets at y = +-sqrt(3)/2
    assert circle_surface_crossings(UNIT, 2 * x - 1).crossings == 2


def test_crossings_bezout_on_corpus():
    surf = surfaces()
    names = [n for n in golden() if n != "grid_400"]
    for name in names:
        inst = load_instance(fixture_path(f"{name}.json"))
        for c in inst.circles[:12]:
            for f in surf.values():
                r = circle_surface_crossings(c, f)
                assert r.crossings <= 2 * f.degree()


def test_trace_agrees_with_spec_route():
    surf = surfaces()
    inst = load_instance(fixture_path("random_50_40.json"))
    for c in inst.circles[:15]:
        frame = CircleFrame(c)
        for f in surf.values():
            tr = trace_circle(frame, [f])
            ref = circle_surface_crossings(c, f)
            assert tr.contained == ref.contained
            if not ref.contained:
                assert tr.crossings == ref.crossings
                assert len(tr.cells) <= 1 + tr.crossings


def test_trace_cells_match_sampled_signs():
    # every sign vector seen at a rational point of the circle is reported
    c = Circle3.from_center((0, 0, 0), (0, 0, 1), 25)
    factors = [x - 1, y * y - 2, x + y - mpq(1, 3)]
    tr = trace_circle(CircleFrame(c), factors)
    seen = set()
    for a, b in [(3, 4), (4, 3), (5, 0), (0, 5), (-3, 4), (-4, -3), (3, -4), (-5, 0), (0, -5), (4, -3), (-3, -4), (-4, 3)]:
        p = (a, b, 0)
        sv = tuple((f(p) > 0) - (f(p) < 0) for f in factors)
        if 0 not in sv:
            seen.add(sv)
    assert seen <= set(tr.cells)


def test_partitioned_examples():
    inst = load_instance(fixture_path("grid_9_4.json"))
    rep = count_partitioned(inst, r=2)
    assert rep.total == golden()["grid_9_4"]["count"]
    assert rep.total == sum(rep.breakdown)
    empty = IncidenceInstance([], [])
    assert count_partitioned(empty).total == 0


def test_partitioned_all_points_on_zero_set():
    inst = load_instance(fixture_path("grid_100_50.json"))
    rep = count_partitioned(inst, r=8, factors=[z])
    assert rep.pprime_cprime == 0
    assert rep.total == count_bruteforce(inst)
    assert rep.p0_c0 == rep.total


def test_partitioned_200_random():
    inst = gen_random(200, 200, seed=17)
    rep = count_partitioned(inst, r=8, seed=1)
    assert rep.total == count_bruteforce(inst)
    assert rep.total == rep.p0_c0 + rep.p0_cprime + rep.pprime_cprime
    assert rep.partitions_built >= 1


def test_partitioned_duplicates_and_rich():
    base = gen_random(40, 30, seed=3)
    pts = base.points + base.points[:10]
    inst = IncidenceInstance(pts, base.circles + base.circles[:3], q=None)
    assert count_partitioned(inst, r=4).total == count_bruteforce(inst)


@settings(max_examples=12)
@given(st.integers(0, 10 ** 6), st.integers(0, 90), st.integers(0, 60), st.sampled_from([2, 3, 8, 32]))
def test_oracle_equivalence(seed, m, n, r):
    inst = gen_random(m, n, seed=seed)
    assert count_partitioned(inst, r=r, seed=seed).total == count_bruteforce(inst)


def test_report_json_deterministic():
    inst = load_instance(fixture_path("random_80_30_3.json"))
    a = count_partitioned(inst, r=8, seed=4, track_q=True)
    b = count_partitioned(inst, r=8, seed=4, track_q=True)
    assert a.to_json() == b.to_json()
    assert all(q <= inst.q for q in a.cell_q)


def test_cell_entry_bound():
    inst = load_instance(fixture_path("random_50_40.json"))
    part = build_partition(list(dict.fromkeys(p.t for p in inst.points)), 8)
    for c in inst.circles:
        tr = trace_circle(CircleFrame(c), part.factors)
        if not tr.contained:
            assert len(tr.cells) <= 1 + tr.crossings <= 1 + 2 * part.degree
    rep = count_partitioned(inst, r=8)
    assert 1 <= rep.max_cell_entries <= 1 + 2 * part.degree


def test_rich_points_examples():
    p = Point3(0, 0, 0)
    cs = [Circle3.from_center((1, 0, 0), (0, 0, 1), 1), Circle3.from_center((0, 1, 0), (1, 0, 0), 1),
          Circle3.from_center((0, 0, 1), (0, 1, 0), 1)]
    inst = IncidenceInstance([p, Point3(5, 5, 5)], cs)
    assert rich_points(inst, 3) == [(p, 3)]
    grid = load_instance(fixture_path("grid_9_4.json"))
    lists = incidence_lists(grid)
    ones = [(grid.points[i], len(l)) for i, l in enumerate(lists) if len(l) >= 1]
    assert sorted(rich_points(grid, 1), key=lambda t: t[0].t) == sorted(ones, key=lambda t: t[0].t)
    twos = [(grid.points[i], len(l)) for i, l in enumerate(lists) if len(l) >= 2]
    assert sorted(rich_points(grid, 2), key=lambda t: t[0].t) == sorted(twos, key=lambda t: t[0].t)


def test_k32_bound_examples():
    assert k32_bound(0, 7) == K32_C * 7
    assert k32_bound(10, 0) == 0
    assert k32_bound(8, 8) == K32_C * (4 * 8 + 8)


def test_k32_on_corpus():
    for name in golden():
        inst = load_instance(fixture_path(f"{name}.json"))
        assert not has_k32(inst), name
        assert count_bruteforce(inst) <= k32_bound(inst.m, inst.n), name
    # bundles of unit circles through one point pair are the tight case
    for seed in range(5):
        inst = generate(GenSpec("unit_bundle", 60, 40, 8, seed=seed))
        assert count_bruteforce(inst) <= k32_bound(inst.m, inst.n)


def test_two_circles_share_at_most_two_points():
    rng = random.Random(8)
    for _ in range(30):
        pts = [Point3(rng.randint(-2, 2), rng.randint(-2, 2), 0) for _ in range(6)]
        try:
            a = circle_through_three_points(*pts[:3])
            b = circle_through_three_points(*pts[3:])
        except Exception:
            continue
        if a != b:
            inst = IncidenceInstance(pts, [a, b])
            assert not has_k32(inst)
