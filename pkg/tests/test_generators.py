import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlab.engine import count_bruteforce, incidence_lists
from circlab.errors import InfeasibleCap
from circlab.generators import (
    GenSpec,
    gen_capped_spheres,
    gen_grid,
    gen_random,
    gen_triangle_cloud,
    gen_unit_bundle,
    generate,
)
from circlab.geometry import Sphere, incidence_test, max_coplanar_cospherical
from circlab.io import dumps_instance


def test_grid_examples():
    inst = gen_grid(9, 1, radius_sq=1)
    assert count_bruteforce(inst) == 4
    inst = gen_grid(1, 1)
    assert count_bruteforce(inst) == 0


def test_grid_lower_bound_shape():
    inst = gen_grid(400, 400, seed=0)
    assert count_bruteforce(inst) >= 0.1 * 400 ** (2 / 3) * 400 ** (2 / 3)


def test_capped_examples():
    inst = gen_capped_spheres(30, 10, 5, seed=1)
    q, _ = max_coplanar_cospherical(inst.circles)
    assert q == 5 and inst.n == 10
    inst = gen_capped_spheres(30, 8, 1, seed=1)
    assert max_coplanar_cospherical(inst.circles)[0] == 1
    inst = gen_capped_spheres(30, 8, 8, seed=1)
    q, w = max_coplanar_cospherical(inst.circles)
    assert q == 8 and isinstance(w, Sphere)
    with pytest.raises(InfeasibleCap):
        gen_capped_spheres(5, 5, 0)


def test_unit_bundle_examples():
    inst = gen_unit_bundle(2, 6, 6, seed=0, bundle_size=6)
    assert all(c.radius_sq == 1 for c in inst.circles)
    P, Q = inst.points[:2]
    assert all(incidence_test(P, c) and incidence_test(Q, c) for c in inst.circles)
    for seed in range(20):
        inst = gen_unit_bundle(30, 20, 4, seed=seed)
        assert all(c.radius_sq == 1 for c in inst.circles)
        assert max_coplanar_cospherical(inst.circles)[0] <= 4


def test_random_examples():
    a = gen_random(30, 20, seed=9)
    b = gen_random(30, 20, seed=9)
    assert dumps_instance(a) == dumps_instance(b)
    empty = gen_random(0, 5, seed=1)
    assert empty.m == 0 and count_bruteforce(empty) == 0
    for seed in range(50):
        inst = gen_random(20, 12, q=2, seed=seed)
        assert max_coplanar_cospherical(inst.circles)[0] <= 2


@settings(max_examples=20)
@given(
    st.sampled_from(["grid", "capped_spheres", "unit_bundle", "random"]),
    st.integers(0, 40),
    st.integers(1, 16),
    st.integers(1, 16),
    st.integers(0, 2 ** 63 - 1),
)
def test_generators_honour_cap_and_determinism(kind, m, n, q, seed):
    q = min(q, n)
    spec = GenSpec(kind, m, n, q, seed)
    inst = generate(spec)
    inst.validate()
    assert dumps_instance(inst) == dumps_instance(generate(spec))
    if kind != "grid":
        assert inst.m == m and inst.n == n
    if kind in ("capped_spheres", "unit_bundle"):
        # points are sampled on the circles
        assert all(incidence_lists(inst))


def test_triangle_cloud():
    pts = gen_triangle_cloud(30, seed=2)
    assert len(set(p.t for p in pts)) == 30
    assert gen_triangle_cloud(30, seed=2) == pts
    assert len(gen_triangle_cloud(200, seed=0)) == 200


def test_bad_spec():
    with pytest.raises(ValueError):
        GenSpec("nope", 1)
