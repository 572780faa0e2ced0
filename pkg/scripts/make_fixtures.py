"""Regenerate tests/fixtures: seeded instances, their brute-force golden
counts, and the surface corpus used by the crossing and flecnode checks.

Run from the repository root:  python scripts/make_fixtures.py
Golden values are produced by count_bruteforce at creation time and then
frozen; tests compare against the stored numbers.
"""

import json
import os

from circlab.engine import count_bruteforce
from circlab.generators import GenSpec, generate
from circlab.io import dumps_instance
from circlab.poly import MultiPoly

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "fixtures")

INSTANCES = {
    "grid_9_1": GenSpec("grid", 9, 1, seed=0, radius_sq=1),
    "grid_9_4": GenSpec("grid", 9, 4, seed=0),
    "grid_100_50": GenSpec("grid", 100, 50, seed=1),
    "grid_400": GenSpec("grid", 400, 400, seed=0),
    "spheres_60_30_5": GenSpec("capped_spheres", 60, 30, 5, seed=2),
    "spheres_40_20_1": GenSpec("capped_spheres", 40, 20, 1, seed=3),
    "bundle_40_24_8": GenSpec("unit_bundle", 40, 24, 8, seed=4),
    "random_50_40": GenSpec("random", 50, 40, seed=5),
    "random_80_30_3": GenSpec("random", 80, 30, 3, seed=6),
}

x, y, z = MultiPoly.gens()
SURFACES = {
    "plane_x": x,
    "plane_tilted": x + 2 * y - 3 * z + 1,
    "unit_sphere": x * x + y * y + z * z - 1,
    "sphere_shifted": (x - 1) ** 2 + (y + 2) ** 2 + z * z - 9,
    "paraboloid": z - x * x - y * y,
    "cone": x * x + y * y - z * z,
    "hyperboloid": x * x + y * y - z * z - 1,
    "saddle": x * y - z,
    "fermat_cubic": x ** 3 + y ** 3 + z ** 3 - 1,
    "cubic_cone": x ** 3 + y ** 3 - 2 * z ** 3 + x * y * z,
    "umbrella": x * x * z - y * y,
    "cubic_mixed": x * x * z + y * y - x * y * z + z ** 3 - y,
    "quartic_torus": (x * x + y * y + z * z + 3) ** 2 - 16 * (x * x + y * y),
    "quartic_mixed": x ** 4 - y ** 3 * z + x * y * z - 2 * z * z + 1,
    "grid_plane": z,
}


def main():
    os.makedirs(OUT, exist_ok=True)
    golden = {}
    for name, spec in INSTANCES.items():
        inst = generate(spec)
        with open(os.path.join(OUT, f"{name}.json"), "w", encoding="utf-8") as fh:
            fh.write(dumps_instance(inst))
        golden[name] = {
            "kind": spec.kind,
            "m": spec.m,
            "n": spec.n,
            "q": spec.q,
            "seed": spec.seed,
            "radius_sq": spec.radius_sq,
            "count": count_bruteforce(inst),
        }
        print(name, inst.m, inst.n, inst.q, golden[name]["count"])
    with open(os.path.join(OUT, "golden.json"), "w", encoding="utf-8") as fh:
        json.dump(golden, fh, indent=1, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(OUT, "surfaces.json"), "w", encoding="utf-8") as fh:
        json.dump({k: f.to_text() for k, f in SURFACES.items()}, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
