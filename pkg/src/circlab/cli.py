"""Command line front end: ``incidence <subcommand> ...``.

Reports go to stdout (or ``--out``) as JSON or CSV.  Exit status is 0 on
success, 2 for unusable input and 3 when ``--verify`` finds a mismatch.
"""

import argparse
import ast
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import bounds as bnd
from .engine import circle_surface_crossings, count_bruteforce, count_partitioned, rich_points
from .errors import CirclabError, InstanceFormatError, ShapeMismatch
from .generators import KINDS, GenSpec, gen_triangle_cloud, generate
from .geometry import Line3, Point3, Sphere, incidence_test
from .io import dumps_instance, load_instance
from .partition import build_partition, partition_stats
from .poly import MultiPoly
from .rational import as_q, q_json
from .ruling import (
    PluckerPoint,
    flecnode,
    line_from_plucker,
    meets_absolute_conic,
    plucker_from_line,
    ruled_test,
)
from .triangles import TriangleShape, count_via_circles, similar_triangles
from .unit import EMPTY, rich_unit_circles, sigma_surface

DEFAULT_SEED = 20140
EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3

SWEEP_COLUMNS = (
    "index", "kind", "m", "n", "q", "r", "seed",
    "total", "p0_c0", "p0_cprime", "pprime_cprime",
    "recursion_depth", "partitions_built",
    "thm1_1", "thm1_3", "kst", "rich_k", "rich_points", "rich_point_bound",
)


class InputError(Exception):
    pass


class VerifyError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    seed: int = DEFAULT_SEED
    jobs: int = 1
    fmt: str = None
    verify: bool = False
    out: str = None


# ---------------------------------------------------------------------------
# argument helpers


def _rational_list(text, count=None, what="value"):
    try:
        vals = [as_q(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"{what}: not a list of rationals: {text!r}") from None
    if count is not None and len(vals) != count:
        raise InputError(f"{what}: expected {count} rationals, got {len(vals)}")
    return vals


def _int_list(text, what):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"{what}: not a list of integers: {text!r}") from None
    if not vals:
        raise InputError(f"{what}: empty")
    return vals


_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_expr(text):
    """Polynomial in x, y, z from an arithmetic expression such as
    ``x^3 + y^3 + z^3 - 1``.  Only integer constants, + - * / and
    nonnegative integer powers are accepted."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InputError(f"expr: {exc.msg}") from None
    x, y, z = MultiPoly.gens()
    names = {"x": x, "y": y, "z": z}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return MultiPoly.const(node.value)
        if isinstance(node, ast.Name) and node.id in names:
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            a = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                    raise InputError("expr: exponents must be nonnegative integer literals")
                return a ** node.right.value
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if not b.is_constant() or b.is_zero():
                raise InputError("expr: division only by nonzero constants")
            return a / b.constant_term()
        raise InputError(f"expr: unsupported syntax {ast.dump(node)[:40]}")

    return ev(tree)


def _load_poly(args):
    if getattr(args, "expr", None):
        return parse_expr(args.expr)
    if getattr(args, "poly", None):
        try:
            with open(args.poly, encoding="utf-8") as fh:
                return MultiPoly.from_text(fh.read())
        except OSError as exc:
            raise InputError(f"poly: {exc.strerror}: {args.poly}") from None
        except (ValueError, TypeError) as exc:
            raise InputError(f"poly: {exc}") from None
    raise InputError("poly: give --poly FILE or --expr EXPR")


def _load(args):
    path = getattr(args, "input", None)
    if not path:
        raise InputError("in: an instance file is required")
    try:
        return load_instance(path)
    except OSError as exc:
        raise InputError(f"in: {exc.strerror}: {path}") from None


def _poly_lines(f):
    return f.to_text(header=False).strip().splitlines() if not f.is_zero() else []


def _qlist(vs):
    return [q_json(v) for v in vs]


# ---------------------------------------------------------------------------
# output


def _rows_csv(rows, columns):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: _cell(row.get(k)) for k in columns})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"), sort_keys=True)
    return "" if v is None else v


def _emit(cfg, obj, rows=None, columns=None, default="json"):
    fmt = cfg.fmt or default
    if fmt == "csv":
        if rows is None:
            rows = [obj] if isinstance(obj, dict) else list(obj)
        if columns is None:
            columns = list(rows[0]) if rows else []
        text = _rows_csv(rows, columns)
    else:
        text = json.dumps(obj, sort_keys=True, indent=None, separators=(",", ":")) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args, cfg):
    spec = GenSpec(args.kind, args.m, args.n, args.q, cfg.seed, args.radius_sq)
    inst = generate(spec)
    text = dumps_instance(inst)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_count(inst, method, r, seed, verify):
    """Count report for an instance as a plain dict."""
    if method == "bruteforce":
        obj = {"total": count_bruteforce(inst)}
    else:
        obj = count_partitioned(inst, r=r, seed=seed).to_obj()
    obj.update(method=method, m=inst.m, n=inst.n, q=inst.q)
    if verify:
        oracle = count_bruteforce(inst)
        obj["verified"] = oracle == obj["total"]
        if not obj["verified"]:
            raise VerifyError(f"count {obj['total']} differs from the brute-force oracle {oracle}")
    return obj


def cmd_count(args, cfg):
    inst = _load(args)
    _emit(cfg, run_count(inst, args.method, args.r, cfg.seed, cfg.verify))


def cmd_crossings(args, cfg):
    inst = _load(args)
    f = _load_poly(args)
    rows = []
    for j, c in enumerate(inst.circles):
        res = circle_surface_crossings(c, f)
        rows.append({"circle": j, "contained": res.contained, "crossings": res.crossings})
    _emit(cfg, {"degree": f.degree(), "circles": rows}, rows=rows, columns=("circle", "contained", "crossings"))


def cmd_partition(args, cfg):
    inst = _load(args)
    pts = list(dict.fromkeys(p.t for p in inst.points))
    part = build_partition(pts, min(args.r, max(len(pts), 1)), seed=cfg.seed)
    obj = part.to_obj()
    obj["stats"] = partition_stats(part).as_dict()
    _emit(cfg, obj, rows=[obj["stats"]])


def cmd_flecnode(args, cfg):
    f = _load_poly(args)
    fl = flecnode(f, backend=args.backend)
    d = f.degree()
    obj = {
        "degree": fl.degree() if not fl.is_zero() else None,
        "bound": 11 * d - 24,
        "vanishes": fl.is_zero(),
        "poly": _poly_lines(fl),
    }
    _emit(cfg, obj, rows=[{k: v for k, v in obj.items() if k != "poly"}])


def cmd_ruled(args, cfg):
    f = _load_poly(args)
    v = ruled_test(f, line_budget=args.budget, seed=cfg.seed, backend=args.backend)
    _emit(cfg, v.to_obj())


def cmd_plucker(args, cfg):
    if args.coords:
        pp = PluckerPoint(tuple(_rational_list(args.coords, 6, "coords")))
    elif args.line:
        vals = _rational_list(args.line, 6, "line")
        pp = plucker_from_line(Line3(Point3.of(vals[:3]), tuple(vals[3:])))
    else:
        raise InputError("plucker: give --line or --coords")
    obj = {
        "coords": _qlist(pp.coords),
        "canonical_points": [_qlist(p) for p in pp.canonical_points()],
        "meets_absolute_conic": meets_absolute_conic(pp),
    }
    line = line_from_plucker(pp)
    obj["line"] = {"base": _qlist(line.base), "direction": _qlist(line.direction)}
    _emit(cfg, obj, rows=[{"coords": obj["coords"], "meets_absolute_conic": obj["meets_absolute_conic"]}])


def cmd_triangles(args, cfg):
    if args.cloud:
        points = gen_triangle_cloud(args.cloud, seed=cfg.seed)
    else:
        points = _load(args).points
    if args.sides:
        shape = TriangleShape.from_sides(*_rational_list(args.sides, 3, "sides"))
    elif args.lam is not None and args.mu is not None:
        shape = TriangleShape(as_q(args.lam), as_q(args.mu))
    else:
        raise InputError("shape: give --sides or both --lam and --mu")
    if cfg.verify:
        count = similar_triangles(points, shape)
    else:
        from .triangles import count_bruteforce as tri_brute
        count = tri_brute(points, shape)
    inc, factor = count_via_circles(points, shape)
    obj = {
        "count": count,
        "points": len(points),
        "lam": q_json(shape.lam),
        "mu": q_json(shape.mu),
        "circle_incidences": inc,
        "overcount": factor,
    }
    _emit(cfg, obj)


def cmd_unit(args, cfg):
    if args.sigma:
        vals = _rational_list(args.sigma, 6, "sigma")
        s = sigma_surface(vals[:3], vals[3:])
        if s is EMPTY:
            obj = {"kind": "empty"}
        elif isinstance(s, Sphere):
            obj = {"kind": "sphere", "center": _qlist(s.center), "radius_sq": q_json(s.radius_sq)}
        else:
            obj = {"kind": "quartic", "degree": s.degree(), "poly": _poly_lines(s)}
        _emit(cfg, obj, rows=[{k: v for k, v in obj.items() if k != "poly"}])
        return
    inst = _load(args)
    circles = rich_unit_circles(inst.points)
    rows = [
        {
            "center": _qlist(c.center),
            "normal": _qlist(c.normal),
            "points": sum(1 for p in inst.points if incidence_test(p, c)),
        }
        for c in circles
    ]
    _emit(cfg, {"circles": rows}, rows=rows, columns=("center", "normal", "points"))


BOUNDS_COLUMNS = ("m", "n", "q", "k", "bound_name", "value")


def cmd_bounds(args, cfg):
    which = args.which.split(",") if args.which else list(bnd.BOUNDS)
    params = bnd.BoundParams(
        m=args.m, n=args.n, q=args.q, eps=as_q(args.eps), A=as_q(args.A), k=args.k, dim=args.dim
    )
    rows = []
    for name in which:
        row = {"m": params.m, "n": params.n, "q": params.q, "k": params.k, "bound_name": name}
        try:
            row["value"] = bnd.eval_bound(name, params)
        except CirclabError as exc:
            # out-of-domain formulas are skipped when listing everything
            if args.which:
                raise
            row["value"] = None
            row["note"] = str(exc)
        rows.append(row)
    obj = {"bounds": rows}
    try:
        st = bnd.staging(args.m, args.n)
        obj["staging"] = {"j": st.j, "alphas": _qlist(st.alphas), "a_exponent": st.a_exponent}
    except CirclabError:
        obj["staging"] = None
    _emit(cfg, obj, rows=rows, columns=BOUNDS_COLUMNS)


def sweep_cell(cell):
    """One sweep row; top-level so it pickles for worker processes."""
    index, kind, m, n, q, r, seed, k, verify = cell
    inst = generate(GenSpec(kind, m, n, q, seed))
    rep = run_count(inst, "partition", r, seed, verify)
    params = bnd.BoundParams(m=inst.m, n=inst.n, q=inst.q or None)
    rich = rich_points(inst, k) if inst.n else []
    return {
        "index": index,
        "kind": kind,
        "m": inst.m,
        "n": inst.n,
        "q": inst.q,
        "r": r,
        "seed": seed,
        "total": rep["total"],
        "p0_c0": rep["p0_c0"],
        "p0_cprime": rep["p0_cprime"],
        "pprime_cprime": rep["pprime_cprime"],
        "recursion_depth": rep["recursion_depth"],
        "partitions_built": rep["partitions_built"],
        "thm1_1": bnd.eval_bound("Thm1.1", params),
        "thm1_3": bnd.eval_bound("Thm1.3", params),
        "kst": bnd.eval_bound("KST", params),
        "rich_k": k,
        "rich_points": len(rich),
        "rich_point_bound": bnd.rich_point_bound(max(inst.n, 1), k, q=max(inst.q, 1)),
    }


def sweep_cells(ms, ns, qs, rs, kind, seed, k, verify):
    """Grid cells in index order: m, then q, then r."""
    if ns is not None and len(ns) != len(ms):
        raise InputError("n: must list one value per m")
    cells = []
    for a, m in enumerate(ms):
        n = m if ns is None else ns[a]
        if m < 0 or n < 0:
            raise InputError("m, n: must be nonnegative")
        for qt in qs:
            q = n if qt == "n" else int(qt)
            if n and not 1 <= q <= n:
                raise InputError(f"q: {q} outside 1..{n}")
            for r in rs:
                if r < 2:
                    raise InputError("r: must be at least 2")
                cells.append((len(cells), kind, m, n, q, r, seed, k, verify))
    if not cells:
        raise InputError("grid: no cells")
    return cells


def run_sweep(cells, jobs=1):
    if jobs <= 1 or len(cells) == 1:
        return [sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        # map preserves submission order, so rows follow the grid index
        return list(ex.map(sweep_cell, cells))


def cmd_sweep(args, cfg):
    qs = [t.strip() for t in args.q.split(",") if t.strip()]
    for t in qs:
        if t != "n" and not t.lstrip("-").isdigit():
            raise InputError(f"q: expected integers or 'n', got {t!r}")
    cells = sweep_cells(
        _int_list(args.m, "m"),
        _int_list(args.n, "n") if args.n else None,
        qs,
        _int_list(args.r, "r"),
        args.kind,
        cfg.seed,
        args.k,
        cfg.verify,
    )
    rows = run_sweep(cells, cfg.jobs)
    _emit(cfg, rows, rows=rows, columns=SWEEP_COLUMNS, default="csv")


# ---------------------------------------------------------------------------
# parser


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for sweep")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default=argparse.SUPPRESS)
    p.add_argument("--verify", action="store_true", default=argparse.SUPPRESS, help="cross-check against an oracle")
    p.add_argument("--out", default=argparse.SUPPRESS, help="write the report here instead of stdout")
    return p


def _poly_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--poly", help="polynomial file ('# vars x y z' then 'coeff ex ey ez' lines)")
    g.add_argument("--expr", help="polynomial expression in x, y, z")


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="incidence", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--radius-sq", type=int, default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count", parents=[common], help="count incidences")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", choices=("bruteforce", "partition"), default="partition")
    p.add_argument("--r", type=int, default=8)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("crossings", parents=[common], help="circle/surface crossings")
    p.add_argument("--in", dest="input", required=True)
    _poly_args(p)
    p.set_defaults(func=cmd_crossings)

    p = sub.add_parser("partition", parents=[common], help="build a partitioning polynomial")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--r", type=int, default=8)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("flecnode", parents=[common], help="flecnode polynomial")
    _poly_args(p)
    p.add_argument("--backend", choices=("flint", "python"), default="flint")
    p.set_defaults(func=cmd_flecnode)

    p = sub.add_parser("ruled", parents=[common], help="ruledness verdict")
    _poly_args(p)
    p.add_argument("--budget", type=int, default=400)
    p.add_argument("--backend", choices=("flint", "python"), default="flint")
    p.set_defaults(func=cmd_ruled)

    p = sub.add_parser("plucker", parents=[common], help="Plücker coordinates of a line")
    p.add_argument("--line", help="bx,by,bz,dx,dy,dz")
    p.add_argument("--coords", help="x0,...,x5")
    p.set_defaults(func=cmd_plucker)

    p = sub.add_parser("triangles", parents=[common], help="similar triangles")
    p.add_argument("--in", dest="input")
    p.add_argument("--cloud", type=int, help="use a seeded cloud of this many points")
    p.add_argument("--sides", help="squared side lengths |uv|^2,|uw|^2,|vw|^2")
    p.add_argument("--lam")
    p.add_argument("--mu")
    p.set_defaults(func=cmd_triangles)

    p = sub.add_parser("unit", parents=[common], help="unit-circle tools")
    p.add_argument("--in", dest="input")
    p.add_argument("--sigma", help="ox,oy,oz,ax,ay,az: classify the sigma surface")
    p.set_defaults(func=cmd_unit)

    p = sub.add_parser("bounds", parents=[common], help="evaluate closed-form bounds")
    p.add_argument("--which", help="comma list from " + ",".join(bnd.BOUNDS))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--eps", default="1/100")
    p.add_argument("--A", default="2")
    p.add_argument("--dim", type=int, default=3)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", parents=[common], help="parameter sweep to CSV")
    p.add_argument("--m", required=True, help="comma list of point counts")
    p.add_argument("--n", help="comma list of circle counts (default n = m)")
    p.add_argument("--q", default="n", help="comma list of caps; 'n' means q = n")
    p.add_argument("--r", default="8", help="comma list of partition parameters")
    p.add_argument("--k", type=int, default=3, help="richness threshold for the census")
    p.add_argument("--kind", choices=("capped_spheres", "unit_bundle", "random"), default="capped_spheres")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = ExperimentConfig(
        command=args.command,
        seed=getattr(args, "seed", DEFAULT_SEED),
        jobs=getattr(args, "jobs", 1),
        fmt=getattr(args, "fmt", None),
        verify=getattr(args, "verify", False),
        out=getattr(args, "out", None),
    )
    try:
        args.func(args, cfg)
    except (VerifyError, ShapeMismatch) as exc:
        print(f"incidence: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, InstanceFormatError) as exc:
        print(f"incidence: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CirclabError as exc:
        print(f"incidence: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"incidence: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
