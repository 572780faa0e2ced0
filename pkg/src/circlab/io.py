"""JSON encoding of instances, partitions and reports."""

import json

from .errors import InstanceFormatError, InvalidGeometry
from .geometry import Circle3, IncidenceInstance, Point3
from .rational import as_q, q_json


def _rational(value, path):
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceFormatError(path, "rationals must be integers or 'p/q' strings")
    try:
        return as_q(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(path, f"not a rational: {value!r}") from exc


def _triple(value, path):
    if not isinstance(value, list) or len(value) != 3:
        raise InstanceFormatError(path, "expected a list of 3 rationals")
    return tuple(_rational(v, f"{path}[{i}]") for i, v in enumerate(value))


def instance_from_obj(obj):
    if not isinstance(obj, dict):
        raise InstanceFormatError("$", "expected an object")
    for key in ("points", "circles"):
        if key not in obj:
            raise InstanceFormatError(key, "missing")
        if not isinstance(obj[key], list):
            raise InstanceFormatError(key, "expected a list")
    points = [Point3.of(_triple(p, f"points[{i}]")) for i, p in enumerate(obj["points"])]
    circles = []
    for i, c in enumerate(obj["circles"]):
        path = f"circles[{i}]"
        if not isinstance(c, dict):
            raise InstanceFormatError(path, "expected an object")
        for key in ("n", "d", "c", "r2"):
            if key not in c:
                raise InstanceFormatError(f"{path}.{key}", "missing")
        n = _triple(c["n"], f"{path}.n")
        d = _rational(c["d"], f"{path}.d")
        ctr = _triple(c["c"], f"{path}.c")
        r2 = _rational(c["r2"], f"{path}.r2")
        try:
            circles.append(Circle3(n, d, Point3.of(ctr), r2))
        except InvalidGeometry as exc:
            raise InstanceFormatError(path, str(exc)) from exc
    q = obj.get("q")
    if q is not None and (isinstance(q, bool) or not isinstance(q, int)):
        raise InstanceFormatError("q", "expected an integer")
    inst = IncidenceInstance(points, circles, q)
    if q is not None:
        try:
            inst.validate()
        except InvalidGeometry as exc:
            raise InstanceFormatError("q", str(exc)) from exc
    return inst


def instance_to_obj(inst):
    return {
        "points": [[q_json(v) for v in p] for p in inst.points],
        "circles": [
            {
                "n": [q_json(v) for v in c.normal],
                "d": q_json(c.offset),
                "c": [q_json(v) for v in c.center],
                "r2": q_json(c.radius_sq),
            }
            for c in inst.circles
        ],
        "q": inst.q,
    }


def dumps_instance(inst):
    return json.dumps(instance_to_obj(inst), separators=(",", ":")) + "\n"


def loads_instance(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    return instance_from_obj(obj)


def load_instance(path):
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def save_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))
