"""Exact incidence counting between points and circles in three dimensions."""

from .engine import (
    CountReport,
    circle_surface_crossings,
    count_bruteforce,
    count_partitioned,
    has_k32,
    incidence_lists,
    rich_points,
)
from .errors import CirclabError
from .generators import GenSpec, generate
from .geometry import Circle3, IncidenceInstance, Line3, Plane, Point3, Sphere, incidence_test
from .io import dumps_instance, load_instance, loads_instance, save_instance
from .partition import build_partition, partition_from_factors
from .poly import MultiPoly

__version__ = "0.1.0"

__all__ = [
    "Circle3",
    "CirclabError",
    "CountReport",
    "GenSpec",
    "IncidenceInstance",
    "Line3",
    "MultiPoly",
    "Plane",
    "Point3",
    "Sphere",
    "build_partition",
    "circle_surface_crossings",
    "count_bruteforce",
    "count_partitioned",
    "dumps_instance",
    "generate",
    "has_k32",
    "incidence_lists",
    "incidence_test",
    "load_instance",
    "loads_instance",
    "partition_from_factors",
    "rich_points",
    "save_instance",
]
