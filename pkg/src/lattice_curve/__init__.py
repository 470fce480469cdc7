"""Lattice points on and near convex plane curves: counting and curvature bounds."""

from .bounds import THEOREM_IDS, BoundVerdict, Instance, evaluate, evaluate_all
from .counting import CountReport, count_near, count_on, distance_to_curve, exact_circle_count
from .curve import CircleArc, CurveStats, EllipseArc, ParabolaArc, ParamC2, curve_from_json, stats
from .lattice import AffineMap2, Lattice, enumerate_in_box, hexagonal_lattice, integer_lattice

__all__ = [
    "AffineMap2", "BoundVerdict", "CircleArc", "CountReport", "CurveStats", "EllipseArc", "Instance",
    "Lattice", "ParabolaArc", "ParamC2", "THEOREM_IDS", "count_near", "count_on", "curve_from_json",
    "distance_to_curve", "enumerate_in_box", "evaluate", "evaluate_all", "exact_circle_count",
    "hexagonal_lattice", "integer_lattice", "stats",
]
