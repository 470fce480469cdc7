"""Brute-force lattice point counts on and near a curve."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .curve import CircleArc
from .errors import NotIntegerInstance, TooManyCandidates
from .lattice import Lattice, box_candidate_count, enumerate_in_box

MAX_CANDIDATES = 10**8
SCAN_SAMPLES = 1024
ON_CURVE_NOTE = (
    "on-curve membership is the numerical classification distance <= eps_on; "
    "it is not an exact algebraic test"
)


@dataclass
class CountReport:
    mode: str
    eps_or_delta: float
    points: list = field(default_factory=list)
    note: str = ""

    @property
    def count(self):
        return len(self.points)

    def lattice_points(self):
        return np.array([p["lattice_point"] for p in self.points]).reshape(-1, 2)

    def to_json(self):
        return {
            "mode": self.mode,
            "eps_or_delta": self.eps_or_delta,
            "count": self.count,
            "points": self.points,
            "note": self.note,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "x", "y", "distance", "t_star"])
        for p in self.points:
            w.writerow([p["coords"][0], p["coords"][1], repr(p["lattice_point"][0]),
                        repr(p["lattice_point"][1]), repr(p["distance"]), repr(p["t_star"])])
        return buf.getvalue()


def _circle_distance(C, Q):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    rel = Q - C.center
    r = np.hypot(rel[:, 0], rel[:, 1])
    phi = np.arctan2(rel[:, 1], rel[:, 0])
    span = C.t1 - C.t0
    # angle of Q measured from t0 in [0, 2π)
    off = np.mod(phi - C.t0, 2 * math.pi)
    inside = off <= span
    t_rad = C.t0 + off
    d_rad = np.abs(r - C.R)
    ends = C.point(np.array([C.t0, C.t1]))
    d0 = np.hypot(*(Q - ends[0]).T)
    d1 = np.hypot(*(Q - ends[1]).T)
    t_end = np.where(d0 <= d1, C.t0, C.t1)
    d_end = np.minimum(d0, d1)
    dist = np.where(inside, d_rad, d_end)
    tstar = np.where(inside, t_rad, t_end)
    # the center is equidistant from every curve point
    at_center = r == 0
    dist = np.where(at_center, C.R, dist)
    tstar = np.where(at_center, C.t0, tstar)
    return dist, tstar


def _ternary_vec(f, lo, hi, width):
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    span = float(np.max(b - a)) if len(a) else 0.0
    iters = 0 if span <= width else int(math.ceil(math.log(width / span) / math.log(2.0 / 3.0)))
    for _ in range(iters):
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        left = f(m1) <= f(m2)
        b = np.where(left, m2, b)
        a = np.where(left, a, m1)
    return 0.5 * (a + b)


def distances_to_curve(C, Q, samples=SCAN_SAMPLES):
    """Vectorized :func:`distance_to_curve` for an array of query points."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if isinstance(C, CircleArc):
        return _circle_distance(C, Q)
    if len(Q) == 0:
        return np.empty(0), np.empty(0)
    # closed curves use n+1 samples so the seam is bracketed from both sides
    ts = np.linspace(C.t0, C.t1, samples + 1 if C.closed else samples)
    step = ts[1] - ts[0]
    pts = C.point(ts)
    d2 = np.sum((Q[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    prev = np.concatenate([np.full((len(Q), 1), np.inf), d2[:, :-1]], axis=1)
    nxt = np.concatenate([d2[:, 1:], np.full((len(Q), 1), np.inf)], axis=1)
    qi, si = np.nonzero((d2 <= prev) & (d2 <= nxt))
    lo = np.maximum(ts[si] - step, C.t0)
    hi = np.minimum(ts[si] + step, C.t1)
    Qp = Q[qi]

    def sq(t):
        return np.sum((C.point(t) - Qp) ** 2, axis=-1)

    t = _ternary_vec(sq, lo, hi, 1e-12 * (C.t1 - C.t0))
    # endpoints are candidates too: the minimum may sit on the domain boundary
    cand_t = np.concatenate([t, np.full(len(Q), C.t0), np.full(len(Q), C.t1)])
    cand_q = np.concatenate([qi, np.arange(len(Q)), np.arange(len(Q))])
    cand_d = np.sum((C.point(cand_t) - Q[cand_q]) ** 2, axis=-1)
    order = np.lexsort((cand_d, cand_q))
    first = np.ones(len(order), dtype=bool)
    first[1:] = cand_q[order][1:] != cand_q[order][:-1]
    best = order[first]
    dist = np.sqrt(cand_d[best])
    tstar = cand_t[best]
    if C.closed:
        tstar = np.where(tstar >= C.t1, C.t0, tstar)
    return dist, tstar


def distance_to_curve(C, Q):
    """(distance, t*) from point Q to curve C.

    Circles use radial projection clamped to the angular window. Other curves
    are scanned at 1024 parameters; every local minimum of the squared
    distance is refined by ternary search to width 1e-12 of the domain.
    """
    d, t = distances_to_curve(C, np.asarray(Q, dtype=float).reshape(1, 2))
    return float(d[0]), float(t[0])


def _segment_distance(P, A, B):
    AB = B - A
    denom = np.sum(AB * AB, axis=-1)
    s = np.where(denom > 0, np.sum((P - A) * AB, axis=-1) / np.where(denom > 0, denom, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    X = A + s[:, None] * AB
    return np.hypot(*(P - X).T)


def _near_candidates(C, L, radius):
    """Lattice points that may lie within ``radius`` of C (a superset, never a subset)."""
    x0, y0, x1, y1 = C.bbox()
    box = (x0 - radius, y0 - radius, x1 + radius, y1 + radius)
    n_cand = box_candidate_count(L, box)
    if n_cand > MAX_CANDIDATES:
        raise TooManyCandidates(f"bounding box holds ~{n_cand} lattice candidates (limit {MAX_CANDIDATES})")
    pts, coords = enumerate_in_box(L, box, with_coords=True)
    if len(pts) == 0:
        return pts, coords
    _, rough, _ = C.polyline(SCAN_SAMPLES)
    length = float(np.sum(np.hypot(*(rough[1:] - rough[:-1]).T)))
    n = int(np.clip(8 * length / L.min_distance, SCAN_SAMPLES, 2**18))
    _, poly, dev = C.polyline(n)
    A, B = poly[:-1], poly[1:]
    mids = 0.5 * (A + B)
    half = 0.5 * float(np.max(np.hypot(*(B - A).T)))
    scale = max(1.0, float(np.max(np.abs(poly))))
    reach = radius + dev + 1e-12 * scale
    tree = cKDTree(mids)
    d, _ = tree.query(pts, distance_upper_bound=reach + half)
    keep = np.isfinite(d)
    pts, coords = pts[keep], coords[keep]
    if len(pts) == 0:
        return pts, coords
    near = np.zeros(len(pts), dtype=bool)
    for k, segs in enumerate(tree.query_ball_point(pts, reach + half)):
        if segs:
            segs = np.asarray(segs)
            P = np.broadcast_to(pts[k], (len(segs), 2))
            near[k] = np.min(_segment_distance(P, A[segs], B[segs])) <= reach
    return pts[near], coords[near]


def _report(C, L, thr, mode, strict):
    pts, coords = _near_candidates(C, L, thr)
    dist, tstar = distances_to_curve(C, pts)
    keep = dist < thr if strict else dist <= thr
    pts, coords, dist, tstar = pts[keep], coords[keep], dist[keep], tstar[keep]
    order = np.lexsort((coords[:, 1], coords[:, 0], tstar)) if len(pts) else []
    rows = [
        {
            "lattice_point": [float(pts[i, 0]), float(pts[i, 1])],
            "coords": [int(coords[i, 0]), int(coords[i, 1])],
            "distance": float(dist[i]),
            "t_star": float(tstar[i]),
        }
        for i in order
    ]
    return CountReport(mode, float(thr), rows, ON_CURVE_NOTE if mode == "on_curve" else "")


def default_eps_on(C):
    return 1e-9 * C.diameter()


def count_on(C, L, eps_on=None):
    """Lattice points at distance ≤ eps_on from C (default 1e-9 × diameter)."""
    eps = default_eps_on(C) if eps_on is None else float(eps_on)
    if not eps > 0:
        raise ValueError("eps_on must be positive")
    return _report(C, L, eps, "on_curve", strict=False)


def count_near(C, L, delta):
    """Lattice points at distance strictly less than delta from C."""
    delta = float(delta)
    if not delta > 0:
        raise ValueError("delta must be positive")
    return _report(C, L, delta, "near_curve", strict=True)


def _is_integer(x):
    return float(x) == math.floor(float(x))


def exact_circle_count(center, R2, arc=None, L=None):
    """Exact number of points of Z² on ``(x-cx)² + (y-cy)² = R2``.

    ``arc`` is an optional closed angle window (θ0, θ1) measured at the
    center. The lattice, when given, must be Z² itself (integer generators of
    determinant ±1 and an integer origin).
    """
    if L is not None:
        gens = np.concatenate([L.v0, L.v1, L.v2])
        if not all(_is_integer(g) for g in gens) or round(L.fundamental_area) != 1:
            raise NotIntegerInstance("lattice is not Z² (or an integer translate of it)")
    if not (all(_is_integer(c) for c in center) and _is_integer(R2)):
        raise NotIntegerInstance(f"center {center} and R² {R2} must be integers")
    cx, cy = (int(c) for c in center)
    R2 = int(R2)
    if R2 < 0:
        raise NotIntegerInstance("R² must be non-negative")
    r = math.isqrt(R2)
    sols = []
    for dx in range(-r, r + 1):
        rem = R2 - dx * dx
        s = math.isqrt(rem)
        if s * s == rem:
            sols.append((dx, s))
            if s:
                sols.append((dx, -s))
    if arc is None:
        return len(sols)
    t0, t1 = float(arc[0]), float(arc[1])
    span = t1 - t0
    count = 0
    for dx, dy in sols:
        off = (math.atan2(dy, dx) - t0) % (2 * math.pi)
        if off <= span + 1e-12 or off >= 2 * math.pi - 1e-12:
            count += 1
    return count


def exact_circle_points(center, R2):
    """Lattice points of Z² on the integer circle, for building test instances."""
    cx, cy = (int(c) for c in center)
    R2 = int(R2)
    r = math.isqrt(R2)
    out = []
    for dx in range(-r, r + 1):
        rem = R2 - dx * dx
        s = math.isqrt(rem)
        if s * s == rem:
            out.append((cx + dx, cy + s))
            if s:
                out.append((cx + dx, cy - s))
    return out


__all__ = [
    "CountReport", "Lattice", "count_near", "count_on", "default_eps_on", "distance_to_curve",
    "distances_to_curve", "exact_circle_count", "exact_circle_points",
]
