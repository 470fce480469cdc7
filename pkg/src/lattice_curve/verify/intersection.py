"""Numerical check of the curvature-intersection lemma.

If a convex C² arc with total curvature at most π meets a circle of radius R
in three or more points, some point of the arc has curvature exactly 1/R.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..curve import stats
from ..errors import FewerThanThreeIntersections
from ..numerics import bisect_root, golden_section

SCAN = 4096


@dataclass
class IntersectionVerdict:
    applicable: bool
    reason: str
    intersections: list = field(default_factory=list)
    coincident: bool = False
    total_curvature: float | None = None
    witness_t: float | None = None
    kappa_at_witness: float | None = None
    abs_error: float | None = None
    tol: float | None = None
    holds: bool | None = None

    def to_json(self):
        return asdict(self)


def _sign_change_roots(f, ts, vals, width):
    roots = []
    for i in np.flatnonzero(vals == 0.0):
        roots.append(float(ts[i]))
    cross = np.flatnonzero(vals[:-1] * vals[1:] < 0)
    for i in cross:
        roots.append(bisect_root(f, float(ts[i]), float(ts[i + 1]), float(vals[i]), float(vals[i + 1]), width))
    return sorted(roots)


def circle_intersections(C, center, R, samples=SCAN):
    """Parameters where ‖γ(t) - center‖ = R, or None if the arc lies on the circle."""
    center = np.asarray(center, dtype=float)

    def resid(t):
        p = C.point(t) - center
        return np.hypot(p[..., 0], p[..., 1]) - R

    ts = np.linspace(C.t0, C.t1, samples + 1)
    vals = resid(ts)
    if np.all(np.abs(vals) <= 1e-12 * max(R, 1.0)):
        return None
    if C.closed:
        # drop the duplicated seam sample so a crossing there counts once
        vals_closed = np.concatenate([vals[:-1], vals[:1]])
        ts_closed = np.concatenate([ts[:-1], [C.t1]])
        roots = _sign_change_roots(lambda t: float(resid(t)), ts_closed[:-1], vals_closed[:-1], 1e-12 * (C.t1 - C.t0))
        last = (vals_closed[-2], vals_closed[-1])
        if last[0] * last[1] < 0:
            roots.append(bisect_root(lambda t: float(resid(t)), float(ts[-2]), float(C.t1),
                                     float(last[0]), float(last[1]), 1e-12 * (C.t1 - C.t0)))
        return sorted(roots)
    return _sign_change_roots(lambda t: float(resid(t)), ts, vals, 1e-12 * (C.t1 - C.t0))


def check_curvature_intersection(C, center, R, tau=None, strict=False, samples=SCAN):
    """Find a parameter where κ = 1/R, given at least three crossings with the circle.

    Not applicable when fewer than three intersections are found (raises
    FewerThanThreeIntersections if ``strict``) or when an open arc turns by
    more than π. The witness must satisfy |κ - 1/R| ≤ 1e-6 / R.
    """
    R = float(R)
    tol = 1e-6 / R
    roots = circle_intersections(C, center, R, samples)
    coincident = roots is None
    if not coincident and len(roots) < 3:
        if strict:
            raise FewerThanThreeIntersections(f"found {len(roots)} intersections with the circle")
        return IntersectionVerdict(False, "fewer_than_three_intersections", roots, tol=tol)
    if tau is None:
        tau = stats(C).total_curvature
    if not C.closed and tau > math.pi * (1 + 1e-12):
        return IntersectionVerdict(False, "total_curvature_exceeds_pi", roots or [], coincident, tau, tol=tol)

    def g(t):
        return C.curvature(t) - 1.0 / R

    ts = np.linspace(C.t0, C.t1, samples + 1)
    vals = g(ts)
    width = 1e-12 * (C.t1 - C.t0)
    zero = np.flatnonzero(vals == 0.0)
    cross = np.flatnonzero(vals[:-1] * vals[1:] < 0)
    if len(zero):
        t_w = float(ts[zero[0]])
    elif len(cross):
        i = int(cross[0])
        t_w = bisect_root(lambda t: float(g(t)), float(ts[i]), float(ts[i + 1]), float(vals[i]), float(vals[i + 1]), width)
    else:
        i = int(np.argmin(np.abs(vals)))
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples)]
        t_w, _ = golden_section(lambda t: abs(float(g(t))), float(lo), float(hi), width)
    kappa = float(C.curvature(t_w))
    err = abs(kappa - 1.0 / R)
    return IntersectionVerdict(True, "ok", [] if coincident else roots, coincident, float(tau),
                               t_w, kappa, err, tol, bool(err <= tol))
