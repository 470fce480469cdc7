"""Random instance generators for the verification campaign.

Every generator takes a ``numpy.random.Generator`` and returns a
``(curve, lattice, meta)`` triple built only from JSON-serializable curve
kinds, so any instance can be dumped and replayed.
"""

from __future__ import annotations

import math

import numpy as np

from ..counting import exact_circle_points
from ..curve import CircleArc, ParabolaArc, apply_affine_to_curve, stats, sub_arc
from ..lattice import AffineMap2, Lattice, apply_affine_to_lattice, integer_lattice, wedge

TAU_MIN = 0.1
TAU_MAX = math.pi - 0.01
MAX_ASPECT = 10.0


def trial_rng(seed, trial):
    """Counter-based stream keyed by (seed, trial); independent of execution order."""
    key = np.array([int(seed) & 0xFFFFFFFFFFFFFFFF, int(trial)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def rotation(alpha):
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]])


def random_lattice(rng):
    """Well-conditioned basis: lengths in [0.5, 2], angle between generators in [π/4, 3π/4]."""
    r1, r2 = rng.uniform(0.5, 2.0, size=2)
    a = rng.uniform(0, 2 * math.pi)
    gap = rng.uniform(math.pi / 4, 3 * math.pi / 4) * rng.choice([-1.0, 1.0])
    v0 = rng.uniform(-1.0, 1.0, size=2)
    return Lattice(v0, r1 * np.array([math.cos(a), math.sin(a)]), r2 * np.array([math.cos(a + gap), math.sin(a + gap)]))


def random_unimodular_integer(rng, steps=4):
    """Random integer matrix of determinant 1 (product of elementary shears)."""
    U = np.eye(2, dtype=np.int64)
    for _ in range(steps):
        k = int(rng.integers(-3, 4))
        E = np.array([[1, k], [0, 1]]) if rng.random() < 0.5 else np.array([[1, 0], [k, 1]])
        U = U @ E
    return U


def random_similarity(rng):
    s = rng.uniform(0.5, 2.0)
    return AffineMap2(s * rotation(rng.uniform(0, 2 * math.pi)), rng.uniform(-2, 2, size=2))


def random_affine(rng, max_aspect=MAX_ASPECT):
    """Orientation-preserving map with det in [0.5, 2] and singular-value ratio ≤ max_aspect."""
    det = rng.uniform(0.5, 2.0)
    ratio = math.exp(rng.uniform(0, math.log(max_aspect)))
    s1 = math.sqrt(det * ratio)
    s2 = det / s1
    M = rotation(rng.uniform(0, 2 * math.pi)) @ np.diag([s1, s2]) @ rotation(rng.uniform(0, 2 * math.pi))
    return AffineMap2(M, rng.uniform(-2, 2, size=2))


def random_integer_circle(rng, r2_max=10**4, center_range=3):
    """Integer center and integer R² that is a sum of two squares (so the circle meets Z²)."""
    while True:
        R2 = int(rng.integers(1, r2_max + 1))
        center = tuple(int(c) for c in rng.integers(-center_range, center_range + 1, size=2))
        pts = exact_circle_points(center, R2)
        if pts:
            return center, R2, pts


def tangent_turn(C, t0, t1):
    """Turning of the tangent between parameters t0 < t1 (valid for turns below 2π)."""
    g0, g1 = C.d1(t0), C.d1(t1)
    return float(np.mod(math.atan2(wedge(g0, g1), float(g0 @ g1)), 2 * math.pi))


def _open_window(rng, C_full, start=None, tau_range=(TAU_MIN, TAU_MAX)):
    """Parameter window on a closed conic whose tangent turns by a τ inside ``tau_range``."""
    for _ in range(50):
        t0 = rng.uniform(0, 2 * math.pi) if start is None else start
        span = rng.uniform(tau_range[0], tau_range[1])
        # for ellipses the parameter span is not τ; shrink until τ fits
        for _ in range(60):
            tau = tangent_turn(C_full, t0, t0 + span)
            if tau_range[0] <= tau <= tau_range[1]:
                return t0, t0 + span
            span *= 0.8 if tau > tau_range[1] else 1.1
            if span >= 2 * math.pi:
                break
    return None


def _circle_angle(center, P):
    return math.atan2(P[1] - center[1], P[0] - center[0])


def circle_instance(rng, r2_max=10**4, p_full=0.35, p_transport=0.6):
    """Integer circle on Z², optionally moved by a random similarity."""
    center, R2, pts = random_integer_circle(rng, r2_max)
    R = math.sqrt(R2)
    full = CircleArc(center, R)
    if rng.random() < p_full:
        curve = full
        window = None
    else:
        start = _circle_angle(center, pts[int(rng.integers(len(pts)))]) if rng.random() < 0.5 else None
        t0, t1 = _open_window(rng, full, start)
        curve = CircleArc(center, R, t0, t1)
        window = (t0, t1)
    lattice = integer_lattice()
    meta = {"center": list(center), "R2": R2, "window": window, "transport": None}
    if rng.random() < p_transport:
        phi = random_similarity(rng)
        curve = apply_affine_to_curve(phi, curve)
        lattice = apply_affine_to_lattice(phi, lattice)
        meta["transport"] = phi.to_json()
    return curve, lattice, meta


def ellipse_instance(rng, r2_max=2500, p_full=0.35):
    """Integer circle pushed forward by a random orientation-preserving affine map."""
    center, R2, pts = random_integer_circle(rng, r2_max)
    R = math.sqrt(R2)
    phi = random_affine(rng)
    full = apply_affine_to_curve(phi, CircleArc(center, R))
    lattice = apply_affine_to_lattice(phi, integer_lattice())
    if rng.random() < p_full:
        return full, lattice, {"center": list(center), "R2": R2, "transport": phi.to_json()}
    image_pts = phi(np.array(pts, dtype=float))
    start = None
    if rng.random() < 0.5:
        P = image_pts[int(rng.integers(len(image_pts)))]
        rel = np.linalg.solve(full._Tinv, P - full.center)
        start = math.atan2(rel[1], rel[0])
    window = _open_window(rng, full, start)
    if window is None:
        return full, lattice, {"center": list(center), "R2": R2, "transport": phi.to_json()}
    return sub_arc(full, *window), lattice, {"center": list(center), "R2": R2, "transport": phi.to_json()}


def parabola_instance(rng, max_tries=100):
    """Parabola through lattice points at integer parameters, on a random lattice."""
    lattice = random_lattice(rng)
    for _ in range(max_tries):
        p1, q1, p2, q2 = (int(x) for x in rng.integers(-2, 3, size=4))
        if p1 * q2 - p2 * q1 == 0:
            continue
        w1 = p1 * lattice.v1 + q1 * lattice.v2
        w2 = p2 * lattice.v1 + q2 * lattice.v2
        if rng.random() < 0.8:
            m, n = (int(x) for x in rng.integers(-3, 4, size=2))
            v0 = lattice.point(m, n)
        else:
            v0 = lattice.v0 + rng.uniform(-1, 1, size=2)
        a = float(rng.integers(-6, 5))
        npts = int(rng.integers(2, 7))
        b = a + npts - 1 + (rng.uniform(0, 0.9) if rng.random() < 0.5 else 0.0)
        curve = ParabolaArc(v0, w1, w2, a, b)
        tau = tangent_turn(curve, curve.t0, curve.t1)
        if TAU_MIN <= tau <= TAU_MAX:
            return curve, lattice, {"w": [[p1, q1], [p2, q2]]}
    return curve, lattice, {"w": [[p1, q1], [p2, q2]], "tau_out_of_range": True}


def short_arc_instance(rng):
    """Arc short enough for the at-most-two theorems, starting at a lattice point.

    Half the time a circle arc with L = u * 2 (A R)^{1/3}; otherwise a parabola
    arc shortened until L / (A R1)^{1/3} = u * 2, u uniform in [0.3, 1].
    """
    u = rng.uniform(0.3, 1.0)
    if rng.random() < 0.5:
        center, R2, pts = random_integer_circle(rng, 10**4)
        R = math.sqrt(R2)
        start = _circle_angle(center, pts[int(rng.integers(len(pts)))])
        if rng.random() < 0.5:
            start_dir = 1.0
        else:
            start_dir = -1.0
        span = min(u * 2.0 * R ** (1 / 3) / R, TAU_MAX)
        t0, t1 = (start, start + span) if start_dir > 0 else (start - span, start)
        curve = CircleArc(center, R, t0, t1)
        lattice = integer_lattice()
        if rng.random() < 0.5:
            phi = random_similarity(rng)
            curve = apply_affine_to_curve(phi, curve)
            lattice = apply_affine_to_lattice(phi, lattice)
        return curve, lattice, {"family": "circle", "u": u}
    lattice = random_lattice(rng)
    while True:
        p1, q1, p2, q2 = (int(x) for x in rng.integers(-2, 3, size=4))
        if p1 * q2 - p2 * q1:
            break
    w1 = p1 * lattice.v1 + q1 * lattice.v2
    w2 = p2 * lattice.v1 + q2 * lattice.v2
    a = float(rng.integers(-6, 5))
    span = 2.0
    for _ in range(80):
        curve = ParabolaArc(lattice.point(0, 0), w1, w2, a, a + span)
        st = stats(curve)
        term = st.length / (lattice.fundamental_area * st.R1) ** (1 / 3)
        if term <= 2 * u and st.total_curvature <= math.pi:
            break
        span *= 0.7
    return curve, lattice, {"family": "parabola", "u": u}


def admissible_delta(rng, st, lattice, lo=0.05, hi=0.99):
    """δ strictly inside both the noncollinearity and positivity limits."""
    from ..bounds import noncollinearity_threshold

    thr = noncollinearity_threshold(lattice.min_distance, st.R2)
    L, A = st.length, lattice.fundamental_area
    pos = (-L + math.sqrt(L * L + 3 * A)) / 3.0
    return float(rng.uniform(lo, hi) * min(thr, pos))


FAMILIES = {
    "circle": circle_instance,
    "ellipse": ellipse_instance,
    "parabola": parabola_instance,
    "short_arc": short_arc_instance,
}
