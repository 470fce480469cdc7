"""Constructions showing the leading constants cannot be improved."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..counting import count_on
from ..curve import CircleArc, ParabolaArc, stats
from ..errors import ArcTooLong, ConfigInvalid
from ..lattice import Lattice, wedge


def build_schinzel_instance(L_arc, R):
    """Circle arc of length L_arc and radius R with three lattice points at arc spacing L_arc/2.

    The lattice is generated by the three points, so it has fundamental area
    equal to twice the inscribed triangle area. Returns (curve, lattice, points).
    """
    L_arc, R = float(L_arc), float(R)
    if not (L_arc > 0 and R > 0):
        raise ValueError("arc length and radius must be positive")
    if L_arc > math.pi * R:
        raise ArcTooLong(f"arc length {L_arc} exceeds half the circumference {math.pi * R}")
    h = L_arc / (2 * R)
    angles = np.array([-h, 0.0, h])
    P = R * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    # chords from the sine-difference identity; subtracting nearby points loses digits for large R
    half = 0.5 * (angles[1:] - angles[0])
    mid = 0.5 * (angles[1:] + angles[0])
    V = (2 * R * np.sin(half))[:, None] * np.stack([-np.sin(mid), np.cos(mid)], axis=1)
    lattice = Lattice(P[0], V[0], V[1])
    return CircleArc((0.0, 0.0), R, -h, h), lattice, lattice.point(np.arange(3) > 0, np.arange(3) > 1)


def schinzel_area(L_arc, R):
    """Fundamental area of the Schinzel lattice in closed form: abc / (2R)."""
    a = 2 * R * math.sin(L_arc / (4 * R))
    c = 2 * R * math.sin(L_arc / (2 * R))
    return a * a * c / (2 * R)


def build_parabolic_instance(lattice, n, a):
    """Parabola arc through n lattice points at t = a, ..., a+n-1.

    Uses c(t) = v0 + t v1 + t(t+1)/2 v2 with the lattice generators; v2 is
    negated when v1 ∧ v2 < 0 so the arc has positive curvature.
    """
    n = int(n)
    if n < 2:
        raise ValueError("need at least two lattice points")
    v1, v2 = lattice.v1, lattice.v2
    if wedge(v1, v2) < 0:
        v2 = -v2
    a = float(a)
    return ParabolaArc(lattice.v0, v1, v2, a, a + n - 1)


@dataclass
class SharpnessReport:
    family: str
    params: dict
    rows: list = field(default_factory=list)
    limit_estimate: float | None = None
    expected_limit: float | None = None
    notes: str = ""

    def to_json(self):
        return asdict(self)


def _richardson(xs, ys):
    """Extrapolate ys(x) → x=∞ assuming error ~ C/x from the last two rows."""
    if len(ys) < 2:
        return ys[-1] if ys else None
    x0, x1, y0, y1 = xs[-2], xs[-1], ys[-2], ys[-1]
    return y1 + (y1 - y0) / (x1 / x0 - 1.0)


def schinzel_sweep(L_arc=1.0, R_values=(1, 10, 100, 1000)):
    """Ratio 2 (A R)^{1/3} / L along R; tends to 1 from below."""
    rows = []
    for R in R_values:
        C, lattice, _ = build_schinzel_instance(L_arc, R)
        A = lattice.fundamental_area
        bound_side = 2.0 * (A * R) ** (1 / 3)
        rows.append({
            "R": float(R), "L": float(L_arc), "A": A, "A_closed_form": schinzel_area(L_arc, R),
            "bound_side": bound_side, "ratio": bound_side / L_arc, "count": count_on(C, lattice).count,
        })
    return SharpnessReport(
        "schinzel", {"L": L_arc, "R": list(map(float, R_values))}, rows,
        limit_estimate=rows[-1]["ratio"], expected_limit=1.0,
        notes="ratio = 2 (A R)^{1/3} / L; three lattice points on an arc at the at-most-two threshold",
    )


def parabolic_sweep(n=3, a_values=(10, 100, 1000, 10000), lattice=None):
    """Quantity τ R2 / (A R1)^{1/3} along a for n lattice points on a parabola arc.

    The observed limit is n - 1 (the arc spans n - 1 parameter units), so the
    quantity falls below n + 2 only once a is large enough. The count n stays
    below quantity + 2 at every a.
    """
    lattice = Lattice((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)) if lattice is None else lattice
    rows = []
    for a in a_values:
        C = build_parabolic_instance(lattice, n, a)
        st = stats(C)
        A = lattice.fundamental_area
        q = st.total_curvature * st.R2 / (A * st.R1) ** (1 / 3)
        count = count_on(C, lattice).count
        rows.append({
            "a": float(a), "n": int(n), "tau": st.total_curvature, "R1": st.R1, "R2": st.R2,
            "quantity": q, "below_n_plus_2": bool(q < n + 2), "bound_side": q + 2.0, "count": count,
            "ratio": count / (q + 2.0),
        })
    xs = [r["a"] for r in rows]
    ys = [r["quantity"] for r in rows]
    return SharpnessReport(
        "parabolic", {"n": int(n), "a": list(map(float, a_values)), "lattice": lattice.to_json()}, rows,
        limit_estimate=_richardson(xs, ys), expected_limit=float(n - 1),
        notes="quantity = τ R2 / (A R1)^{1/3}; converges like C/a to n - 1",
    )


def sharpness_sweep(family, **params):
    if family == "schinzel":
        return schinzel_sweep(**params)
    if family == "parabolic":
        return parabolic_sweep(**params)
    raise ConfigInvalid(f"unknown sharpness family {family!r}; use 'schinzel' or 'parabolic'")
