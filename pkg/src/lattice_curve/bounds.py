"""Explicit area formulas and lattice-point count bounds, with checked preconditions.

Every theorem bound is exposed through a stable string id (see
:data:`THEOREM_IDS`). :func:`evaluate` returns a :class:`BoundVerdict` that
records each hypothesis as a precondition row, so a caller can tell an
inapplicable bound from a violated one.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ChordTooLong, DeltaNotAdmissible, PerturbationTooLarge, WrongCurveKind

PRECONDITION_SLACK = 1e-8
STRICT_REL = 1e-9
# reported only as reference metadata (optimal constant for Z² and origin-centered circles)
CILLERUELO_GRANVILLE_CONSTANT = 2.0 * 2.0 ** (1.0 / 3.0)

CONIC_KINDS = ("circle_arc", "ellipse_arc")


# --- formulas -----------------------------------------------------------------


def heron_area(a, b, c, R):
    """Area abc/(4R) of a triangle with sides a, b, c inscribed in a circle of radius R."""
    return a * b * c / (4.0 * R)


def heron_area_bound(a, b, R):
    """Strict upper bound (a+b)³/(16R) on the area of an inscribed triangle with sides a, b."""
    return (a + b) ** 3 / (16.0 * R)


def shoelace_area(P0, P1, P2):
    P0, P1, P2 = (np.asarray(p, dtype=float) for p in (P0, P1, P2))
    u, v = P1 - P0, P2 - P0
    return 0.5 * abs(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])


def perturbation_area_bounds(P1, P2, P3, Q1, Q2, Q3, delta, tol=1e-12):
    """Bounds on how much a triangle's area moves under perturbations of size ≤ delta.

    Returns ``(one_point, three_point)``:

    * one_point = ‖P1-P2‖ δ / 2 bounds |Area(P1 P2 P3) - Area(P1 P2 Q3)|
      when only the third vertex moves;
    * three_point = (‖P2-P1‖ + ‖P3-P2‖) δ + 3δ²/2 bounds
      |Area(P1 P2 P3) - Area(Q1 Q2 Q3)| when all three vertices move.
    """
    P = np.array([P1, P2, P3], dtype=float)
    Q = np.array([Q1, Q2, Q3], dtype=float)
    moved = np.hypot(*(P - Q).T)
    if np.any(moved > delta * (1 + tol) + tol):
        j = int(np.argmax(moved))
        raise PerturbationTooLarge(f"vertex {j + 1} moved {moved[j]:.6g} > delta={delta:.6g}")
    a = float(np.hypot(*(P[1] - P[0])))
    b = float(np.hypot(*(P[2] - P[1])))
    return a * delta / 2.0, (a + b) * delta + 1.5 * delta**2


def chord_height(a, R):
    """Height a²/(2R) of the isosceles inscribed triangle with equal sides a over the base chord."""
    if not (0 < a <= 2 * R * (1 + 1e-15)):
        raise ChordTooLong(f"chord {a} does not fit on a circle of radius {R}")
    return a * a / (2.0 * R)


def noncollinearity_threshold(d, R):
    """Largest δ keeping δ-perturbations of three co-circular points (pairwise ≥ d) non-collinear."""
    s = R + d
    return d * d / (2.0 * (s + math.sqrt(s * s - d * d)))


# --- verdicts -----------------------------------------------------------------


@dataclass
class Precondition:
    name: str
    required: str
    observed: float | bool | str
    satisfied: bool
    marginal: bool = False


@dataclass
class BoundVerdict:
    theorem_id: str
    preconditions: list
    bound_value: float | None
    comparison: str
    claimed_max_count: int | None = None
    applicable: bool = False
    marginal: bool = False
    count_kind: str = "on_curve"
    observed_count: int | None = None
    passed: bool | None = None
    metadata: dict = field(default_factory=dict)

    def check(self, count):
        """Compare an observed count with the bound; only meaningful when applicable."""
        self.observed_count = int(count)
        if not self.applicable:
            self.passed = None
        elif self.comparison == "less_equal":
            self.passed = self.observed_count <= int(self.claimed_max_count)
        else:
            b = self.bound_value
            self.passed = self.observed_count < b - STRICT_REL * abs(b)
        return self.passed

    @property
    def ratio(self):
        if self.observed_count is None or not self.applicable:
            return None
        b = self.claimed_max_count if self.comparison == "less_equal" else self.bound_value
        return self.observed_count / b if b else None

    def to_json(self):
        out = asdict(self)
        out["preconditions"] = [asdict(p) if isinstance(p, Precondition) else p for p in self.preconditions]
        return out


def _band(*values):
    return PRECONDITION_SLACK * max(1e-300, *(abs(float(v)) for v in values))


def _le(name, lhs, rhs, label=None):
    """Numeric precondition lhs ≤ rhs (also used for strict <) with a marginal band."""
    band = _band(lhs, rhs)
    return Precondition(
        name, label or f"<= {rhs!r}", float(lhs), bool(lhs <= rhs + band), bool(abs(lhs - rhs) <= band)
    )


def _pos(name, value, scale):
    band = _band(scale)
    return Precondition(name, "> 0", float(value), bool(value > -band), bool(abs(value) <= band))


def _flag(name, observed, required=True):
    return Precondition(name, repr(required), observed, observed == required)


@dataclass(frozen=True)
class Instance:
    """Everything a bound needs: curve kind/closure, curve statistics, lattice data, δ."""

    kind: str
    closed: bool
    length: float
    total_curvature: float
    R1: float
    R2: float
    affine_arclength: float
    A: float
    d: float
    delta: float | None = None
    overrides: tuple = ()

    @classmethod
    def build(cls, curve, stats, lattice, delta=None, overrides=None):
        vals = {
            "length": stats.length, "total_curvature": stats.total_curvature,
            "R1": stats.R1, "R2": stats.R2, "affine_arclength": stats.affine_arclength,
            "A": lattice.fundamental_area, "d": lattice.min_distance,
        }
        overrides = dict(overrides or {})
        unknown = set(overrides) - set(vals)
        if unknown:
            raise ValueError(f"unknown override keys {sorted(unknown)}")
        vals.update({k: float(v) for k, v in overrides.items()})
        if delta is not None and not (math.isfinite(delta) and delta > 0):
            raise DeltaNotAdmissible(f"delta must be a positive finite length, got {delta}")
        return cls(curve.kind, bool(curve.closed), delta=delta,
                   overrides=tuple(sorted(overrides.items())), **vals)


def _verdict(tid, pre, bound, comparison="strict_less", claimed=None, count_kind="on_curve", meta=None):
    applicable = all(p.satisfied for p in pre)
    marginal = applicable and any(p.marginal for p in pre)
    if applicable and not (bound is not None and math.isfinite(bound)):
        applicable = False
        pre = pre + [Precondition("bound_finite", "finite", repr(bound), False)]
    return BoundVerdict(tid, pre, bound if bound is None or math.isfinite(bound) else None,
                        comparison, claimed, applicable, marginal, count_kind, metadata=meta or {})


def _kind(inst, kinds):
    return Precondition("curve_kind", " or ".join(kinds), inst.kind, inst.kind in kinds)


def _closed(inst, want):
    return _flag("closed", inst.closed, want)


# circle theorems: R = R1 = R2 is the circle radius


def _circ_lt3(i):
    R = i.R1
    pre = [_kind(i, ("circle_arc",)), _le("L/R^(1/3) <= 2 A^(1/3)", i.length / R ** (1 / 3), 2 * i.A ** (1 / 3))]
    return _verdict("thm_circ_lt3", pre, 2.0, "less_equal", 2)


def _circ_open(i):
    R = i.R1
    return _verdict("thm_circ_open", [_kind(i, ("circle_arc",))], 2 + i.length / (i.A * R) ** (1 / 3))


def _circ_closed(i):
    R = i.R1
    pre = [_kind(i, ("circle_arc",)), _closed(i, True)]
    return _verdict("thm_circ_closed", pre, 2 * math.pi * R ** (2 / 3) / i.A ** (1 / 3))


def _ell_lt3(i):
    pre = [_kind(i, CONIC_KINDS), _le("Aff <= 2 A^(1/3)", i.affine_arclength, 2 * i.A ** (1 / 3))]
    return _verdict("thm_ell_lt3", pre, 2.0, "less_equal", 2)


def _ell_open(i):
    return _verdict("thm_ell_open", [_kind(i, CONIC_KINDS)], 2 + i.affine_arclength / i.A ** (1 / 3))


def _ell_closed(i):
    pre = [_kind(i, CONIC_KINDS), _closed(i, True)]
    return _verdict("thm_ell_closed", pre, i.affine_arclength / i.A ** (1 / 3))


# general convex arcs; ``expr`` is the length term L/(A R1)^(1/3) or a corollary substitute


def _length_terms(i):
    base = i.length / (i.A * i.R1) ** (1 / 3)
    a = (i.total_curvature * i.R2 / (i.A * i.R1)) ** (1 / 3) * i.length ** (2 / 3)
    b = i.total_curvature * i.R2 / (i.A * i.R1) ** (1 / 3)
    return {"": base, "a": a, "b": b}


def _tau_le_pi(i):
    return _le("total_curvature <= pi", i.total_curvature, math.pi)


def _curv_bds_1(i, expr, tid):
    pre = [_closed(i, False), _tau_le_pi(i), _le("length_term <= 2", expr, 2.0)]
    return _verdict(tid, pre, 2.0, "less_equal", 2, meta={"length_term": expr})


def _curv_open_big(i, expr, tid):
    pre = [_closed(i, False), _le("total_curvature < 2 pi", i.total_curvature, 2 * math.pi)]
    return _verdict(tid, pre, 4 + expr, meta={"length_term": expr})


def _curv_open_small(i, expr, tid):
    pre = [_closed(i, False), _tau_le_pi(i)]
    return _verdict(tid, pre, 2 + expr, meta={"length_term": expr})


def _curv_bds_2(i, expr, tid):
    return _verdict(tid, [_closed(i, True)], expr, meta={"length_term": expr})


_CONVEX = {
    "curv_bds_1": _curv_bds_1,
    "curv_bds_open_big": _curv_open_big,
    "curv_bds_open_small": _curv_open_small,
    "curv_bds_2": _curv_bds_2,
}


def _convex_builder(name, variant):
    fn = _CONVEX[name]
    tid = f"thm_{name}" if not variant else f"cor_rho_r2_{name}_{variant}"
    return tid, lambda i: fn(i, _length_terms(i)[variant], tid)


# near-curve theorems


def _delta_pre(i, R):
    thr = noncollinearity_threshold(i.d, R)
    return [
        Precondition("delta_given", "delta > 0", i.delta if i.delta is not None else "none", i.delta is not None),
        _le("delta < noncollinearity_threshold(d_L, R)", i.delta or 0.0, thr),
    ], thr


def _shrunk_area(i, L=None):
    L = i.length if L is None else L
    return i.A - 2 * L * i.delta - 3 * i.delta**2


def _near_lt3(i):
    if i.delta is None:
        return _verdict("thm_near_lt3", _delta_pre(i, i.R2)[0], None, "less_equal", 2, "near_curve")
    pre, thr = _delta_pre(i, i.R2)
    lhs = i.length**3 / (8 * i.R1) + 2 * i.length * i.delta + 3 * i.delta**2
    pre += [_closed(i, False), _tau_le_pi(i), _le("L^3/(8 R1) + 2 L delta + 3 delta^2 <= A", lhs, i.A)]
    return _verdict("thm_near_lt3", pre, 2.0, "less_equal", 2, "near_curve", {"threshold": thr})


def _near_open(i):
    if i.delta is None:
        return _verdict("thm_near_open", _delta_pre(i, i.R2)[0], None, count_kind="near_curve")
    pre, thr = _delta_pre(i, i.R2)
    pos = i.A / 2 - i.length * i.delta - 1.5 * i.delta**2
    pre += [_closed(i, False), _tau_le_pi(i), _pos("A/2 - L delta - 3/2 delta^2", pos, i.A / 2)]
    shrunk = _shrunk_area(i)
    bound = 2 + i.length / (i.R1 * shrunk) ** (1 / 3) if shrunk > 0 else None
    return _verdict("thm_near_open", pre, bound, count_kind="near_curve", meta={"threshold": thr})


def _near_closed(i):
    if i.delta is None:
        return _verdict("thm_near_closed", _delta_pre(i, i.R2)[0], None, count_kind="near_curve")
    pre, thr = _delta_pre(i, i.R2)
    pos = i.A / 2 - i.length * i.delta - 1.5 * i.delta**2
    pre += [_closed(i, True), _pos("A/2 - L delta - 3/2 delta^2", pos, i.A / 2)]
    shrunk = _shrunk_area(i)
    bound = i.length / (i.R1 * shrunk) ** (1 / 3) if shrunk > 0 else None
    return _verdict("thm_near_closed", pre, bound, count_kind="near_curve", meta={"threshold": thr})


def _near_circ(i, part):
    tid = f"cor_near_circles_{part}"
    if i.delta is None:
        return _verdict(tid, _delta_pre(i, i.R2)[0], None, count_kind="near_curve")
    R, L, dl = i.R1, i.length, i.delta
    pre, thr = _delta_pre(i, R)
    pre = [_kind(i, ("circle_arc",))] + pre
    meta = {"threshold": thr}
    if part == "a":
        pre += [_le("L <= pi R", L, math.pi * R),
                _le("L^3/(8R) + 2 L delta + 3 delta^2 <= A", L**3 / (8 * R) + 2 * L * dl + 3 * dl**2, i.A)]
        return _verdict(tid, pre, 2.0, "less_equal", 2, "near_curve", meta)
    if part == "b":
        pre += [_le("L <= pi R", L, math.pi * R),
                _pos("A/2 - 2 L delta - 3 delta^2", i.A / 2 - 2 * L * dl - 3 * dl**2, i.A / 2)]
        shrunk = i.A - 2 * L * dl - 3 * dl**2
        bound = 2 + L / (R * shrunk) ** (1 / 3) if shrunk > 0 else None
        return _verdict(tid, pre, bound, count_kind="near_curve", meta=meta)
    pre += [_closed(i, True),
            _pos("A/2 - 4 pi R delta - 3 delta^2", i.A / 2 - 4 * math.pi * R * dl - 3 * dl**2, i.A / 2)]
    shrunk = i.A - 4 * math.pi * R * dl - 3 * dl**2
    bound = 2 * math.pi * R ** (2 / 3) / shrunk ** (1 / 3) if shrunk > 0 else None
    meta["formula_note"] = (
        "printed denominator reads (A - 4 pi R - 3 delta^2)^(1/3); evaluated as "
        "(A - 4 pi R delta - 3 delta^2)^(1/3), matching the closed near-curve bound with L = 2 pi R"
    )
    return _verdict(tid, pre, bound, count_kind="near_curve", meta=meta)


_BUILDERS = {
    "thm_circ_lt3": _circ_lt3,
    "thm_circ_open": _circ_open,
    "thm_circ_closed": _circ_closed,
    "thm_ell_lt3": _ell_lt3,
    "thm_ell_open": _ell_open,
    "thm_ell_closed": _ell_closed,
}
for _name in _CONVEX:
    for _variant in ("", "a", "b"):
        _tid, _fn = _convex_builder(_name, _variant)
        _BUILDERS[_tid] = _fn
_BUILDERS.update({
    "thm_near_lt3": _near_lt3,
    "thm_near_open": _near_open,
    "thm_near_closed": _near_closed,
    "cor_near_circles_a": lambda i: _near_circ(i, "a"),
    "cor_near_circles_b": lambda i: _near_circ(i, "b"),
    "cor_near_circles_c": lambda i: _near_circ(i, "c"),
})

THEOREM_IDS = tuple(_BUILDERS)
ON_CURVE_IDS = tuple(t for t in THEOREM_IDS if "near" not in t)
NEAR_CURVE_IDS = tuple(t for t in THEOREM_IDS if "near" in t)


def evaluate(theorem_id, inst):
    try:
        builder = _BUILDERS[theorem_id]
    except KeyError:
        raise KeyError(f"unknown theorem id {theorem_id!r}") from None
    v = builder(inst)
    if inst.overrides:
        v.metadata["overrides"] = dict(inst.overrides)
    return v


def evaluate_all(inst, ids=None):
    ids = THEOREM_IDS if ids is None else ids
    if inst.delta is None:
        ids = [t for t in ids if t not in NEAR_CURVE_IDS]
    return [evaluate(t, inst) for t in ids]


def circle_bounds(inst):
    if inst.kind != "circle_arc":
        raise WrongCurveKind(f"circle bounds need a circle arc, got {inst.kind}")
    return [evaluate(t, inst) for t in ("thm_circ_lt3", "thm_circ_open", "thm_circ_closed")]


def ellipse_bounds(inst):
    if inst.kind not in CONIC_KINDS:
        raise WrongCurveKind(f"ellipse bounds need an ellipse or circle arc, got {inst.kind}")
    return [evaluate(t, inst) for t in ("thm_ell_lt3", "thm_ell_open", "thm_ell_closed")]


def convex_arc_bounds(inst):
    ids = [t for t in THEOREM_IDS if "curv_bds" in t]
    if inst.closed:
        ids = [t for t in ids if t.endswith("curv_bds_2") or "curv_bds_2_" in t]
    else:
        ids = [t for t in ids if "curv_bds_2" not in t]
    return [evaluate(t, inst) for t in ids]


def near_curve_bounds(inst):
    if inst.delta is None:
        raise DeltaNotAdmissible("near-curve bounds need delta")
    return [evaluate(t, inst) for t in NEAR_CURVE_IDS]
