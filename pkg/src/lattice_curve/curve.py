"""Positively curved plane arcs and their geometric functionals.

Three curve kinds are supported: circular arcs, ellipse arcs and general
parametric C² arcs (with a serializable parabola family). All evaluators are
vectorized in the parameter and every curve is oriented so that
``γ' ∧ γ'' > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ClosureError, DegenerateBasis, MixedCurvature, NotPositiveDefinite, OutOfDomain
from .lattice import AffineMap2, wedge
from .numerics import adaptive_simpson, golden_section_vec, local_extrema

TWO_PI = 2.0 * math.pi
_SIGN_SAMPLES = 1024
_RHO_SAMPLES = 512


def _unit(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


class Curve:
    """Common interface; subclasses define ``point``, ``d1``, ``d2`` and the domain."""

    kind = "curve"
    t0: float
    t1: float

    @property
    def closed(self):
        return False

    @property
    def domain(self):
        return self.t0, self.t1

    def point(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def speed(self, t):
        g = self.d1(t)
        return np.hypot(g[..., 0], g[..., 1])

    def wedge12(self, t):
        return wedge(self.d1(t), self.d2(t))

    def curvature(self, t):
        g1 = self.d1(t)
        s = np.hypot(g1[..., 0], g1[..., 1])
        return wedge(g1, self.d2(t)) / s**3

    def radius_of_curvature(self, t):
        return 1.0 / self.curvature(t)

    def samples(self, n):
        if self.closed:
            return np.linspace(self.t0, self.t1, n + 1)[:-1]
        return np.linspace(self.t0, self.t1, n)

    def polyline(self, n=1024):
        """Sample ``n`` points and bound how far the curve strays from the chords.

        Returns ``(ts, pts, deviation)``. Between consecutive samples the
        convex curve lies inside the triangle spanned by the chord and the two
        tangent lines, so its distance to the chord is at most
        ``(c/2) tan(Δθ/2)`` for chord length c and tangent turn Δθ < π.
        """
        ts = np.linspace(self.t0, self.t1, n + 1 if self.closed else n)
        pts = self.point(ts)
        tang = self.d1(ts)
        chord = np.hypot(*(pts[1:] - pts[:-1]).T)
        turn = np.arctan2(wedge(tang[:-1], tang[1:]), np.sum(tang[:-1] * tang[1:], axis=1))
        if np.any(turn < 0) or np.any(turn >= 0.5 * math.pi):
            return self.polyline(4 * n) if n < 2**20 else (ts, pts, float(np.max(chord)))
        dev = float(np.max(0.5 * chord * np.tan(0.5 * turn))) if len(chord) else 0.0
        return ts, pts, dev

    def bbox(self, n=4096):
        _, pts, dev = self.polyline(n)
        lo = pts.min(axis=0) - dev
        hi = pts.max(axis=0) + dev
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def diameter(self):
        x0, y0, x1, y1 = self.bbox()
        return float(math.hypot(x1 - x0, y1 - y0))

    def check_param(self, t):
        t = np.asarray(t, dtype=float)
        span = self.t1 - self.t0
        if np.any(t < self.t0 - 1e-12 * span) or np.any(t > self.t1 + 1e-12 * span):
            raise OutOfDomain(f"parameter {t} outside [{self.t0}, {self.t1}]")
        return np.clip(t, self.t0, self.t1)

    def to_json(self):
        raise TypeError(f"{type(self).__name__} has no JSON descriptor")


class CircleArc(Curve):
    kind = "circle_arc"

    def __init__(self, center, R, theta0=0.0, theta1=TWO_PI):
        self.center = np.asarray(center, dtype=float).reshape(2)
        self.R = float(R)
        self.t0 = float(theta0)
        self.t1 = float(theta1)
        span = self.t1 - self.t0
        if not self.R > 0:
            raise ValueError(f"circle radius must be positive, got {R}")
        if not (0 < span <= TWO_PI * (1 + 1e-12)):
            raise ValueError(f"circle arc angle must lie in (0, 2π], got {span}")

    @property
    def closed(self):
        return self.t1 - self.t0 >= TWO_PI * (1 - 1e-12)

    def point(self, t):
        return self.center + self.R * _unit(t)

    def d1(self, t):
        u = _unit(t)
        return self.R * np.stack([-u[..., 1], u[..., 0]], axis=-1)

    def d2(self, t):
        return -self.R * _unit(t)

    def to_json(self):
        return {"kind": self.kind, "center": self.center.tolist(), "R": self.R, "theta": [self.t0, self.t1]}

    def __repr__(self):
        return f"CircleArc(center={self.center.tolist()}, R={self.R}, theta=[{self.t0}, {self.t1}])"


def _sym_sqrt(Q):
    w, V = np.linalg.eigh(Q)
    return (V * np.sqrt(w)) @ V.T, (V / np.sqrt(w)) @ V.T


class EllipseArc(Curve):
    """Arc of ``(x-c)ᵀ Q (x-c) = 1`` parametrized as ``c + Q^{-1/2} (cos θ, sin θ)``."""

    kind = "ellipse_arc"

    def __init__(self, center, Q, theta0=0.0, theta1=TWO_PI):
        self.center = np.asarray(center, dtype=float).reshape(2)
        Q = np.asarray(Q, dtype=float).reshape(2, 2)
        if abs(Q[0, 1] - Q[1, 0]) > 1e-12 * np.abs(Q).max():
            raise NotPositiveDefinite(f"quadratic form must be symmetric: {Q.tolist()}")
        Q = 0.5 * (Q + Q.T)
        if not (np.linalg.det(Q) > 0 and np.trace(Q) > 0):
            raise NotPositiveDefinite(f"quadratic form is not positive definite: {Q.tolist()}")
        self.Q = Q
        self._T, self._Tinv = _sym_sqrt(Q)
        self.t0 = float(theta0)
        self.t1 = float(theta1)
        span = self.t1 - self.t0
        if not (0 < span <= TWO_PI * (1 + 1e-12)):
            raise ValueError(f"ellipse arc angle must lie in (0, 2π], got {span}")

    @property
    def closed(self):
        return self.t1 - self.t0 >= TWO_PI * (1 - 1e-12)

    def point(self, t):
        return self.center + _unit(t) @ self._Tinv.T

    def d1(self, t):
        u = _unit(t)
        return np.stack([-u[..., 1], u[..., 0]], axis=-1) @ self._Tinv.T

    def d2(self, t):
        return -_unit(t) @ self._Tinv.T

    def to_json(self):
        return {"kind": self.kind, "center": self.center.tolist(), "Q": self.Q.tolist(), "theta": [self.t0, self.t1]}

    def __repr__(self):
        return f"EllipseArc(center={self.center.tolist()}, Q={self.Q.tolist()}, theta=[{self.t0}, {self.t1}])"


class ParamC2(Curve):
    """General C² arc from vectorized evaluators of γ, γ', γ''.

    The orientation is reversed when γ'∧γ'' is negative on all 1024 check
    samples; mixed signs are rejected.
    """

    kind = "param_c2"

    def __init__(self, gamma, d1, d2, t0, t1, closed=False):
        self.t0 = float(t0)
        self.t1 = float(t1)
        if not self.t1 > self.t0:
            raise ValueError(f"empty parameter interval [{t0}, {t1}]")
        self._g, self._g1, self._g2 = gamma, d1, d2
        self._closed = bool(closed)
        self.reversed = False
        ts = np.linspace(self.t0, self.t1, _SIGN_SAMPLES)
        w = wedge(d1(ts), d2(ts))
        if np.all(w < 0):
            self.reversed = True
        elif not np.all(w > 0):
            raise MixedCurvature("γ'∧γ'' changes sign or vanishes; only convex arcs are supported")
        if not np.all(self.speed(ts) > 0):
            raise ValueError("curve is not immersed (γ' vanishes)")
        if self._closed:
            self._validate_closure()

    def _validate_closure(self):
        pa, pb = self.point(self.t0), self.point(self.t1)
        ga, gb = self.d1(self.t0), self.d1(self.t1)
        scale = max(1.0, self.diameter())
        if np.hypot(*(pa - pb)) > 1e-8 * scale:
            raise ClosureError(f"closed curve endpoints differ: {pa.tolist()} vs {pb.tolist()}")
        sin_angle = abs(wedge(ga, gb)) / (np.hypot(*ga) * np.hypot(*gb))
        if sin_angle > 1e-8 or ga @ gb <= 0:
            raise ClosureError("closed curve tangents at the endpoints are not parallel")

    @property
    def closed(self):
        return self._closed

    def _s(self, t):
        t = np.asarray(t, dtype=float)
        return self.t0 + self.t1 - t if self.reversed else t

    def point(self, t):
        return np.asarray(self._g(self._s(t)), dtype=float)

    def d1(self, t):
        g = np.asarray(self._g1(self._s(t)), dtype=float)
        return -g if self.reversed else g

    def d2(self, t):
        return np.asarray(self._g2(self._s(t)), dtype=float)

    def __repr__(self):
        return f"ParamC2(t=[{self.t0}, {self.t1}], closed={self.closed})"


class ParabolaArc(ParamC2):
    """``c(t) = v0 + t v1 + t(t+1)/2 v2`` on [t0, t1]; c' = v1 + (t+1/2) v2, c'' = v2."""

    kind = "parabola_arc"

    def __init__(self, v0, v1, v2, t0, t1):
        self.v0 = np.asarray(v0, dtype=float).reshape(2)
        self.v1 = np.asarray(v1, dtype=float).reshape(2)
        self.v2 = np.asarray(v2, dtype=float).reshape(2)
        if abs(wedge(self.v1, self.v2)) <= 1e-12 * max(self.v1 @ self.v1, self.v2 @ self.v2):
            raise DegenerateBasis("parabola generators v1, v2 are dependent")
        v0_, v1_, v2_ = self.v0, self.v1, self.v2

        def gamma(t):
            t = np.asarray(t, dtype=float)[..., None]
            return v0_ + t * v1_ + (t * (t + 1.0) / 2.0) * v2_

        def d1(t):
            t = np.asarray(t, dtype=float)[..., None]
            return v1_ + (t + 0.5) * v2_

        def d2(t):
            t = np.asarray(t, dtype=float)
            return np.broadcast_to(v2_, t.shape + (2,)).copy()

        super().__init__(gamma, d1, d2, t0, t1)

    def to_json(self):
        return {
            "kind": self.kind, "v0": self.v0.tolist(), "v1": self.v1.tolist(),
            "v2": self.v2.tolist(), "t": [self.t0, self.t1],
        }


def curve_from_json(obj):
    kind = obj.get("kind")
    try:
        if kind == "circle_arc":
            theta = obj.get("theta", [0.0, TWO_PI])
            return CircleArc(obj["center"], obj["R"], theta[0], theta[1])
        if kind == "ellipse_arc":
            theta = obj.get("theta", [0.0, TWO_PI])
            return EllipseArc(obj["center"], obj["Q"], theta[0], theta[1])
        if kind == "parabola_arc":
            return ParabolaArc(obj["v0"], obj["v1"], obj["v2"], obj["t"][0], obj["t"][1])
    except (KeyError, IndexError, TypeError) as exc:
        raise ValueError(f"bad {kind} descriptor: {exc}") from exc
    raise ValueError(f"unknown curve kind {kind!r}")


def curvature_at(C, t):
    t = C.check_param(t)
    return float(C.curvature(t)) if np.ndim(t) == 0 else C.curvature(t)


@dataclass(frozen=True)
class CurveStats:
    length: float
    total_curvature: float
    R1: float
    R2: float
    affine_arclength: float

    def to_json(self):
        return {
            "length": self.length, "total_curvature": self.total_curvature,
            "R1": self.R1, "R2": self.R2, "affine_arclength": self.affine_arclength,
        }


def radius_extremes(C, samples=_RHO_SAMPLES):
    """(R1, R2): min and max radius of curvature.

    Scans ρ at ``samples`` parameters and polishes every local extremum by
    golden-section search to 1e-10 of the parameter range.
    """
    ts = C.samples(samples)
    rho = C.radius_of_curvature(ts)
    r1, r2 = float(rho.min()), float(rho.max())
    if r2 - r1 <= 1e-14 * r2:
        return r1, r2
    mins, maxs = local_extrema(rho, closed=C.closed)
    width = 1e-10 * (C.t1 - C.t0)
    step = ts[1] - ts[0]

    def bracket(idx):
        lo, hi = ts[idx] - step, ts[idx] + step
        if not C.closed:
            lo, hi = np.maximum(lo, C.t0), np.minimum(hi, C.t1)
        return lo, hi

    if len(mins):
        r1 = min(r1, float(np.min(golden_section_vec(C.radius_of_curvature, *bracket(mins), width)[1])))
    if len(maxs):
        r2 = max(r2, float(np.max(golden_section_vec(C.radius_of_curvature, *bracket(maxs), width, maximize=True)[1])))
    return r1, r2


def stats(C, tol=1e-10):
    """Length, total curvature, curvature-radius extremes and affine arclength of ``C``."""
    a, b = C.t0, C.t1

    def speed(t):
        return C.speed(t)

    def turning(t):
        g1 = C.d1(t)
        return wedge(g1, C.d2(t)) / np.sum(g1 * g1, axis=-1)

    def affine(t):
        return np.cbrt(C.wedge12(t))

    length = adaptive_simpson(speed, a, b, tol)
    tau = adaptive_simpson(turning, a, b, tol)
    aff = adaptive_simpson(affine, a, b, tol)
    r1, r2 = radius_extremes(C)
    return CurveStats(length, tau, r1, r2, aff)


def _polar(Mlin):
    """Mlin = P · Rot(α) with P symmetric positive definite (requires det Mlin > 0)."""
    W, s, Vt = np.linalg.svd(Mlin)
    U = W @ Vt
    if np.linalg.det(U) < 0:  # pragma: no cover - det Mlin > 0 makes U a rotation
        raise DegenerateBasis("polar factor is a reflection")
    P = (W * s) @ W.T
    return P, math.atan2(U[1, 0], U[0, 0])


def _conic_arc(center, Mlin, t0, t1):
    """Arc ``center + Mlin (cos θ, sin θ)``, θ ∈ [t0, t1], as a CircleArc or EllipseArc."""
    if np.linalg.det(Mlin) < 0:
        # Mlin u(θ) = (Mlin J) u(-θ) with J = diag(1, -1)
        Mlin = Mlin @ np.diag([1.0, -1.0])
        t0, t1 = -t1, -t0
    P, alpha = _polar(Mlin)
    t0, t1 = t0 + alpha, t1 + alpha
    shift = math.floor(t0 / TWO_PI) * TWO_PI
    t0, t1 = t0 - shift, t1 - shift
    s = 0.5 * np.trace(P)
    if np.max(np.abs(P - s * np.eye(2))) <= 1e-13 * s:
        return CircleArc(center, s, t0, t1)
    Pinv = np.linalg.inv(P)
    return EllipseArc(center, Pinv @ Pinv, t0, t1)


def apply_affine_to_curve(phi, C):
    """Image ``φ[C]``, re-oriented to positive curvature when det φ < 0."""
    if isinstance(C, CircleArc):
        return _conic_arc(phi(C.center), C.R * phi.M, C.t0, C.t1)
    if isinstance(C, EllipseArc):
        return _conic_arc(phi(C.center), phi.M @ C._Tinv, C.t0, C.t1)
    if isinstance(C, ParabolaArc):
        return ParabolaArc(phi(C.v0), phi.linear(C.v1), phi.linear(C.v2), C.t0, C.t1)
    g, g1, g2 = C.point, C.d1, C.d2
    return ParamC2(
        lambda t: phi(g(t)), lambda t: phi.linear(g1(t)), lambda t: phi.linear(g2(t)),
        C.t0, C.t1, closed=C.closed,
    )


def ellipse_to_circle_map(E):
    """Unimodular φ taking the ellipse of ``E`` to a centered circle of radius (det Q)^{-1/4}."""
    if isinstance(E, CircleArc):
        return AffineMap2(np.eye(2), -E.center), E.R
    Q = np.asarray(E.Q, dtype=float)
    detQ = float(np.linalg.det(Q))
    if not (detQ > 0 and np.trace(Q) > 0):
        raise NotPositiveDefinite(f"quadratic form is not positive definite: {Q.tolist()}")
    T, _ = _sym_sqrt(Q)
    M = T / detQ**0.25
    return AffineMap2(M, -M @ E.center), detQ**-0.25


def sub_arc(C, t0, t1):
    """The restriction of ``C`` to [t0, t1] (same kind where possible)."""
    if isinstance(C, CircleArc):
        return CircleArc(C.center, C.R, t0, t1)
    if isinstance(C, EllipseArc):
        return EllipseArc(C.center, C.Q, t0, t1)
    if isinstance(C, ParabolaArc) and not C.reversed:
        return ParabolaArc(C.v0, C.v1, C.v2, t0, t1)
    return ParamC2(C.point, C.d1, C.d2, t0, t1)
