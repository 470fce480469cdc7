import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ellipe

from lattice_curve.curve import (
    CircleArc,
    EllipseArc,
    ParabolaArc,
    ParamC2,
    apply_affine_to_curve,
    curvature_at,
    curve_from_json,
    ellipse_to_circle_map,
    stats,
    sub_arc,
)
from lattice_curve.errors import ClosureError, MixedCurvature, OutOfDomain, QuadratureFailure
from lattice_curve.lattice import AffineMap2
from lattice_curve.numerics import adaptive_simpson


def test_full_circle_stats():
    s = stats(CircleArc((1, 2), 3.0))
    assert s.length == pytest.approx(6 * math.pi, rel=1e-10)
    assert s.total_curvature == pytest.approx(2 * math.pi, rel=1e-10)
    assert s.R1 == pytest.approx(3.0, rel=1e-12) and s.R2 == pytest.approx(3.0, rel=1e-12)
    assert s.affine_arclength == pytest.approx(2 * math.pi * 3 ** (2 / 3), rel=1e-10)


@pytest.mark.parametrize("a,b", [(2.0, 1.0), (5.0, 0.5), (1.0, 1.0)])
def test_ellipse_stats_closed_form(a, b):
    E = EllipseArc((0, 0), np.diag([1 / a**2, 1 / b**2]))
    s = stats(E)
    m = 1 - (b / a) ** 2 if a >= b else 1 - (a / b) ** 2
    assert s.length == pytest.approx(4 * max(a, b) * ellipe(m), rel=1e-9)
    assert s.total_curvature == pytest.approx(2 * math.pi, rel=1e-10)
    assert s.R1 == pytest.approx(min(a, b) ** 2 / max(a, b), rel=1e-9)
    assert s.R2 == pytest.approx(max(a, b) ** 2 / min(a, b), rel=1e-9)
    assert s.affine_arclength == pytest.approx(2 * math.pi * (a * b) ** (1 / 3), rel=1e-9)


def test_parabola_length_closed_form():
    # c(t) = (t, t(t+1)/2): speed sqrt(1 + (t + 1/2)^2)
    C = ParabolaArc((0, 0), (1, 0), (0, 1), 1.0, 3.0)

    def F(u):
        return 0.5 * (u * math.sqrt(1 + u * u) + math.asinh(u))

    assert stats(C).length == pytest.approx(F(3.5) - F(1.5), rel=1e-10)
    assert stats(C).total_curvature == pytest.approx(math.atan(3.5) - math.atan(1.5), rel=1e-10)


def test_parabola_radius_formula():
    C = ParabolaArc((0, 0), (1, 0), (0, 1), 1.0, 3.0)
    t = np.linspace(1, 3, 7)
    sp = np.hypot(1.0, t + 0.5)
    # c' ∧ c'' = v1 ∧ v2 = 1
    assert np.allclose(C.radius_of_curvature(t), sp**3, rtol=1e-13)


def test_curvature_examples():
    assert curvature_at(CircleArc((0, 0), 4.0), 1.0) == pytest.approx(0.25)
    with pytest.raises(OutOfDomain):
        curvature_at(CircleArc((0, 0), 4.0, 0, 1), 2.0)


def test_paramc2_orientation_and_errors():
    # clockwise circle gets re-oriented
    C = ParamC2(lambda t: np.stack([np.cos(-t), np.sin(-t)], -1),
                lambda t: np.stack([-np.sin(-t), -np.cos(-t)], -1) * -1,
                lambda t: np.stack([-np.cos(-t), np.sin(-t)], -1), 0, 1)
    assert np.all(C.curvature(np.linspace(0, 1, 5)) > 0)
    with pytest.raises(MixedCurvature):
        ParamC2(lambda t: np.stack([t, t**3], -1), lambda t: np.stack([np.ones_like(t), 3 * t**2], -1),
                lambda t: np.stack([np.zeros_like(t), 6 * t], -1), -1, 1)
    with pytest.raises(ClosureError):
        ParamC2(lambda t: np.stack([np.cos(t), np.sin(t)], -1), lambda t: np.stack([-np.sin(t), np.cos(t)], -1),
                lambda t: np.stack([-np.cos(t), -np.sin(t)], -1), 0, 3, closed=True)


def test_quadrature_budget():
    with pytest.raises(QuadratureFailure):
        adaptive_simpson(lambda t: np.abs(np.sin(1 / np.maximum(t, 1e-300))), 0.0, 1.0, tol=1e-14, max_intervals=2**10)


def test_json_round_trip():
    for C in [CircleArc((1, 2), 3, 0.5, 2.0), EllipseArc((0, 1), [[2, 0.3], [0.3, 1]], 0, 1.5),
              ParabolaArc((0, 0), (1, 0), (0, 1), 1, 3)]:
        D = curve_from_json(C.to_json())
        t = np.linspace(C.t0, C.t1, 9)
        assert np.array_equal(D.point(t), C.point(t))


affine = st.tuples(*[st.floats(-2, 2, allow_nan=False) for _ in range(4)])


@settings(max_examples=40, deadline=None)
@given(affine)
def test_affine_arclength_transformation_law(m):
    M = np.array(m).reshape(2, 2)
    if abs(np.linalg.det(M)) < 0.1:
        return
    phi = AffineMap2(M, (0.5, -1))
    for C in [EllipseArc((0, 0), [[1, 0.2], [0.2, 0.5]], 0.2, 2.0), ParabolaArc((0, 0), (1, 0), (0.3, 1), 0.5, 2.5)]:
        img = apply_affine_to_curve(phi, C)
        lhs = stats(img).affine_arclength
        rhs = abs(phi.det) ** (1 / 3) * stats(C).affine_arclength
        assert lhs == pytest.approx(rhs, rel=1e-8)


def test_ellipse_to_circle_map():
    E = EllipseArc((1, -2), [[3, 1], [1, 2]])
    phi, r = ellipse_to_circle_map(E)
    assert abs(phi.det) == pytest.approx(1.0, rel=1e-12)
    P = phi(E.point(np.linspace(0, 2 * math.pi, 50)))
    assert np.max(np.abs(np.hypot(P[:, 0], P[:, 1]) - r)) <= 1e-10 * r


def test_sub_arc():
    C = sub_arc(CircleArc((0, 0), 2.0), 0.0, 1.0)
    assert stats(C).length == pytest.approx(2.0)
