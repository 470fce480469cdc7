"""Small numerical kernels: adaptive Simpson quadrature, 1-D searches, bisection."""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureFailure

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def adaptive_simpson(f, a, b, tol=1e-10, max_intervals=2**20, initial_panels=16):
    """Integrate a vectorized ``f`` over [a, b] to relative tolerance ``tol``.

    Panels are refined breadth-first so every level costs one call of ``f`` on
    an array. A panel of width w is accepted once the two-half Simpson estimate
    differs from the whole-panel estimate by at most ``15 * tol * |I| * w/(b-a)``.
    Raises QuadratureFailure once more than ``max_intervals`` panels were examined.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    width = b - a
    edges = np.linspace(a, b, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    vals = f(np.concatenate([lo, mid, hi]))
    n = initial_panels
    flo, fmid, fhi = vals[:n], vals[n:2 * n], vals[2 * n:]
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    scale = abs(float(np.sum(whole)))
    accepted = 0.0
    examined = n
    while len(lo):
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        fq = f(np.concatenate([q1, q3]))
        f1, f3 = fq[:len(lo)], fq[len(lo):]
        left = (mid - lo) / 6.0 * (flo + 4.0 * f1 + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * f3 + fhi)
        two = left + right
        err = two - whole
        scale = max(scale, abs(accepted + float(np.sum(two))))
        ok = np.abs(err) <= 15.0 * tol * max(scale, 1e-300) * (hi - lo) / width
        # panels narrower than float resolution cannot be refined further
        ok |= (hi - lo) <= 64 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))
        accepted += float(np.sum(two[ok] + err[ok] / 15.0))
        keep = ~ok
        examined += 2 * int(keep.sum())
        if examined > max_intervals:
            raise QuadratureFailure(
                f"adaptive Simpson exceeded {max_intervals} intervals on [{a}, {b}] at tol {tol}"
            )
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        flo, fmid, fhi = flo[keep], fmid[keep], fhi[keep]
        f1, f3, left, right = f1[keep], f3[keep], left[keep], right[keep]
        q1, q3 = q1[keep], q3[keep]
        lo, mid, hi = (np.concatenate([lo, mid]), np.concatenate([q1, q3]), np.concatenate([mid, hi]))
        flo, fmid, fhi = (np.concatenate([flo, fmid]), np.concatenate([f1, f3]), np.concatenate([fmid, fhi]))
        whole = np.concatenate([left, right])
    return accepted


def golden_section(f, a, b, width, maximize=False):
    """Local minimizer (or maximizer) of a unimodular scalar ``f`` on [a, b]."""
    sign = -1.0 if maximize else 1.0
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = sign * f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def golden_section_vec(f, lo, hi, width, maximize=False):
    """Vectorized golden-section search over many brackets at once.

    ``f`` maps an array of parameters to an array of values. Returns the
    final midpoints and their values.
    """
    sign = -1.0 if maximize else 1.0
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    span = float(np.max(b - a)) if len(a) else 0.0
    iters = 0 if span <= width else int(math.ceil(math.log(width / span) / math.log(INV_PHI)))
    for _ in range(iters):
        left = fc < fd
        # left: keep [a, d]; else keep [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        probe = np.where(left, c_next, d_next)
        fp = sign * f(probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = c_next, d_next
    t = 0.5 * (a + b)
    return t, f(t)


def ternary_search(f, a, b, width):
    """Minimizer of a unimodular scalar ``f`` on [a, b] by trisection."""
    while b - a > width:
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if f(m1) <= f(m2):
            b = m2
        else:
            a = m1
    t = 0.5 * (a + b)
    return t, f(t)


def bisect_root(f, a, b, fa=None, fb=None, width=1e-12):
    """Root of ``f`` in [a, b] given a sign change, to parameter width ``width``."""
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise ValueError("no sign change on the bracket")
    while b - a > width:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def local_extrema(values, closed=False):
    """Indices of local minima and maxima of a sampled sequence (endpoints included when open)."""
    v = np.asarray(values)
    n = len(v)
    if closed:
        prev, nxt = np.roll(v, 1), np.roll(v, -1)
    else:
        prev = np.concatenate([[np.inf], v[:-1]])
        nxt = np.concatenate([v[1:], [np.inf]])
    mins = np.flatnonzero((v <= prev) & (v <= nxt) & ((v < prev) | (v < nxt)))
    if not closed:
        prev = np.concatenate([[-np.inf], v[:-1]])
        nxt = np.concatenate([v[1:], [-np.inf]])
    maxs = np.flatnonzero((v >= prev) & (v >= nxt) & ((v > prev) | (v > nxt)))
    return mins[:n], maxs[:n]
