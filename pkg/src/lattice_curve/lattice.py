"""General planar lattices L(v0, v1, v2) and affine maps of the plane."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CollinearPoints, DegenerateBasis, NotLatticePoint

EPS_COORD = 1e-7
_DEGENERATE_REL = 1e-12


def wedge(u, v):
    """2-D cross product u ∧ v; broadcasts over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _check_basis(v1, v2):
    scale = max(float(v1 @ v1), float(v2 @ v2))
    area = abs(float(wedge(v1, v2)))
    if not np.isfinite(area) or area <= _DEGENERATE_REL * scale:
        raise DegenerateBasis(
            f"generators {v1.tolist()} and {v2.tolist()} are (nearly) dependent: |v1^v2|={area:.3g}"
        )
    return area


def _gauss_reduce(v1, v2):
    """Lagrange-Gauss reduction.

    Returns (u1, u2, U) with [u1 u2] = [v1 v2] @ U for an integer unimodular U.
    """
    u = np.array(v1, dtype=float)
    w = np.array(v2, dtype=float)
    # columns give the integer coordinates of u and w in the input basis
    cu = np.array([1, 0], dtype=np.int64)
    cw = np.array([0, 1], dtype=np.int64)
    if u @ u > w @ w:
        u, w, cu, cw = w, u, cw, cu
    for _ in range(10_000):
        mu = int(np.rint((u @ w) / (u @ u)))
        if mu:
            w = w - mu * u
            cw = cw - mu * cu
        if w @ w < u @ u:
            u, w, cu, cw = w, u, cw, cu
        else:
            break
    else:  # pragma: no cover - reduction of a nondegenerate basis terminates
        raise DegenerateBasis("Gauss reduction did not terminate")
    # recompute from integer coordinates to avoid drift in the float vectors
    B = np.column_stack([v1, v2])
    U = np.column_stack([cu, cw])
    u, w = B @ U[:, 0].astype(float), B @ U[:, 1].astype(float)
    if u @ w < 0:
        w, U = -w, U * np.array([1, -1])
    return u, w, U


def reduce_basis(v1, v2):
    """Gauss-reduced basis (u1, u2) of the lattice spanned by v1, v2.

    ``‖u1‖ ≤ ‖u2‖`` and ``|<u1, u2>| ≤ ‖u1‖²/2``, so u1 is a shortest
    nonzero lattice vector.
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    _check_basis(v1, v2)
    u1, u2, _ = _gauss_reduce(v1, v2)
    return u1, u2


@dataclass(frozen=True, eq=False)
class Lattice:
    """The point set ``{v0 + m v1 + n v2 : m, n integers}``."""

    v0: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    fundamental_area: float = field(init=False)
    reduced_basis: tuple = field(init=False)
    min_distance: float = field(init=False)
    _unimodular: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v0 = np.asarray(self.v0, dtype=float).reshape(2)
        v1 = np.asarray(self.v1, dtype=float).reshape(2)
        v2 = np.asarray(self.v2, dtype=float).reshape(2)
        area = _check_basis(v1, v2)
        u1, u2, U = _gauss_reduce(v1, v2)
        for name, value in [
            ("v0", v0), ("v1", v1), ("v2", v2),
            ("fundamental_area", area),
            ("reduced_basis", (u1, u2)),
            ("min_distance", float(np.hypot(*u1))),
            ("_unimodular", U),
        ]:
            object.__setattr__(self, name, value)

    @property
    def basis(self):
        return np.column_stack([self.v1, self.v2])

    @property
    def A(self):
        return self.fundamental_area

    @property
    def d(self):
        return self.min_distance

    def point(self, m, n):
        m = np.asarray(m, dtype=float)
        n = np.asarray(n, dtype=float)
        return self.v0 + m[..., None] * self.v1 + n[..., None] * self.v2

    def coords(self, points):
        """Real coordinates (m, n) of ``points`` in the generator basis."""
        p = np.asarray(points, dtype=float) - self.v0
        return np.linalg.solve(self.basis, p.reshape(-1, 2).T).T.reshape(p.shape)

    def integer_coords(self, point, eps=EPS_COORD):
        c = self.coords(point)
        r = np.rint(c)
        if np.max(np.abs(c - r)) > eps:
            raise NotLatticePoint(f"{np.asarray(point).tolist()} has coordinates {c.tolist()}")
        return int(r[0]), int(r[1])

    def to_json(self):
        return {"v0": self.v0.tolist(), "v1": self.v1.tolist(), "v2": self.v2.tolist()}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["v0"], obj["v1"], obj["v2"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DegenerateBasis):
                raise
            raise ValueError(f"bad lattice descriptor {obj!r}: {exc}") from exc


def make_lattice(v0, v1, v2):
    return Lattice(v0, v1, v2)


def integer_lattice(v0=(0.0, 0.0)):
    return Lattice(v0, (1.0, 0.0), (0.0, 1.0))


def hexagonal_lattice(v0=(0.0, 0.0)):
    return Lattice(v0, (1.0, 0.0), (0.5, np.sqrt(3.0) / 2))


def enumerate_in_box(L, box, with_coords=False):
    """All lattice points in the closed box ``(xmin, ymin, xmax, ymax)``.

    Points are generated in the reduced basis; the returned integer
    coordinates are in the original (v1, v2) basis.
    """
    xmin, ymin, xmax, ymax = map(float, box)
    if not (xmin <= xmax and ymin <= ymax):
        raise ValueError(f"empty box {box}")
    m_rng, n_rng = _reduced_ranges(L, (xmin, ymin, xmax, ymax))
    # loose first pass; the exact test below uses the original generators
    slack = 1e-9 * (1.0 + max(abs(xmin), abs(xmax), abs(ymin), abs(ymax)))
    pts, cs = [], []
    rows = max(1, 2_000_000 // max(1, n_rng[1] - n_rng[0]))
    for m_chunk in _chunks(m_rng, rows):
        mm, nn = np.meshgrid(m_chunk, np.arange(*n_rng), indexing="ij")
        mm, nn = mm.ravel(), nn.ravel()
        u1, u2 = L.reduced_basis
        p = L.v0 + mm[:, None] * u1 + nn[:, None] * u2
        keep = (p[:, 0] >= xmin - slack) & (p[:, 0] <= xmax + slack) & (p[:, 1] >= ymin - slack) & (p[:, 1] <= ymax + slack)
        if keep.any():
            pts.append(p[keep])
            cs.append(np.column_stack([mm[keep], nn[keep]]) @ L._unimodular.T)
    points = np.concatenate(pts) if pts else np.empty((0, 2))
    coords = np.concatenate(cs).astype(np.int64) if cs else np.empty((0, 2), dtype=np.int64)
    # recompute from original generators so coordinates and points agree exactly
    if len(coords):
        points = L.v0 + coords[:, :1] * L.v1 + coords[:, 1:] * L.v2
        keep = (points[:, 0] >= xmin) & (points[:, 0] <= xmax) & (points[:, 1] >= ymin) & (points[:, 1] <= ymax)
        points, coords = points[keep], coords[keep]
    return (points, coords) if with_coords else points


def box_candidate_count(L, box):
    m_rng, n_rng = _reduced_ranges(L, box)
    return (m_rng[1] - m_rng[0]) * (n_rng[1] - n_rng[0])


def _reduced_ranges(L, box):
    xmin, ymin, xmax, ymax = box
    u1, u2 = L.reduced_basis
    corners = np.array([[xmin, ymin], [xmin, ymax], [xmax, ymin], [xmax, ymax]]) - L.v0
    c = np.linalg.solve(np.column_stack([u1, u2]), corners.T)
    lo = np.floor(c.min(axis=1)).astype(np.int64) - 1
    hi = np.ceil(c.max(axis=1)).astype(np.int64) + 1
    return (int(lo[0]), int(hi[0]) + 1), (int(lo[1]), int(hi[1]) + 1)


def _chunks(rng, max_rows=None):
    lo, hi = rng
    step = max_rows or 4096
    for s in range(lo, hi, step):
        yield np.arange(s, min(s + step, hi), dtype=np.int64)


def lattice_triangle_multiple(P0, P1, P2, L, eps=EPS_COORD):
    """Integer k with Area(P0 P1 P2) = k * A_L / 2 for lattice points P0, P1, P2."""
    c0, c1, c2 = (np.array(L.integer_coords(P, eps)) for P in (P0, P1, P2))
    d1, d2 = c1 - c0, c2 - c0
    k = abs(int(d1[0] * d2[1] - d1[1] * d2[0]))
    if k == 0:
        raise CollinearPoints("lattice points are collinear")
    return k


@dataclass(frozen=True, eq=False)
class AffineMap2:
    """phi(v) = M v + b."""

    M: np.ndarray
    b: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float).reshape(2, 2)
        b = np.asarray(self.b, dtype=float).reshape(2)
        if abs(np.linalg.det(M)) <= 1e-14 * max(1.0, float(np.abs(M).max()) ** 2):
            raise DegenerateBasis(f"singular affine map M={M.tolist()}")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)

    @property
    def det(self):
        return float(np.linalg.det(self.M))

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        return p @ self.M.T + self.b

    def linear(self, vectors):
        return np.asarray(vectors, dtype=float) @ self.M.T

    def inverse(self):
        Minv = np.linalg.inv(self.M)
        return AffineMap2(Minv, -Minv @ self.b)

    def compose(self, other):
        """self ∘ other."""
        return AffineMap2(self.M @ other.M, self.M @ other.b + self.b)

    def to_json(self):
        return {"M": self.M.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["M"], obj.get("b", [0.0, 0.0]))


def apply_affine_to_lattice(phi, L):
    return Lattice(phi(L.v0), phi.linear(L.v1), phi.linear(L.v2))
