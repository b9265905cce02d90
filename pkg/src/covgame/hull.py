"""Convex hulls of sampled utility vectors and hull-membership tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import InvalidArgumentError

__all__ = ["Hull", "convex_hull", "cross"]


def cross(o, a, b) -> float:
    """z-component of (a - o) x (b - o); positive when o, a, b turn counter-clockwise."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Hull:
    """Convex hull of a finite point set.

    For two dimensions ``vertex_index`` lists hull vertices counter-clockwise
    (indices into ``points``).  ``degenerate`` is set when all points are
    collinear, in which case the hull is the segment between the two
    extreme points.  In three or more dimensions only membership is
    provided, via a linear feasibility problem over ``points``.
    """

    points: np.ndarray
    vertex_index: tuple[int, ...] | None
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def vertices(self) -> np.ndarray:
        if self.vertex_index is None:
            raise InvalidArgumentError("facet data is only available in two dimensions")
        return self.points[list(self.vertex_index)]

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.points))))

    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def contains(self, q, tol: float = 1e-12) -> bool:
        """Membership with absolute slack ``tol * scale``."""
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dim,):
            raise InvalidArgumentError(f"point must have dimension {self.dim}")
        eps = tol * self.scale
        if self.dim != 2:
            return _lp_member(self.points, q, eps)
        v = self.vertices
        if len(v) == 1:
            return bool(np.linalg.norm(q - v[0]) <= eps)
        if self.degenerate or len(v) == 2:
            a, b = v[0], v[-1]
            ab = b - a
            length = float(np.hypot(*ab))
            if abs(cross(a, b, q)) / length > eps:
                return False
            s = float(np.dot(q - a, ab)) / length
            return -eps <= s <= length + eps
        for k in range(len(v)):
            a, b = v[k], v[(k + 1) % len(v)]
            if cross(a, b, q) / float(np.hypot(*(b - a))) < -eps:
                return False
        return True


def _lp_member(points, q, eps) -> bool:
    n, dim = points.shape
    # minimise total slack s+ + s- subject to sum(w_k p_k) + s+ - s- = q, sum(w) = 1
    a_eq = np.zeros((dim + 1, n + 2 * dim))
    a_eq[:dim, :n] = points.T
    a_eq[:dim, n:n + dim] = np.eye(dim)
    a_eq[:dim, n + dim:] = -np.eye(dim)
    a_eq[dim, :n] = 1.0
    c = np.zeros(n + 2 * dim)
    c[n:] = 1.0
    res = linprog(c, A_eq=a_eq, b_eq=np.append(q, 1.0), bounds=(0, None), method="highs")
    return bool(res.status == 0 and res.fun <= eps)


def convex_hull(points, tol: float = 1e-9) -> Hull:
    """Hull of ``points`` (shape (n, d)).

    In two dimensions this is Andrew's monotone chain; turns whose cross
    product is within ``tol * scale**2`` of zero are treated as collinear
    and dropped, so the returned vertices are strictly convex.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InvalidArgumentError("need a non-empty (n, d) array of points")
    if pts.shape[1] != 2:
        return Hull(pts, None, False)
    scale = max(1.0, float(np.max(np.abs(pts))))
    eps = tol * scale * scale
    order = sorted(range(len(pts)), key=lambda k: (pts[k, 0], pts[k, 1]))
    uniq = [order[0]]
    for k in order[1:]:
        if np.any(np.abs(pts[k] - pts[uniq[-1]]) > 0):
            uniq.append(k)
    if len(uniq) == 1:
        return Hull(pts, (uniq[0],), True)

    def chain(seq):
        out = []
        for k in seq:
            while len(out) >= 2 and cross(pts[out[-2]], pts[out[-1]], pts[k]) <= eps:
                out.pop()
            out.append(k)
        return out

    lower = chain(uniq)
    upper = chain(reversed(uniq))
    verts = lower[:-1] + upper[:-1]
    if len(verts) <= 2:
        return Hull(pts, (uniq[0], uniq[-1]), True)
    return Hull(pts, tuple(verts), False)
