"""Polar quadrature nodes for the coverage integral of one base station.

The integrand is smooth except where a ray from the station crosses the
footprint circle of an interferer: there the interference term switches on
or off.  Rays are therefore split radially at every such crossing, and the
angle range is split at the angles where a ray becomes tangent to an
interferer circle or passes through an intersection point of two circles.
Each angular panel uses Gauss-Legendre nodes after the change of variable
``theta = a + (b - a) * s**2 * (3 - 2*s)``, which absorbs the square-root
behaviour of the chord length at tangent angles.  With no breakpoints the
integrand is periodic and smooth in the angle, and the uniform trapezoid
rule is used instead.

Nodes are emitted in (angle node, radial segment, radial node) order.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .geometry import Scenario, _gain

__all__ = ["player_nodes"]

_TWO_PI = 2.0 * math.pi


def _circle_intersections(c0, r0, c1, r1):
    dx, dy = c1[0] - c0[0], c1[1] - c0[1]
    d = math.hypot(dx, dy)
    if d == 0.0 or d >= r0 + r1 or d <= abs(r0 - r1):
        return []
    a = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d)
    h = math.sqrt(max(r0 * r0 - a * a, 0.0))
    mx, my = c0[0] + a * dx / d, c0[1] + a * dy / d
    return [(mx + h * dy / d, my - h * dx / d), (mx - h * dy / d, my + h * dx / d)]


def _angular_breakpoints(center, rho, circles):
    out = []
    cx, cy = center
    for (jx, jy), rj in circles:
        dist = math.hypot(jx - cx, jy - cy)
        if dist > rj:
            phi = math.atan2(jy - cy, jx - cx)
            alpha = math.asin(rj / dist)
            out += [phi - alpha, phi + alpha]
        for px, py in _circle_intersections(center, rho, (jx, jy), rj):
            out.append(math.atan2(py - cy, px - cx))
    for a in range(len(circles)):
        for b in range(a + 1, len(circles)):
            for px, py in _circle_intersections(circles[a][0], circles[a][1], circles[b][0], circles[b][1]):
                r = math.hypot(px - cx, py - cy)
                if 0.0 < r < rho:
                    out.append(math.atan2(py - cy, px - cx))
    if not out:
        return []
    angles = sorted(t % _TWO_PI for t in out)
    merged = [angles[0]]
    for t in angles[1:]:
        if t - merged[-1] > 1e-12:
            merged.append(t)
    if len(merged) > 1 and merged[0] + _TWO_PI - merged[-1] <= 1e-12:
        merged.pop()
    return merged


def _angle_nodes(breaks, n):
    if not breaks:
        theta = _TWO_PI * np.arange(n) / n
        return theta, np.full(n, _TWO_PI / n)
    s, ws = np.polynomial.legendre.leggauss(n)
    s = 0.5 * (s + 1.0)
    ws = 0.5 * ws
    phi = s * s * (3.0 - 2.0 * s)
    dphi = 6.0 * s * (1.0 - s)
    thetas, weights = [], []
    ends = list(breaks) + [breaks[0] + _TWO_PI]
    for a, b in zip(ends[:-1], ends[1:]):
        thetas.append(a + (b - a) * phi)
        weights.append((b - a) * dphi * ws)
    return np.concatenate(thetas), np.concatenate(weights)


@lru_cache(maxsize=512)
def player_nodes(scenario: Scenario, i: int, radial_nodes: int, angular_nodes: int):
    """Quadrature weights and channel gains for the utility integral of station ``i``.

    Returns
    -------
    weights : ndarray, shape (N,)
        ``w_theta * w_r * r * density`` at each node.
    gains : ndarray, shape (N, S)
        Gain from every station towards the users of ``i`` at each node.
    """
    own = scenario.sbs(i)
    center = own.ground
    rho = own.footprint
    S = scenario.size
    if rho <= 0.0:
        return np.zeros(0), np.zeros((0, S))
    circles = []
    for other in scenario.sbs_list:
        if other.id == i:
            continue
        rj = other.footprint
        if rj <= 0.0:
            continue
        if math.hypot(other.ground[0] - center[0], other.ground[1] - center[1]) < rho + rj:
            circles.append((other.ground, rj))

    theta, w_theta = _angle_nodes(_angular_breakpoints(center, rho, circles), angular_nodes)
    x_gl, w_gl = np.polynomial.legendre.leggauss(radial_nodes)

    xs, ys, ws = [], [], []
    for t, wt in zip(theta, w_theta):
        ux, uy = math.cos(t), math.sin(t)
        cuts = [0.0, rho]
        for (jx, jy), rj in circles:
            dx, dy = jx - center[0], jy - center[1]
            proj = ux * dx + uy * dy
            disc = proj * proj - (dx * dx + dy * dy - rj * rj)
            if disc > 0.0:
                root = math.sqrt(disc)
                for r in (proj - root, proj + root):
                    if 0.0 < r < rho:
                        cuts.append(r)
        cuts.sort()
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b - a <= 0.0:
                continue
            r = a + (b - a) * 0.5 * (x_gl + 1.0)
            xs.append(center[0] + r * ux)
            ys.append(center[1] + r * uy)
            ws.append(wt * w_gl * 0.5 * (b - a) * r)
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    weights = np.concatenate(ws) * own.density.evaluate(x - center[0], y - center[1], rho)
    gains = np.empty((x.size, S))
    for j, other in enumerate(scenario.sbs_list):
        gains[:, j] = _gain(scenario, other, i, x, y)
    weights.setflags(write=False)
    gains.setflags(write=False)
    return np.ascontiguousarray(weights), np.ascontiguousarray(gains)
