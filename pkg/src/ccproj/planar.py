"""2D convex geometry inside one pencil plane.

Convex polygons live in the affine chart of their plane in which the line L
sits at infinity, so "direction points on L" are literal direction classes
of parallel lines.  Polygons are canonically ordered (counterclockwise,
starting at the lexicographic minimum) and degenerate polygons (single
points and segments) are first-class, carrying an explicit flag.

All functions are pure and values are treated as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .projcore import PI, DEFAULT_TOL, DegenerateInput, Tolerances, wrap_angle


class RefNotInterior(DegenerateInput):
    """Polar-dual reference point is not strictly interior."""


class DegenerateSupport(DegenerateInput):
    """Support slab has zero width (polygon is a segment parallel to the direction)."""


# ---------------------------------------------------------------------------
# Direction points on L
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirPoint:
    """Point on the chart's line at infinity: a direction class, period pi."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", wrap_angle(self.angle))

    def vector(self) -> np.ndarray:
        return np.array([np.cos(self.angle), np.sin(self.angle)])

    def normal(self) -> np.ndarray:
        """Unit normal of lines with this direction."""
        return np.array([-np.sin(self.angle), np.cos(self.angle)])


def _as_angle(d) -> float:
    if isinstance(d, DirPoint):
        return d.angle
    return wrap_angle(float(d))


# ---------------------------------------------------------------------------
# Convex polygons
# ---------------------------------------------------------------------------

def _cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _merge_collinear(cycle: np.ndarray, eps: float) -> np.ndarray:
    """Drop vertices within eps of the chord of their neighbors.

    Safe simplification: for a (near-)convex cycle this moves the boundary
    inward by at most eps, and never discards a vertex that genuinely
    sticks out (the guard is a true point-to-chord distance, immune to the
    near-collinear cross-product pitfall)."""
    pts = list(cycle)
    changed = True
    while changed and len(pts) > 2:
        changed = False
        for i in range(len(pts)):
            u = pts[(i - 1) % len(pts)]
            v = pts[i]
            w = pts[(i + 1) % len(pts)]
            e = w - u
            ln = float(np.hypot(e[0], e[1]))
            if ln == 0.0:
                dist = float(np.hypot(*(v - u)))
            else:
                dist = abs(_cross2(e, v - u)) / ln
            if dist <= eps:
                pts.pop(i)
                changed = True
                break
    return np.array(pts)


def _hull_cycle(points: np.ndarray, eps: float) -> np.ndarray:
    """Andrew monotone chain; ccw from the lexicographic minimum.

    The chain pops on exact cross <= 0 (never discarding a point that
    strictly sticks out, however slightly); near-collinear survivors are
    merged afterwards under a point-to-chord distance guard."""
    pts = points[np.lexsort((points[:, 1], points[:, 0]))]
    keep = [pts[0]]
    for p in pts[1:]:
        if max(abs(p[0] - keep[-1][0]), abs(p[1] - keep[-1][1])) > eps:
            keep.append(p)
    pts = np.array(keep)
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross2(out[-1] - out[-2], p - out[-2]) <= 0.0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    cycle = lower[:-1] + upper[:-1]
    if len(cycle) < 3:
        return np.array([lower[0], lower[-1]]) if len(lower) >= 2 else np.array(lower)
    out = _merge_collinear(np.array(cycle), eps)
    if len(out) < 3:
        return out
    # canonical start at the lexicographic minimum
    start = int(np.lexsort((out[:, 1], out[:, 0]))[0])
    return np.roll(out, -start, axis=0)


@dataclass(frozen=True)
class ConvexPolygon:
    """Compact convex polygon; vertices ccw from the lexicographic minimum.

    degenerate is True for single points and segments.
    """

    vertices: np.ndarray
    degenerate: bool

    def __init__(self, vertices, degenerate=None):
        verts = np.asarray(vertices, dtype=float).reshape(-1, 2).copy()
        if len(verts) == 0:
            raise DegenerateInput("polygon needs at least one vertex")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(
            self, "degenerate", len(verts) < 3 if degenerate is None else bool(degenerate)
        )

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.vertices))))

    def diameter(self) -> float:
        v = self.vertices
        if len(v) == 1:
            return 0.0
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2)
        return float(np.sqrt(np.max(d2)))

    def centroid(self) -> np.ndarray:
        return np.mean(self.vertices, axis=0)

    def support(self, dirs) -> np.ndarray:
        """Support function values max_x <d, x> for an (k,2) array of directions."""
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        return np.max(dirs @ self.vertices.T, axis=1)

    def support_interval(self, normal) -> tuple:
        """(min, max) of <normal, x> over the polygon."""
        vals = self.vertices @ np.asarray(normal, dtype=float)
        return float(np.min(vals)), float(np.max(vals))

    def edges(self) -> np.ndarray:
        v = self.vertices
        return np.roll(v, -1, axis=0) - v

    def translated(self, offset) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(offset, dtype=float),
                             degenerate=self.degenerate)

    def scaled(self, factor: float) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices * float(factor), degenerate=self.degenerate)

    def negated(self) -> "ConvexPolygon":
        return convex_hull(-self.vertices)

    def __repr__(self):
        return "ConvexPolygon(n=%d%s)" % (self.n, ", degenerate" if self.degenerate else "")


def convex_hull(points, tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Convex hull in canonical ccw order; degenerate inputs allowed."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise DegenerateInput("empty point set")
    scale = max(1.0, float(np.max(np.abs(pts))))
    cycle = _hull_cycle(pts, tol.eps_convex * scale)
    return ConvexPolygon(cycle)


def canonicalize_polygon(poly: ConvexPolygon, tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    return convex_hull(poly.vertices, tol)


# ---------------------------------------------------------------------------
# Support lines and slabs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportLines:
    """Two parallel support lines {x : n.x = c} of a polygon, direction d.

    The polygon lies in the closed slab c_low <= n.x <= c_high.  degenerate
    flags a zero-width slab (segment parallel to d); not fatal.
    """

    direction: DirPoint
    normal: np.ndarray
    c_low: float
    c_high: float
    degenerate: bool

    def lines(self):
        return (self.normal, self.c_low), (self.normal, self.c_high)


def support_lines_through(poly: ConvexPolygon, d, tol: Tolerances = DEFAULT_TOL,
                          strict: bool = False) -> SupportLines:
    """The two support lines of poly with direction d (a point at infinity).

    A zero-width slab (poly is a segment parallel to d) is flagged, not
    fatal; pass strict=True to raise DegenerateSupport instead.
    """
    dp = d if isinstance(d, DirPoint) else DirPoint(_as_angle(d))
    n = dp.normal()
    lo, hi = poly.support_interval(n)
    degen = (hi - lo) <= tol.eps_convex * poly.scale
    if degen and strict:
        raise DegenerateSupport("support lines coincide for this direction")
    return SupportLines(dp, n, lo, hi, degen)


# ---------------------------------------------------------------------------
# Polar duality
# ---------------------------------------------------------------------------

def interior_margin(poly: ConvexPolygon, p) -> float:
    """Signed distance from p to the edge lines; positive strictly inside."""
    p = np.asarray(p, dtype=float)
    v = poly.vertices
    if poly.n == 1:
        return -float(np.linalg.norm(p - v[0]))
    e = poly.edges()
    # outward normals for ccw order
    nrm = np.stack([e[:, 1], -e[:, 0]], axis=1)
    ln = np.linalg.norm(nrm, axis=1)
    good = ln > 0
    nrm = nrm[good] / ln[good][:, None]
    b = np.sum(nrm * v[good], axis=1)
    if poly.n == 2:
        return -distance(p, poly)
    return float(np.min(b - nrm @ p))


def polar_dual(poly: ConvexPolygon, ref, tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Polar dual around an interior reference point.

    Realizes the set of lines not meeting the polygon, in the affine chart
    of lines <xi, x - ref> = 1.  k-gon -> k-gon; applying it twice around
    the same reference returns the original.
    """
    ref = np.asarray(ref, dtype=float)
    if poly.degenerate:
        raise RefNotInterior("degenerate polygon has no interior")
    margin = interior_margin(poly, ref)
    if margin <= tol.eps_convex * poly.scale:
        raise RefNotInterior("reference point is not strictly interior")
    v = poly.vertices - ref[None, :]
    w = np.roll(v, -1, axis=0)
    # dual vertex of edge (v_i, v_{i+1}): solves <xi, v_i> = <xi, v_{i+1}> = 1
    det = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
    xi = np.stack([(w[:, 1] - v[:, 1]) / det, (v[:, 0] - w[:, 0]) / det], axis=1)
    return convex_hull(xi, tol)


# ---------------------------------------------------------------------------
# Minkowski combinations
# ---------------------------------------------------------------------------

def _edge_cycle(poly: ConvexPolygon):
    """Vertices reordered to start at the min-(y, x) vertex, plus edge vectors."""
    v = poly.vertices
    start = int(np.lexsort((v[:, 0], v[:, 1]))[0])
    v = np.roll(v, -start, axis=0)
    if len(v) == 1:
        return v, np.zeros((0, 2))
    e = np.roll(v, -1, axis=0) - v
    return v, e


def minkowski_scaled_sum(a: float, P: ConvexPolygon, b: float, Q: ConvexPolygon,
                         tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Minkowski sum a*P + b*Q for nonnegative scalars, by edge merging."""
    if a < 0 or b < 0:
        raise ValueError("scalars must be nonnegative")
    if a == 0.0:
        return Q.scaled(b) if b != 1.0 else Q
    if b == 0.0:
        return P.scaled(a) if a != 1.0 else P
    vp, ep = _edge_cycle(P.scaled(a))
    vq, eq = _edge_cycle(Q.scaled(b))
    edges = np.vstack([ep, eq])
    if len(edges) == 0:
        return ConvexPolygon(vp[0] + vq[0])
    ang = np.arctan2(edges[:, 1], edges[:, 0]) % (2.0 * PI)
    order = np.argsort(ang, kind="stable")
    start = vp[0] + vq[0]
    pts = start[None, :] + np.cumsum(edges[order], axis=0)
    return convex_hull(np.vstack([start, pts]), tol)


def minkowski_combine(t: float, P: ConvexPolygon, Q: ConvexPolygon,
                      tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Minkowski combination t*P + (1-t)*Q, t in [0, 1].

    The support function of the result is t*H_P + (1-t)*H_Q in every
    direction.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0.0:
        return Q
    if t == 1.0:
        return P
    return minkowski_scaled_sum(t, P, 1.0 - t, Q, tol)


# ---------------------------------------------------------------------------
# Distances and containment
# ---------------------------------------------------------------------------

def distance(p, poly: ConvexPolygon) -> float:
    """Euclidean distance from a point to the polygon; 0 inside or on it.

    Convex as a function of p.
    """
    p = np.asarray(p, dtype=float)
    v = poly.vertices
    if poly.n == 1:
        return float(np.linalg.norm(p - v[0]))
    e = np.roll(v, -1, axis=0) - v
    rel = p[None, :] - v
    if poly.n >= 3:
        cross = e[:, 0] * rel[:, 1] - e[:, 1] * rel[:, 0]
        if np.all(cross >= -1e-15 * poly.scale ** 2):
            return 0.0
    # nearest point on each edge segment
    ee = np.sum(e * e, axis=1)
    ee[ee == 0.0] = 1.0
    t = np.clip(np.sum(rel * e, axis=1) / ee, 0.0, 1.0)
    foot = v + t[:, None] * e
    return float(np.min(np.linalg.norm(p[None, :] - foot, axis=1)))


def nearest_point(p, poly: ConvexPolygon) -> np.ndarray:
    """Closest point of the polygon to p (p itself when inside)."""
    p = np.asarray(p, dtype=float)
    v = poly.vertices
    if poly.n == 1:
        return v[0].copy()
    e = np.roll(v, -1, axis=0) - v
    rel = p[None, :] - v
    if poly.n >= 3:
        cross = e[:, 0] * rel[:, 1] - e[:, 1] * rel[:, 0]
        if np.all(cross >= -1e-15 * poly.scale ** 2):
            return p.copy()
    ee = np.sum(e * e, axis=1)
    ee[ee == 0.0] = 1.0
    t = np.clip(np.sum(rel * e, axis=1) / ee, 0.0, 1.0)
    foot = v + t[:, None] * e
    i = int(np.argmin(np.linalg.norm(p[None, :] - foot, axis=1)))
    return foot[i]


def distance_many(pts, poly: ConvexPolygon) -> np.ndarray:
    """Vectorized distance for an (k,2) array of query points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    v = poly.vertices
    if poly.n == 1:
        return np.linalg.norm(pts - v[0][None, :], axis=1)
    e = np.roll(v, -1, axis=0) - v
    rel = pts[:, None, :] - v[None, :, :]
    ee = np.sum(e * e, axis=1)
    ee[ee == 0.0] = 1.0
    t = np.clip(np.einsum("kij,ij->ki", rel, e) / ee[None, :], 0.0, 1.0)
    foot = v[None, :, :] + t[:, :, None] * e[None, :, :]
    d = np.min(np.linalg.norm(pts[:, None, :] - foot, axis=2), axis=1)
    if poly.n >= 3:
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        inside = np.all(cross >= -1e-15 * poly.scale ** 2, axis=1)
        d[inside] = 0.0
    return d


def contains_point(poly: ConvexPolygon, p, eps: float = 0.0) -> bool:
    return distance(p, poly) <= eps


def hausdorff(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """Hausdorff distance between two compact convex polygons."""
    d1 = float(np.max(distance_many(P.vertices, Q)))
    d2 = float(np.max(distance_many(Q.vertices, P)))
    return max(d1, d2)


def contains_polygon(P: ConvexPolygon, Q: ConvexPolygon, eps: float = 0.0) -> bool:
    """True if Q is contained in P within eps."""
    return float(np.max(distance_many(Q.vertices, P))) <= eps


# ---------------------------------------------------------------------------
# Clipping
# ---------------------------------------------------------------------------

def halfplane_clip(vertices: np.ndarray, normal, offset: float,
                   eps: float = 1e-12) -> np.ndarray:
    """Clip a convex ccw vertex cycle to the halfplane {x : n.x <= offset}."""
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    n = np.asarray(normal, dtype=float)
    if len(v) == 0:
        return v
    if len(v) == 1:
        return v if float(v[0] @ n) <= offset + eps else v[:0]
    out = []
    vals = v @ n - offset
    m = len(v)
    for i in range(m):
        j = (i + 1) % m
        if m == 2 and i == 1:
            break
        a, b = v[i], v[j]
        fa, fb = vals[i], vals[j]
        if fa <= eps:
            out.append(a)
        if (fa < -eps and fb > eps) or (fa > eps and fb < -eps):
            t = fa / (fa - fb)
            out.append(a + t * (b - a))
    if m == 2:
        if vals[1] <= eps:
            out.append(v[1])
    if not out:
        return np.zeros((0, 2))
    return np.array(out)


def intersect_halfplanes(halfplanes, seed_vertices: np.ndarray,
                         tol: Tolerances = DEFAULT_TOL):
    """Intersection of halfplanes {n.x <= c} clipped out of a seed polygon.

    Returns a ConvexPolygon, or None when the intersection is empty.
    """
    verts = np.asarray(seed_vertices, dtype=float)
    scale = max(1.0, float(np.max(np.abs(verts))))
    for n, c in halfplanes:
        verts = halfplane_clip(verts, n, c, eps=tol.eps_convex * scale)
        if len(verts) == 0:
            return None
    return convex_hull(verts, tol)


def intersect_polygons(P: ConvexPolygon, Q: ConvexPolygon,
                       tol: Tolerances = DEFAULT_TOL):
    """Intersection of two convex polygons; None when empty."""
    if Q.n < 3:
        # degenerate Q: clip Q against P instead
        P, Q = Q, P
        if Q.n < 3:
            # both degenerate: brute segment/point handling
            if P.n == 1:
                return P if contains_point(Q, P.vertices[0], 1e-12 * Q.scale) else None
            if Q.n == 1:
                return Q if contains_point(P, Q.vertices[0], 1e-12 * P.scale) else None
            raise DegenerateInput("segment-segment intersection is not supported")
    v = Q.vertices
    e = np.roll(v, -1, axis=0) - v
    nrm = np.stack([e[:, 1], -e[:, 0]], axis=1)
    b = np.sum(nrm * v, axis=1)
    return intersect_halfplanes(zip(nrm, b), P.vertices, tol)


# ---------------------------------------------------------------------------
# Chebyshev center (largest inscribed disk)
# ---------------------------------------------------------------------------

def chebyshev_center(poly: ConvexPolygon):
    """Center of the largest inscribed disk, via a small LP."""
    from scipy.optimize import linprog

    if poly.n <= 2:
        return poly.centroid()
    v = poly.vertices
    e = np.roll(v, -1, axis=0) - v
    nrm = np.stack([e[:, 1], -e[:, 0]], axis=1)
    ln = np.linalg.norm(nrm, axis=1)
    nrm = nrm / ln[:, None]
    b = np.sum(nrm * v, axis=1)
    a_ub = np.hstack([nrm, np.ones((len(b), 1))])
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=a_ub, b_ub=b,
                  bounds=[(None, None), (None, None), (0.0, None)], method="highs")
    if not res.success:
        return poly.centroid()
    return np.array(res.x[:2])


# ---------------------------------------------------------------------------
# Tangent quadrangle for pointing a set with respect to an arc on L
# ---------------------------------------------------------------------------

def tangent_quadrangle_corners(poly: ConvexPolygon, arc_start: float, arc_end: float,
                               tol: Tolerances = DEFAULT_TOL):
    """The two corners of the support quadrangle whose support cones avoid
    the open direction arc (arc_start -> arc_end, ccw, period pi).

    The quadrangle is bounded by the two support-line pairs with directions
    arc_start and arc_end.  Returns (corners (2,2) array, degenerate flag).
    """
    a = wrap_angle(arc_start)
    b = wrap_angle(arc_end)
    s = np.sin(b - a)
    if abs(s) <= tol.eps_convex:
        raise DegenerateInput("arc endpoints give parallel tangent directions")
    sla = support_lines_through(poly, a, tol)
    slb = support_lines_through(poly, b, tol)
    degen = sla.degenerate or slb.degenerate
    # corner signs (s_a, s_b) with s_a*s_b = -sign(sin(b - a))
    want = -1.0 if s > 0 else 1.0
    pairs = [(1.0, want), (-1.0, -want)]
    mat = np.vstack([sla.normal, slb.normal])
    corners = []
    for s_a, s_b in pairs:
        ca = sla.c_high if s_a > 0 else sla.c_low
        cb = slb.c_high if s_b > 0 else slb.c_low
        corners.append(np.linalg.solve(mat, np.array([ca, cb])))
    return np.array(corners), degen
