"""Fans of convex polygon sections over the pencil of planes through a line.

A SectionFan holds cyclically ordered samples (theta_i, S_i), each S_i a
convex polygon in the canonical unit chart of plane(theta_i).  The fan
denotes the body obtained by convex-hull interpolation on every gap, which
keeps the data structure closed under all supported operations.  Between
samples the section is the Minkowski combination

    section(theta) = (A/kappa) S_i + (B/kappa) S_j,
    A = sin(theta_j - theta), B = sin(theta - theta_i),
    kappa = |A o(theta_i) + B o(theta_j)|,

which is the slice of the hull of S_i and S_j taken in any affine chart
whose infinity plane is a pencil plane outside the gap (the coefficients
contain no chart parameter, so the hull is chart-independent).

Fans are immutable; all functions are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import planar
from .planar import ConvexPolygon, convex_hull, minkowski_scaled_sum
from .projcore import (PI, DEFAULT_TOL, ArcSegment, DegenerateInput, GeometryError,
                       PencilFrame, Tolerances, wrap_angle)

THETA_EPS = 1e-12


class CenterNotOnL(GeometryError):
    """Projection center does not lie on the pencil line L."""


# ---------------------------------------------------------------------------
# SectionFan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectionFan:
    """Cyclic fan of convex sections with hull interpolation between them."""

    frame: PencilFrame
    thetas: np.ndarray
    sections: tuple
    validated: bool = False

    def __post_init__(self):
        th = np.asarray(self.thetas, dtype=float).copy()
        if len(th) < 3:
            raise DegenerateInput("a fan needs at least 3 samples")
        if len(th) != len(self.sections):
            raise DegenerateInput("thetas and sections length mismatch")
        if np.any(th < 0.0) or np.any(th >= PI):
            raise DegenerateInput("sample parameters must lie in [0, pi)")
        if np.any(np.diff(th) <= THETA_EPS):
            raise DegenerateInput("sample parameters must be strictly increasing mod pi")
        th.setflags(write=False)
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "sections", tuple(self.sections))

    @staticmethod
    def create(frame: PencilFrame, samples, validated: bool = False) -> "SectionFan":
        """Build a fan from (theta, polygon) pairs; samples are sorted mod pi."""
        pairs = sorted(((wrap_angle(t), p) for t, p in samples), key=lambda tp: tp[0])
        th = np.array([t for t, _ in pairs])
        polys = tuple(p for _, p in pairs)
        return SectionFan(frame, th, polys, validated)

    @property
    def k(self) -> int:
        return len(self.thetas)

    def diameter(self) -> float:
        return max(s.diameter() for s in self.sections)

    def scale(self) -> float:
        return max(s.scale for s in self.sections)

    def with_sections(self, sections, validated: bool = False) -> "SectionFan":
        return SectionFan(self.frame, self.thetas, tuple(sections), validated)

    def sample_index_at(self, theta: float):
        """Index of the sample at parameter theta (mod pi), or None."""
        t = wrap_angle(theta)
        idx = int(np.searchsorted(self.thetas, t))
        for j in (idx - 1, idx % self.k):
            d = abs(self.thetas[j % self.k] - t)
            if min(d, PI - d) <= THETA_EPS * 10:
                return j % self.k
        return None

    def gap_of(self, theta: float):
        """(i, j, theta_i, theta_j, theta_u) for theta strictly inside a gap.

        theta_j and theta_u are unwrapped so theta_i < theta_u < theta_j and
        theta_j - theta_i < pi.
        """
        t = wrap_angle(theta)
        idx = int(np.searchsorted(self.thetas, t))
        if idx == 0 or idx == self.k:
            i, j = self.k - 1, 0
            ti = float(self.thetas[i])
            tj = float(self.thetas[j]) + PI
            tu = t + PI if t < self.thetas[0] else t
        else:
            i, j = idx - 1, idx
            ti, tj, tu = float(self.thetas[i]), float(self.thetas[j]), t
        return i, j, ti, tj, tu

    def edge_direction_classes(self, tol_angle: float = 1e-9):
        """Sorted distinct direction angles (mod pi) of all section edges."""
        angles = []
        for s in self.sections:
            if s.n < 2:
                continue
            e = s.edges()
            if s.n == 2:
                e = e[:1]
            a = np.arctan2(e[:, 1], e[:, 0]) % PI
            angles.append(a)
        if not angles:
            return np.zeros(0)
        a = np.sort(np.concatenate(angles))
        keep = [a[0]]
        for x in a[1:]:
            if x - keep[-1] > tol_angle:
                keep.append(x)
        if len(keep) > 1 and (PI - keep[-1] + keep[0]) <= tol_angle:
            keep.pop()
        return np.array(keep)


def gap_coefficients(theta_i: float, theta_j: float, theta: float):
    """Minkowski weights (a, b) of the hull slice at theta in [theta_i, theta_j]."""
    A = np.sin(theta_j - theta)
    B = np.sin(theta - theta_i)
    kappa = np.sqrt(A * A + B * B + 2.0 * A * B * np.cos(theta_j - theta_i))
    return A / kappa, B / kappa


def hull_slice(theta_a: float, Pa: ConvexPolygon, theta_b: float, Pb: ConvexPolygon,
               theta: float, tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Slice at theta of the hull of two sections, all in unwrapped charts.

    Requires theta_a <= theta <= theta_b and theta_b - theta_a < pi; the
    polygons must be expressed in the unit charts of the unwrapped
    parameters (negate vertices when a parameter is shifted by pi).
    """
    if not (theta_a - THETA_EPS <= theta <= theta_b + THETA_EPS):
        raise ValueError("theta outside the arc")
    a, b = gap_coefficients(theta_a, theta_b, min(max(theta, theta_a), theta_b))
    return minkowski_scaled_sum(float(a), Pa, float(b), Pb, tol)


def section_at(fan: SectionFan, theta: float, tol: Tolerances = DEFAULT_TOL) -> ConvexPolygon:
    """Section of the denoted body at pencil parameter theta (mod pi).

    At a sample parameter this is the stored polygon; inside a gap it is the
    hull-interpolated slice, returned in the canonical unit chart of
    plane(theta mod pi).
    """
    hit = fan.sample_index_at(theta)
    if hit is not None:
        return fan.sections[hit]
    i, j, ti, tj, tu = fan.gap_of(theta)
    a, b = gap_coefficients(ti, tj, tu)
    Pi = fan.sections[i]
    Pj = fan.sections[j].negated() if tj >= PI else fan.sections[j]
    out = minkowski_scaled_sum(float(a), Pi, float(b), Pj, tol)
    if tu >= PI:
        out = out.negated()
    return out


# ---------------------------------------------------------------------------
# Projection profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionProfile:
    """Radial profile of the body's projection from a center t on L.

    The projection lives in RP^2 with marked point c = pi(L); the chart is
    centered at c with the polar line of c at infinity.  For each sample,
    w_intervals[i] is the (min, max) of the linear functional
    w = -u sin(psi) + v cos(psi) over the section polygon; the covered part
    of the pencil line at theta_i is the set of points d(theta_i)/w,
    w in the interval, which never contains c.
    """

    frame: PencilFrame
    center_psi: float
    thetas: np.ndarray
    w_intervals: np.ndarray

    @property
    def k(self) -> int:
        return len(self.thetas)

    def interval_unwrapped(self, j: int, wrapped: bool):
        lo, hi = self.w_intervals[j]
        return (-hi, -lo) if wrapped else (lo, hi)

    def interval_at(self, theta: float):
        """Interpolated (min, max) of the w functional at any theta (mod pi)."""
        lo, hi = interval_at_many(self, np.array([theta]))
        return float(lo[0]), float(hi[0])

    def endpoints(self) -> np.ndarray:
        """All profile-segment endpoints as chart points (2k, 2)."""
        d = np.stack([-np.sin(self.thetas), np.cos(self.thetas)], axis=1)
        pts = []
        for i in range(self.k):
            for w in self.w_intervals[i]:
                pts.append(d[i] / w)
        return np.array(pts)

    def segment_contains(self, theta: float, w_value: float, eps: float = 0.0) -> bool:
        lo, hi = self.interval_at(theta)
        return lo - eps <= w_value <= hi + eps

    def straddles(self, eps: float) -> bool:
        """True when every sample interval has endpoints on both sides of c."""
        return bool(np.all(self.w_intervals[:, 0] < -eps)
                    and np.all(self.w_intervals[:, 1] > eps))


def interval_at_many(profile: ProjectionProfile, thetas: np.ndarray):
    """Vectorized interpolated w-intervals (support intervals are
    Minkowski-linear across hull-interpolated gaps)."""
    th = np.asarray(thetas, dtype=float) % PI
    ts = profile.thetas
    k = len(ts)
    lo = np.empty_like(th)
    hi = np.empty_like(th)
    idx = np.searchsorted(ts, th)
    exact = np.zeros(len(th), dtype=bool)
    for j in (idx - 1) % k, idx % k:
        d = np.abs(ts[j] - th)
        m = np.minimum(d, PI - d) <= THETA_EPS * 10
        lo[m & ~exact] = profile.w_intervals[j[m & ~exact], 0]
        hi[m & ~exact] = profile.w_intervals[j[m & ~exact], 1]
        exact |= m
    rest = ~exact
    if np.any(rest):
        t = th[rest]
        ix = np.searchsorted(ts, t)
        wrap = (ix == 0) | (ix == k)
        i = np.where(wrap, k - 1, ix - 1)
        j = np.where(wrap, 0, ix % k)
        ti = ts[i]
        tj = ts[j] + np.where(wrap, PI, 0.0)
        tu = t + np.where(wrap & (t < ts[0]), PI, 0.0)
        a, b = gap_coefficients(ti, tj, tu)
        li = profile.w_intervals[i, 0]
        hi_i = profile.w_intervals[i, 1]
        lj = np.where(wrap, -profile.w_intervals[j, 1], profile.w_intervals[j, 0])
        hj = np.where(wrap, -profile.w_intervals[j, 0], profile.w_intervals[j, 1])
        lo_g = a * li + b * lj
        hi_g = a * hi_i + b * hj
        flip = tu >= PI
        lo[rest] = np.where(flip, -hi_g, lo_g)
        hi[rest] = np.where(flip, -lo_g, hi_g)
    return lo, hi


def project_from(fan: SectionFan, t, tol: Tolerances = DEFAULT_TOL) -> ProjectionProfile:
    """Projection profile of the fan from a center t on L.

    t may be an angle psi, a raw 4-vector, or an HPoint; it must lie on L
    within the incidence tolerance.
    """
    frame = fan.frame
    if isinstance(t, (int, float)):
        psi = wrap_angle(float(t))
    else:
        coords = t.coords if hasattr(t, "coords") else np.asarray(t, dtype=float)
        if frame.off_l_distance(coords) > tol.eps_incid * 1e3:
            raise CenterNotOnL("projection center must lie on L")
        psi = frame.angle_of_l_point(coords)
    func = np.array([-np.sin(psi), np.cos(psi)])
    intervals = np.empty((fan.k, 2))
    for i, s in enumerate(fan.sections):
        vals = s.vertices @ func
        intervals[i] = (float(np.min(vals)), float(np.max(vals)))
    return ProjectionProfile(frame, psi, fan.thetas, intervals)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CenterCheck:
    psi: float
    straddle_ok: bool
    marked_point_ok: bool
    segments_ok: bool
    worst_violation: float

    @property
    def ok(self) -> bool:
        return self.straddle_ok and self.marked_point_ok and self.segments_ok


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the convex-concavity checks on a fan."""

    sections_ok: bool
    solver_ready: bool
    disjoint_ok: bool
    concave_ok: bool
    centers: tuple
    messages: tuple

    @property
    def ok(self) -> bool:
        return self.sections_ok and self.disjoint_ok and self.concave_ok

    def __repr__(self):
        flag = "valid" if self.ok else "INVALID"
        return "ValidationReport(%s, sections=%s, disjoint=%s, concave=%s)" % (
            flag, self.sections_ok, self.disjoint_ok, self.concave_ok)


def _check_center(fan: SectionFan, psi: float, tol: Tolerances,
                  n_probe: int) -> CenterCheck:
    profile = project_from(fan, psi, tol)
    wscale = float(np.max(np.abs(profile.w_intervals)))
    eps_w = tol.eps_convex * max(wscale, 1e-30)
    if not profile.straddles(eps_w):
        return CenterCheck(psi, False, False, False, np.inf)

    pts = profile.endpoints()
    hull = convex_hull(pts, tol)
    margin = planar.interior_margin(hull, np.zeros(2))
    marked_ok = margin > tol.eps_convex * hull.scale

    # Pairwise endpoint-segment probe: every chord between profile endpoints,
    # traversed on the marked-point side, must stay outside the open covered
    # segments.  Probes are tested against the exact interpolated profile.
    m = len(pts)
    ii, jj = np.triu_indices(m, k=1)
    fr = (np.arange(n_probe) + 1.0) / (n_probe + 1.0)
    z = (pts[ii][:, None, :] * (1.0 - fr)[None, :, None]
         + pts[jj][:, None, :] * fr[None, :, None]).reshape(-1, 2)
    r = np.linalg.norm(z, axis=1)
    pos = r > 1e-14
    z, r = z[pos], r[pos]
    phi = np.arctan2(-z[:, 0], z[:, 1])  # z = |z| * (-sin(phi), cos(phi))
    theta = phi % PI
    lo, hi = interval_at_many(profile, theta)
    upper = np.where(phi >= 0, hi, -lo)  # ray-oriented outer support value
    # covered part of the ray starts at radius 1/upper
    viol = r * upper - 1.0
    worst = float(np.max(viol)) if len(viol) else 0.0
    seg_ok = worst <= 1e-9 + tol.eps_convex * 10.0
    return CenterCheck(psi, True, marked_ok, seg_ok, worst)


def validate(fan: SectionFan, tol: Tolerances = DEFAULT_TOL, n_centers: int = 16,
             n_probe: int = 64) -> ValidationReport:
    """Check the three convex-concavity clauses on the denoted body.

    (a) every section is a convex polygon in its plane (by construction of
    ConvexPolygon; degeneracy is counted), (b) the body stays away from L
    (finite vertex magnitudes below the radius cap; the interpolating hulls
    avoid L by construction), (c) for sampled centers t on L the complement
    of the projection is an open convex set containing the marked point
    pi(L).  Concavity is probed with the pairwise endpoint-segment test at
    n_probe points per segment against the exact interpolated profile.

    Fans whose projection complement is unbounded in the canonical chart
    (some section's shadow fails to straddle the marked point's parallel
    line) are reported as concavity failures.
    """
    messages = []
    sections_ok = True
    nondegenerate = 0
    for i, s in enumerate(fan.sections):
        if not np.all(np.isfinite(s.vertices)):
            sections_ok = False
            messages.append("section %d has non-finite vertices" % i)
        if not s.degenerate:
            nondegenerate += 1
    solver_ready = nondegenerate >= 3

    vmax = fan.scale()
    disjoint_ok = vmax < tol.radius_cap
    if not disjoint_ok:
        messages.append("section vertices reach %.3g chart units; the body "
                        "is not separated from L at tolerance" % vmax)

    psis = (np.arange(n_centers) + 0.37) * PI / n_centers
    centers = []
    concave_ok = True
    for psi in psis:
        chk = _check_center(fan, float(psi), tol, n_probe)
        centers.append(chk)
        if not chk.ok:
            concave_ok = False
            if not chk.straddle_ok:
                messages.append("center psi=%.4f: complement unbounded in the "
                                "canonical chart (shadow does not straddle the "
                                "marked point)" % psi)
            elif not chk.marked_point_ok:
                messages.append("center psi=%.4f: marked point not interior to "
                                "the complement" % psi)
            else:
                messages.append("center psi=%.4f: endpoint chord enters a "
                                "covered segment (violation %.3g)"
                                % (psi, chk.worst_violation))
    return ValidationReport(sections_ok, solver_ready, disjoint_ok, concave_ok,
                            tuple(centers), tuple(messages))


# ---------------------------------------------------------------------------
# Pointedness
# ---------------------------------------------------------------------------

def is_pointed(section: ConvexPolygon, arc: ArcSegment, tol: Tolerances = DEFAULT_TOL,
               eps: float = None):
    """Two vertices making the section pointed w.r.t. the arc on L, or None.

    The section is pointed exactly when it already equals the smallest
    pointed superset, i.e. when adding the two admissible tangent-quadrangle
    corners does not grow it.
    """
    corners, _ = planar.tangent_quadrangle_corners(section, arc.start, arc.end, tol)
    grown = convex_hull(np.vstack([section.vertices, corners]), tol)
    if eps is None:
        eps = 1e-7 * max(section.scale, 1.0)
    if planar.hausdorff(grown, section) <= eps:
        return corners[0], corners[1]
    return None
