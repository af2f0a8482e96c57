"""Duality for section fans: each plane meeting every section of the body
becomes a point of the dual body, fibered over the dual pencil.

For a fan over the line L, the dual body lives in the dual projective space
over L* (the planes containing L).  Its section at the dual pencil
parameter psi is computed from the projection profile at the center
t = l_point(psi): the closure of the projection complement equals the
convex hull of the profile-segment endpoints (exact for hull-interpolated
fans), and the dual section is the polar dual of that hull around the
marked point, with the orientation flip of the dual chart.

Pure functions on immutable fans; per-center sections are independent and
ordered deterministically by parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import planar
from .fan import (SectionFan, THETA_EPS, hull_slice, is_pointed, project_from,
                  section_at, validate)
from .planar import ConvexPolygon, convex_hull, hausdorff, polar_dual
from .projcore import (PI, DEFAULT_TOL, ArcSegment, GeometryError, PencilFrame,
                       ProjLine, Tolerances, dual_arc, dual_line, wrap_angle)


class InvalidInput(GeometryError):
    """Operation requires a fan that passes validation."""


class IntersectsDualL(GeometryError):
    """Line meets the dual pencil line L*, so it has no transversal dual."""


@dataclass(frozen=True)
class DualCorrespondence:
    """Parameter bookkeeping between a pencil frame and its dual.

    Points t on L at angle psi correspond to the dual pencil planes at the
    same angle, and pencil planes at theta correspond to points of L* at
    theta.  Composing both maps with double duality is the identity.
    """

    source: PencilFrame
    target: PencilFrame

    @staticmethod
    def of(frame: PencilFrame) -> "DualCorrespondence":
        return DualCorrespondence(frame, frame.dual())

    def center_to_dual_plane(self, psi: float) -> float:
        return wrap_angle(psi)

    def plane_to_dual_center(self, theta: float) -> float:
        return wrap_angle(theta)


# ---------------------------------------------------------------------------
# Dual sections
# ---------------------------------------------------------------------------

def _dual_section(fan: SectionFan, psi: float, tol: Tolerances) -> ConvexPolygon:
    profile = project_from(fan, psi, tol)
    wscale = float(np.max(np.abs(profile.w_intervals)))
    if not profile.straddles(tol.eps_convex * max(wscale, 1e-30)):
        raise InvalidInput(
            "projection from psi=%.6f does not surround the marked point; "
            "the fan is outside the validated envelope" % psi)
    hull = convex_hull(profile.endpoints(), tol)
    dual = polar_dual(hull, np.zeros(2), tol)
    return dual.negated()


def default_dual_params(fan: SectionFan, k_dual: int = None,
                        extra=None, class_cap: int = 16) -> np.ndarray:
    """Dual sampling parameters: a uniform grid augmented with the source
    fan's edge-direction classes (the dual body's kink parameters) when
    there are few of them, plus any explicitly requested values."""
    k = k_dual if k_dual is not None else fan.k
    params = [np.arange(k) * PI / k]
    classes = fan.edge_direction_classes()
    if 0 < len(classes) <= class_cap:
        params.append(classes)
    if extra is not None:
        params.append(np.asarray(extra, dtype=float) % PI)
    merged = np.sort(np.concatenate(params))
    keep = [merged[0]]
    for x in merged[1:]:
        if x - keep[-1] > THETA_EPS * 100:
            keep.append(x)
    if len(keep) > 1 and PI - keep[-1] + keep[0] <= THETA_EPS * 100:
        keep.pop()
    return np.array(keep)


def _ensure_valid(fan: SectionFan, tol: Tolerances):
    if fan.validated:
        return
    report = validate(fan, tol)
    if not report.ok:
        raise InvalidInput("fan fails validation: %s" % "; ".join(report.messages[:3]))


def l_dual(fan: SectionFan, dual_params=None, tol: Tolerances = DEFAULT_TOL,
           check_input: bool = True) -> SectionFan:
    """Dual fan over L*: sections are the duals of the projection complements.

    dual_params selects the dual pencil parameters to sample (defaults to
    default_dual_params).  The result is marked validated: duality preserves
    convex-concavity.
    """
    if check_input:
        _ensure_valid(fan, tol)
    if dual_params is None:
        params = default_dual_params(fan)
    else:
        params = np.sort(np.asarray(dual_params, dtype=float) % PI)
    sections = [_dual_section(fan, float(p), tol) for p in params]
    return SectionFan(fan.frame.dual(), params, tuple(sections), validated=True)


def involution_residual(fan: SectionFan, tol: Tolerances = DEFAULT_TOL,
                        dual_params=None):
    """Per-section Hausdorff distances between the fan and its double dual.

    The second dual is sampled at the source parameters, so sections are
    compared in identical charts.  Returns (per-sample distances, max).
    """
    d1 = l_dual(fan, dual_params=dual_params, tol=tol)
    d2 = l_dual(d1, dual_params=fan.thetas, tol=tol, check_input=False)
    if len(d2.thetas) != fan.k or np.max(np.abs(d2.thetas - fan.thetas)) > 1e-9:
        raise GeometryError("double dual sampling misaligned")
    dists = np.array([hausdorff(fan.sections[i], d2.sections[i])
                      for i in range(fan.k)])
    return dists, float(np.max(dists))


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def point_in_fan(fan: SectionFan, x, tol: Tolerances = DEFAULT_TOL):
    """(inside, margin, theta) for a homogeneous point of the fan's space.

    margin is the signed chart distance to the section boundary at the
    point's pencil parameter: positive inside, negative outside.
    """
    coords = x.coords if hasattr(x, "coords") else np.asarray(x, dtype=float)
    frame = fan.frame
    theta = frame.theta_of_point(coords)
    section = section_at(fan, theta, tol)
    u, v, lam = frame.chart_coords(theta, coords)
    p = np.array([u, v])
    d = planar.distance(p, section)
    if d > 0.0:
        return False, -d, theta
    return True, max(planar.interior_margin(section, p), 0.0), theta


def plane_meets_all_sections(fan: SectionFan, covector, tol: Tolerances = DEFAULT_TOL,
                             n_grid: int = 256):
    """Direct check that a plane meets every section of the denoted body.

    Returns (meets_all, worst_margin) where worst_margin < 0 reports the
    deepest emptiness margin found on the theta grid and samples.
    """
    xi = np.asarray(covector, dtype=float)
    frame = fan.frame
    nu = np.array([float(np.dot(xi, frame.g0)), float(np.dot(xi, frame.g1))])
    thetas = np.sort(np.concatenate([np.arange(n_grid) * PI / n_grid, fan.thetas]))
    from .fan import interval_at_many, ProjectionProfile
    # offsets xi . o(theta) and section support intervals of nu
    offs = (-np.sin(thetas) * float(np.dot(xi, frame.h2))
            + np.cos(thetas) * float(np.dot(xi, frame.h3)))
    intervals = np.empty((fan.k, 2))
    for i, s in enumerate(fan.sections):
        vals = s.vertices @ nu
        intervals[i] = (float(np.min(vals)), float(np.max(vals)))
    prof = ProjectionProfile(frame, 0.0, fan.thetas, intervals)
    lo, hi = interval_at_many(prof, thetas)
    lo = lo + offs
    hi = hi + offs
    margin = np.minimum(-lo, hi)  # >= 0 iff 0 in [lo, hi]
    return bool(np.all(margin >= -tol.eps_incid)), float(np.min(margin))


# ---------------------------------------------------------------------------
# Affine dependence on parameter and its duality with pointedness
# ---------------------------------------------------------------------------

def _unwrapped_section(fan: SectionFan, theta_u: float, tol: Tolerances) -> ConvexPolygon:
    s = section_at(fan, theta_u % PI, tol)
    return s.negated() if theta_u >= PI else s


def affine_dependence_check(fan: SectionFan, arc: ArcSegment, t_dir=None,
                            tol: Tolerances = DEFAULT_TOL, n_check: int = 8,
                            eps: float = None) -> bool:
    """True when sections over the arc are the Minkowski interpolation of the
    arc-endpoint sections.

    With t_dir (a point on L, as an angle or 4-vector), only the projection
    onto that direction is compared, realizing the one-dimensional reduction
    of affine dependence along a single hyperplane of L.
    """
    if arc.length >= PI - THETA_EPS:
        raise ValueError("arc must be proper")
    scale = fan.scale()
    if eps is None:
        eps = tol.eps_affine * scale
    ta = arc.start
    tb = ta + arc.length
    Sa = _unwrapped_section(fan, ta, tol)
    Sb = _unwrapped_section(fan, tb, tol)
    probes = list(arc.interior_points(n_check))
    probes += [float(t) for t in fan.thetas if arc.contains(float(t), closed=False)]
    if t_dir is not None:
        psi = (float(t_dir) if isinstance(t_dir, (int, float))
               else fan.frame.angle_of_l_point(np.asarray(t_dir, dtype=float)))
        func = np.array([-np.sin(psi), np.cos(psi)])
    for t in probes:
        tu = t if t >= ta - THETA_EPS else t + PI
        expected = hull_slice(ta, Sa, tb, Sb, tu, tol)
        actual = _unwrapped_section(fan, tu, tol)
        if t_dir is None:
            if hausdorff(expected, actual) > eps:
                return False
        else:
            elo, ehi = expected.support_interval(func)
            alo, ahi = actual.support_interval(func)
            if max(abs(elo - alo), abs(ehi - ahi)) > eps:
                return False
    return True


def pointedness_duality_check(fan: SectionFan, arc: ArcSegment,
                              tol: Tolerances = DEFAULT_TOL, n_check: int = 8,
                              eps: float = None):
    """Check that each section's pointedness w.r.t. the arc on L agrees with
    affine dependence of the dual fan over the dual arc, in the direction
    dual to that section's plane.

    Returns (all_agree, per-sample list of (pointed, dual_affine)).
    """
    _ensure_valid(fan, tol)
    darc = dual_arc(arc)
    probes = darc.interior_points(n_check)
    params = default_dual_params(fan, extra=np.concatenate(
        [probes, [darc.start, darc.end]]))
    dfan = l_dual(fan, dual_params=params, tol=tol, check_input=False)
    rows = []
    agree = True
    for i in range(fan.k):
        pointed = is_pointed(fan.sections[i], arc, tol) is not None
        affine = affine_dependence_check(dfan, darc, t_dir=float(fan.thetas[i]),
                                         tol=tol, n_check=n_check, eps=eps)
        rows.append((pointed, affine))
        agree = agree and (pointed == affine)
    return agree, rows


# ---------------------------------------------------------------------------
# Lines across duality
# ---------------------------------------------------------------------------

def dual_of_found_line(l: ProjLine, dual_frame: PencilFrame = None,
                       tol: Tolerances = DEFAULT_TOL) -> ProjLine:
    """Annihilator of a line found in the dual space.

    If the input lies inside a dual fan, the output lies inside the source
    fan (certifiable with transversal.certify_line).  Raises IntersectsDualL
    when the line meets L* and therefore degenerates.
    """
    if dual_frame is not None:
        lstar = np.vstack([dual_frame.g0, dual_frame.g1])
        stacked = np.vstack([l.span, lstar])
        sv = np.linalg.svd(stacked, compute_uv=False)
        if sv[-1] <= tol.eps_rank * sv[0] * 1e3:
            raise IntersectsDualL("line meets the dual pencil line L*")
    return dual_line(l, tol)


# ---------------------------------------------------------------------------
# Containment order
# ---------------------------------------------------------------------------

def fan_contains_sectionwise(outer: SectionFan, inner: SectionFan,
                             eps: float, n_grid: int = 32) -> bool:
    """True when every sampled section of inner sits inside outer's section
    at the same parameter (both fans over the same frame)."""
    thetas = np.concatenate([inner.thetas, outer.thetas,
                             np.arange(n_grid) * PI / n_grid])
    for t in np.unique(thetas % PI):
        si = section_at(inner, float(t))
        so = section_at(outer, float(t))
        if not planar.contains_polygon(so, si, eps):
            return False
    return True
