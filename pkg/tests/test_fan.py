import numpy as np
import pytest

from ccproj import (ArcSegment, CenterNotOnL, SectionFan, convex_hull,
                    hausdorff, is_pointed, project_from, section_at, validate)
from ccproj.fan import gap_coefficients, interval_at_many
from ccproj.planar import contains_polygon, tangent_quadrangle_corners
from ccproj.projcore import PI, DegenerateInput
from conftest import mgon


def theta_of_w(w):
    return float(np.arctan2(1.0, -w) % PI)


def w_chart_polygon(frame, theta, poly_w):
    """Express a polygon given in the chart with origin (0,0,1,w) in the
    canonical unit chart (scale by -sin(theta))."""
    return convex_hull(poly_w.vertices * (-np.sin(theta)))


def test_section_at_sample_is_exact(quad12):
    for i in range(quad12.k):
        assert section_at(quad12, float(quad12.thetas[i])) is quad12.sections[i]


def test_section_at_midpoint_cylinder(frame):
    # samples at w = -1 and +1 carry disks of w-chart radius sqrt(2); the
    # hull slice at w = 0 is the Minkowski average: again a sqrt(2) disk
    th1, th2 = theta_of_w(-1.0), theta_of_w(1.0)
    disk_w = mgon(np.sqrt(2.0), 64)
    samples = [(th1, w_chart_polygon(frame, th1, disk_w)),
               (th2, w_chart_polygon(frame, th2, disk_w)),
               (theta_of_w(-8.0), w_chart_polygon(frame, theta_of_w(-8.0), mgon(np.sqrt(65.0), 64))),
               (theta_of_w(8.0), w_chart_polygon(frame, theta_of_w(8.0), mgon(np.sqrt(65.0), 64)))]
    fan = SectionFan.create(frame, samples)
    mid = section_at(fan, np.pi / 2)  # w = 0, unit chart = mirrored w-chart
    rad = np.linalg.norm(mid.vertices, axis=1)
    assert np.max(np.abs(rad - np.sqrt(2.0))) < 1e-2


def test_section_at_prism_identical_squares(frame):
    # identical squares in a fixed affine chart interpolate to themselves
    sq_w = convex_hull([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    thetas = [theta_of_w(w) for w in (-2.0, -0.5, 0.5, 2.0)]
    fan = SectionFan.create(frame, [(t, w_chart_polygon(frame, t, sq_w))
                                    for t in thetas])
    for tq in np.linspace(thetas[1] + 0.01, thetas[2] - 0.01, 7):
        got = section_at(fan, float(tq))
        back = convex_hull(got.vertices / (-np.sin(tq)))
        assert hausdorff(back, sq_w) < 1e-9


def test_section_at_continuity(quad12):
    # Hausdorff distance to a sample section vanishes as theta approaches it
    t0 = float(quad12.thetas[3])
    prev = None
    for eps in (1e-2, 1e-3, 1e-4, 1e-5):
        d = hausdorff(section_at(quad12, t0 + eps), quad12.sections[3])
        if prev is not None:
            assert d < prev
        prev = d
    assert prev < 1e-4


def test_gap_coefficients_endpoints():
    a, b = gap_coefficients(0.3, 1.1, 0.3)
    assert abs(a - 1.0) < 1e-12 and abs(b) < 1e-15
    a, b = gap_coefficients(0.3, 1.1, 1.1)
    assert abs(b - 1.0) < 1e-12 and abs(a) < 1e-15


def test_fan_constructor_invariants(frame):
    tri = mgon(1.0, 3)
    with pytest.raises(DegenerateInput):
        SectionFan.create(frame, [(0.1, tri), (0.2, tri)])
    with pytest.raises(DegenerateInput):
        SectionFan.create(frame, [(0.1, tri), (0.1, tri), (0.2, tri)])


def test_project_from_quadric(quad12):
    prof = project_from(quad12, 0.0)
    # shadows of unit disks: every interval is ~[-1, 1] and straddles the center
    assert np.max(np.abs(prof.w_intervals[:, 1] - 1.0)) < 1e-2
    assert np.max(np.abs(prof.w_intervals[:, 0] + 1.0)) < 1e-2
    assert prof.straddles(1e-9)
    pts = prof.endpoints()
    assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) < 2e-2
    # accepts a point of L as well
    prof2 = project_from(quad12, np.array([np.cos(0.7), np.sin(0.7), 0, 0]))
    assert abs(prof2.center_psi - 0.7) < 1e-12
    with pytest.raises(CenterNotOnL):
        project_from(quad12, np.array([1.0, 0.0, 0.1, 0.0]))


def test_project_from_common_line_marker(quad12):
    # every section contains the chart origin (the axis line), so every
    # profile segment covers the axis shadow w = 0
    for psi in (0.0, 0.9, 2.2):
        prof = project_from(quad12, psi)
        assert np.all(prof.w_intervals[:, 0] < 0.0)
        assert np.all(prof.w_intervals[:, 1] > 0.0)


def test_project_from_degenerate_points(frame):
    # one-point sections tracing the axis: every profile segment is a point
    from ccproj.planar import ConvexPolygon
    pt = ConvexPolygon([[0.0, 0.0]])
    fan = SectionFan.create(frame, [(t, pt) for t in (0.3, 1.2, 2.1)])
    prof = project_from(fan, 0.5)
    assert np.max(np.abs(prof.w_intervals)) == 0.0


def test_interval_interpolation_matches_sections(quad12):
    prof = project_from(quad12, 1.1)
    thetas = np.array([0.4, 1.0, 2.0, 3.0])
    lo, hi = interval_at_many(prof, thetas)
    func = np.array([-np.sin(1.1), np.cos(1.1)])
    for t, l, h in zip(thetas, lo, hi):
        s = section_at(quad12, float(t))
        vals = s.vertices @ func
        assert abs(l - np.min(vals)) < 1e-9
        assert abs(h - np.max(vals)) < 1e-9


def test_validate_quadric(quad12):
    rep = validate(quad12)
    assert rep.ok and rep.sections_ok and rep.disjoint_ok and rep.concave_ok
    assert rep.solver_ready


def test_validate_concavity_failure(quad12):
    secs = list(quad12.sections)
    secs[5] = secs[5].scaled(3.0)
    rep = validate(quad12.with_sections(secs))
    assert not rep.ok and not rep.concave_ok
    assert any("chord" in m or "marked" in m for m in rep.messages)


def test_validate_waist_failure(quad12):
    secs = list(quad12.sections)
    secs[5] = secs[5].scaled(0.3)
    rep = validate(quad12.with_sections(secs))
    assert not rep.concave_ok


def test_validate_disjointness_failure(quad12):
    secs = list(quad12.sections)
    secs[2] = secs[2].scaled(1e13)  # touches L at chart scale
    rep = validate(quad12.with_sections(secs))
    assert not rep.disjoint_ok


def test_validate_envelope_failure(frame):
    # all sections shifted far to one side: the projection complement from
    # some centers is unbounded and concavity must be reported as failed
    fan = SectionFan.create(frame, [(t, mgon(1.0, 32, center=(6.0, 0.0)))
                                    for t in (0.4, 1.2, 2.0, 2.8)])
    rep = validate(fan)
    assert not rep.concave_ok


def test_quadric_ground_truth_band(quad12):
    # interpolated sections stay between the inscribed-polygon inner disk
    # and the gap-bulge outer disk
    m = quad12.sections[0].n
    halfgap = float(np.max(np.diff(quad12.thetas))) / 2.0
    r_in = np.cos(np.pi / m)
    r_out = 1.0 / np.cos(halfgap)
    dirs = np.stack([np.cos(np.linspace(0, 2 * np.pi, 90)),
                     np.sin(np.linspace(0, 2 * np.pi, 90))], axis=1)
    for t in np.linspace(0, PI, 29, endpoint=False):
        s = section_at(quad12, float(t))
        sup = s.support(dirs)
        assert np.all(sup >= r_in - 1e-12)
        assert np.all(sup <= r_out + 1e-12)


def test_is_pointed_disk_and_pointified():
    disk = mgon(1.0, 64)
    arc = ArcSegment(0.0, np.pi / 2)
    assert is_pointed(disk, arc) is None
    corners, _ = tangent_quadrangle_corners(disk, arc.start, arc.end)
    grown = convex_hull(np.vstack([disk.vertices, corners]))
    got = is_pointed(grown, arc)
    assert got is not None
    v = sorted(map(tuple, np.round(np.vstack(got), 9)))
    assert v == [(-1.0, -1.0), (1.0, 1.0)]
    assert contains_polygon(grown, disk, 1e-12)
