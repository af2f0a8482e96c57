"""Line transversals of section fans.

A candidate line is parameterized by its intersections with two reference
planes of the pencil, giving a 4-dimensional affine space of lines disjoint
from L.  The minimax objective (largest distance from the line's hit point
to the corresponding section) is convex in this parameterization, and its
global minimizer is found with a cutting-plane method driven by
subgradients of point-to-polygon distances.  A residual of zero certifies a
common transversal.

Also here: the exhaustive 5-subset consistency check, the four-section
set-valued fixed-point iteration, containment certificates, and the
supporting-half-plane pipeline that routes through octagonalization and
duality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import planar
from .dualize import default_dual_params, dual_of_found_line, l_dual
from .fan import SectionFan, section_at
from .planar import ConvexPolygon, chebyshev_center, distance, nearest_point
from .projcore import (PI, DEFAULT_TOL, Chart, DegenerateInput, GeometryError,
                       HPlane, HPoint, PencilFrame, ProjLine, Tolerances,
                       wrap_angle)


class NoAdmissibleChart(GeometryError):
    """No pencil rotation makes all selected sections finite."""


class EmptySelection(GeometryError):
    """An intermediate admissible set of the fixed-point map is empty."""


class NotSupporting(GeometryError):
    """A supplied half-plane does not support its section."""


class TooManyDirections(GeometryError):
    """Half-plane boundaries meet L in more than four direction classes."""


# ---------------------------------------------------------------------------
# Solver chart
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverChart:
    """Affine chart adapted to a sample subset.

    The infinity plane is the pencil plane at the midpoint of the largest
    sample gap, so all selected sections are finite.  Sections sit in
    parallel horizontal planes at heights cot(theta - theta_inf), scaled by
    1/sin(theta - theta_inf) relative to their unit charts.
    """

    frame: PencilFrame
    theta_inf: float
    thetas_u: np.ndarray
    heights: np.ndarray
    scales: np.ndarray
    polys: tuple

    @property
    def m(self) -> int:
        return len(self.heights)

    def betas(self) -> np.ndarray:
        h = self.heights
        return (h - h[0]) / (h[-1] - h[0])

    def hit_points(self, q: np.ndarray) -> np.ndarray:
        """Chart xy of the line's intersections with every section plane."""
        b = self.betas()[:, None]
        return (1.0 - b) * q[None, 0:2] + b * q[None, 2:4]

    def lift(self, y1: float, y2: float, y3: float) -> np.ndarray:
        """Homogeneous 4-vector of the chart point (y1, y2, y3)."""
        f = self.frame
        cov = f.plane_covector(self.theta_inf)
        return y1 * f.g0 + y2 * f.g1 + y3 * f.origin(self.theta_inf) - cov

    def line_of(self, q: np.ndarray) -> ProjLine:
        p1 = self.lift(q[0], q[1], float(self.heights[0]))
        p2 = self.lift(q[2], q[3], float(self.heights[-1]))
        return ProjLine(np.vstack([p1, p2]))

    def chart(self) -> Chart:
        f = self.frame
        cov = f.plane_covector(self.theta_inf)
        o = f.origin(self.theta_inf)
        return Chart(HPlane(cov), HPoint(-cov),
                     (HPoint(f.g0 - cov), HPoint(f.g1 - cov), HPoint(o - cov)))

    def scale(self) -> float:
        return max(max(p.scale for p in self.polys), 1.0)

    def diameter(self) -> float:
        return max(p.diameter() for p in self.polys)


def build_solver_chart(fan: SectionFan, subset=None) -> SolverChart:
    """Solver chart for a fan restricted to a sample subset."""
    if subset is None:
        subset = list(range(fan.k))
    subset = sorted(int(i) for i in subset)
    if len(subset) < 2:
        raise DegenerateInput("need at least 2 sections")
    th = fan.thetas[subset]
    gaps = np.diff(np.concatenate([th, [th[0] + PI]]))
    gi = int(np.argmax(gaps))
    if gaps[gi] <= 1e-9:
        raise NoAdmissibleChart("sample parameters leave no free pencil plane")
    theta_inf = wrap_angle(th[gi] + gaps[gi] / 2.0)
    th_u = np.where(th > theta_inf, th, th + PI)
    order = np.argsort(th_u)
    th_u = th_u[order]
    idx = [subset[i] for i in order]
    delta = th_u - theta_inf
    sig = 1.0 / np.sin(delta)
    h = np.cos(delta) / np.sin(delta)
    polys = []
    for j, i in enumerate(idx):
        p = fan.sections[i]
        if th_u[j] >= PI:
            p = p.negated()
        polys.append(p.scaled(float(sig[j])))
    return SolverChart(fan.frame, float(theta_inf), th_u, h, sig, tuple(polys))


# ---------------------------------------------------------------------------
# Minimax problem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinimaxProblem:
    """Convex minimax instance over the 4-dimensional line parameterization."""

    chart: SolverChart
    box: np.ndarray

    def objective(self, q) -> float:
        q = np.asarray(q, dtype=float)
        xs = self.chart.hit_points(q)
        return max(distance(xs[i], self.chart.polys[i]) for i in range(self.chart.m))

    def objective_grad(self, q):
        """(value, subgradient) of the max-of-distances objective."""
        q = np.asarray(q, dtype=float)
        xs = self.chart.hit_points(q)
        vals = [distance(xs[i], self.chart.polys[i]) for i in range(self.chart.m)]
        i = int(np.argmax(vals))
        f = vals[i]
        g = np.zeros(4)
        if f > 0.0:
            y = nearest_point(xs[i], self.chart.polys[i])
            d2 = (xs[i] - y) / f
            b = float(self.chart.betas()[i])
            g[0:2] = (1.0 - b) * d2
            g[2:4] = b * d2
        return f, g

    def residuals(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        xs = self.chart.hit_points(q)
        return np.array([distance(xs[i], self.chart.polys[i])
                         for i in range(self.chart.m)])


def minimax_problem(fan: SectionFan, subset=None, box_pad: float = None) -> MinimaxProblem:
    chart = build_solver_chart(fan, subset)
    all_v = np.vstack([p.vertices for p in chart.polys])
    lo = np.min(all_v, axis=0)
    hi = np.max(all_v, axis=0)
    if box_pad is None:
        box_pad = float(np.max(hi - lo)) + 1.0
    box = np.array([[lo[0] - box_pad, hi[0] + box_pad],
                    [lo[1] - box_pad, hi[1] + box_pad]] * 2)
    return MinimaxProblem(chart, box)


# ---------------------------------------------------------------------------
# Cutting-plane solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransversalLine:
    """A candidate transversal with its per-section residual certificate.

    residuals are distances in the solver chart between the line's hit
    points and the selected sections; value is their maximum at the
    solution, gap the final optimality gap of the cutting-plane method.
    """

    line: ProjLine
    residuals: np.ndarray
    chart: Chart
    theta_inf: float
    subset: tuple
    value: float
    gap: float
    iterations: int
    q: np.ndarray


def _initial_points(problem: MinimaxProblem, seed: int, n_extra: int):
    chart = problem.chart
    cents = np.array([chebyshev_center(p) for p in chart.polys])
    b = chart.betas()
    # least-squares line through the section centers: xy(h) affine in beta
    A = np.stack([1.0 - b, b], axis=1)
    sol, *_ = np.linalg.lstsq(A, cents, rcond=None)
    q0 = np.array([sol[0, 0], sol[0, 1], sol[1, 0], sol[1, 1]])
    pts = [q0]
    rng = np.random.default_rng(seed)
    for _ in range(n_extra):
        pts.append(problem.box[:, 0] + rng.random(4) * (problem.box[:, 1] - problem.box[:, 0]))
    return pts


def solve_minimax(problem: MinimaxProblem, tol_solver: float = None,
                  target: float = None, seed: int = 0, max_iter: int = 400,
                  n_seed_points: int = 3, tol: Tolerances = DEFAULT_TOL):
    """Kelley cutting-plane minimization of the minimax objective.

    Stops when the optimality gap drops below tol_solver * scale, when the
    incumbent value reaches target, or at the iteration cap.  Returns
    (q_best, value, gap, iterations).
    """
    from scipy.optimize import linprog

    scale = problem.chart.scale()
    if tol_solver is None:
        tol_solver = tol.tol_solver
    stop_gap = tol_solver * scale
    rows = []
    rhs = []
    best_q = None
    best_f = np.inf
    for p in _initial_points(problem, seed, n_seed_points):
        f, g = problem.objective_grad(p)
        rows.append(np.concatenate([g, [-1.0]]))
        rhs.append(float(g @ p - f))
        if f < best_f:
            best_f, best_q = f, np.asarray(p, dtype=float)
    bounds = [tuple(problem.box[i]) for i in range(4)] + [(0.0, None)]
    c = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    lb = 0.0
    it = 0
    while it < max_iter:
        it += 1
        if target is not None and best_f <= target:
            break
        res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds,
                      method="highs")
        if not res.success:
            break
        lb = max(lb, float(res.x[4]))
        q = res.x[:4]
        f, g = problem.objective_grad(q)
        rows.append(np.concatenate([g, [-1.0]]))
        rhs.append(float(g @ q - f))
        if f < best_f:
            best_f, best_q = f, q.copy()
        if best_f - lb <= stop_gap:
            break
    return best_q, float(best_f), float(max(best_f - lb, 0.0)), it


def chebyshev_line(fan: SectionFan, subset=None, tol: Tolerances = DEFAULT_TOL,
                   tol_solver: float = None, target: float = None, seed: int = 0,
                   max_iter: int = 400) -> TransversalLine:
    """Global minimizer of the maximum line-to-section distance.

    At a positive optimum the maximum is attained by at least two sections
    (the discrete form of the equal-distance property); a residual of zero
    certifies a common transversal of the selected sections.  If the
    minimizer lands on the search box (a near-reference-parallel line), the
    solve is retried with an enlarged box.
    """
    problem = minimax_problem(fan, subset)
    for attempt in range(3):
        q, f, gap, it = solve_minimax(problem, tol_solver=tol_solver,
                                      target=target, seed=seed,
                                      max_iter=max_iter, tol=tol)
        width = problem.box[:, 1] - problem.box[:, 0]
        on_edge = np.any((q - problem.box[:, 0] < 1e-6 * width)
                         | (problem.box[:, 1] - q < 1e-6 * width))
        if not on_edge or (target is not None and f <= target):
            break
        grown = np.stack([problem.box[:, 0] - 1.5 * width,
                          problem.box[:, 1] + 1.5 * width], axis=1)
        problem = MinimaxProblem(problem.chart, grown)
    chart = problem.chart
    return TransversalLine(
        line=chart.line_of(q),
        residuals=problem.residuals(q),
        chart=chart.chart(),
        theta_inf=chart.theta_inf,
        subset=tuple(range(fan.k)) if subset is None else tuple(subset),
        value=f, gap=gap, iterations=it, q=np.asarray(q, dtype=float))


# ---------------------------------------------------------------------------
# Helly consistency
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HellyReport:
    subset_residuals: dict
    max_subset_residual: float
    full_residual: float
    tol_resid: float
    consistent: bool
    in_scope: bool


def helly_verify(fan: SectionFan, tol: Tolerances = DEFAULT_TOL,
                 tol_resid: float = 1e-6, subset_cap: int = 200,
                 seed: int = 0) -> HellyReport:
    """Runs the minimax solver on every 5-subset of samples (or a seeded
    sample of subsets above the cap) and on the full fan, and reports
    whether subset feasibility is consistent with full feasibility."""
    from itertools import combinations

    if fan.k < 5:
        raise DegenerateInput("helly check needs at least 5 samples")
    subsets = list(combinations(range(fan.k), 5))
    if len(subsets) > subset_cap:
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(subsets), size=subset_cap, replace=False)
        subsets = [subsets[i] for i in pick]
    scale = max(1.0, fan.diameter())
    results = {}
    for sub in subsets:
        r = chebyshev_line(fan, subset=list(sub), tol=tol,
                           target=0.25 * tol_resid * scale, seed=seed)
        results[sub] = r.value
    max_sub = max(results.values())
    full = chebyshev_line(fan, tol=tol, target=0.25 * tol_resid * scale, seed=seed)
    thr = tol_resid * scale
    consistent = not (max_sub <= thr and full.value > thr)
    from .fan import validate
    in_scope = fan.validated or validate(fan, tol).ok
    return HellyReport(results, float(max_sub), float(full.value), thr,
                       consistent, in_scope)


# ---------------------------------------------------------------------------
# Four-section fixed-point iteration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BrowderResult:
    converged: bool
    iterations: int
    final_step: float
    line: TransversalLine | None


def browder_four_sections(fan: SectionFan, indices=(0, 1, 2, 3),
                          tol: Tolerances = DEFAULT_TOL, tol_fp: float = None,
                          max_iter: int = 500) -> BrowderResult:
    """Fixed-point search for a line meeting four sections.

    From a point a1 of the first section, choose the line through a1
    meeting sections 2 and 3 (selection: Chebyshev center of the admissible
    hit-point set), then the line through its third-section hit meeting
    sections 4 and 1 (selection: return point nearest to a1).  Stops when
    the return point converges; non-convergence is a legal outcome and the
    caller falls back to chebyshev_line.
    """
    if len(set(indices)) != 4:
        raise DegenerateInput("need four distinct section indices")
    chart = build_solver_chart(fan, list(indices))
    h = chart.heights
    A1, A2, A3, A4 = chart.polys
    if tol_fp is None:
        tol_fp = tol.tol_fp
    scale = chart.scale()
    a1 = chebyshev_center(A1)
    step = np.inf
    x2s = None
    for it in range(1, max_iter + 1):
        r13 = (h[2] - h[0]) / (h[1] - h[0])
        pre3 = ConvexPolygon(a1[None, :] + (A3.vertices - a1[None, :]) / r13,
                             degenerate=A3.degenerate)
        X2 = planar.intersect_polygons(A2, pre3, tol)
        if X2 is None:
            raise EmptySelection("no line through a1 meets sections 2 and 3")
        x2s = chebyshev_center(X2)
        b3 = a1 + (x2s - a1) * r13
        r34 = (h[3] - h[2]) / (h[0] - h[2])
        pre4 = ConvexPolygon(b3[None, :] + (A4.vertices - b3[None, :]) / r34,
                             degenerate=A4.degenerate)
        X1 = planar.intersect_polygons(A1, pre4, tol)
        if X1 is None:
            raise EmptySelection("no line through the third hit meets sections 4 and 1")
        a1p = nearest_point(a1, X1)
        step = float(np.linalg.norm(a1p - a1))
        a1 = a1p
        if step <= tol_fp * scale:
            break
    converged = step <= tol_fp * scale
    if not converged:
        return BrowderResult(False, it, step, None)
    beta1 = float(chart.betas()[1])
    q = np.zeros(4)
    # reconstruct reference-plane hits from a1 (height h1) and x2s (height h2)
    d = (x2s - a1) / beta1 if beta1 != 0 else np.zeros(2)
    q[0:2] = a1
    q[2:4] = a1 + d
    problem = MinimaxProblem(chart, np.zeros((4, 2)))
    res = problem.residuals(q)
    tl = TransversalLine(
        line=chart.line_of(q), residuals=res, chart=chart.chart(),
        theta_inf=chart.theta_inf, subset=tuple(indices),
        value=float(np.max(res)), gap=0.0, iterations=it, q=q)
    return BrowderResult(True, it, step, tl)


# ---------------------------------------------------------------------------
# Containment certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineCertificate:
    residuals: np.ndarray
    eps: float
    contained: bool
    failing: tuple

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))


def line_hits_in_charts(fan: SectionFan, line: ProjLine, tol: Tolerances = DEFAULT_TOL):
    """Unit-chart coordinates of the line's hit point in every sample plane."""
    frame = fan.frame
    hits = []
    for t in fan.thetas:
        cov = frame.plane_covector(float(t))
        a, b = line.span
        ca = float(cov @ a)
        cb = float(cov @ b)
        x = cb * a - ca * b
        lam = float(x @ frame.origin(float(t)))
        if abs(lam) <= 1e-14 * max(1.0, float(np.linalg.norm(x))):
            hits.append(None)
            continue
        hits.append(np.array([float(x @ frame.g0), float(x @ frame.g1)]) / lam)
    return hits


def certify_line(fan: SectionFan, line: ProjLine, eps: float = None,
                 tol: Tolerances = DEFAULT_TOL) -> LineCertificate:
    """Residuals of a line against every sample section, plus a verdict.

    A line meeting all sample sections lies in the denoted body: inside a
    gap the body is the hull of the neighbor sections, which contains the
    segment of the line between its two hit points.  Residuals are measured
    in the unit charts.  The line must not meet L.
    """
    sv = np.linalg.svd(np.vstack([line.span, fan.frame.g0, fan.frame.g1]),
                       compute_uv=False)
    if sv[-1] <= tol.eps_rank * 1e2:
        raise DegenerateInput("line meets L")
    if eps is None:
        eps = tol.eps_certify * max(1.0, fan.diameter())
    hits = line_hits_in_charts(fan, line, tol)
    res = []
    for i, h in enumerate(hits):
        if h is None:
            res.append(np.inf)
        else:
            res.append(distance(h, fan.sections[i]))
    res = np.array(res)
    failing = tuple(int(i) for i in np.nonzero(res > eps)[0])
    return LineCertificate(res, float(eps), len(failing) == 0, failing)


# ---------------------------------------------------------------------------
# Supporting half-plane transversal (degenerate-direction pipeline)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfplaneTransversal:
    line: ProjLine
    margins: np.ndarray
    hits: tuple
    directions: np.ndarray
    dual_residual: float
    certificate: LineCertificate


def support_halfplane_transversal(fan: SectionFan, halfplanes,
                                  tol: Tolerances = DEFAULT_TOL,
                                  eps_touch: float = 1e-6,
                                  seed: int = 0) -> HalfplaneTransversal:
    """Find a line meeting every supplied supporting half-plane.

    halfplanes: iterable of (theta, normal, offset) with the section at
    theta contained in {x : <normal, x> <= offset} and touching it.  The
    boundary directions must span at most four classes; the pipeline pads
    to four, octagonalizes, finds a line in the dual of the octagon fan
    between the four distinguished dual sections, and maps it back.
    """
    scale = max(1.0, fan.scale())
    entries = []
    for theta, normal, offset in halfplanes:
        n = np.asarray(normal, dtype=float)
        ln = float(np.linalg.norm(n))
        if ln == 0.0:
            raise NotSupporting("zero normal")
        n = n / ln
        c = float(offset) / ln
        s = section_at(fan, float(theta), tol)
        smax = float(np.max(s.vertices @ n))
        if smax > c + 1e-9 * scale:
            raise NotSupporting("half-plane cuts its section")
        if c - smax > eps_touch * scale:
            raise NotSupporting("half-plane does not touch its section")
        alpha = float(np.arctan2(-n[0], n[1])) % PI
        entries.append((wrap_angle(float(theta)), n, c, alpha))

    dirs = []
    for _, _, _, alpha in entries:
        if not any(min(abs(alpha - d), PI - abs(alpha - d)) <= 1e-7 for d in dirs):
            dirs.append(alpha)
    if len(dirs) > 4:
        raise TooManyDirections("%d direction classes; at most 4 supported"
                                % len(dirs))
    dirs = sorted(dirs)
    while len(dirs) < 4:
        gaps = np.diff(np.array(dirs + [dirs[0] + PI]))
        i = int(np.argmax(gaps))
        dirs.append(wrap_angle(dirs[i] + gaps[i] / 2.0))
        dirs = sorted(dirs)
    dirs = np.array(dirs)

    from .surgery import octagonalize

    octa = octagonalize(fan, dirs, tol)
    params = default_dual_params(octa, extra=dirs)
    dual = l_dual(octa, dual_params=params, tol=tol,
                  check_input=not fan.validated)
    kink_idx = [int(np.argmin(np.minimum(np.abs(dual.thetas - d),
                                         PI - np.abs(dual.thetas - d))))
                for d in dirs]
    result = chebyshev_line(dual, subset=kink_idx, tol=tol,
                            target=1e-9 * max(1.0, dual.diameter()), seed=seed)
    dual_resid = result.value
    line = dual_of_found_line(result.line, dual.frame, tol)
    cert = certify_line(octa, line, tol=tol)

    hits = []
    margins = []
    for theta, n, c, _ in entries:
        frame = fan.frame
        cov = frame.plane_covector(theta)
        a, b = line.span
        x = float(cov @ b) * a - float(cov @ a) * b
        lam = float(x @ frame.origin(theta))
        pt = np.array([float(x @ frame.g0), float(x @ frame.g1)]) / lam
        hits.append(pt)
        margins.append(c - float(n @ pt))
    return HalfplaneTransversal(line, np.array(margins), tuple(hits), dirs,
                                float(dual_resid), cert)
