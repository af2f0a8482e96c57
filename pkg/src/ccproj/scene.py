"""Scene files, generators, and mesh export.

A scene is a fan plus tolerance overrides and the generator seed,
serialized as UTF-8 JSON text with every number printed with 17
significant digits, so parse(serialize(scene)) is byte-identical.

Generators produce validated fans: the quadric family (unit-disk sections
in the canonical unit charts; in the chart x2 != 0 these are the disks
u^2 + v^2 <= 1 + w^2 of the standard signature-(2,2) quadric) and seeded
random fans built from coupled-ellipse quadric bodies refined by random
surgeries, which preserves validity by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .fan import SectionFan, validate
from .planar import ConvexPolygon, convex_hull
from .projcore import (PI, DEFAULT_TOL, ArcSegment, GeometryError, PencilFrame,
                       Tolerances)


class SceneFormatError(GeometryError):
    """Scene text is not a valid scene document."""


@dataclass(frozen=True)
class Scene:
    fan: SectionFan
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None

    def tol(self, base: Tolerances = DEFAULT_TOL) -> Tolerances:
        if not self.tolerances:
            return base
        from dataclasses import replace
        known = {k: v for k, v in self.tolerances.items() if hasattr(base, k)}
        return replace(base, **known)


# ---------------------------------------------------------------------------
# Serialization (byte-exact round trip)
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    raise TypeError(type(x))


def _emit(obj) -> str:
    if isinstance(obj, dict):
        inner = ", ".join('"%s": %s' % (k, _emit(v)) for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    return _fmt(obj)


def serialize(scene: Scene) -> str:
    f = scene.fan
    doc = {
        "format": "ccproj-scene",
        "version": 1,
        "frame": {
            "space": f.frame.space,
            "g0": [float(x) for x in f.frame.g0],
            "g1": [float(x) for x in f.frame.g1],
            "h2": [float(x) for x in f.frame.h2],
            "h3": [float(x) for x in f.frame.h3],
        },
        "samples": [
            {
                "theta": float(t),
                "chart": {
                    "origin": [float(x) for x in f.frame.origin(float(t))],
                    "u": [float(x) for x in f.frame.g0],
                    "v": [float(x) for x in f.frame.g1],
                },
                "vertices": [[float(a), float(b)] for a, b in s.vertices],
            }
            for t, s in zip(f.thetas, f.sections)
        ],
        "tolerances": {k: float(v) for k, v in sorted(scene.tolerances.items())},
        "seed": scene.seed,
        "validated": f.validated,
    }
    return _emit(doc) + "\n"


def parse(text: str) -> Scene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneFormatError("not valid JSON: %s" % exc) from exc
    if not isinstance(doc, dict) or doc.get("format") != "ccproj-scene":
        raise SceneFormatError("missing ccproj-scene format marker")
    fr = doc["frame"]
    frame = PencilFrame(np.array(fr["g0"]), np.array(fr["g1"]),
                        np.array(fr["h2"]), np.array(fr["h3"]),
                        fr.get("space", "primal"))
    samples = []
    for s in doc["samples"]:
        verts = np.array(s["vertices"], dtype=float)
        poly = ConvexPolygon(verts)
        if len(verts) >= 3:
            hull = convex_hull(verts)
            if hull.n != len(verts):
                raise SceneFormatError(
                    "sample at theta=%s: vertices are not in strictly convex "
                    "counterclockwise position" % s["theta"])
            poly = hull
        samples.append((float(s["theta"]), poly))
    fan = SectionFan.create(frame, samples, validated=bool(doc.get("validated", False)))
    seed = doc.get("seed")
    return Scene(fan, dict(doc.get("tolerances", {})),
                 None if seed is None else int(seed))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def _mgon(radius: float, m: int, center=(0.0, 0.0), phase: float = 0.0) -> ConvexPolygon:
    a = phase + 2.0 * PI * np.arange(m) / m
    return convex_hull(np.stack([center[0] + radius * np.cos(a),
                                 center[1] + radius * np.sin(a)], axis=1))


def quadric_thetas(k: int) -> np.ndarray:
    """Pencil parameters of tan-spaced slope samples w = tan(psi)."""
    psis = -PI / 2 + PI * (np.arange(k) + 0.5) / k
    ws = np.tan(psis)
    return np.sort(np.arctan2(1.0, -ws) % PI)


def gen_quadric(k: int = 12, m: int = 64, mode: str = "inscribed",
                tol: Tolerances = DEFAULT_TOL) -> Scene:
    """Fan of the standard quadric body: every section is the unit disk in
    its unit chart, rendered as a regular m-gon (inscribed or
    circumscribed).  Inscribed mode is contained in the body exactly."""
    if k < 3 or m < 8:
        raise ValueError("need k >= 3 and m >= 8")
    if mode not in ("inscribed", "circumscribed"):
        raise ValueError("mode must be inscribed or circumscribed")
    r = 1.0 if mode == "inscribed" else 1.0 / np.cos(PI / m)
    frame = PencilFrame.standard()
    fan = SectionFan.create(frame, [(float(t), _mgon(r, m))
                                    for t in quadric_thetas(k)])
    report = validate(fan, tol)
    if not report.ok:
        raise GeometryError("generated quadric fan failed validation")
    fan = SectionFan(fan.frame, fan.thetas, fan.sections, validated=True)
    return Scene(fan, {}, None)


def _ellipse_section(P, N, C, theta: float, m: int) -> ConvexPolygon:
    o = np.array([-np.sin(theta), np.cos(theta)])
    w0 = -np.linalg.solve(P, C @ o)
    rho = float(o @ N @ o + (C @ o) @ np.linalg.solve(P, C @ o))
    a = 2.0 * PI * np.arange(m) / m
    circ = np.stack([np.cos(a), np.sin(a)], axis=1) * np.sqrt(rho)
    L = np.linalg.cholesky(np.linalg.inv(P))
    return convex_hull(w0[None, :] + circ @ L.T)


def gen_random_fan(seed: int, k: int = 12, complexity: int = 2, m: int = 48,
                   tol: Tolerances = DEFAULT_TOL) -> Scene:
    """Seeded random valid fan.

    Starts from a random coupled-ellipse quadric body (positive-definite
    blocks on L and its complement, small off-diagonal coupling) sampled at
    jittered parameters, then applies `complexity` random hull/pointing
    surgeries; both preserve validity.  Deterministic in the seed.
    """
    from .surgery import surgery_p, surgery_s

    rng = np.random.default_rng(seed)

    def rand_spd(scale_lo, scale_hi):
        ang = rng.uniform(0, PI)
        rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
        return rot @ np.diag(rng.uniform(scale_lo, scale_hi, size=2)) @ rot.T

    P = rand_spd(0.6, 1.6)
    N = rand_spd(0.5, 2.5)
    C = rng.normal(scale=0.15, size=(2, 2))
    jitter = rng.uniform(-0.25, 0.25, size=k) / k
    thetas = np.sort(((np.arange(k) + 0.5) / k + jitter) * PI) % PI
    frame = PencilFrame.standard()
    fan = SectionFan.create(frame, [(float(t), _ellipse_section(P, N, C, float(t), m))
                                    for t in thetas])
    for _ in range(int(complexity)):
        kind = rng.choice(["S", "P"])
        a = rng.uniform(0, PI)
        length = rng.uniform(0.15, 0.45) * PI
        arc = ArcSegment(a, (a + length) % PI)
        if kind == "S":
            fan = surgery_s(fan, arc, tol)
        else:
            fan = surgery_p(fan, arc, tol)
    report = validate(fan, tol)
    if not report.ok:
        raise GeometryError("random fan generation failed validation (seed %d): %s"
                            % (seed, "; ".join(report.messages[:2])))
    fan = SectionFan(fan.frame, fan.thetas, fan.sections, validated=True)
    return Scene(fan, {}, int(seed))


# ---------------------------------------------------------------------------
# Mesh export
# ---------------------------------------------------------------------------

def export_mesh(fan: SectionFan) -> str:
    """Indexed triangle mesh of the boundary surface, "ccmesh 1" format.

    Header line "ccmesh 1"; vertex lines "v x y z"; face lines "f i j k"
    with 1-based indices.  Section polygons are embedded in the affine
    chart whose infinity plane sits in the largest sample gap and lofted
    ring-to-ring across the k-1 finite gaps; the wrap gap passes through
    the chart's infinity plane and is omitted.
    """
    from .transversal import build_solver_chart

    chart = build_solver_chart(fan)
    rings = []
    for j in range(chart.m):
        v = chart.polys[j].vertices
        h = float(chart.heights[j])
        rings.append(np.column_stack([v, np.full(len(v), h)]))

    lines = ["ccmesh 1"]
    offsets = []
    count = 0
    for ring in rings:
        offsets.append(count)
        for x, y, z in ring:
            lines.append("v %s %s %s" % (_fmt(float(x)), _fmt(float(y)), _fmt(float(z))))
        count += len(ring)

    def ring_angles(ring):
        c = ring[:, :2].mean(axis=0)
        return np.arctan2(ring[:, 1] - c[1], ring[:, 0] - c[0]) % (2 * PI)

    for j in range(chart.m - 1):
        r1, r2 = rings[j], rings[j + 1]
        a1 = ring_angles(r1)
        a2 = ring_angles(r2)
        o1 = np.argsort(a1)
        o2 = np.argsort(a2)
        i1 = i2 = 0
        n1, n2 = len(o1), len(o2)
        while i1 < n1 or i2 < n2:
            next1 = a1[o1[(i1 + 1) % n1]] + (2 * PI if i1 + 1 >= n1 else 0)
            next2 = a2[o2[(i2 + 1) % n2]] + (2 * PI if i2 + 1 >= n2 else 0)
            va = offsets[j] + o1[i1 % n1]
            vb = offsets[j + 1] + o2[i2 % n2]
            if i1 < n1 and (i2 >= n2 or next1 <= next2):
                vc = offsets[j] + o1[(i1 + 1) % n1]
                i1 += 1
            else:
                vc = offsets[j + 1] + o2[(i2 + 1) % n2]
                i2 += 1
            lines.append("f %d %d %d" % (va + 1, vb + 1, vc + 1))
    return "\n".join(lines) + "\n"
