"""Celestial configurations and the Z9 obstruction for the Gray configuration.

A celestial symbol ``m#(s_1,t_1; ...; s_k,t_k)`` describes ``k`` point classes
and ``k`` line classes, each an orbit of size ``m`` under the rotation by
``2*pi/m``.  Line class ``h`` joins points ``s_h`` apart in point class ``h``;
point class ``h+1`` is where lines of class ``h`` that are ``t_h`` apart
cross.  The last line class must pass through point class ``0`` again.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .errors import ClosureError, DegenerateError, FormatError
from .geometry import INCIDENCE_TOL, ORIGIN, Point2
from .incidence import build_gray_incidence
from .realizer import AuditReport, Realization, audit, execute

THETA = 2 * math.pi / 9
# D_0 sits at this angle in the frame used for the Z9 obstruction
Z9_PHASE = 17 * math.pi / 18


@dataclass(frozen=True)
class CelestialSymbol:
    m: int
    spans: tuple

    def __post_init__(self):
        spans = tuple((int(s), int(t)) for s, t in self.spans)
        object.__setattr__(self, "spans", spans)
        if self.m < 3:
            raise ValueError("symmetry order must be at least 3")
        if not spans:
            raise ValueError("need at least one (s, t) pair")
        for s, t in spans:
            if not (0 < s < self.m / 2 and 0 < t < self.m / 2):
                raise ValueError(f"span pair ({s}, {t}) outside 0 < s, t < m/2")
            if s == t:
                raise ValueError(f"span pair ({s}, {t}) has s == t")

    @property
    def k(self) -> int:
        return len(self.spans)

    def radius_ratios(self) -> list[float]:
        """``r_{h+1} / r_h`` for each class."""
        return [math.cos(math.pi * s / self.m) / math.cos(math.pi * t / self.m) for s, t in self.spans]

    def closure_defect(self) -> float:
        """``prod cos(pi s_h / m) - prod cos(pi t_h / m)``; zero for a valid symbol."""
        return (math.prod(math.cos(math.pi * s / self.m) for s, _ in self.spans)
                - math.prod(math.cos(math.pi * t / self.m) for _, t in self.spans))

    @classmethod
    def parse(cls, text: str) -> "CelestialSymbol":
        m = re.fullmatch(r"\s*(\d+)\s*#\s*\((.*)\)\s*", text)
        if not m:
            raise FormatError(f"not a celestial symbol: {text!r}")
        pairs = []
        for chunk in m.group(2).split(";"):
            parts = [p.strip() for p in chunk.split(",")]
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise FormatError(f"bad span pair {chunk!r}")
            pairs.append((int(parts[0]), int(parts[1])))
        return cls(int(m.group(1)), tuple(pairs))

    def __str__(self) -> str:
        return f"{self.m}#(" + ";".join(f"{s},{t}" for s, t in self.spans) + ")"


GRAY_CELESTIAL = CelestialSymbol(9, ((1, 3), (4, 3), (2, 3)))


def celestial_realization(sym: CelestialSymbol, radius: float = 1.0, phase: float = 0.0,
                          tol: float = 1e-8) -> Realization:
    """Coordinates of ``sym``; point classes ``P0..``, line classes ``L0..``.

    Raises ``ClosureError`` when the last line class misses point class 0.
    """
    m = sym.m
    step = 2 * math.pi / m
    points, lines = {}, {}
    cur = tuple(Point2.polar(radius, phase + step * j) for j in range(m))
    for h, (s, t) in enumerate(sym.spans):
        points[f"P{h}"] = cur
        ls = tuple(geo.join(cur[j], cur[(j + s) % m]) for j in range(m))
        lines[f"L{h}"] = ls
        cur = tuple(geo.meet(ls[j], ls[(j + t) % m]) for j in range(m))
    first = points["P0"]
    for p in cur:
        if min(p.dist(q) for q in first) > tol * max(1.0, radius):
            raise ClosureError(f"{sym} does not close: the last meets miss point class 0")
    return Realization(m, points, lines, {"radius": radius, "phase": phase})


def incidence_pairs(real: Realization, tol: float = INCIDENCE_TOL) -> list[tuple]:
    """All ``((pc, j), (lc, i))`` point-line pairs within ``tol``."""
    out = []
    for pc, j, p in real.point_items():
        for lc, i, l in real.line_items():
            if abs(geo.point_line_residual(p, l)) <= tol:
                out.append(((pc, j), (lc, i)))
    return out


def incidence_census(real: Realization, tol: float = INCIDENCE_TOL) -> tuple[set, set]:
    """Sets of (lines per point) and (points per line) counts."""
    per_p = {(c, j): 0 for c, j, _ in real.point_items()}
    per_l = {(c, j): 0 for c, j, _ in real.line_items()}
    for p, l in incidence_pairs(real, tol):
        per_p[p] += 1
        per_l[l] += 1
    return set(per_p.values()), set(per_l.values())


def radius_signature(real: Realization) -> list[float]:
    """Sorted point radii and line distances from the center, scaled so the largest point radius is 1."""
    big = max(p.norm() for _, _, p in real.point_items())
    if big == 0:
        raise DegenerateError("all points at the center")
    pr = sorted(p.norm() / big for _, _, p in real.point_items())
    lr = sorted(abs(l.c) / big for _, _, l in real.line_items())
    return pr + lr


def same_radii(a: Realization, b: Realization, tol: float = 1e-8) -> bool:
    ra, rb = radius_signature(a), radius_signature(b)
    return len(ra) == len(rb) and all(abs(x - y) <= tol for x, y in zip(ra, rb))


# ---------------------------------------------------------------- the Z9 obstruction


def z9_frame() -> tuple[list[Point2], list[geo.Line2]]:
    """``D_i`` and ``L_i = D_i D_{i+1}`` with ``D_0`` at angle ``17*pi/18``."""
    d = [Point2.polar(1.0, THETA * i + Z9_PHASE) for i in range(9)]
    return d, [geo.join(d[i], d[(i + 1) % 9]) for i in range(9)]


def _param_on(p: Point2, a: Point2, b: Point2) -> float:
    d = b - a
    w = p - a
    return (w.x * d.x + w.y * d.y) / (d.x * d.x + d.y * d.y)


@dataclass
class Z9Report:
    circle: geo.Circle2
    parabola: geo.Parabola2
    directrix_y: float
    directrix_closed_form: float
    directrix_as_stated: float
    intersections: list
    t1: Point2
    t2: Point2
    t1_closed_form: Point2
    t2_closed_form: Point2
    p1: Point2
    p1_rotate: Point2
    p2: Point2
    t_p1: float
    t_p2: float
    collinearity_det: float
    samples: int
    sample_hits: int
    min_sample_gap: float
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def items(self) -> list[tuple[str, str]]:
        def pt(p):
            return f"({p.x:.12f}, {p.y:.12f})"

        rows = [
            ("circle_center", pt(self.circle.center)),
            ("circle_radius", f"{self.circle.radius:.12f}"),
            ("parabola_focal_parameter", f"{self.parabola.focal_parameter:.12f}"),
            ("directrix_y", f"{self.directrix_y:.12f}"),
            ("directrix_closed_form", f"{self.directrix_closed_form:.12f}"),
            ("directrix_as_stated", f"{self.directrix_as_stated:.12f}"),
            ("intersections", str(len(self.intersections))),
            ("tangencies", str(sum(1 for _, tan in self.intersections if tan))),
            ("T1", pt(self.t1)),
            ("T1_closed_form", pt(self.t1_closed_form)),
            ("T2", pt(self.t2)),
            ("T2_closed_form", pt(self.t2_closed_form)),
            ("P1", pt(self.p1)),
            ("P1_rotate", pt(self.p1_rotate)),
            ("P2", pt(self.p2)),
            ("t_P1", f"{self.t_p1:.12f}"),
            ("t_P2", f"{self.t_p2:.12f}"),
            ("collinearity_det", f"{self.collinearity_det:.3e}"),
            ("samples", str(self.samples)),
            ("sample_hits", str(self.sample_hits)),
            ("min_sample_gap", f"{self.min_sample_gap:.3e}"),
        ]
        rows += [(f"check_{k}", "pass" if v else "FAIL") for k, v in self.checks.items()]
        rows.append(("result", "pass" if self.passed else "FAIL"))
        return rows

    def to_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.items())


def verify_z9_theorem(samples: int = 1000, tol: float = 1e-10) -> Z9Report:
    """Numerically check that only two positions of ``F_0`` let ``N_0`` reach the circle."""
    d, l = z9_frame()
    circ = geo.circle_through(d[8], d[6], ORIGIN)
    par = geo.envelope_parabola(l[0], 4 * THETA)
    dl = par.directrix
    directrix_y = -dl.c / dl.b if abs(dl.a) < 1e-12 else math.nan
    sc = math.sin(math.pi / 18) * math.cos(math.pi / 9)
    hits = geo.parabola_circle_intersections(par, circ)
    t_cf = [Point2(-2 * math.sqrt(3) * sc, 2 * sc), Point2(2 * math.sqrt(3) * sc, 2 * sc)]
    t1 = hits[0][0] if hits else Point2(math.nan, math.nan)
    t2 = hits[-1][0] if hits else Point2(math.nan, math.nan)

    p1 = geo.meet(l[0], l[6])
    p2 = geo.meet(l[0], l[3])
    p1r = geo.rotate(p1, 4 * THETA)
    det = geo.collinearity_det(p1, p1r, t1)

    tp1, tp2 = _param_on(p1, d[0], d[1]), _param_on(p2, d[0], d[1])
    count, hit_count, min_gap = 0, 0, math.inf
    for t in np.linspace(-4.0, 4.0, samples + 8):
        if count == samples:
            break
        if min(abs(t - tp1), abs(t - tp2)) < 1e-6:
            continue
        f0 = d[0].scale(1 - t) + d[1].scale(t)
        n0 = geo.join(f0, geo.rotate(f0, 4 * THETA))
        gap = abs(geo.point_line_residual(circ.center, n0)) - circ.radius
        count += 1
        min_gap = min(min_gap, gap)
        if gap <= 0:
            hit_count += 1

    checks = {
        "two_tangencies": len(hits) == 2 and all(tan for _, tan in hits),
        "tangency_closed_forms": len(hits) == 2 and t1.dist(t_cf[0]) < tol and t2.dist(t_cf[1]) < tol,
        "collinear": abs(det) < tol,
        "samples_miss_circle": count == samples and hit_count == 0,
        "directrix_closed_form": abs(directrix_y + 2 * sc) < tol,
    }
    return Z9Report(
        circle=circ, parabola=par, directrix_y=directrix_y,
        directrix_closed_form=-2 * sc,
        directrix_as_stated=-2 * math.cos(2 * math.pi / 9) * math.cos(4 * math.pi / 9),
        intersections=hits, t1=t1, t2=t2, t1_closed_form=t_cf[0], t2_closed_form=t_cf[1],
        p1=p1, p1_rotate=p1r, p2=p2, t_p1=tp1, t_p2=tp2, collinearity_det=det,
        samples=count, sample_hits=hit_count, min_sample_gap=min_gap, checks=checks,
    )


def z9_weak_gray(use_p2: bool = False) -> tuple[Realization, AuditReport]:
    """Run the Z9 program with ``F_0`` at ``L_0 ^ L_6`` (or ``L_0 ^ L_3``) and audit against Gray."""
    from .formats import load_program

    prog = load_program("z9.prog")
    d, l = z9_frame()
    f0 = geo.meet(l[0], l[3] if use_p2 else l[6])
    real = execute(prog, {"t": _param_on(f0, d[0], d[1])})
    return real, audit(real, build_gray_incidence())
