"""Polycyclic construction programs, closure solving, auditing and the grid-copy construction.

A program builds orbits of ``m`` points or lines under the rotation by
``2*pi/m`` about the origin.  Class element ``j`` is always the rotate of
element ``0`` by ``2*pi*j/m``; references like ``B2[1]`` are taken mod ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from . import geometry as geo
from .covers import Arc, FiniteGroup, Node, VoltageGraph, lift, shift_offsets
from .errors import ClosureError, ConstructionError, DegenerateError, LabelError, PolyconfError
from .geometry import INCIDENCE_TOL, ORIGIN, Line2, Point2
from .incidence import LINE, POINT, IncidenceStructure, levi_graph, isomorphic
from .permgroups import Permutation, PermGroup

CENTER = "O"


@dataclass(frozen=True)
class Ref:
    """Element ``index`` of class ``cls``; class ``O`` is the rotation center."""

    cls: str
    index: int = 0

    def __str__(self):
        return CENTER if self.cls == CENTER else f"{self.cls}[{self.index}]"


@dataclass(frozen=True)
class InitRegularOrbit:
    cls: str
    m: int
    radius: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class FreePointOnLine:
    cls: str
    host: Ref
    param: str


@dataclass(frozen=True)
class FreeLineThroughPoint:
    cls: str
    host: Ref
    param: str


@dataclass(frozen=True)
class JoinOrbit:
    cls: str
    a: Ref
    b: Ref


@dataclass(frozen=True)
class MeetOrbit:
    cls: str
    a: Ref
    b: Ref


@dataclass(frozen=True)
class OrbitRotateFill:
    cls: str


@dataclass(frozen=True)
class LineCircleOrbit:
    """Point on ``line`` and on the circle through ``through``; ``pick`` chooses among two hits."""

    cls: str
    line: Ref
    through: tuple
    pick: int = 0


@dataclass(frozen=True)
class TargetIncidence:
    line: Ref
    point: Ref


ConstructionStep = Union[
    InitRegularOrbit, FreePointOnLine, FreeLineThroughPoint, JoinOrbit, MeetOrbit,
    OrbitRotateFill, LineCircleOrbit, TargetIncidence,
]

_POINT_STEPS = (InitRegularOrbit, FreePointOnLine, MeetOrbit, LineCircleOrbit)
_LINE_STEPS = (FreeLineThroughPoint, JoinOrbit)


@dataclass(frozen=True)
class ParamSpec:
    default: float
    lo: float
    hi: float


@dataclass(frozen=True)
class ConstructionProgram:
    m: int
    steps: tuple
    params: Mapping[str, ParamSpec] = field(default_factory=dict)
    labels: Mapping[tuple, str] = field(default_factory=dict)
    expect: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        kinds = {}
        used = set()
        for i, st in enumerate(self.steps):
            refs = _step_refs(st)
            for r, want in refs:
                if r.cls == CENTER:
                    continue
                if r.cls not in kinds:
                    raise ConstructionError(i, st, f"class {r.cls} used before it is defined")
                if want is not None and kinds[r.cls] != want:
                    raise ConstructionError(i, st, f"class {r.cls} has the wrong kind")
            if isinstance(st, OrbitRotateFill):
                if st.cls not in kinds:
                    raise ConstructionError(i, st, f"class {st.cls} used before it is defined")
            elif not isinstance(st, TargetIncidence):
                if st.cls in kinds or st.cls == CENTER:
                    raise ConstructionError(i, st, f"class {st.cls} defined twice")
                kinds[st.cls] = POINT if isinstance(st, _POINT_STEPS) else LINE
            if isinstance(st, InitRegularOrbit) and st.m != self.m:
                raise ConstructionError(i, st, f"orbit size {st.m} differs from program order {self.m}")
            if isinstance(st, (FreePointOnLine, FreeLineThroughPoint)):
                if st.param in used:
                    raise ConstructionError(i, st, f"parameter {st.param} used twice")
                used.add(st.param)
        missing = used - set(self.params)
        if missing:
            raise ConstructionError(-1, None, f"parameters without defaults: {sorted(missing)}")
        object.__setattr__(self, "_kinds", kinds)

    @property
    def class_kinds(self) -> dict:
        return dict(self._kinds)

    @property
    def targets(self) -> list[TargetIncidence]:
        return [s for s in self.steps if isinstance(s, TargetIncidence)]

    def default_params(self) -> dict:
        return {k: v.default for k, v in self.params.items()}

    def with_params(self, **defaults) -> "ConstructionProgram":
        ps = dict(self.params)
        for k, v in defaults.items():
            ps[k] = ParamSpec(v, ps[k].lo, ps[k].hi)
        return ConstructionProgram(self.m, self.steps, ps, self.labels, self.expect)

    def with_labels(self, labels: Mapping[tuple, str]) -> "ConstructionProgram":
        return ConstructionProgram(self.m, self.steps, self.params, dict(labels), self.expect)

    def implied_rlg(self, include_targets: bool = True) -> VoltageGraph:
        """Voltage graph over ``Z m`` of every incidence the program asserts."""
        kinds = self._kinds
        nodes = [Node(c, k) for c, k in kinds.items()]
        arcs = []
        for st in self.steps:
            if isinstance(st, JoinOrbit):
                arcs += [Arc(st.cls, st.a.cls, st.a.index), Arc(st.cls, st.b.cls, st.b.index)]
            elif isinstance(st, MeetOrbit):
                arcs += [Arc(st.a.cls, st.cls, -st.a.index), Arc(st.b.cls, st.cls, -st.b.index)]
            elif isinstance(st, FreePointOnLine):
                arcs.append(Arc(st.host.cls, st.cls, -st.host.index))
            elif isinstance(st, FreeLineThroughPoint):
                arcs.append(Arc(st.cls, st.host.cls, st.host.index))
            elif isinstance(st, LineCircleOrbit):
                arcs.append(Arc(st.line.cls, st.cls, -st.line.index))
            elif isinstance(st, TargetIncidence) and include_targets:
                arcs.append(Arc(st.line.cls, st.point.cls, st.point.index - st.line.index))
        return VoltageGraph(FiniteGroup.cyclic(self.m), tuple(nodes), tuple(arcs))

    def implied_incidence(self) -> IncidenceStructure:
        """The lifted incidence structure, labelled ``cls_j`` (or by ``labels``)."""
        vg = self.implied_rlg()
        g = lift(vg)
        m = self.m
        names = [self.labels.get((nd.name, j), f"{nd.name}_{j}") for nd in vg.nodes for j in range(m)]
        pts = [i for i in range(g.n) if g.colors[i] == POINT]
        lns = [i for i in range(g.n) if g.colors[i] == LINE]
        pi = {v: k for k, v in enumerate(pts)}
        li = {v: k for k, v in enumerate(lns)}
        flags = []
        for u, v in g.edges:
            p, l = (u, v) if g.colors[u] == POINT else (v, u)
            flags.append((pi[p], li[l]))
        return IncidenceStructure([names[i] for i in pts], [names[i] for i in lns], frozenset(flags))


def _step_refs(st) -> list:
    if isinstance(st, FreePointOnLine):
        return [(st.host, LINE)]
    if isinstance(st, FreeLineThroughPoint):
        return [(st.host, POINT)]
    if isinstance(st, JoinOrbit):
        return [(st.a, POINT), (st.b, POINT)]
    if isinstance(st, MeetOrbit):
        return [(st.a, LINE), (st.b, LINE)]
    if isinstance(st, LineCircleOrbit):
        return [(st.line, LINE)] + [(r, POINT) for r in st.through]
    if isinstance(st, TargetIncidence):
        return [(st.line, LINE), (st.point, POINT)]
    return []


@dataclass(frozen=True)
class Realization:
    """Coordinatized orbits: ``points[cls][j]`` and ``lines[cls][j]``."""

    m: int
    points: Mapping[str, tuple]
    lines: Mapping[str, tuple]
    params: Mapping[str, float] = field(default_factory=dict)
    labels: Mapping[tuple, str] = field(default_factory=dict)

    def label(self, cls: str, j: int) -> str:
        return self.labels.get((cls, j), f"{cls}_{j}")

    def point_items(self) -> list[tuple[str, int, Point2]]:
        return [(c, j, p) for c, ps in self.points.items() for j, p in enumerate(ps)]

    def line_items(self) -> list[tuple[str, int, Line2]]:
        return [(c, j, l) for c, ls in self.lines.items() for j, l in enumerate(ls)]

    def polycyclic_defect(self) -> float:
        """Largest deviation of element ``j`` from the rotate of element ``0`` (relative to its size)."""
        worst = 0.0
        for c, ps in self.points.items():
            for j, p in enumerate(ps):
                q = geo.rotate(ps[0], 2 * math.pi * j / self.m)
                worst = max(worst, p.dist(q) / max(1.0, p.norm()))
        for c, ls in self.lines.items():
            for j, l in enumerate(ls):
                q = geo.rotate(ls[0], 2 * math.pi * j / self.m)
                d = min(abs(l.a - q.a) + abs(l.b - q.b) + abs(l.c - q.c),
                        abs(l.a + q.a) + abs(l.b + q.b) + abs(l.c + q.c))
                worst = max(worst, d / max(1.0, abs(l.c)))
        return worst

    def is_polycyclic(self, tol: float = 1e-9) -> bool:
        return all(len(v) == self.m for v in self.points.values()) and \
            all(len(v) == self.m for v in self.lines.values()) and self.polycyclic_defect() <= tol

    def relabeled(self, labels: Mapping[tuple, str]) -> "Realization":
        return Realization(self.m, self.points, self.lines, self.params, dict(labels))

    def rotation_permutation(self, inc: IncidenceStructure) -> Permutation:
        """The rotation by ``2*pi/m`` as a permutation of the Levi vertices of ``inc``."""
        index = {l: i for i, l in enumerate(list(inc.points) + list(inc.lines))}
        img = [None] * len(index)
        for store in (self.points, self.lines):
            for c, els in store.items():
                for j in range(len(els)):
                    src, dst = self.label(c, j), self.label(c, (j + 1) % self.m)
                    if src not in index or dst not in index:
                        raise LabelError(f"label {src} or {dst} not in the incidence structure")
                    img[index[src]] = index[dst]
        if any(x is None for x in img):
            raise LabelError("realization does not cover the incidence structure")
        return Permutation(tuple(img))

    def rotation_group(self, inc: IncidenceStructure) -> PermGroup:
        n = len(inc.points) + len(inc.lines)
        return PermGroup(n, [self.rotation_permutation(inc)])


def _rotations(obj, m: int) -> list:
    return [obj if j == 0 else geo.rotate(obj, 2 * math.pi * j / m) for j in range(m)]


class _State:
    def __init__(self, m):
        self.m = m
        self.points: dict = {}
        self.lines: dict = {}
        self.anchors: dict = {}  # (cls, j) -> two points spanning the line

    def point(self, r: Ref) -> Point2:
        if r.cls == CENTER:
            return ORIGIN
        p = self.points[r.cls][r.index % self.m]
        if p is None:
            raise DegenerateError(f"{r} not constructed yet (missing ROTFILL?)")
        return p

    def line(self, r: Ref) -> Line2:
        l = self.lines[r.cls][r.index % self.m]
        if l is None:
            raise DegenerateError(f"{r} not constructed yet (missing ROTFILL?)")
        return l


def execute(prog: ConstructionProgram, params: Optional[Mapping[str, float]] = None) -> Realization:
    """Run every step; raises :class:`ConstructionError` naming the failing step."""
    vals = prog.default_params()
    if params:
        unknown = set(params) - set(vals)
        if unknown:
            raise ConstructionError(-1, None, f"unknown parameters {sorted(unknown)}")
        vals.update(params)
    m = prog.m
    s = _State(m)
    for i, st in enumerate(prog.steps):
        try:
            _apply(s, st, vals)
        except DegenerateError as exc:
            raise ConstructionError(i, _step_text(st), str(exc)) from None
    for store in (s.points, s.lines):
        for c, els in store.items():
            if any(e is None for e in els):
                raise ConstructionError(len(prog.steps), None, f"class {c} never filled by rotation")
    return Realization(
        m,
        {c: tuple(v) for c, v in s.points.items()},
        {c: tuple(v) for c, v in s.lines.items()},
        dict(vals),
        dict(prog.labels),
    )


def _apply(s: _State, st, vals) -> None:
    m = s.m
    if isinstance(st, InitRegularOrbit):
        s.points[st.cls] = [Point2.polar(st.radius, 2 * math.pi * j / m + st.phase) for j in range(m)]
    elif isinstance(st, FreePointOnLine):
        a, b = s.anchors[(st.host.cls, st.host.index % m)]
        t = vals[st.param]
        s.points[st.cls] = [a.scale(1 - t) + b.scale(t)] + [None] * (m - 1)
    elif isinstance(st, FreeLineThroughPoint):
        p = s.point(st.host)
        ang = vals[st.param]
        q = p + Point2(math.cos(ang), math.sin(ang))
        s.lines[st.cls] = [geo.join(p, q)] + [None] * (m - 1)
        s.anchors[(st.cls, 0)] = (p, q)
    elif isinstance(st, JoinOrbit):
        p, q = s.point(st.a), s.point(st.b)
        s.lines[st.cls] = [geo.join(p, q)] + [None] * (m - 1)
        s.anchors[(st.cls, 0)] = (p, q)
    elif isinstance(st, MeetOrbit):
        s.points[st.cls] = [geo.meet(s.line(st.a), s.line(st.b))] + [None] * (m - 1)
    elif isinstance(st, LineCircleOrbit):
        circ = geo.circle_through(*(s.point(r) for r in st.through))
        hits = geo.line_circle_intersections(s.line(st.line), circ)
        if not hits:
            raise DegenerateError("line misses the circle")
        s.points[st.cls] = [hits[min(st.pick, len(hits) - 1)]] + [None] * (m - 1)
    elif isinstance(st, OrbitRotateFill):
        if st.cls in s.points:
            s.points[st.cls] = _rotations(s.points[st.cls][0], m)
        else:
            s.lines[st.cls] = _rotations(s.lines[st.cls][0], m)
            if (st.cls, 0) in s.anchors:
                a, b = s.anchors[(st.cls, 0)]
                for j in range(1, m):
                    ang = 2 * math.pi * j / m
                    s.anchors[(st.cls, j)] = (geo.rotate(a, ang), geo.rotate(b, ang))
    elif isinstance(st, TargetIncidence):
        s.point(st.point)
        s.line(st.line)


def _step_text(st) -> str:
    from .formats import step_to_text

    return step_to_text(st)


def closure_residual(prog: ConstructionProgram, params: Optional[Mapping[str, float]] = None,
                     target: Optional[TargetIncidence] = None) -> float:
    """Signed residual of the target incidence (the first target by default)."""
    target = target or _only_target(prog)
    real = execute(prog, params)
    return residual_of(real, target)


def residual_of(real: Realization, target: TargetIncidence) -> float:
    m = real.m
    p = real.points[target.point.cls][target.point.index % m]
    l = real.lines[target.line.cls][target.line.index % m]
    return geo.point_line_residual(p, l)


def _only_target(prog: ConstructionProgram) -> TargetIncidence:
    ts = prog.targets
    if not ts:
        raise ClosureError("program has no TARGET step")
    return ts[0]


def solve_closure(
    prog: ConstructionProgram,
    param: str,
    interval: Optional[tuple[float, float]] = None,
    target: Optional[TargetIncidence] = None,
    params: Optional[Mapping[str, float]] = None,
    cells: int = 64,
) -> float:
    """Find ``param`` making the target residual vanish, by bracket scan plus bisection."""
    if param not in prog.params:
        raise ClosureError(f"unknown parameter {param}")
    target = target or _only_target(prog)
    lo, hi = interval if interval is not None else (prog.params[param].lo, prog.params[param].hi)
    base = dict(params or {})

    def f(x):
        base[param] = x
        try:
            return closure_residual(prog, base, target)
        except PolyconfError:
            return None

    xs = [lo + (hi - lo) * k / cells for k in range(cells + 1)]
    fs = [f(x) for x in xs]
    for x, v in zip(xs, fs):
        if v is not None and abs(v) < 1e-11:
            return x
    for k in range(cells):
        a, b, fa, fb = xs[k], xs[k + 1], fs[k], fs[k + 1]
        if fa is None or fb is None or (fa > 0) == (fb > 0):
            continue
        root = _bisect(f, a, b, fa)
        if root is not None:
            return root
    raise ClosureError(f"no closure in interval [{lo}, {hi}] for {param}")


def _bisect(f, a, b, fa) -> Optional[float]:
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm is None:
            return None
        if abs(fm) < 1e-11 or b - a < 1e-13:
            break
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    # a sign change across a pole is not a root
    return mid if abs(fm) < 1e-10 else None


@dataclass(frozen=True)
class AuditReport:
    realized: int
    expected: int
    missing: tuple
    extra: tuple
    tol: float
    max_flag_residual: float
    min_nonflag_residual: float
    incident: tuple = field(default=(), repr=False)

    @property
    def classification(self) -> str:
        if self.missing:
            return "failed"
        return "weak" if self.extra else "strong"

    def points_per_line(self) -> dict:
        """Number of points within tolerance of each line label (flags plus extras)."""
        out = {}
        for p, l in self.incident:
            out[l] = out.get(l, 0) + 1
        return out

    def lines_per_point(self) -> dict:
        out = {}
        for p, l in self.incident:
            out[p] = out.get(p, 0) + 1
        return out

    def summary(self) -> str:
        return (f"{self.classification}: {self.realized}/{self.expected} flags realized, "
                f"{len(self.missing)} missing, {len(self.extra)} extra (tol {self.tol:g})")


def audit(real: Realization, expected: IncidenceStructure, tol: float = INCIDENCE_TOL) -> AuditReport:
    """Check every point-line pair of ``real`` against the flags of ``expected``."""
    pts = {real.label(c, j): p for c, j, p in real.point_items()}
    lns = {real.label(c, j): l for c, j, l in real.line_items()}
    if set(pts) != set(expected.points) or set(lns) != set(expected.lines):
        raise LabelError("realization labels do not match the incidence structure")
    flags = {(expected.points[p], expected.lines[l]) for p, l in expected.flags}
    realized, missing, extra, pairs = 0, [], [], []
    max_flag, min_non = 0.0, math.inf
    for pl in expected.points:
        for ll in expected.lines:
            r = abs(geo.point_line_residual(pts[pl], lns[ll]))
            close = r <= tol
            if close:
                pairs.append((pl, ll))
            if (pl, ll) in flags:
                max_flag = max(max_flag, r)
                if close:
                    realized += 1
                else:
                    missing.append((pl, ll))
            else:
                min_non = min(min_non, r)
                if close:
                    extra.append((pl, ll))
    return AuditReport(realized, len(flags), tuple(missing), tuple(extra), tol, max_flag, min_non, tuple(pairs))


def perturb(real: Realization, eps: float, seed: int = 0) -> Realization:
    """Move every point by ``eps`` in a pseudo-random direction (breaks polycyclicity)."""
    import random

    rng = random.Random(seed)
    pts = {}
    for c, ps in real.points.items():
        pts[c] = tuple(p + Point2.polar(eps, rng.uniform(0, 2 * math.pi)) for p in ps)
    return Realization(real.m, pts, real.lines, real.params, real.labels)


# ---------------------------------------------------------------- labelling


def labels_from_reference(prog: ConstructionProgram, reference: VoltageGraph, label_of) -> dict:
    """Element labels for ``prog`` from a shift-equivalent reference RLG over ``Z m``.

    ``label_of(node, k)`` names element ``k`` of ``node`` in the reference.  If
    the reference is the program's RLG shifted by ``g`` at a point node, then
    program element ``k`` is reference element ``k + g``; at a line node it is
    ``k - g``.
    """
    mine = prog.implied_rlg()
    off = shift_offsets(mine, reference)
    if off is None:
        raise LabelError("program incidences are not shift-equivalent to the reference RLG")
    kinds = prog.class_kinds
    m = prog.m
    out = {}
    for c, kind in kinds.items():
        g = off[c] if kind == POINT else -off[c]
        for k in range(m):
            out[(c, k)] = label_of(c, (k + g) % m)
    return out


def labels_from_isomorphism(prog: ConstructionProgram, inc: IncidenceStructure) -> dict:
    """Element labels via any color-preserving isomorphism of the lifted program onto ``inc``."""
    vg = prog.implied_rlg()
    g = lift(vg)
    target = levi_graph(inc)
    iso = isomorphic(g, target, respect_colors=True)
    if iso is None:
        raise LabelError("program incidences do not lift to the expected structure")
    names = list(inc.points) + list(inc.lines)
    m = prog.m
    return {(nd.name, j): names[iso[i * m + j]] for i, nd in enumerate(vg.nodes) for j in range(m)}


# ---------------------------------------------------------------- grid copies


def pappus_grid(real: Realization, drop: Sequence[str] = ("D",)) -> Realization:
    """Drop the named line classes (the diagonals), leaving the (9_2, 6_3) grid."""
    lines = {c: v for c, v in real.lines.items() if c not in drop}
    labels = {k: v for k, v in real.labels.items() if k[0] not in drop}
    return Realization(real.m, real.points, lines, real.params, labels)


def gg_construction(grid: Realization, ell: Line2, x1: Point2, x2: Point2, anchor: str = "020") -> Realization:
    """Gray realization from three spiral-similar copies of a polycyclic grid.

    ``ell`` passes through the grid point labelled ``anchor``; copy ``k`` is the
    image of the grid under the spiral similarity about the origin taking the
    anchor to ``x_k``.  Grid labels ``ij0`` become ``ijk``; the new lines
    ``ij*`` join each point to its copies.
    """
    where = {grid.label(c, j): (c, j) for c, j, _ in grid.point_items()}
    if anchor not in where:
        raise LabelError(f"grid has no point labelled {anchor}")
    c0, j0 = where[anchor]
    p0 = grid.points[c0][j0]
    tol = 1e-9
    if abs(geo.point_line_residual(p0, ell)) > tol:
        raise DegenerateError("ell does not pass through the anchor point")
    if abs(geo.point_line_residual(ORIGIN, ell)) <= tol:
        raise DegenerateError("ell passes through the center")
    for c, j, p in grid.point_items():
        if (c, j) != (c0, j0) and abs(geo.point_line_residual(p, ell)) <= tol:
            raise DegenerateError(f"ell passes through grid point {grid.label(c, j)}")
    for x in (x1, x2):
        if abs(geo.point_line_residual(x, ell)) > tol:
            raise DegenerateError("copy anchor is not on ell")
    if x1.close_to(p0, tol) or x2.close_to(p0, tol) or x1.close_to(x2, tol):
        raise DegenerateError("copy anchors must be distinct from each other and from the anchor point")
    sims = [geo.Similarity2(ORIGIN, 1.0, 0.0), geo.similarity_mapping(ORIGIN, p0, x1),
            geo.similarity_mapping(ORIGIN, p0, x2)]
    points, lines, labels = {}, {}, {}
    for k, sig in enumerate(sims):
        for c, ps in grid.points.items():
            name = f"{c}{k}"
            points[name] = tuple(sig(p) for p in ps)
            for j in range(grid.m):
                labels[(name, j)] = _third(grid.label(c, j), str(k))
        for c, ls in grid.lines.items():
            name = f"{c}{k}"
            lines[name] = tuple(sig(l) for l in ls)
            for j in range(grid.m):
                labels[(name, j)] = _third(grid.label(c, j), str(k))
    for c, ps in grid.points.items():
        name = f"W{c}"
        lines[name] = tuple(geo.join(p, sims[1](p)) for p in ps)
        for j in range(grid.m):
            labels[(name, j)] = _third(grid.label(c, j), "*")
    params = dict(grid.params)
    return Realization(grid.m, points, lines, params, labels)


def _third(label: str, ch: str) -> str:
    if len(label) != 3 or label[2] != "0":
        raise LabelError(f"grid label {label!r} is not of the form ij0")
    return label[:2] + ch


def gg_default_ell(grid: Realization, angle: float, anchor: str = "020") -> Line2:
    where = {grid.label(c, j): grid.points[c][j] for c, j, _ in grid.point_items()}
    p0 = where[anchor]
    return geo.join(p0, p0 + Point2(math.cos(angle), math.sin(angle)))


def point_on(ell: Line2, base: Point2, s: float) -> Point2:
    """``base + s * direction(ell)``."""
    return base + ell.direction.scale(s)


def reciprocate(real: Realization, circle: Optional[geo.Circle2] = None) -> Realization:
    """Polar image: points become lines and lines become points (labels kept)."""
    circle = circle or geo.Circle2(ORIGIN, 1.0)
    points = {c: tuple(geo.pole_point(l, circle) for l in ls) for c, ls in real.lines.items()}
    lines = {c: tuple(geo.polar_line(p, circle) for p in ps) for c, ps in real.points.items()}
    return Realization(real.m, points, lines, dict(real.params), dict(real.labels))


# ---------------------------------------------------------------- bundled constructions

# direction of ell and positions of the copy anchors along it, chosen for good separation
GG_DEFAULTS = {"angle": 0.99, "s1": -1.15, "s2": 0.87}


def _bundled(name: str) -> ConstructionProgram:
    from .formats import load_program

    return load_program(name)


def solve_pappus_rlg(params: Optional[Mapping[str, float]] = None, param: str = "t_R0") -> Realization:
    """Solve the bundled Z3 program built on the Pappus reduced Levi graph and execute it."""
    prog = _bundled("pappus_rlg.prog")
    base = {**prog.default_params(), **(params or {})}
    base[param] = solve_closure(prog, param, params=base)
    return execute(prog, base)


def build_polycyclic_pappus(params: Optional[Mapping[str, float]] = None) -> Realization:
    """Pappus configuration with 3-fold rotational symmetry, grid-labelled ``ij0`` (diagonals ``d0..d2``).

    The closing incidence is Pappus's theorem, so every non-degenerate
    parameter choice works; the residual is still checked.
    """
    prog = _bundled("pappus_poly.prog")
    real = execute(prog, params)
    res = residual_of(real, _only_target(prog))
    if abs(res) > 1e-9:
        raise ClosureError(f"Pappus closure residual {res:.3e}")
    return real


def build_gray_gg(angle: float = GG_DEFAULTS["angle"], s1: float = GG_DEFAULTS["s1"],
                  s2: float = GG_DEFAULTS["s2"], params: Optional[Mapping[str, float]] = None) -> Realization:
    """Gray realization from three similar copies of the polycyclic Pappus grid."""
    grid = pappus_grid(build_polycyclic_pappus(params))
    ell = gg_default_ell(grid, angle)
    base = {grid.label(c, j): p for c, j, p in grid.point_items()}["020"]
    return gg_construction(grid, ell, point_on(ell, base, s1), point_on(ell, base, s2))
