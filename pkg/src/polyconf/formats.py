"""Line-oriented text formats for graphs, incidences, permutations, RLGs, programs and realizations.

Blank lines and ``#`` comments are ignored everywhere.  Floats are written
with ``repr`` so that parse(serialize(x)) reproduces ``x`` exactly.
"""

from __future__ import annotations

from importlib import resources
from typing import Iterable

from .covers import Arc, FiniteGroup, Node, VoltageGraph
from .errors import FormatError
from .geometry import Line2, Point2
from .incidence import LINE, POINT, Graph, IncidenceStructure
from .permgroups import Permutation, PermGroup
from .realizer import (
    CENTER, ConstructionProgram, FreeLineThroughPoint, FreePointOnLine, InitRegularOrbit, JoinOrbit,
    LineCircleOrbit, MeetOrbit, OrbitRotateFill, ParamSpec, Realization, Ref, TargetIncidence,
)


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {no}: expected an integer, got {tok!r}") from None


def _float(tok: str, no: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"line {no}: expected a number, got {tok!r}") from None


# ---------------------------------------------------------------- graphs


def serialize_graph(g: Graph) -> str:
    out = [f"GRAPH {g.n}"]
    if g.colors is not None:
        out.append("COLORS " + " ".join(g.colors))
    out += [f"EDGE {u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> Graph:
    n, colors, edges = None, None, []
    for no, tok in _lines(text):
        key = tok[0].upper()
        if key == "GRAPH":
            n = _int(tok[1], no)
        elif key == "COLORS":
            colors = tok[1:]
            if any(c not in (POINT, LINE) for c in colors):
                raise FormatError(f"line {no}: colors must be P or L")
        elif key == "EDGE":
            if len(tok) != 3:
                raise FormatError(f"line {no}: EDGE needs two vertices")
            edges.append((_int(tok[1], no), _int(tok[2], no)))
        else:
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    if n is None:
        raise FormatError("missing GRAPH header")
    try:
        return Graph.from_edges(n, edges, colors)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def serialize_incidence(inc: IncidenceStructure) -> str:
    out = ["POINTS " + ",".join(inc.points), "LINES " + ",".join(inc.lines)]
    for p, l in sorted(inc.flags):
        out.append(f"FLAG {inc.points[p]} {inc.lines[l]}")
    return "\n".join(out) + "\n"


def parse_incidence(text: str) -> IncidenceStructure:
    points, lines, flags = None, None, []
    for no, tok in _lines(text):
        key = tok[0].upper()
        if key == "POINTS":
            points = [s for s in "".join(tok[1:]).split(",") if s]
        elif key == "LINES":
            lines = [s for s in "".join(tok[1:]).split(",") if s]
        elif key == "FLAG":
            if len(tok) != 3:
                raise FormatError(f"line {no}: FLAG needs a point and a line")
            flags.append((tok[1], tok[2]))
        else:
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    if points is None or lines is None:
        raise FormatError("missing POINTS or LINES")
    try:
        return IncidenceStructure.from_labels(points, lines, flags)
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad flag or label: {exc}") from None


# ---------------------------------------------------------------- permutations and groups


def serialize_perm(p: Permutation) -> str:
    return f"PERM {p.degree} : " + " ".join(map(str, p.images))


def parse_perm(text: str) -> Permutation:
    tok = text.split()
    if len(tok) < 3 or tok[0].upper() != "PERM" or tok[2] != ":":
        raise FormatError("expected 'PERM <n> : i0 i1 ...'")
    n = _int(tok[1], 1)
    imgs = [_int(t, 1) for t in tok[3:]]
    if len(imgs) != n:
        raise FormatError(f"PERM declares {n} images but lists {len(imgs)}")
    try:
        return Permutation(tuple(imgs))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def serialize_group(gamma: PermGroup, spec: FiniteGroup = None) -> str:
    out = [f"GROUP {gamma.degree}"]
    if spec is not None:
        out.append("SPEC " + _group_header(spec))
    out += ["GEN " + " ".join(map(str, g.images)) for g in gamma.generators]
    return "\n".join(out) + "\n"


def parse_group(text: str) -> tuple[PermGroup, FiniteGroup | None, list[Permutation]]:
    """Returns the group, the optional ``SPEC`` identification and the generators in file order."""
    n, spec, gens = None, None, []
    for no, tok in _lines(text):
        key = tok[0].upper()
        if key == "GROUP":
            n = _int(tok[1], no)
        elif key == "SPEC":
            spec = _parse_group_header(tok[1:], no)
        elif key == "GEN":
            try:
                gens.append(Permutation(tuple(_int(t, no) for t in tok[1:])))
            except ValueError as exc:
                raise FormatError(f"line {no}: {exc}") from None
        else:
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    if n is None:
        raise FormatError("missing GROUP header")
    if any(g.degree != n for g in gens):
        raise FormatError("generator degree differs from GROUP header")
    return PermGroup(n, gens), spec, gens


# ---------------------------------------------------------------- voltage graphs


def _group_header(g: FiniteGroup) -> str:
    if g.kind == "cyclic":
        return f"Z {g.m}"
    if g.kind == "product":
        return f"Z {g.m} x Z {g.n}"
    return f"TABLE {len(g.table)}"


def _parse_group_header(tok: list[str], no: int, rows=None) -> FiniteGroup:
    t = [x.upper() for x in tok]
    if len(t) == 2 and t[0] == "Z":
        return FiniteGroup.cyclic(_int(t[1], no))
    if len(t) == 5 and t[0] == "Z" and t[2] == "X" and t[3] == "Z":
        return FiniteGroup.product(_int(t[1], no), _int(t[4], no))
    if len(t) == 2 and t[0] == "TABLE":
        return None
    raise FormatError(f"line {no}: bad group header {' '.join(tok)!r}")


def _voltage_text(g: FiniteGroup, v) -> str:
    return g.signed(v)


def _parse_voltage(g: FiniteGroup, tok: str, no: int):
    if g.kind == "product":
        parts = tok.split(",")
        if len(parts) != 2:
            raise FormatError(f"line {no}: voltage {tok!r} must be 'a,b'")
        return g.normalize((_int(parts[0], no), _int(parts[1], no)))
    try:
        return g.normalize(_int(tok, no))
    except Exception as exc:
        raise FormatError(f"line {no}: {exc}") from None


def serialize_rlg(vg: VoltageGraph) -> str:
    g = vg.group
    out = ["RLGGROUP " + _group_header(g)]
    if g.kind == "table":
        out += ["ROW " + " ".join(map(str, r)) for r in g.table]
    out += [f"NODE {nd.name} {nd.kind}" for nd in vg.nodes]
    out += [f"ARC {a.line} {a.point} {_voltage_text(g, a.voltage)}" for a in vg.arcs]
    return "\n".join(out) + "\n"


def parse_rlg(text: str) -> VoltageGraph:
    group, table_k, rows, nodes, raw_arcs = None, None, [], [], []
    for no, tok in _lines(text):
        key = tok[0].upper()
        if key == "RLGGROUP":
            group = _parse_group_header(tok[1:], no)
            if group is None:
                table_k = _int(tok[2], no)
        elif key == "ROW":
            rows.append([_int(t, no) for t in tok[1:]])
        elif key == "NODE":
            if len(tok) != 3 or tok[2] not in (POINT, LINE):
                raise FormatError(f"line {no}: NODE <name> P|L")
            nodes.append(Node(tok[1], tok[2]))
        elif key == "ARC":
            if len(tok) != 4:
                raise FormatError(f"line {no}: ARC <line> <point> <voltage>")
            raw_arcs.append((no, tok[1], tok[2], tok[3]))
        else:
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    if table_k is not None:
        if len(rows) != table_k:
            raise FormatError(f"TABLE {table_k} needs {table_k} ROW lines")
        try:
            group = FiniteGroup.from_table(rows)
        except Exception as exc:
            raise FormatError(str(exc)) from None
    if group is None:
        raise FormatError("missing RLGGROUP header")
    arcs = [Arc(l, p, _parse_voltage(group, v, no)) for no, l, p, v in raw_arcs]
    try:
        return VoltageGraph(group, tuple(nodes), tuple(arcs))
    except Exception as exc:
        raise FormatError(str(exc)) from None


def serialize_tree(tree: Iterable[int]) -> str:
    return "TREE " + " ".join(map(str, tree)) + "\n"


def parse_tree(text: str) -> list[int]:
    out = []
    for no, tok in _lines(text):
        if tok[0].upper() != "TREE":
            raise FormatError(f"line {no}: expected TREE <arc indices>")
        out += [_int(t, no) for t in tok[1:]]
    return out


# ---------------------------------------------------------------- programs


def _ref(tok: str, no: int) -> Ref:
    if tok == CENTER:
        return Ref(CENTER, 0)
    if not tok.endswith("]") or "[" not in tok:
        raise FormatError(f"line {no}: expected a reference like B2[1], got {tok!r}")
    cls, idx = tok[:-1].split("[", 1)
    return Ref(cls, _int(idx, no))


def step_to_text(st) -> str:
    if isinstance(st, InitRegularOrbit):
        return f"INIT {st.cls} {st.m} {st.radius!r} {st.phase!r}"
    if isinstance(st, FreePointOnLine):
        return f"FREEPOINT {st.cls} ON {st.host} PARAM {st.param}"
    if isinstance(st, FreeLineThroughPoint):
        return f"FREELINE {st.cls} THROUGH {st.host} PARAM {st.param}"
    if isinstance(st, JoinOrbit):
        return f"JOIN {st.cls} {st.a} {st.b}"
    if isinstance(st, MeetOrbit):
        return f"MEET {st.cls} {st.a} {st.b}"
    if isinstance(st, OrbitRotateFill):
        return f"ROTFILL {st.cls}"
    if isinstance(st, LineCircleOrbit):
        return f"LINECIRCLE {st.cls} {st.line} CIRCLE " + " ".join(map(str, st.through)) + f" PICK {st.pick}"
    if isinstance(st, TargetIncidence):
        return f"TARGET {st.line} {st.point}"
    raise FormatError(f"unknown step {st!r}")


def _parse_step(tok: list[str], no: int):
    key = tok[0].upper()
    n = len(tok)
    if key == "INIT" and n in (3, 4, 5):
        radius = _float(tok[3], no) if n > 3 else 1.0
        phase = _float(tok[4], no) if n > 4 else 0.0
        return InitRegularOrbit(tok[1], _int(tok[2], no), radius, phase)
    if key == "FREEPOINT" and n == 6 and tok[2].upper() == "ON" and tok[4].upper() == "PARAM":
        return FreePointOnLine(tok[1], _ref(tok[3], no), tok[5])
    if key == "FREELINE" and n == 6 and tok[2].upper() == "THROUGH" and tok[4].upper() == "PARAM":
        return FreeLineThroughPoint(tok[1], _ref(tok[3], no), tok[5])
    if key == "JOIN" and n == 4:
        return JoinOrbit(tok[1], _ref(tok[2], no), _ref(tok[3], no))
    if key == "MEET" and n == 4:
        return MeetOrbit(tok[1], _ref(tok[2], no), _ref(tok[3], no))
    if key == "ROTFILL" and n == 2:
        return OrbitRotateFill(tok[1])
    if key == "LINECIRCLE" and n in (7, 9) and tok[3].upper() == "CIRCLE":
        pick = 0
        if n == 9:
            if tok[7].upper() != "PICK":
                raise FormatError(f"line {no}: expected PICK")
            pick = _int(tok[8], no)
        return LineCircleOrbit(tok[1], _ref(tok[2], no), tuple(_ref(t, no) for t in tok[4:7]), pick)
    if key == "TARGET" and n == 3:
        return TargetIncidence(_ref(tok[1], no), _ref(tok[2], no))
    raise FormatError(f"line {no}: cannot parse step {' '.join(tok)!r}")


def serialize_program(prog: ConstructionProgram) -> str:
    out = [f"ORDER {prog.m}"]
    if prog.expect:
        out.append(f"EXPECT {prog.expect}")
    for name, ps in prog.params.items():
        out.append(f"PARAM {name} {ps.default!r} {ps.lo!r} {ps.hi!r}")
    out += [step_to_text(st) for st in prog.steps]
    out += [f"LABEL {c} {j} {lab}" for (c, j), lab in sorted(prog.labels.items())]
    return "\n".join(out) + "\n"


def parse_program(text: str) -> ConstructionProgram:
    m, expect, params, steps, labels = None, None, {}, [], {}
    for no, tok in _lines(text):
        key = tok[0].upper()
        if key == "ORDER":
            m = _int(tok[1], no)
        elif key == "EXPECT":
            expect = tok[1]
        elif key == "PARAM":
            if len(tok) != 5:
                raise FormatError(f"line {no}: PARAM <name> <default> <lo> <hi>")
            params[tok[1]] = ParamSpec(_float(tok[2], no), _float(tok[3], no), _float(tok[4], no))
        elif key == "LABEL":
            if len(tok) != 4:
                raise FormatError(f"line {no}: LABEL <class> <j> <label>")
            labels[(tok[1], _int(tok[2], no))] = tok[3]
        else:
            steps.append(_parse_step(tok, no))
    if m is None:
        inits = [s for s in steps if isinstance(s, InitRegularOrbit)]
        if not inits:
            raise FormatError("missing ORDER")
        m = inits[0].m
    return ConstructionProgram(m, tuple(steps), params, labels, expect)


# ---------------------------------------------------------------- realizations


def serialize_realization(real: Realization) -> str:
    out = [f"ORDER {real.m}"]
    out += [f"PARAM {k} {v!r}" for k, v in real.params.items()]
    for c, j, p in real.point_items():
        out.append(f"POINT {c} {j} {p.x!r} {p.y!r}")
    for c, j, l in real.line_items():
        out.append(f"LINE {c} {j} {l.a!r} {l.b!r} {l.c!r}")
    out += [f"LABEL {c} {j} {lab}" for (c, j), lab in sorted(real.labels.items())]
    return "\n".join(out) + "\n"


def parse_realization(text: str) -> Realization:
    m, params, pts, lns, labels = None, {}, {}, {}, {}
    for no, tok in _lines(text):
        key = tok[0].upper()
        if key == "ORDER":
            m = _int(tok[1], no)
        elif key == "PARAM":
            params[tok[1]] = _float(tok[2], no)
        elif key == "POINT" and len(tok) == 5:
            pts.setdefault(tok[1], {})[_int(tok[2], no)] = Point2(_float(tok[3], no), _float(tok[4], no))
        elif key == "LINE" and len(tok) == 6:
            # stored coefficients are already normalized, so rebuilding is exact
            lns.setdefault(tok[1], {})[_int(tok[2], no)] = Line2.from_normalized(*(_float(t, no) for t in tok[3:6]))
        elif key == "LABEL" and len(tok) == 4:
            labels[(tok[1], _int(tok[2], no))] = tok[3]
        else:
            raise FormatError(f"line {no}: cannot parse {' '.join(tok)!r}")
    if m is None:
        raise FormatError("missing ORDER")

    def pack(d):
        out = {}
        for c, els in d.items():
            if sorted(els) != list(range(len(els))):
                raise FormatError(f"class {c} has non-contiguous indices")
            out[c] = tuple(els[j] for j in range(len(els)))
        return out

    return Realization(m, pack(pts), pack(lns), params, labels)


# ---------------------------------------------------------------- bundled data


def data_text(name: str) -> str:
    return resources.files("polyconf.data").joinpath(name).read_text()


def load_graph(name: str) -> Graph:
    return parse_graph(data_text(name))


def load_incidence(name: str) -> IncidenceStructure:
    return parse_incidence(data_text(name))


def load_rlg(name: str) -> VoltageGraph:
    return parse_rlg(data_text(name))


def load_program(name: str) -> ConstructionProgram:
    return parse_program(data_text(name))


def bundled_names() -> list[str]:
    return sorted(p.name for p in resources.files("polyconf.data").iterdir() if not p.name.startswith(("_", ".")))
