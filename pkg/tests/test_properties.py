"""Randomized property suites (each runs at least 100 cases)."""

import math

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from polyconf import geometry as geo
from polyconf.celestial import CelestialSymbol, celestial_realization
from polyconf.covers import Arc, FiniteGroup, Node, VoltageGraph, lift, normalize_spanning_tree, shift_voltages
from polyconf.errors import PolyconfError
from polyconf.formats import (load_program, load_rlg, parse_graph, parse_incidence, parse_perm, parse_program,
                              parse_realization, parse_rlg, serialize_graph, serialize_incidence, serialize_perm,
                              serialize_program, serialize_realization, serialize_rlg)
from polyconf.geometry import Point2
from polyconf.incidence import LINE, POINT, Graph, IncidenceStructure, build_gray_incidence, isomorphic, levi_graph
from polyconf.permgroups import Permutation, PermGroup
from polyconf.realizer import (ConstructionProgram, FreeLineThroughPoint, FreePointOnLine, InitRegularOrbit,
                               JoinOrbit, MeetOrbit, OrbitRotateFill, ParamSpec, Ref, build_gray_gg,
                               build_polycyclic_pappus, execute)

CASES = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
points = st.builds(Point2, coord, coord)


@st.composite
def perms(draw, n=None):
    n = n if n is not None else draw(st.integers(1, 9))
    return Permutation(tuple(draw(st.permutations(range(n)))))


@st.composite
def perm_triples(draw, max_degree=9):
    n = draw(st.integers(1, max_degree))
    return draw(perms(n)), draw(perms(n)), draw(perms(n))


# ---------------------------------------------------------------- permutation groups


@CASES
@given(perm_triples())
def test_permutation_group_axioms(t):
    p, q, r = t
    e = Permutation.identity(p.degree)
    assert (p * q) * r == p * (q * r)
    assert p * e == p == e * p
    assert p * p.inverse() == e == p.inverse() * p
    assert (p ** p.order()).is_identity()
    assert all((p * q)(i) == p(q(i)) for i in range(p.degree))


@CASES
@given(perm_triples(max_degree=7))  # S_7 still fits under the materialization bound
def test_generated_group_is_closed(t):
    p, q, _ = t
    grp = PermGroup(p.degree, [p, q])
    els = grp.elements
    assert p in els and q in els
    assert len(els) % p.order() == 0
    for x in list(els)[:20]:
        assert x.inverse() in els
        assert x * p in els


# ---------------------------------------------------------------- join / meet


@CASES
@given(points, points, points)
def test_join_meet_duality(p, q, r):
    assume(p.dist(q) > 1e-2 and p.dist(r) > 1e-2 and abs(geo.collinearity_det(p, q, r)) > 1e-1)
    l1, l2 = geo.join(p, q), geo.join(p, r)
    assert geo.meet(l1, l2).close_to(p, 1e-7)
    assert abs(geo.point_line_residual(q, l1)) < 1e-9
    # polarity turns joins into meets
    c = geo.Circle2(Point2(0.3, -0.2), 1.7)
    assume(min(x.dist(c.center) for x in (p, q, r)) > 1e-2)
    assume(abs(geo.point_line_residual(c.center, l1)) > 1e-2)
    pole = geo.pole_point(l1, c)
    m = geo.meet(geo.polar_line(p, c), geo.polar_line(q, c))
    assert m.close_to(pole, 1e-6 * max(1.0, pole.norm()))


@CASES
@given(points, points, st.floats(0.01, 2 * math.pi - 0.01))
def test_rotation_commutes_with_join(p, q, ang):
    assume(p.dist(q) > 1e-2)
    a = geo.rotate(geo.join(p, q), ang)
    b = geo.join(geo.rotate(p, ang), geo.rotate(q, ang))
    assert a.close_to(b, 1e-9 * max(1.0, abs(a.c)))


# ---------------------------------------------------------------- lifts


GRAY_LEVI = levi_graph(build_gray_incidence())
RLGS = [load_rlg(n) for n in ("fig8_z3xz3.rlg", "fig9_pappus.rlg", "fig10_gg.rlg", "fig13a_z9.rlg")]


@st.composite
def shifted(draw):
    vg = draw(st.sampled_from(RLGS))
    grp = vg.group
    out = vg
    for nd in vg.nodes:
        out = shift_voltages(out, nd.name, draw(st.sampled_from(grp.elements)))
    return vg, out


@CASES
@given(shifted())
def test_lift_invariant_under_shifts(pair):
    vg, sh = pair
    assert isomorphic(lift(sh), GRAY_LEVI, respect_colors=True) is not None
    assert isomorphic(lift(vg), lift(sh), respect_colors=True) is not None


@CASES
@given(shifted(), st.randoms(use_true_random=False))
def test_normalizing_any_tree_preserves_lift(pair, rnd):
    _, vg = pair
    # random spanning tree by shuffled Kruskal
    order = list(range(len(vg.arcs)))
    rnd.shuffle(order)
    parent = {nd.name: nd.name for nd in vg.nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    tree = []
    for i in order:
        a, b = find(vg.arcs[i].line), find(vg.arcs[i].point)
        if a != b:
            parent[a] = b
            tree.append(i)
    n = normalize_spanning_tree(vg, tree)
    assert all(n.arcs[i].voltage == n.group.identity for i in tree)
    assert isomorphic(lift(vg), lift(n), respect_colors=True) is not None


# ---------------------------------------------------------------- polycyclicity


@CASES
@given(st.floats(0.05, 3.1), st.floats(-3, 3))
def test_pappus_realizations_polycyclic(a, t):
    try:
        real = build_polycyclic_pappus({"a_Y": a, "t_B": t})
    except PolyconfError:
        assume(False)
    assert real.is_polycyclic()


@CASES
@given(st.floats(0.05, 3.1), st.floats(-2, 2), st.floats(-2, 2))
def test_gg_realizations_polycyclic(angle, s1, s2):
    assume(abs(s1) > 0.05 and abs(s2) > 0.05 and abs(s1 - s2) > 0.05)
    try:
        real = build_gray_gg(angle, s1, s2)
    except PolyconfError:
        assume(False)
    assert real.is_polycyclic()


@CASES
@given(st.integers(5, 16), st.data())
def test_celestial_realizations_polycyclic(m, data):
    s = data.draw(st.integers(1, (m - 1) // 2))
    t = data.draw(st.integers(1, (m - 1) // 2).filter(lambda x: x != s))
    radius = data.draw(st.floats(0.5, 3))
    phase = data.draw(st.floats(0, 2 * math.pi))
    real = celestial_realization(CelestialSymbol(m, ((s, t), (t, s))), radius, phase)
    assert real.is_polycyclic()


@CASES
@given(st.dictionaries(st.sampled_from(["a_Y2", "t_R1", "a_Z1", "t_B0", "a_Y0", "t_R2", "a_Y1", "t_R0"]),
                       st.floats(-3, 3), max_size=8))
def test_program_realizations_polycyclic(over):
    prog = load_program("pappus_rlg.prog")
    try:
        real = execute(prog, {**prog.default_params(), **over})
    except PolyconfError:
        assume(False)
    assert real.is_polycyclic(1e-8)


# ---------------------------------------------------------------- format round trips


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 12))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]),
                         max_size=30))
    colors = draw(st.one_of(st.none(), st.lists(st.sampled_from([POINT, LINE]), min_size=n, max_size=n)))
    return Graph.from_edges(n, sorted(edges), colors)


@CASES
@given(graphs())
def test_graph_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g


label = st.text("abcxyz0123*", min_size=1, max_size=4)


@st.composite
def incidences(draw):
    pts = draw(st.lists(label, min_size=1, max_size=8, unique=True))
    lns = draw(st.lists(label, min_size=1, max_size=8, unique=True))
    flags = draw(st.sets(st.tuples(st.integers(0, len(pts) - 1), st.integers(0, len(lns) - 1))))
    return IncidenceStructure(tuple(pts), tuple(lns), frozenset(flags))


@CASES
@given(incidences())
def test_incidence_round_trip(inc):
    assert parse_incidence(serialize_incidence(inc)) == inc


@CASES
@given(perms())
def test_perm_round_trip(p):
    assert parse_perm(serialize_perm(p)) == p


@st.composite
def voltage_graphs(draw):
    grp = draw(st.sampled_from([FiniteGroup.cyclic(draw(st.integers(1, 12))),
                                FiniteGroup.product(draw(st.integers(1, 4)), draw(st.integers(1, 4)))]))
    np_, nl = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    nodes = tuple(Node(f"P{i}", POINT) for i in range(np_)) + tuple(Node(f"L{i}", LINE) for i in range(nl))
    arcs = draw(st.lists(st.builds(Arc, st.sampled_from([f"L{i}" for i in range(nl)]),
                                   st.sampled_from([f"P{i}" for i in range(np_)]),
                                   st.sampled_from(grp.elements)), max_size=10))
    return VoltageGraph(grp, nodes, tuple(arcs))


@CASES
@given(voltage_graphs())
def test_rlg_round_trip(vg):
    assert parse_rlg(serialize_rlg(vg)) == vg


@st.composite
def programs(draw):
    m = draw(st.integers(3, 9))
    steps = [InitRegularOrbit("A", m, draw(st.floats(0.1, 5)), draw(st.floats(-4, 4)))]
    params = {}
    points, lines = ["A"], []
    for k in range(draw(st.integers(0, 6))):
        name = f"C{k}"
        j = draw(st.integers(0, m - 1))
        kind = draw(st.sampled_from(["join", "freeline", "freepoint", "meet"]))
        if kind == "join":
            steps.append(JoinOrbit(name, Ref(draw(st.sampled_from(points)), j), Ref(draw(st.sampled_from(points)), j + 1)))
            lines.append(name)
        elif kind == "freeline":
            steps.append(FreeLineThroughPoint(name, Ref(draw(st.sampled_from(points)), j), f"p{k}"))
            params[f"p{k}"] = ParamSpec(draw(st.floats(0, 3)), 0.0, math.pi)
            lines.append(name)
        elif kind == "freepoint" and lines:
            steps.append(FreePointOnLine(name, Ref(draw(st.sampled_from(lines)), j), f"p{k}"))
            params[f"p{k}"] = ParamSpec(draw(st.floats(-3, 3)), -3.0, 3.0)
            points.append(name)
        elif kind == "meet" and lines:
            steps.append(MeetOrbit(name, Ref(draw(st.sampled_from(lines)), j), Ref(draw(st.sampled_from(lines)), 0)))
            points.append(name)
        else:
            continue
        steps.append(OrbitRotateFill(name))
    labels = {("A", j): f"a{j}" for j in range(m)}
    return ConstructionProgram(m, tuple(steps), params, labels, draw(st.sampled_from([None, "gray"])))


@CASES
@given(programs())
def test_program_round_trip(prog):
    assert parse_program(serialize_program(prog)) == prog


@CASES
@given(programs())
def test_realization_round_trip(prog):
    try:
        real = execute(prog)
    except PolyconfError:
        assume(False)
    back = parse_realization(serialize_realization(real))
    assert back.points == real.points and back.lines == real.lines and back.labels == real.labels
