import pytest

from polyconf.covers import (Arc, FiniteGroup, Node, VoltageGraph, cyclic_identification, deck_group, dual_rlg,
                             element_permutations, lift, normalize_spanning_tree, quotient, reduced_levi_graph,
                             shift_equivalent, shift_offsets, shift_voltages, spanning_tree, trivial_voltage_graph)
from polyconf.errors import GroupError
from polyconf.formats import load_graph, load_rlg
from polyconf.gray import gray_z3xz3_rlg, gray_z9_rlg, table2_label, z3xz3_generators
from polyconf.incidence import (LINE, POINT, build_gray_incidence, complete_bipartite, cycle_graph, dual,
                                isomorphic, levi_graph, levi_labels)
from polyconf.permgroups import Permutation, PermGroup

FIGURES = ["fig8_z3xz3.rlg", "fig9_pappus.rlg", "fig10_gg.rlg", "fig11_pappus_normalized.rlg",
           "fig13a_z9.rlg", "fig13b_z9.rlg"]


def arc_set(vg):
    return sorted((a.line, a.point, a.voltage) for a in vg.arcs)


def theta_rlg(voltages):
    # one point node, one line node and parallel arcs between them
    nodes = (Node("P", POINT), Node("L", LINE))
    return VoltageGraph(FiniteGroup.cyclic(5), nodes, tuple(Arc("L", "P", v) for v in voltages))


def test_group_arithmetic():
    z9 = FiniteGroup.cyclic(9)
    assert z9.mul(5, 7) == 3 and z9.inv(2) == 7 and z9.signed(8) == "-1"
    z33 = FiniteGroup.product(3, 3)
    assert z33.order == 9 and z33.mul((1, 2), (2, 2)) == (0, 1)
    s3 = FiniteGroup.from_table([[0, 1, 2, 3, 4, 5], [1, 0, 4, 5, 2, 3], [2, 5, 0, 4, 3, 1],
                                 [3, 4, 5, 0, 1, 2], [4, 3, 1, 2, 5, 0], [5, 2, 3, 1, 0, 4]])
    assert s3.order == 6 and s3.identity == 0


def test_bad_table():
    with pytest.raises(GroupError):
        FiniteGroup.from_table([[0, 1], [0, 1]])


def test_lift_of_theta_graph_is_k33_like():
    g = lift(theta_rlg([0, 1, 2]))
    assert g.n == 10 and len(g.edges) == 15
    assert set(g.degree(v) for v in range(g.n)) == {3}


def test_lift_rejects_repeated_voltage():
    with pytest.raises(GroupError):
        lift(theta_rlg([1, 1]))


def test_arc_must_go_from_line_to_point():
    with pytest.raises(GroupError):
        VoltageGraph(FiniteGroup.cyclic(3), (Node("P", POINT), Node("L", LINE)), (Arc("P", "L", 0),))


def test_trivial_voltage_graph_lifts_to_itself():
    g = complete_bipartite(2, 3)
    assert isomorphic(lift(trivial_voltage_graph(g)), g, respect_colors=True) is not None


def test_deck_group_is_semi_regular():
    vg = load_rlg("fig13a_z9.rlg")
    d = deck_group(vg)
    assert d.order == 9
    assert all(len(o) == 9 for o in d.orbits())


def test_shift_changes_incident_arcs_only():
    vg = load_rlg("fig13a_z9.rlg")
    sh = shift_voltages(vg, "F", 2)
    for a, b in zip(vg.arcs, sh.arcs):
        if a.point == "F":
            assert b.voltage == (a.voltage + 2) % 9
        else:
            assert b.voltage == a.voltage


def test_normalize_fig13a_hamiltonian_path():
    a = load_rlg("fig13a_z9.rlg")
    # path D-L-F-N-E-M; the M-E link uses the arc that carries -2
    tree = [1, 2, 7, 8, 3]
    n = normalize_spanning_tree(a, tree, "D")
    assert all(n.arcs[i].voltage == 0 for i in tree)
    assert arc_set(n) == arc_set(load_rlg("fig13b_z9.rlg"))
    nonzero = {(x.line, x.point, n.group.signed(x.voltage)) for x in n.arcs if x.voltage}
    assert nonzero == {("L", "D", "1"), ("N", "F", "4"), ("M", "E", "2"), ("M", "D", "-1")}


def test_normalize_rejects_cycles():
    a = load_rlg("fig13a_z9.rlg")
    with pytest.raises(GroupError):
        normalize_spanning_tree(a, [0, 1, 2, 3, 4], "D")


def test_spanning_tree_size():
    vg = load_rlg("fig9_pappus.rlg")
    assert len(spanning_tree(vg)) == len(vg.nodes) - 1


@pytest.mark.parametrize("name", FIGURES)
def test_figures_lift_to_gray(name, bundled_levi):
    assert isomorphic(lift(load_rlg(name)), bundled_levi, respect_colors=True) is not None


def test_fig8_is_computed_z3xz3_rlg():
    assert arc_set(gray_z3xz3_rlg()) == arc_set(load_rlg("fig8_z3xz3.rlg"))


def test_fig13a_is_shift_of_computed_z9_rlg():
    assert shift_equivalent(gray_z9_rlg(), load_rlg("fig13a_z9.rlg"))


def _z3_rlg(gen_index, by_row):
    inc = build_gray_incidence()
    levi = levi_graph(inc)
    idx = {l: i for i, l in enumerate(levi_labels(inc))}
    gen = z3xz3_generators(inc)[gen_index]
    names = {}
    for c in "RBGXYZ":
        for k in range(3):
            lab = table2_label(c, 0, k) if by_row else table2_label(c, k, 0)
            names[idx[lab]] = f"{c}{k}"
    return reduced_levi_graph(levi, FiniteGroup.cyclic(3), [gen], list(names), names)


def test_fig9_is_rlg_of_111():
    assert arc_set(_z3_rlg(0, True)) == arc_set(load_rlg("fig9_pappus.rlg"))


def test_fig10_is_rlg_of_210():
    assert arc_set(_z3_rlg(1, False)) == arc_set(load_rlg("fig10_gg.rlg"))


def test_fig11_is_shift_of_fig9():
    assert shift_equivalent(load_rlg("fig9_pappus.rlg"), load_rlg("fig11_pappus_normalized.rlg"))
    assert not shift_equivalent(load_rlg("fig9_pappus.rlg"), load_rlg("fig10_gg.rlg"))


def test_shift_offsets_reproduce_target():
    a = load_rlg("fig9_pappus.rlg")
    b = load_rlg("fig11_pappus_normalized.rlg")
    off = shift_offsets(a, b)
    for node, g in off.items():
        a = shift_voltages(a, node, g)
    assert arc_set(a) == arc_set(b)


def test_dual_rlg_lifts_to_dual(gray):
    d = lift(dual_rlg(load_rlg("fig13a_z9.rlg")))
    assert isomorphic(d, levi_graph(dual(gray)), respect_colors=True) is not None


def test_element_permutations_checks_homomorphism(gray):
    a, b = z3xz3_generators(gray)
    emap = element_permutations(FiniteGroup.product(3, 3), [a, b])
    assert len(emap) == 9
    with pytest.raises(GroupError):
        element_permutations(FiniteGroup.cyclic(9), [a])


def test_cyclic_identification():
    p = Permutation.from_cycles(6, [(0, 1, 2), (3, 4, 5)])
    grp, gens = cyclic_identification(PermGroup(6, [p]))
    assert grp == FiniteGroup.cyclic(3) and gens[0].order() == 3


def test_quotient_of_hexagon_by_rotation():
    g = cycle_graph(6)
    r = PermGroup(6, [Permutation.from_cycles(6, [(0, 2, 4), (1, 3, 5)])])
    q = quotient(g, r)
    assert len(q.orbits) == 2
    assert q.link_counts()["parallel"] == 2


def test_quotient_semi_edge():
    g = cycle_graph(4)
    half = PermGroup(4, [Permutation.from_cycles(4, [(0, 2), (1, 3)])])
    flip = PermGroup(4, [Permutation.from_cycles(4, [(0, 1), (2, 3)])])
    assert quotient(g, half).link_counts()["parallel"] == 2
    assert quotient(g, flip).link_counts()["semi"] == 2


def test_quotient_rejects_non_semi_regular():
    g = cycle_graph(4)
    refl = PermGroup(4, [Permutation.from_cycles(4, [(1, 3)])])
    with pytest.raises(GroupError):
        quotient(g, refl)


def test_gray_quotients(gray_levi, gray_classes):
    qs = [quotient(gray_levi, c.group) for c in gray_classes]
    assert all(q.is_bipartite() for q in qs)
    simple = [q.underlying_simple_graph().uncolored() for q in qs]
    assert isomorphic(simple[0], load_graph("gg.graph").uncolored()) is not None
    assert isomorphic(simple[1], load_graph("pappus.graph").uncolored()) is not None
    assert isomorphic(simple[2], complete_bipartite(3, 3).uncolored()) is not None
