import math

import pytest

from polyconf import geometry as geo
from polyconf.covers import quotient, shift_equivalent
from polyconf.errors import ClosureError, ConstructionError, DegenerateError, LabelError
from polyconf.formats import data_text, load_graph, load_program, load_rlg, parse_program
from polyconf.geometry import Point2
from polyconf.gray import z3xz3_generators
from polyconf.incidence import build_pappus_incidence, dual, isomorphic, levi_graph
from polyconf.realizer import (GG_DEFAULTS, audit, build_gray_gg, build_polycyclic_pappus,
                               closure_residual, execute, gg_construction, gg_default_ell, labels_from_isomorphism,
                               pappus_grid, perturb, point_on, reciprocate, solve_closure, solve_pappus_rlg)


def arc_set(vg):
    return sorted((a.line, a.point, a.voltage) for a in vg.arcs)


@pytest.fixture(scope="module")
def rlg_prog():
    return load_program("pappus_rlg.prog")


@pytest.fixture(scope="module")
def solved(rlg_prog):
    return solve_pappus_rlg()


@pytest.fixture(scope="module")
def gg_real():
    return build_gray_gg()


def test_init_orbit_alone():
    prog = parse_program("ORDER 3\nINIT B2 3 1.0 0.0\n")
    real = execute(prog)
    for j, p in enumerate(real.points["B2"]):
        assert p.close_to(Point2(math.cos(2 * math.pi * j / 3), math.sin(2 * math.pi * j / 3)), 1e-15)


def test_program_shape(rlg_prog):
    kinds = rlg_prog.class_kinds
    assert len(kinds) == 18
    assert sorted(kinds.values()).count("P") == 9
    assert len(rlg_prog.targets) == 1


def test_program_rlg_is_normalized_pappus_rlg(rlg_prog):
    assert arc_set(rlg_prog.implied_rlg()) == arc_set(load_rlg("fig11_pappus_normalized.rlg"))
    assert shift_equivalent(rlg_prog.implied_rlg(), load_rlg("fig9_pappus.rlg"))


def test_step_nine_alternative_reading_is_invalid():
    src = data_text("pappus_rlg.prog").replace("MEET G1 X2[0] Z1[2]\nROTFILL G1", "MEET G2 X2[0] Z1[2]\nROTFILL G2")
    with pytest.raises(ConstructionError):
        parse_program(src)


def test_constructed_incidences_exact(rlg_prog, solved):
    prog_rlg = rlg_prog.implied_rlg(include_targets=False)
    for a in prog_rlg.arcs:
        for j in range(3):
            p = solved.points[a.point][(j + a.voltage) % 3]
            l = solved.lines[a.line][j]
            assert abs(geo.point_line_residual(p, l)) < 1e-10


def test_closure_solved(rlg_prog, solved):
    assert abs(closure_residual(rlg_prog, solved.params)) < 1e-10


def test_residual_changes_sign(rlg_prog):
    base = rlg_prog.default_params()
    t = base["t_R0"]
    lo = closure_residual(rlg_prog, {**base, "t_R0": t - 0.05})
    hi = closure_residual(rlg_prog, {**base, "t_R0": t + 0.05})
    assert lo * hi < 0


def test_solver_returns_satisfied_endpoint(rlg_prog, solved):
    t = solved.params["t_R0"]
    assert solve_closure(rlg_prog, "t_R0", (t, t + 0.1), params=solved.params, cells=4) == t


def test_solved_is_strong_and_polycyclic(solved, gray):
    rep = audit(solved, gray)
    assert rep.classification == "strong"
    assert (rep.realized, len(rep.missing), len(rep.extra)) == (81, 0, 0)
    assert solved.is_polycyclic()


def test_rotation_is_111(solved, gray):
    assert solved.rotation_permutation(gray) == z3xz3_generators(gray)[0]


def test_rotation_quotient_is_pappus(solved, gray):
    q = quotient(levi_graph(gray), solved.rotation_group(gray))
    assert isomorphic(q.underlying_simple_graph().uncolored(), load_graph("pappus.graph").uncolored()) is not None


def test_perturbation_fails_audit(solved, gray):
    assert audit(perturb(solved, 1e-3, seed=1), gray).classification == "failed"


def test_execute_is_deterministic(rlg_prog, solved):
    again = execute(rlg_prog, solved.params)
    assert again.points == solved.points and again.lines == solved.lines


def test_label_mismatch(solved):
    with pytest.raises(LabelError):
        audit(solved, build_pappus_incidence())


def test_labels_from_isomorphism(rlg_prog, gray):
    labels = labels_from_isomorphism(rlg_prog, gray)
    real = execute(rlg_prog.with_labels(labels), solve_pappus_rlg().params)
    assert audit(real, gray).classification == "strong"


@pytest.mark.parametrize("src, msg", [
    ("ORDER 3\nJOIN X A[0] A[1]\n", "before it is defined"),
    ("ORDER 3\nINIT A 3 1 0\nINIT A 3 2 0\n", "defined twice"),
    ("ORDER 3\nINIT A 3 1 0\nJOIN X A[0] A[1]\nJOIN Y X[0] A[1]\n", "wrong kind"),
    ("ORDER 3\nINIT A 3 1 0\nFREELINE Y THROUGH A[0] PARAM a\n", "without defaults"),
    ("ORDER 3\nINIT A 4 1 0\n", "differs"),
])
def test_program_validation(src, msg):
    with pytest.raises(ConstructionError, match=msg):
        parse_program(src)


def test_degenerate_step_is_reported():
    prog = parse_program("ORDER 3\nINIT A 3 1 0\nJOIN X A[0] A[0]\n")
    with pytest.raises(ConstructionError, match="JOIN X"):
        execute(prog)


def test_missing_rotfill():
    prog = parse_program("ORDER 3\nINIT A 3 1 0\nJOIN X A[0] A[1]\nMEET B X[0] X[1]\n")
    with pytest.raises(ConstructionError):
        execute(prog)


def test_z9_generic_t_fails_at_line_circle():
    prog = load_program("z9.prog")
    with pytest.raises(ConstructionError, match="LINECIRCLE"):
        execute(prog, {"t": 0.5})


def test_z9_has_no_closure_away_from_tangencies():
    prog = load_program("z9.prog")
    with pytest.raises(ClosureError, match="no closure in interval"):
        solve_closure(prog, "t", (-1.5, 2.5))


def test_polycyclic_pappus():
    real = build_polycyclic_pappus()
    rep = audit(real, build_pappus_incidence())
    assert rep.classification == "strong" and rep.realized == 27
    assert real.is_polycyclic()


def test_pappus_closure_for_any_parameters():
    for a, t in [(0.4, 0.5), (2.6, -0.5), (1.9, 0.5)]:
        real = build_polycyclic_pappus({"a_Y": a, "t_B": t})
        assert audit(real, build_pappus_incidence()).classification == "strong"


def test_grid():
    grid = pappus_grid(build_polycyclic_pappus())
    assert sum(len(v) for v in grid.points.values()) == 9
    assert sum(len(v) for v in grid.lines.values()) == 6
    assert all(l[2] == "0" and "*" in l for (c, j), l in grid.labels.items() if c in grid.lines)


def test_gg_is_strong(gg_real, gray):
    rep = audit(gg_real, gray)
    assert rep.classification == "strong"
    assert gg_real.is_polycyclic()


def test_gg_rotation_quotient(gg_real, gray):
    q = quotient(levi_graph(gray), gg_real.rotation_group(gray))
    assert isomorphic(q.underlying_simple_graph().uncolored(), load_graph("gg.graph").uncolored()) is not None


def test_gg_rotation_is_210(gg_real, gray):
    assert gg_real.rotation_permutation(gray) == z3xz3_generators(gray)[1]


def test_gg_preconditions():
    grid = pappus_grid(build_polycyclic_pappus())
    ell = gg_default_ell(grid, GG_DEFAULTS["angle"])
    p020 = [p for c, j, p in grid.point_items() if grid.label(c, j) == "020"][0]
    with pytest.raises(DegenerateError):
        gg_construction(grid, ell, p020, p020)
    off = geo.Line2(ell.a, ell.b, ell.c + 0.3)
    with pytest.raises(DegenerateError):
        gg_construction(grid, off, point_on(off, p020, 0.5), point_on(off, p020, 1.0))


def test_gg_generic_parameters(gray):
    for angle, s1, s2 in [(0.3, 0.6, 1.3), (2.5, -0.7, 0.4), (1.9, 1.5, -1.1)]:
        assert audit(build_gray_gg(angle, s1, s2), gray).classification == "strong"


def test_reciprocation(gg_real, gray, solved):
    assert audit(reciprocate(gg_real), dual(gray)).classification == "strong"
    assert audit(reciprocate(solved), dual(gray)).classification == "strong"


def test_reciprocation_circle_matters(gg_real, gray):
    c = geo.Circle2(Point2(0.05, -0.02), 2.0)
    rec = reciprocate(gg_real, c)
    assert audit(rec, dual(gray)).classification == "strong"
    assert not rec.is_polycyclic()
