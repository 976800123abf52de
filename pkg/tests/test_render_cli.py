import xml.etree.ElementTree as ET

import pytest

from polyconf.celestial import GRAY_CELESTIAL, celestial_realization
from polyconf.cli import main
from polyconf.formats import parse_graph, parse_realization, parse_rlg, serialize_group
from polyconf.geometry import Line2, Point2
from polyconf.gray import z3xz3_generators
from polyconf.incidence import isomorphic
from polyconf.permgroups import PermGroup
from polyconf.realizer import Realization, solve_pappus_rlg
from polyconf.render import RenderSpec, clip_line, render_svg

SVG = "{http://www.w3.org/2000/svg}"


def count(svg, tag):
    return len(ET.fromstring(svg.encode()).findall(f"{SVG}{tag}"))


def test_three_points():
    real = Realization(3, {"A": (Point2(1, 0), Point2(-0.5, 0.8), Point2(-0.5, -0.8))}, {})
    assert count(render_svg(real), "circle") == 3


def test_gray_drawing_counts():
    svg = render_svg(solve_pappus_rlg())
    assert count(svg, "circle") == 27
    assert count(svg, "line") == 27


def test_render_deterministic():
    real = celestial_realization(GRAY_CELESTIAL)
    assert render_svg(real) == render_svg(real)


def test_render_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec(width=0)
    with pytest.raises(ValueError):
        RenderSpec(colors={"A": "not a color!"})


def test_clip_line():
    seg = clip_line(Line2(0, 1, 0), (-1, -1, 1, 1))
    xs = sorted(p.x for p in seg)
    assert xs == pytest.approx([-1, 1])
    assert clip_line(Line2(0, 1, -5), (-1, -1, 1, 1)) is None


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "gray_levi.graph")
    assert code == 0
    assert "aut_order: 1296" in out
    rows = [l.split() for l in out.splitlines() if l[:1].isdigit()]
    assert [int(r[1]) for r in rows] == [3, 3, 9, 9, 27]
    assert all(r[4] == "yes" for r in rows)
    assert [r[5] for r in rows[:3]] == ["gg", "pappus", "K3,3"]
    assert "note:" in out


def test_cli_gray_levi(capsys, gray_levi):
    code, out, _ = run(capsys, "gray", "--levi")
    assert code == 0
    assert isomorphic(parse_graph(out), gray_levi, respect_colors=True) is not None


def test_cli_rlg_and_lift(capsys, tmp_path, gray, gray_levi):
    grp = tmp_path / "g.grp"
    grp.write_text(serialize_group(PermGroup(54, [z3xz3_generators(gray)[0]])))
    lev = tmp_path / "levi.graph"
    run(capsys, "gray", "--levi", "--out", str(lev))
    code, out, _ = run(capsys, "rlg", str(lev), str(grp))
    assert code == 0
    rlg = tmp_path / "x.rlg"
    rlg.write_text(out)
    assert len(parse_rlg(out).nodes) == 18
    code, out, _ = run(capsys, "lift", str(rlg))
    assert isomorphic(parse_graph(out), gray_levi, respect_colors=True) is not None
    code, out, _ = run(capsys, "quotient", str(lev), str(grp))
    assert code == 0 and out.startswith("QUOTIENT 18") and "# bipartite: yes" in out


def test_cli_normalize(capsys, tmp_path):
    tree = tmp_path / "t.tree"
    tree.write_text("TREE 1 2 7 8 3\n")
    code, out, _ = run(capsys, "normalize", "fig13a_z9.rlg", "--tree", str(tree), "--root", "D")
    assert code == 0
    nonzero = sorted(a.voltage for a in parse_rlg(out).arcs if a.voltage)
    assert nonzero == [1, 2, 4, 8]
    code, out, _ = run(capsys, "normalize", "fig13a_z9.rlg")
    assert code == 0


def test_cli_realize_and_audit(capsys, tmp_path):
    svg = tmp_path / "p.svg"
    real = tmp_path / "p.real"
    code, _, err = run(capsys, "realize", "pappus_rlg.prog", "--solve", "t_R0", "--svg", str(svg), "--out", str(real))
    assert code == 0 and "audit: strong" in err
    assert count(svg.read_text(), "circle") == 27
    assert len(parse_realization(real.read_text()).points) == 9
    code, out, _ = run(capsys, "audit", str(real), "gray")
    assert code == 0 and out.startswith("strong")


def test_cli_realize_z9_generic_fails(capsys):
    code, _, err = run(capsys, "realize", "z9.prog", "--set", "t=0.5")
    assert code == 1
    assert err.startswith("error:") and len(err.strip().splitlines()) == 1


def test_cli_celestial(capsys, tmp_path):
    svg = tmp_path / "c.svg"
    code, out, err = run(capsys, "celestial", "9", "1,3", "4,3", "2,3", "--svg", str(svg))
    assert code == 0
    assert "lines per point [4], points per line [4]" in err
    assert count(svg.read_text(), "circle") == 27


def test_cli_verify_z9(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    svg = tmp_path / "z.svg"
    code, out, _ = run(capsys, "verify-z9", "--svg", str(svg))
    assert code == 0
    assert "result: pass" in out and "\033[" not in out
    # 27 points plus a ring at each of the 27 points carrying an unwanted incidence
    assert count(svg.read_text(), "circle") == 54


def test_cli_errors(capsys):
    assert run(capsys, "lift", "no-such-file.rlg")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    capsys.readouterr()
