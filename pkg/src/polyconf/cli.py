"""Command-line front end: ``polyconf <command> ...``."""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import formats
from .celestial import CelestialSymbol, celestial_realization, incidence_census, verify_z9_theorem, z9_weak_gray
from .covers import (cyclic_identification, lift, normalize_spanning_tree, quotient, reduced_levi_graph,
                     spanning_tree)
from .errors import FormatError, PolyconfError
from .geometry import INCIDENCE_TOL
from .gray import gray_z3xz3_rlg, gray_z9_rlg, table2_labels
from .incidence import build_gray_incidence, complete_bipartite, isomorphic, levi_graph
from .permgroups import automorphism_group, semi_regular_subgroups_up_to_conjugacy
from .realizer import audit, execute, solve_closure
from .render import RenderSpec, render_svg


def _read(arg: str) -> str:
    """File contents, falling back to a bundled data file of that name."""
    p = Path(arg)
    if p.exists():
        return p.read_text()
    if arg in formats.bundled_names():
        return formats.data_text(arg)
    raise FileNotFoundError(f"no such file or bundled data: {arg}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _paint(word: str, ok: bool) -> str:
    if os.environ.get("NO_COLOR") is not None or not sys.stdout.isatty():
        return word
    return f"\033[{32 if ok else 31}m{word}\033[0m"


def _expected(name: Optional[str]):
    if name is None:
        return None
    if name == "gray":
        return build_gray_incidence()
    if name == "pappus":
        return formats.load_incidence("pappus.inc")
    return formats.parse_incidence(_read(name))


def _bundled_quotients() -> dict:
    out = {}
    for name in ("pappus.graph", "gg.graph"):
        out[name.split(".")[0]] = formats.load_graph(name)
    out["K3,3"] = complete_bipartite(3, 3)
    return out


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    t0 = time.perf_counter()
    aut = automorphism_group(g, respect_colors=not args.uncolored)
    lines = [f"vertices: {g.n}", f"edges: {len(g.edges)}", f"aut_order: {aut.order}"]
    if not args.no_classes:
        known = _bundled_quotients()
        classes = semi_regular_subgroups_up_to_conjugacy(aut)
        lines.append(f"semi_regular_classes: {len(classes)}")
        lines.append("id  order  structure  class_size  bipartite  quotient")
        for k, c in enumerate(classes, 1):
            q = quotient(g, c.group)
            simple = q.underlying_simple_graph()
            match = next((nm for nm, h in known.items()
                          if h.n == simple.n and isomorphic(simple.uncolored(), h.uncolored()) is not None), "-")
            lines.append(f"{k:<3} {c.order:<6} {c.structure:<10} {c.class_size:<11} "
                         f"{'yes' if q.is_bipartite() else 'no':<10} {match}")
            if c.order == 27 and c.structure != "Z9xZ3":
                census = c.group.element_order_census()
                lines.append(f"    note: element orders {dict(sorted(census.items()))} make this group "
                             f"{c.structure}, not the abelian Z9xZ3 it is sometimes listed as")
    lines.append(f"seconds: {time.perf_counter() - t0:.2f}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _load_group(text: str, n: int):
    gamma, spec, gens = formats.parse_group(text)
    if gamma.degree != n:
        raise FormatError("group degree does not match the graph")
    if spec is None:
        spec, gens = cyclic_identification(gamma)
    return gamma, spec, gens


def cmd_quotient(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    gamma, _, _ = _load_group(_read(args.group), g.n)
    q = quotient(g, gamma)
    out = [f"QUOTIENT {len(q.orbits)}"]
    for k, orb in enumerate(q.orbits):
        col = f" {q.colors[k]}" if q.colors else ""
        out.append(f"ORBIT {k}{col} " + " ".join(map(str, orb)))
    for l in q.links:
        out.append(f"LINK {l.kind} {l.u} {l.v} {l.size}")
    out.append(f"# bipartite: {'yes' if q.is_bipartite() else 'no'}")
    _emit("\n".join(out) + "\n", args.out)
    return 0


def cmd_rlg(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    _, spec, gens = _load_group(_read(args.group), g.n)
    _emit(formats.serialize_rlg(reduced_levi_graph(g, spec, gens)), args.out)
    return 0


def cmd_normalize(args) -> int:
    vg = formats.parse_rlg(_read(args.rlg))
    if args.tree == "auto":
        tree = spanning_tree(vg, args.root)
    else:
        tree = formats.parse_tree(_read(args.tree))
    _emit(formats.serialize_rlg(normalize_spanning_tree(vg, tree, args.root)), args.out)
    return 0


def cmd_lift(args) -> int:
    _emit(formats.serialize_graph(lift(formats.parse_rlg(_read(args.rlg)))), args.out)
    return 0


def _assignments(items: Sequence[str]) -> dict:
    out = {}
    for it in items or ():
        name, sep, val = it.partition("=")
        if not sep:
            raise FormatError(f"expected name=value, got {it!r}")
        out[name] = float(val)
    return out


def cmd_realize(args) -> int:
    prog = formats.parse_program(_read(args.program))
    params = {**prog.default_params(), **_assignments(args.set)}
    if args.solve:
        params[args.solve] = solve_closure(prog, args.solve, tuple(args.interval) if args.interval else None,
                                           params=params)
    real = execute(prog, params)
    _emit(formats.serialize_realization(real), args.out)
    expected = _expected(args.expect or prog.expect)
    if expected is not None:
        rep = audit(real, expected, args.tol)
        cls = _paint(rep.classification, rep.classification == "strong")
        print(f"audit: {cls}; " + rep.summary().split(": ", 1)[1], file=sys.stderr)
    if args.svg:
        Path(args.svg).write_text(render_svg(real))
    return 0


def cmd_audit(args) -> int:
    real = formats.parse_realization(_read(args.realization))
    rep = audit(real, _expected(args.incidence), args.tol)
    lines = [rep.summary(), f"max_flag_residual: {rep.max_flag_residual:.3e}",
             f"min_nonflag_residual: {rep.min_nonflag_residual:.3e}"]
    lines += [f"missing {p} {l}" for p, l in rep.missing]
    lines += [f"extra {p} {l}" for p, l in rep.extra]
    lines[0] = lines[0].replace(rep.classification, _paint(rep.classification, rep.classification == "strong"), 1)
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if rep.classification != "failed" else 1


def cmd_celestial(args) -> int:
    text = f"{args.m}#(" + ";".join(args.spans) + ")"
    sym = CelestialSymbol.parse(text)
    real = celestial_realization(sym)
    per_point, per_line = incidence_census(real, args.tol)
    _emit(formats.serialize_realization(real), args.out)
    print(f"{sym}: lines per point {sorted(per_point)}, points per line {sorted(per_line)}", file=sys.stderr)
    if args.svg:
        Path(args.svg).write_text(render_svg(real))
    return 0


def cmd_verify_z9(args) -> int:
    rep = verify_z9_theorem(samples=args.samples)
    rows = [(k, _paint(v, v == "pass") if v in ("pass", "FAIL") else v) for k, v in rep.items()]
    _emit("".join(f"{k}: {v}\n" for k, v in rows), args.out)
    if args.svg:
        # the weak Z9 realization with its unwanted incidences ringed
        real, aud = z9_weak_gray()
        where = {real.label(c, j): p for c, j, p in real.point_items()}
        marks = tuple(where[p] for p in sorted({p for p, _ in aud.extra}))
        Path(args.svg).write_text(render_svg(real, RenderSpec(marks=marks)))
    return 0 if rep.passed else 1


def cmd_gray(args) -> int:
    inc = build_gray_incidence()
    if args.what == "levi":
        text = formats.serialize_graph(levi_graph(inc))
    elif args.what == "incidence":
        text = formats.serialize_incidence(inc)
    elif args.what == "z3xz3-rlg":
        text = formats.serialize_rlg(gray_z3xz3_rlg())
    elif args.what == "z9-rlg":
        text = formats.serialize_rlg(gray_z9_rlg())
    else:
        text = "".join(f"{k} {v}\n" for k, v in sorted(table2_labels().items()))
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyconf", description="Incidence configurations, covers and polycyclic realizations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", help="write to this file instead of stdout")
        p.set_defaults(fn=fn)
        return p

    p = add("analyze", cmd_analyze, "automorphism group and semi-regular subgroup classes")
    p.add_argument("graph")
    p.add_argument("--uncolored", action="store_true", help="allow automorphisms that swap colors")
    p.add_argument("--no-classes", action="store_true", help="only report the group order")

    p = add("quotient", cmd_quotient, "quotient graph by a semi-regular group")
    p.add_argument("graph")
    p.add_argument("group")

    p = add("rlg", cmd_rlg, "reduced Levi graph with voltages")
    p.add_argument("graph")
    p.add_argument("group")

    p = add("normalize", cmd_normalize, "make a spanning tree carry identity voltages")
    p.add_argument("rlg")
    p.add_argument("--tree", default="auto", help="'auto' or a TREE file")
    p.add_argument("--root")

    p = add("lift", cmd_lift, "derived graph of a voltage graph")
    p.add_argument("rlg")

    p = add("realize", cmd_realize, "run a construction program")
    p.add_argument("program")
    p.add_argument("--solve", metavar="PARAM", help="solve the closure condition for this parameter")
    p.add_argument("--interval", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--set", action="append", metavar="NAME=VALUE")
    p.add_argument("--expect", help="'gray', 'pappus' or an incidence file to audit against")
    p.add_argument("--svg")
    p.add_argument("--tol", type=float, default=INCIDENCE_TOL)

    p = add("audit", cmd_audit, "compare a realization with an incidence structure")
    p.add_argument("realization")
    p.add_argument("incidence", help="'gray', 'pappus' or an incidence file")
    p.add_argument("--tol", type=float, default=INCIDENCE_TOL)

    p = add("celestial", cmd_celestial, "celestial configuration m#(s1,t1;...)")
    p.add_argument("m", type=int)
    p.add_argument("spans", nargs="+", metavar="S,T")
    p.add_argument("--svg")
    p.add_argument("--tol", type=float, default=INCIDENCE_TOL)

    p = add("verify-z9", cmd_verify_z9, "numeric check of the Z9 obstruction")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--svg", help="draw the weak Z9 realization with the extra incidences ringed")

    p = add("gray", cmd_gray, "emit bundled Gray configuration data")
    g = p.add_mutually_exclusive_group()
    for what in ("levi", "incidence", "z3xz3-rlg", "z9-rlg", "labels"):
        g.add_argument(f"--{what}", dest="what", action="store_const", const=what)
    p.set_defaults(what="incidence")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PolyconfError, OSError, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 1


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
