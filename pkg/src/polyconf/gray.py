"""Grid-label arithmetic for the Gray configuration and its standard symmetry classes."""

from __future__ import annotations

from typing import Callable, Sequence

from .covers import FiniteGroup, VoltageGraph, reduced_levi_graph
from .incidence import IncidenceStructure, build_gray_incidence, levi_graph, levi_labels
from .permgroups import Permutation

# 0th elements of the six Z3 x Z3 classes (points R, B, G; lines X, Y, Z)
TABLE2_REPRESENTATIVES = {"R": "000", "B": "100", "G": "110", "X": "*00", "Y": "1*0", "Z": "11*"}
# 0th elements of the six Z9 classes
Z9_REPRESENTATIVES = {"D": "000", "F": "200", "E": "202", "L": "*00", "N": "2*0", "M": "*02"}


def add_label(label: str, vec: Sequence[int]) -> str:
    """Add ``vec`` digit-wise mod 3; a ``*`` stays put."""
    return "".join(c if c == "*" else str((int(c) + d) % 3) for c, d in zip(label, vec))


def z9_step(label: str) -> str:
    """The order-9 grid symmetry ``(x, y, z) -> (z + 1, x, y)``."""
    x, y, z = label
    return ("*" if z == "*" else str((int(z) + 1) % 3)) + x + y


def label_permutation(inc: IncidenceStructure, f: Callable[[str], str]) -> Permutation:
    """Permutation of Levi vertices induced by a label map."""
    labels = levi_labels(inc)
    index = {l: i for i, l in enumerate(labels)}
    return Permutation(tuple(index[f(l)] for l in labels))


def z3xz3_generators(inc: IncidenceStructure = None) -> list[Permutation]:
    """Adding ``111`` and ``210`` to every label."""
    inc = inc or build_gray_incidence()
    return [label_permutation(inc, lambda l: add_label(l, (1, 1, 1))),
            label_permutation(inc, lambda l: add_label(l, (2, 1, 0)))]


def z9_generator(inc: IncidenceStructure = None) -> Permutation:
    inc = inc or build_gray_incidence()
    return label_permutation(inc, z9_step)


def table2_label(cls: str, i: int, j: int) -> str:
    """Label of ``cls_{ij}``: the 0th element plus ``i * 111 + j * 210``."""
    return add_label(TABLE2_REPRESENTATIVES[cls], ((i + 2 * j) % 3, (i + j) % 3, i % 3))


def table2_labels() -> dict[str, str]:
    """``{"R01": "210", ...}`` for all 54 elements."""
    return {f"{c}{i}{j}": table2_label(c, i, j) for c in TABLE2_REPRESENTATIVES for i in range(3) for j in range(3)}


def z9_label(cls: str, k: int) -> str:
    lab = Z9_REPRESENTATIVES[cls]
    for _ in range(k % 9):
        lab = z9_step(lab)
    return lab


def _rlg(group, gens, reps: dict, inc) -> VoltageGraph:
    levi = levi_graph(inc)
    index = {l: i for i, l in enumerate(levi_labels(inc))}
    names = {index[lab]: name for name, lab in reps.items()}
    return reduced_levi_graph(levi, group, gens, list(names), names)


def gray_z3xz3_rlg() -> VoltageGraph:
    """The reduced Levi graph over Z3 x Z3 computed from the grid symmetries."""
    inc = build_gray_incidence()
    return _rlg(FiniteGroup.product(3, 3), z3xz3_generators(inc), TABLE2_REPRESENTATIVES, inc)


def gray_z9_rlg() -> VoltageGraph:
    """The reduced Levi graph over Z9 computed from the order-9 grid symmetry."""
    inc = build_gray_incidence()
    return _rlg(FiniteGroup.cyclic(9), [z9_generator(inc)], Z9_REPRESENTATIVES, inc)
