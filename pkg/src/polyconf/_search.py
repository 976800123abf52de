"""Individualization/refinement search shared by isomorphism and automorphism code.

Ordered partitions are lists of cells (lists of vertices).  Refinement is
canonical: a cell is split by the sorted multiset of neighbour-cell counts, and
the sub-cells are ordered by that signature, so an isomorphism mapping one
ordered partition onto another also maps their refinements onto each other.
Every refinement produces a trace; two branches can only correspond when
their traces agree.
"""

from __future__ import annotations

from collections import Counter
from typing import Callable, Optional, Sequence

Adjacency = Sequence[Sequence[int]]
Cells = list[list[int]]


def initial_cells(adj: Adjacency, keys: Sequence) -> tuple[Cells, tuple]:
    order = sorted(set(keys))
    cells = [[v for v in range(len(adj)) if keys[v] == k] for k in order]
    return cells, tuple((k, len(c)) for k, c in zip(order, cells))


def refine(adj: Adjacency, cells: Cells) -> tuple[Cells, tuple]:
    n = len(adj)
    trace = []
    while True:
        cell_of = [0] * n
        for ci, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = ci
        new_cells: Cells = []
        changed = False
        for ci, cell in enumerate(cells):
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {v: tuple(sorted(Counter(cell_of[w] for w in adj[v]).items())) for v in cell}
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                changed = True
                parts = [[v for v in cell if sig[v] == k] for k in keys]
                trace.append((ci, tuple(keys), tuple(len(p) for p in parts)))
                new_cells.extend(parts)
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells, tuple(trace)


def individualize(cells: Cells, ci: int, v: int) -> Cells:
    rest = [w for w in cells[ci] if w != v]
    return cells[:ci] + [[v], rest] + cells[ci + 1:]


def first_nonsingleton(cells: Cells) -> int:
    for ci, cell in enumerate(cells):
        if len(cell) > 1:
            return ci
    return -1


class FirstPath:
    """The leftmost branch of the search tree on the reference graph."""

    def __init__(self, adj: Adjacency, root: Cells):
        self.levels = []  # (cells before individualization, target cell, chosen vertex, trace after)
        cells = root
        while True:
            ci = first_nonsingleton(cells)
            if ci < 0:
                break
            v = cells[ci][0]
            nxt, tr = refine(adj, individualize(cells, ci, v))
            self.levels.append((cells, ci, v, tr))
            cells = nxt
        self.leaf = cells


def search_leaf(
    adj: Adjacency,
    cells: Cells,
    depth: int,
    path: FirstPath,
    accept: Callable[[dict], bool],
) -> Optional[dict]:
    """Depth-first search for a leaf on ``adj`` matching ``path``'s leaf under ``accept``."""
    if depth == len(path.levels):
        mapping = {path.leaf[i][0]: cells[i][0] for i in range(len(cells))}
        return mapping if accept(mapping) else None
    ref_cells, ci, _, ref_trace = path.levels[depth]
    if [len(c) for c in cells] != [len(c) for c in ref_cells]:
        return None
    for w in cells[ci]:
        nxt, tr = refine(adj, individualize(cells, ci, w))
        if tr != ref_trace:
            continue
        found = search_leaf(adj, nxt, depth + 1, path, accept)
        if found is not None:
            return found
    return None


def _orbit(point: int, gens: list[list[int]]) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def automorphism_generators(adj: Adjacency, keys: Sequence, is_automorphism) -> list[list[int]]:
    """Generators of the automorphism group preserving the vertex ``keys``.

    Walks the first path bottom-up; at each level every vertex of the target cell
    outside the known orbit of the base point is tested for a mapping, which
    yields the full orbit of the point stabilizer (Schreier-style generation).
    """
    n = len(adj)
    cells, _ = initial_cells(adj, keys)
    root, _ = refine(adj, cells)
    path = FirstPath(adj, root)
    gens: list[list[int]] = []

    def accept(mapping):
        perm = [mapping[v] for v in range(n)]
        return is_automorphism(perm)

    for depth in reversed(range(len(path.levels))):
        ref_cells, ci, b, ref_trace = path.levels[depth]
        orbit = _orbit(b, gens)
        for w in ref_cells[ci]:
            if w in orbit:
                continue
            nxt, tr = refine(adj, individualize(ref_cells, ci, w))
            if tr != ref_trace:
                continue
            found = search_leaf(adj, nxt, depth + 1, path, accept)
            if found is not None:
                gens.append([found[v] for v in range(n)])
                orbit = _orbit(b, gens)
    return gens
