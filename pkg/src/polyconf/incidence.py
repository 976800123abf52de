"""Incidence structures, Levi graphs and small-graph utilities."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from . import _search

POINT = "P"
LINE = "L"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``colors`` optionally assigns ``"P"``/``"L"`` (or any hashable class) to each vertex.
    """

    n: int
    edges: frozenset
    colors: Optional[tuple] = None

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.colors is not None:
            if len(self.colors) != self.n:
                raise ValueError("coloring length does not match vertex count")
            object.__setattr__(self, "colors", tuple(self.colors))

    @classmethod
    def from_edges(cls, n, edges, colors=None) -> "Graph":
        return cls(n, frozenset(edges), None if colors is None else tuple(colors))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def swap_colors(self) -> "Graph":
        if self.colors is None:
            return self
        flip = {POINT: LINE, LINE: POINT}
        return Graph(self.n, self.edges, tuple(flip.get(c, c) for c in self.colors))

    def uncolored(self) -> "Graph":
        return Graph(self.n, self.edges, None)

    def is_bipartite(self) -> bool:
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        queue.append(w)
                    elif side[w] == side[u]:
                        return False
        return True

    def coloring_is_proper(self) -> bool:
        return self.colors is not None and all(self.colors[u] != self.colors[v] for u, v in self.edges)


@dataclass(frozen=True)
class IncidenceStructure:
    points: tuple
    lines: tuple
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "lines", tuple(self.lines))
        if len(set(self.points)) != len(self.points) or len(set(self.lines)) != len(self.lines):
            raise ValueError("duplicate point or line label")
        flags = frozenset(self.flags)
        for p, l in flags:
            if not (0 <= p < len(self.points) and 0 <= l < len(self.lines)):
                raise ValueError(f"flag ({p}, {l}) out of range")
        object.__setattr__(self, "flags", flags)

    @classmethod
    def from_labels(cls, points, lines, flag_labels) -> "IncidenceStructure":
        pi = {p: i for i, p in enumerate(points)}
        li = {l: i for i, l in enumerate(lines)}
        return cls(tuple(points), tuple(lines), frozenset((pi[p], li[l]) for p, l in flag_labels))

    @cached_property
    def point_index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def line_index(self) -> dict:
        return {l: i for i, l in enumerate(self.lines)}

    def points_on(self, line: int) -> list[int]:
        return sorted(p for p, l in self.flags if l == line)

    def lines_through(self, point: int) -> list[int]:
        return sorted(l for p, l in self.flags if p == point)

    def incident(self, point_label, line_label) -> bool:
        return (self.point_index[point_label], self.line_index[line_label]) in self.flags

    def point_degrees(self) -> list[int]:
        deg = [0] * len(self.points)
        for p, _ in self.flags:
            deg[p] += 1
        return deg

    def line_degrees(self) -> list[int]:
        deg = [0] * len(self.lines)
        for _, l in self.flags:
            deg[l] += 1
        return deg

    def is_linear(self) -> bool:
        on = [set(self.points_on(l)) for l in range(len(self.lines))]
        return all(len(a & b) <= 1 for a, b in itertools.combinations(on, 2))

    def is_configuration(self, n: Optional[int] = None, k: Optional[int] = None) -> bool:
        """True for an (n_k) configuration (any n, k when not given)."""
        if len(self.points) != len(self.lines) or not self.points:
            return False
        if n is not None and len(self.points) != n:
            return False
        degrees = set(self.point_degrees()) | set(self.line_degrees())
        if len(degrees) != 1:
            return False
        if k is not None and degrees != {k}:
            return False
        return self.is_linear()


def build_gray_incidence() -> IncidenceStructure:
    """The Gray (27_3) configuration on the 3x3x3 grid.

    Points are ``ijk``; lines are ``*ij``, ``i*j``, ``ij*``.  A point lies on a line
    when the labels agree in the two non-``*`` positions.
    """
    digits = "012"
    points = ["".join(t) for t in itertools.product(digits, repeat=3)]
    lines = []
    for star in range(3):
        for a, b in itertools.product(digits, repeat=2):
            rest = [a, b]
            rest.insert(star, "*")
            lines.append("".join(rest))
    flags = [
        (p, l)
        for p in points
        for l in lines
        if all(c == "*" or c == d for c, d in zip(l, p))
    ]
    return IncidenceStructure.from_labels(points, lines, flags)


def grid_line_members(line_label: str) -> list[str]:
    """The three grid points on a Gray line label such as ``1*2``."""
    return [line_label.replace("*", d) for d in "012"]


def build_pappus_incidence() -> IncidenceStructure:
    """The Pappus (9_3) configuration on the ``ij0`` points of the grid.

    Lines are the grid lines ``*j0`` and ``i*0`` plus the three diagonals
    ``d0, d1, d2`` where ``dc = {ij0 : j - i = c mod 3}``.
    """
    points = [f"{i}{j}0" for i in range(3) for j in range(3)]
    lines = [f"*{j}0" for j in range(3)] + [f"{i}*0" for i in range(3)] + [f"d{c}" for c in range(3)]
    flags = []
    for i in range(3):
        for j in range(3):
            p = f"{i}{j}0"
            flags += [(p, f"*{j}0"), (p, f"{i}*0"), (p, f"d{(j - i) % 3}")]
    return IncidenceStructure.from_labels(points, lines, flags)


def grid_from_pappus(inc: IncidenceStructure) -> IncidenceStructure:
    """Drop the diagonal lines, leaving the (9_2, 6_3) grid."""
    keep = [l for l in inc.lines if not l.startswith("d")]
    flags = [(inc.points[p], inc.lines[l]) for p, l in inc.flags if inc.lines[l] in keep]
    return IncidenceStructure.from_labels(inc.points, keep, flags)


def levi_graph(inc: IncidenceStructure) -> Graph:
    """Point vertices ``0..|P|-1`` followed by line vertices."""
    npts = len(inc.points)
    edges = [(p, npts + l) for p, l in inc.flags]
    colors = [POINT] * npts + [LINE] * len(inc.lines)
    return Graph.from_edges(npts + len(inc.lines), edges, colors)


def levi_labels(inc: IncidenceStructure) -> list[str]:
    return list(inc.points) + list(inc.lines)


def dual(inc: IncidenceStructure) -> IncidenceStructure:
    return IncidenceStructure(inc.lines, inc.points, frozenset((l, p) for p, l in inc.flags))


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    adj = g.adjacency
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], [POINT] * a + [LINE] * b)


def _vertex_keys(g: Graph, respect_colors: bool) -> list:
    if respect_colors and g.colors is not None:
        return [(str(g.colors[v]), g.degree(v)) for v in range(g.n)]
    return [("", g.degree(v)) for v in range(g.n)]


def is_isomorphism(g: Graph, h: Graph, mapping: dict, respect_colors: bool = False) -> bool:
    if len(mapping) != g.n or sorted(mapping.values()) != list(range(h.n)) or g.n != h.n:
        return False
    if len(g.edges) != len(h.edges):
        return False
    if respect_colors and (g.colors is None) != (h.colors is None):
        return False
    if respect_colors and g.colors is not None:
        if any(g.colors[v] != h.colors[mapping[v]] for v in range(g.n)):
            return False
    return all(h.has_edge(mapping[u], mapping[v]) for u, v in g.edges)


def isomorphic(g: Graph, h: Graph, respect_colors: bool = False) -> Optional[dict]:
    """A vertex mapping ``g -> h`` that is a (color-preserving) isomorphism, or ``None``."""
    if g.n != h.n or len(g.edges) != len(h.edges):
        return None
    if respect_colors and (g.colors is None) != (h.colors is None):
        return None
    kg, kh = _vertex_keys(g, respect_colors), _vertex_keys(h, respect_colors)
    if sorted(kg) != sorted(kh):
        return None
    if g.n == 0:
        return {}
    cg, tg = _search.initial_cells(g.adjacency, kg)
    ch, th = _search.initial_cells(h.adjacency, kh)
    if tg != th:
        return None
    root_g, rtg = _search.refine(g.adjacency, cg)
    root_h, rth = _search.refine(h.adjacency, ch)
    if rtg != rth:
        return None
    path = _search.FirstPath(g.adjacency, root_g)
    return _search.search_leaf(
        h.adjacency, root_h, 0, path, lambda m: is_isomorphism(g, h, m, respect_colors)
    )


def vertex_keys(g: Graph, respect_colors: bool) -> list:
    return _vertex_keys(g, respect_colors)


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    """Graph with vertex ``order[i]`` of ``g`` renamed to ``i``."""
    pos = {v: i for i, v in enumerate(order)}
    colors = None if g.colors is None else [g.colors[v] for v in order]
    return Graph.from_edges(g.n, [(pos[u], pos[v]) for u, v in g.edges], colors)
