"""Quotients under semi-regular actions, voltage graphs (reduced Levi graphs) and lifts.

Voltage convention: an arc ``L -> P`` with voltage ``g`` means the 0th line
``L_0`` meets the point ``P_g``; in general ``L_h`` meets ``P_{h*g}``.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import GroupError
from .incidence import LINE, POINT, Graph
from .permgroups import Permutation, PermGroup, is_automorphism, is_semi_regular


@dataclass(frozen=True)
class FiniteGroup:
    """A small voltage group: ``Z m``, ``Z m x Z n`` or an explicit multiplication table.

    Elements are ``int`` (cyclic, table index) or ``(a, b)`` pairs (product).
    """

    kind: str
    m: int = 1
    n: int = 1
    table: tuple = ()

    def __post_init__(self):
        if self.kind not in ("cyclic", "product", "table"):
            raise GroupError(f"unknown group kind {self.kind!r}")
        if self.kind == "table":
            object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
            self._check_table()
        elif self.m < 1 or self.n < 1:
            raise GroupError("group orders must be positive")

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        return cls("cyclic", m)

    @classmethod
    def product(cls, m: int, n: int) -> "FiniteGroup":
        return cls("product", m, n)

    @classmethod
    def from_table(cls, table) -> "FiniteGroup":
        return cls("table", table=tuple(tuple(r) for r in table))

    def _check_table(self):
        k = len(self.table)
        if k == 0 or any(len(r) != k or sorted(r) != list(range(k)) for r in self.table):
            raise GroupError("multiplication table must be a Latin square")
        ids = [e for e in range(k) if list(self.table[e]) == list(range(k))]
        if not ids or [self.table[x][ids[0]] for x in range(k)] != list(range(k)):
            raise GroupError("multiplication table has no identity")
        triples = itertools.product(range(k), repeat=3) if k <= 30 else (
            tuple(random.Random(0).randrange(k) for _ in range(3)) for _ in range(2000))
        for a, b, c in triples:
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise GroupError("multiplication table is not associative")

    @cached_property
    def elements(self) -> tuple:
        if self.kind == "cyclic":
            return tuple(range(self.m))
        if self.kind == "product":
            return tuple(itertools.product(range(self.m), range(self.n)))
        return tuple(range(len(self.table)))

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def identity(self):
        if self.kind == "cyclic":
            return 0
        if self.kind == "product":
            return (0, 0)
        return next(e for e in range(len(self.table)) if list(self.table[e]) == list(range(len(self.table))))

    def mul(self, a, b):
        if self.kind == "cyclic":
            return (a + b) % self.m
        if self.kind == "product":
            return ((a[0] + b[0]) % self.m, (a[1] + b[1]) % self.n)
        return self.table[a][b]

    def inv(self, a):
        if self.kind == "cyclic":
            return (-a) % self.m
        if self.kind == "product":
            return ((-a[0]) % self.m, (-a[1]) % self.n)
        return next(b for b in self.elements if self.table[a][b] == self.identity)

    def normalize(self, a):
        if self.kind == "cyclic":
            return int(a) % self.m
        if self.kind == "product":
            return (int(a[0]) % self.m, int(a[1]) % self.n)
        if not 0 <= int(a) < len(self.table):
            raise GroupError(f"table index {a} out of range")
        return int(a)

    def __contains__(self, a) -> bool:
        return a in self.index

    def signed(self, a) -> str:
        """Element as text, using the representative closest to zero (``-1`` for ``8`` in Z9)."""
        def s(x, mod):
            return x - mod if x > mod // 2 else x
        if self.kind == "cyclic":
            return str(s(a, self.m))
        if self.kind == "product":
            return f"{s(a[0], self.m)},{s(a[1], self.n)}"
        return str(a)


@dataclass(frozen=True)
class Node:
    name: str
    kind: str  # POINT or LINE


@dataclass(frozen=True)
class Arc:
    line: str
    point: str
    voltage: object


@dataclass(frozen=True)
class VoltageGraph:
    """Bipartite voltage multigraph; arcs run from line-class nodes to point-class nodes."""

    group: FiniteGroup
    nodes: tuple
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        names = [nd.name for nd in self.nodes]
        if len(set(names)) != len(names):
            raise GroupError("duplicate node name")
        kinds = {nd.name: nd.kind for nd in self.nodes}
        arcs = []
        for a in self.arcs:
            if kinds.get(a.line) != LINE or kinds.get(a.point) != POINT:
                raise GroupError(f"arc {a.line}->{a.point} must run from a line node to a point node")
            arcs.append(Arc(a.line, a.point, self.group.normalize(a.voltage)))
        object.__setattr__(self, "arcs", tuple(arcs))

    @cached_property
    def node_index(self) -> dict:
        return {nd.name: i for i, nd in enumerate(self.nodes)}

    def node(self, name: str) -> Node:
        return self.nodes[self.node_index[name]]

    def voltage_multiset(self) -> Counter:
        return Counter(a.voltage for a in self.arcs)

    def nonzero_arcs(self) -> set:
        e = self.group.identity
        return {(a.line, a.point, a.voltage) for a in self.arcs if a.voltage != e}

    def underlying_graph(self) -> Graph:
        """Simple graph on the nodes (parallel arcs collapsed)."""
        idx = self.node_index
        edges = {(idx[a.line], idx[a.point]) for a in self.arcs}
        return Graph.from_edges(len(self.nodes), edges, [nd.kind for nd in self.nodes])


@dataclass(frozen=True)
class Link:
    kind: str  # "edge", "parallel", "loop" or "semi"
    u: int
    v: int
    size: int
    representative: tuple


@dataclass(frozen=True)
class QuotientGraph:
    orbits: tuple
    links: tuple
    colors: Optional[tuple] = None

    def has_loops(self) -> bool:
        return any(l.kind == "loop" for l in self.links)

    def underlying_simple_graph(self) -> Graph:
        edges = {(l.u, l.v) for l in self.links if l.kind in ("edge", "parallel")}
        return Graph.from_edges(len(self.orbits), edges, self.colors)

    def is_bipartite(self) -> bool:
        if any(l.kind in ("loop", "semi") for l in self.links):
            return False
        return self.underlying_simple_graph().is_bipartite()

    def link_counts(self) -> Counter:
        return Counter(l.kind for l in self.links)


def has_semi_edges(q: QuotientGraph) -> bool:
    return any(l.kind == "semi" for l in q.links)


def _check_action(g: Graph, gamma: PermGroup) -> None:
    if gamma.degree != g.n:
        raise GroupError("group degree does not match the graph")
    for p in gamma.generators:
        if not is_automorphism(g, p.images):
            raise GroupError("group is not a subgroup of Aut(g)")
    if not is_semi_regular(gamma):
        raise GroupError("group does not act semi-regularly on the vertices")


def quotient(g: Graph, gamma: PermGroup) -> QuotientGraph:
    """Quotient graph ``g / gamma`` with links from orbits of arcs."""
    _check_action(g, gamma)
    orbits = sorted(gamma.orbits())
    orbit_of = {}
    for k, orb in enumerate(orbits):
        for v in orb:
            orbit_of[v] = k
    elems = sorted(gamma._raw)
    seen = set()
    raw_links = []
    for u, v in g.sorted_edges():
        if (u, v) in seen:
            continue
        orbit = set()
        semi = False
        for p in elems:
            a, b = p[u], p[v]
            orbit.add((min(a, b), max(a, b)))
            if a == v and b == u:
                semi = True
        seen |= orbit
        ou, ov = orbit_of[u], orbit_of[v]
        if semi:
            kind = "semi"
        elif ou == ov:
            kind = "loop"
        else:
            kind = "edge"
        raw_links.append((kind, min(ou, ov), max(ou, ov), len(orbit), (u, v)))
    pair_count = Counter((u, v) for kind, u, v, _, _ in raw_links if kind == "edge")
    links = tuple(
        Link("parallel" if kind == "edge" and pair_count[(u, v)] > 1 else kind, u, v, size, rep)
        for kind, u, v, size, rep in raw_links
    )
    colors = None
    if g.colors is not None and all(len({g.colors[v] for v in orb}) == 1 for orb in orbits):
        colors = tuple(g.colors[orb[0]] for orb in orbits)
    return QuotientGraph(tuple(tuple(o) for o in orbits), links, colors)


def element_permutations(group: FiniteGroup, generators: Sequence[Permutation]) -> dict:
    """Extend generator images to a map ``group element -> Permutation`` and check it is a homomorphism.

    ``cyclic``: one generator; ``product``: two commuting generators; ``table``:
    one permutation per table index.
    """
    if not generators:
        raise GroupError("missing group isomorphism (no generators supplied)")
    deg = generators[0].degree
    if group.kind == "cyclic":
        if len(generators) != 1:
            raise GroupError("cyclic group needs exactly one generator")
        emap = {k: generators[0] ** k for k in group.elements}
    elif group.kind == "product":
        if len(generators) != 2:
            raise GroupError("product group needs exactly two generators")
        a, b = generators
        emap = {(i, j): (a ** i) * (b ** j) for i, j in group.elements}
    else:
        if len(generators) != group.order:
            raise GroupError("table group needs one permutation per element")
        emap = dict(zip(group.elements, generators))
    if len({p.images for p in emap.values()}) != group.order:
        raise GroupError("generator map is not injective")
    for x in group.elements:
        for y in group.elements:
            if emap[group.mul(x, y)] != emap[x] * emap[y]:
                raise GroupError("generator map is not a homomorphism")
    if any(p.degree != deg for p in emap.values()):
        raise GroupError("generator degree mismatch")
    return emap


def cyclic_identification(gamma: PermGroup) -> tuple[FiniteGroup, list[Permutation]]:
    """Identify a cyclic permutation group with ``Z m`` by choosing a generator."""
    m = gamma.order
    for p in sorted(gamma.elements):
        if p.order() == m:
            return FiniteGroup.cyclic(m), [p]
    raise GroupError("group is not cyclic; supply an explicit identification")


def reduced_levi_graph(
    levi: Graph,
    group: FiniteGroup,
    generators: Sequence[Permutation],
    representatives: Optional[Sequence[int]] = None,
    names: Optional[dict] = None,
) -> VoltageGraph:
    """Voltage graph of ``levi`` over the deck group given by ``generators``.

    ``representatives`` picks the 0th vertex of each orbit (default: the smallest
    vertex); ``names`` maps representative vertex -> node name.
    """
    if levi.colors is None:
        raise GroupError("the Levi graph must carry a point/line coloring")
    emap = element_permutations(group, generators)
    gamma = PermGroup(levi.n, list(emap.values()))
    _check_action(levi, gamma)
    if any(levi.colors[v] != levi.colors[p[v]] for p in gamma.generators for v in range(levi.n)):
        raise GroupError("group does not preserve the point/line coloring")
    orbits = sorted(gamma.orbits())
    if representatives is None:
        reps = [orb[0] for orb in orbits]
    else:
        reps = list(representatives)
        hit = sorted(tuple(orb) for orb in orbits if len(set(orb) & set(reps)) == 1)
        if len(reps) != len(orbits) or len(hit) != len(orbits):
            raise GroupError("representatives must contain exactly one vertex per orbit")
        reps.sort(key=lambda r: next(k for k, orb in enumerate(orbits) if r in orb))
    counters = {POINT: 0, LINE: 0}
    node_of = {}
    nodes = []
    for r in reps:
        kind = levi.colors[r]
        if names and r in names:
            nm = names[r]
        else:
            nm = f"{kind}{counters[kind]}"
        counters[kind] += 1
        nodes.append(Node(nm, kind))
        node_of[r] = nm
    # locate every vertex as (node, element)
    where = {}
    for r in reps:
        for x, p in emap.items():
            where[p[r]] = (node_of[r], x)
    arcs = []
    for r in reps:
        if levi.colors[r] != LINE:
            continue
        for v in levi.adjacency[r]:
            pname, x = where[v]
            arcs.append(Arc(node_of[r], pname, x))
    order = {nd.name: i for i, nd in enumerate(nodes)}
    arcs.sort(key=lambda a: (order[a.line], order[a.point], group.index[a.voltage]))
    return VoltageGraph(group, tuple(nodes), tuple(arcs))


def trivial_voltage_graph(g: Graph) -> VoltageGraph:
    """Levi graph viewed as a voltage graph over the trivial group."""
    if g.colors is None:
        raise GroupError("coloring required")
    nodes = tuple(Node(f"{g.colors[v]}{v}", g.colors[v]) for v in range(g.n))
    arcs = []
    for u, v in g.sorted_edges():
        l, p = (u, v) if g.colors[u] == LINE else (v, u)
        arcs.append(Arc(nodes[l].name, nodes[p].name, 0))
    return VoltageGraph(FiniteGroup.cyclic(1), nodes, tuple(arcs))


def shift_voltages(vg: VoltageGraph, node: str, g) -> VoltageGraph:
    """Re-base the orbit at ``node``: arcs leaving it get ``g*v``, arcs entering it ``v*g``.

    For abelian groups both amount to adding ``g`` to every incident arc.
    """
    grp = vg.group
    g = grp.normalize(g)
    if node not in vg.node_index:
        raise GroupError(f"unknown node {node!r}")
    arcs = []
    for a in vg.arcs:
        v = a.voltage
        if a.line == node:
            v = grp.mul(g, v)
        if a.point == node:
            v = grp.mul(v, g)
        arcs.append(Arc(a.line, a.point, v))
    return VoltageGraph(grp, vg.nodes, tuple(arcs))


def spanning_tree(vg: VoltageGraph, root: Optional[str] = None) -> list[int]:
    """Arc indices of a BFS spanning tree (first arc wins)."""
    root = root or vg.nodes[0].name
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for i, a in enumerate(vg.arcs):
            if u not in (a.line, a.point):
                continue
            w = a.point if a.line == u else a.line
            if w not in seen:
                seen.add(w)
                tree.append(i)
                queue.append(w)
    if len(seen) != len(vg.nodes):
        raise GroupError("voltage graph is disconnected")
    return tree


def normalize_spanning_tree(vg: VoltageGraph, tree: Iterable[int], root: Optional[str] = None) -> VoltageGraph:
    """Shift node voltages so every arc of ``tree`` carries the identity."""
    return _normalize(vg, tree, root)[0]


def _normalize(vg: VoltageGraph, tree: Iterable[int], root: Optional[str] = None) -> tuple[VoltageGraph, dict]:
    tree = list(tree)
    n = len(vg.nodes)
    if len(set(tree)) != len(tree) or len(tree) != n - 1 or any(not 0 <= i < len(vg.arcs) for i in tree):
        raise GroupError("tree must consist of |nodes|-1 distinct arcs")
    parent = {nd.name: nd.name for nd in vg.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in tree:
        a = vg.arcs[i]
        ra, rb = find(a.line), find(a.point)
        if ra == rb:
            raise GroupError("tree arcs contain a cycle")
        parent[ra] = rb
    root = root or vg.nodes[0].name
    grp = vg.group
    out = vg
    shifts = {nd.name: grp.identity for nd in vg.nodes}
    done = {root}
    pending = list(tree)
    while pending:
        progressed = False
        for i in list(pending):
            a = out.arcs[i]
            if a.line in done and a.point not in done:
                node = a.point
            elif a.point in done and a.line not in done:
                node = a.line
            else:
                continue
            g = grp.inv(a.voltage)
            out = shift_voltages(out, node, g)
            shifts[node] = g
            done.add(node)
            pending.remove(i)
            progressed = True
        if not progressed:
            raise GroupError("tree is not spanning")
    return out, shifts


def lift(vg: VoltageGraph) -> Graph:
    """Derived graph on ``nodes x group``: vertex ``node_index * |G| + element_index``."""
    grp = vg.group
    k = grp.order
    idx = vg.node_index
    edges = []
    for a in vg.arcs:
        li, pi = idx[a.line], idx[a.point]
        for h in grp.elements:
            edges.append((li * k + grp.index[h], pi * k + grp.index[grp.mul(h, a.voltage)]))
    if len(set(tuple(sorted(e)) for e in edges)) != len(edges):
        raise GroupError("lift has parallel edges (repeated voltage on a parallel arc)")
    colors = [nd.kind for nd in vg.nodes for _ in range(k)]
    return Graph.from_edges(len(vg.nodes) * k, edges, colors)


def lift_labels(vg: VoltageGraph) -> list[str]:
    return [f"{nd.name}_{vg.group.signed(x)}" for nd in vg.nodes for x in vg.group.elements]


def deck_group(vg: VoltageGraph) -> PermGroup:
    """Deck transformations of ``lift(vg)``: left multiplication ``(u, h) -> (u, x*h)``."""
    grp = vg.group
    k = grp.order
    gens = []
    for x in grp.elements:
        img = [0] * (len(vg.nodes) * k)
        for ni in range(len(vg.nodes)):
            for h in grp.elements:
                img[ni * k + grp.index[h]] = ni * k + grp.index[grp.mul(x, h)]
        gens.append(Permutation(tuple(img)))
    return PermGroup(len(vg.nodes) * k, gens)


def dual_rlg(vg: VoltageGraph) -> VoltageGraph:
    """Reverse every arc (inverting its voltage) and swap the point/line roles."""
    swap = {POINT: LINE, LINE: POINT}
    nodes = tuple(Node(nd.name, swap[nd.kind]) for nd in vg.nodes)
    arcs = tuple(Arc(a.point, a.line, vg.group.inv(a.voltage)) for a in vg.arcs)
    return VoltageGraph(vg.group, nodes, arcs)


def shift_offsets(a: VoltageGraph, b: VoltageGraph) -> Optional[dict]:
    """Node shifts turning ``a`` into ``b`` (same node names and arc pairs), or ``None``.

    Applying ``shift_voltages(a, node, offsets[node])`` for every node yields ``b``.
    """
    if a.group != b.group or set(a.nodes) != set(b.nodes):
        return None
    pairs = lambda vg: Counter((x.line, x.point) for x in vg.arcs)
    if pairs(a) != pairs(b):
        return None
    grp = a.group
    tree_a = spanning_tree(a)
    na, sa = _normalize(a, tree_a)
    target = Counter((x.line, x.point, x.voltage) for x in na.arcs)
    # the matching tree in b may use any of the parallel copies
    choices = []
    for i in tree_a:
        key = (a.arcs[i].line, a.arcs[i].point)
        choices.append([j for j, x in enumerate(b.arcs) if (x.line, x.point) == key])
    for pick in itertools.product(*choices):
        nb, sb = _normalize(b, pick, root=a.nodes[0].name)
        if Counter((x.line, x.point, x.voltage) for x in nb.arcs) != target:
            continue
        out = {}
        for nd in a.nodes:
            if nd.kind == POINT:
                out[nd.name] = grp.mul(sa[nd.name], grp.inv(sb[nd.name]))
            else:
                out[nd.name] = grp.mul(grp.inv(sb[nd.name]), sa[nd.name])
        return out
    return None


def shift_equivalent(a: VoltageGraph, b: VoltageGraph) -> bool:
    """True when ``b`` arises from ``a`` by node shifts."""
    return shift_offsets(a, b) is not None
