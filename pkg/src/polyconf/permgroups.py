"""Permutations, materialized permutation groups and semi-regular subgroup classes."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import _search
from .errors import GroupError, MaterializationError
from .incidence import Graph, vertex_keys

DEFAULT_BOUND = 10**5


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``0..n-1`` stored by its image array.

    ``p * q`` applies ``q`` first, so ``(p * q)(i) == p(q(i))``.
    """

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("image array is not a bijection")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    __getitem__ = __call__

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(_compose(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(_inverse(self.images))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for s in range(self.degree):
            if seen[s]:
                continue
            cyc = []
            x = s
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return math.lcm(*self.cycle_type()) if self.degree else 1

    def is_semi_regular(self) -> bool:
        """All cycles of equal length."""
        return len(set(self.cycle_type())) <= 1

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def _compose(p: tuple, q: tuple) -> tuple:
    return tuple(p[i] for i in q)


def _inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _is_fixed_point_free(p: tuple) -> bool:
    return all(i != x for i, x in enumerate(p))


def _closure(gens: Iterable[tuple], n: int, bound: int, reject=None) -> Optional[frozenset]:
    """Group generated by ``gens`` as a frozenset of image tuples.

    Returns ``None`` as soon as an element satisfying ``reject`` appears.
    """
    ident = tuple(range(n))
    gens = [g for g in set(gens) if g != ident]
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(g, x)
                if y not in elements:
                    if reject is not None and reject(y):
                        return None
                    elements.add(y)
                    if len(elements) > bound:
                        raise MaterializationError(f"group order exceeds materialization bound {bound}")
                    nxt.append(y)
        frontier = nxt
    return frozenset(elements)


class PermGroup:
    """Finite permutation group given by generators; elements materialize lazily."""

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), bound: int = DEFAULT_BOUND,
                 _elements: Optional[frozenset] = None):
        self.degree = degree
        self.generators = tuple(g for g in generators if not g.is_identity())
        for g in self.generators:
            if g.degree != degree:
                raise GroupError("generator degree mismatch")
        self.bound = bound
        if _elements is not None:
            self.__dict__["_raw"] = _elements

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, ())

    @classmethod
    def from_raw(cls, degree: int, raw: frozenset, generators=None) -> "PermGroup":
        gens = generators if generators is not None else _small_generating_set(raw, degree)
        return cls(degree, [Permutation(g) for g in gens], _elements=raw)

    @cached_property
    def _raw(self) -> frozenset:
        return _closure((g.images for g in self.generators), self.degree, self.bound)

    @cached_property
    def elements(self) -> frozenset:
        return frozenset(Permutation(x) for x in self._raw)

    @property
    def order(self) -> int:
        return len(self._raw)

    def __len__(self):
        return self.order

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._raw

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.degree == other.degree and self._raw == other._raw

    def __hash__(self):
        return hash((self.degree, self._raw))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order}, gens={len(self.generators)})"

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        gens = [g.images for g in self.generators]
        return all(_compose(a, b) == _compose(b, a) for a in gens for b in gens)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(g in other for g in self.generators)

    def orbits(self) -> list[list[int]]:
        seen = [False] * self.degree
        out = []
        for s in range(self.degree):
            if seen[s]:
                continue
            orb = sorted(_search._orbit(s, [g.images for g in self.generators]))
            for x in orb:
                seen[x] = True
            out.append(orb)
        return out

    def element_order_census(self) -> dict[int, int]:
        return dict(sorted(Counter(Permutation(x).order() for x in self._raw).items()))

    def conjugate(self, g: Permutation) -> "PermGroup":
        gi = _inverse(g.images)
        raw = frozenset(_compose(_compose(g.images, h), gi) for h in self._raw)
        gens = [_compose(_compose(g.images, h.images), gi) for h in self.generators]
        return PermGroup.from_raw(self.degree, raw, gens)


def _small_generating_set(raw: frozenset, n: int) -> list[tuple]:
    gens: list[tuple] = []
    span = frozenset([tuple(range(n))])
    # prefer high-order elements so cyclic groups get a single generator
    for x in sorted(raw, key=lambda x: (-Permutation(x).order(), x)):
        if x not in span:
            gens.append(x)
            span = _closure(gens, n, len(raw) + 1)
            if len(span) == len(raw):
                break
    return gens


def is_automorphism(g: Graph, perm: Sequence[int], respect_colors: bool = False) -> bool:
    if respect_colors and g.colors is not None:
        if any(g.colors[v] != g.colors[perm[v]] for v in range(g.n)):
            return False
    return all(g.has_edge(perm[u], perm[v]) for u, v in g.edges)


def automorphism_group(g: Graph, respect_colors: bool = False, bound: int = DEFAULT_BOUND) -> PermGroup:
    """Full automorphism group (color-preserving when requested) via refinement search."""
    if g.n == 0:
        return PermGroup.trivial(0)
    keys = vertex_keys(g, respect_colors)
    gens = _search.automorphism_generators(g.adjacency, keys, lambda p: is_automorphism(g, p, respect_colors))
    return PermGroup(g.n, [Permutation(tuple(p)) for p in gens], bound=bound)


def is_semi_regular(gamma: PermGroup) -> bool:
    """Every orbit has size ``|gamma|`` (the trivial group counts as semi-regular)."""
    order = gamma.order
    return all(len(o) == order for o in gamma.orbits())


def are_conjugate(h: PermGroup, k: PermGroup, big: PermGroup) -> Optional[Permutation]:
    if h.order != k.order or h.degree != k.degree:
        return None
    if h.element_order_census() != k.element_order_census():
        return None
    target = k._raw
    for g in sorted(big._raw):
        gi = _inverse(g)
        if all(_compose(_compose(g, x.images), gi) in target for x in h.generators):
            return Permutation(g)
    return None


def _abelian_invariants(census_fn, order: int) -> Optional[list[int]]:
    """Invariant factors of an abelian group from ``census_fn(d) = #{x : x^d = 1}``."""
    factors: dict[int, list[int]] = {}
    m = order
    p = 2
    primes = []
    while p * p <= m:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        primes.append(m)
    for p in primes:
        e = 0
        while order % p ** (e + 1) == 0:
            e += 1
        # sum_i min(lambda_i, k) = log_p #{x : x^{p^k} = 1}
        sums = [0]
        for k in range(1, e + 1):
            cnt = census_fn(p**k)
            lg = round(math.log(cnt, p))
            if p**lg != cnt:
                return None
            sums.append(lg)
        # number of parts >= k equals sums[k] - sums[k-1]
        ge = [sums[k] - sums[k - 1] for k in range(1, e + 1)]
        parts = []
        for k in range(1, e + 1):
            nxt = ge[k] if k < e else 0
            parts += [k] * (ge[k - 1] - nxt)
        if sum(parts) != e:
            return None
        factors[p] = sorted(parts, reverse=True)
    width = max((len(v) for v in factors.values()), default=0)
    inv = []
    for i in range(width):
        f = 1
        for p, parts in factors.items():
            if i < len(parts):
                f *= p ** parts[i]
        inv.append(f)
    return inv


def structure_name(gamma: PermGroup) -> str:
    """Isomorphism-type label for small groups; ``unknown(order)`` when unrecognized."""
    order = gamma.order
    if order > 100:
        return f"unknown({order})"
    if order == 1:
        return "1"
    census = gamma.element_order_census()
    if gamma.is_abelian():
        def count(d):
            return sum(c for o, c in census.items() if d % o == 0)

        inv = _abelian_invariants(count, order)
        if inv is None:
            return f"unknown({order})"
        return "x".join(f"Z{f}" for f in inv)
    exponent = max(census)
    n_inv = census.get(2, 0)
    if order == 6:
        return "S3"
    if order == 8:
        return {5: "D8", 1: "Q8"}.get(n_inv, f"unknown({order})")
    if order == 12:
        return {7: "D12", 3: "A4", 1: "Dic3"}.get(n_inv, f"unknown({order})")
    if order == 27:
        return "Z9:Z3" if exponent == 9 else "(Z3xZ3):Z3"
    if order % 2 == 0 and n_inv == order // 2 + 1 and census.get(order // 2, 0) >= 1:
        return f"D{order}"
    return f"unknown({order})"


@dataclass
class SemiRegularClass:
    """One conjugacy class of nontrivial semi-regular subgroups."""

    group: PermGroup
    order: int
    structure: str
    class_size: int


def semi_regular_subgroups_up_to_conjugacy(big: PermGroup) -> list[SemiRegularClass]:
    """Representatives of the conjugacy classes of nontrivial semi-regular subgroups of ``big``.

    Candidates grow from cyclic groups of semi-regular elements by adjoining one
    semi-regular element at a time; any closure containing an element with a
    fixed point is discarded.  Only class representatives are extended, which
    still reaches a conjugate of every semi-regular subgroup.
    """
    n = big.degree
    raw = big._raw
    ident = tuple(range(n))
    semi = sorted(x for x in raw if x != ident and _is_fixed_point_free(x) and Permutation(x).is_semi_regular())
    elems = sorted(raw)

    def bad(y):
        return not _is_fixed_point_free(y)

    seen: set[frozenset] = set()
    reps: list[tuple[frozenset, int]] = []

    def register(sub: frozenset) -> bool:
        if sub in seen:
            return False
        conj = set()
        for g in elems:
            gi = _inverse(g)
            conj.add(frozenset(_compose(_compose(g, h), gi) for h in sub))
        seen.update(conj)
        reps.append((sub, len(conj)))
        return True

    frontier = []
    for x in semi:
        sub = _closure([x], n, big.order, reject=bad)
        if sub is not None and register(sub):
            frontier.append(sub)
    while frontier:
        nxt = []
        for sub in frontier:
            for x in semi:
                if x in sub:
                    continue
                ext = _closure(list(sub) + [x], n, big.order, reject=bad)
                if ext is not None and register(ext):
                    nxt.append(ext)
        frontier = nxt

    out = []
    for sub, size in reps:
        grp = PermGroup.from_raw(n, sub)
        out.append(SemiRegularClass(grp, grp.order, structure_name(grp), size))
    out.sort(key=lambda c: (c.order, c.structure, -c.class_size))
    return out
