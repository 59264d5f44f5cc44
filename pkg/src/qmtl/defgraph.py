"""Finite simplicial defining graphs and the static constants derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

MAX_VERTICES = 12


class DefGraphError(ValueError):
    pass


@dataclass(frozen=True)
class DefGraph:
    """Vertices in normal-form order, plus undirected edges.

    ``vertices`` doubles as the total order used by canonical normal forms.
    Adjacency is kept as one bitmask per vertex index.
    """

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    index: dict[str, int] = field(init=False, repr=False, compare=False)
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise DefGraphError("duplicate vertex identifiers")
        index = {v: i for i, v in enumerate(self.vertices)}
        masks = [0] * len(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise DefGraphError(f"loop or malformed edge {sorted(e)}")
            u, v = sorted(e)
            if u not in index or v not in index:
                raise DefGraphError(f"edge {u}-{v} uses an unlisted vertex")
            masks[index[u]] |= 1 << index[v]
            masks[index[v]] |= 1 << index[u]
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "adj", tuple(masks))

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()) -> "DefGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(len(self.vertices)) if self.adj[i] >> j & 1]

    def star_mask(self, i: int) -> int:
        return self.adj[i] | (1 << i)

    def gamma_distance(self, i: int, j: int) -> float:
        """Path distance between two vertices of the graph (inf if disconnected)."""
        if i == j:
            return 0
        seen = 1 << i
        frontier = [i]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                new = self.adj[u] & ~seen
                seen |= new
                for v in range(len(self.vertices)):
                    if new >> v & 1:
                        if v == j:
                            return d
                        nxt.append(v)
            frontier = nxt
        return math.inf


@dataclass(frozen=True)
class HyperbolicityProfile:
    n_cliques_per_vertex: int
    delta_contact: int
    delta_crossing: Fraction
    clique_number: int
    qm_delta: Optional[int]
    denom_bound_hyperbolic: Optional[int]
    denom_bound_gp: int

    def delta(self, mode: str) -> Fraction:
        return Fraction(self.delta_contact) if mode == "contact" else self.delta_crossing


def clique_number(g: DefGraph) -> int:
    """Size of a largest clique, by branch and bound over candidate bitmasks."""
    n = len(g)
    if n == 0:
        return 0
    best = 1

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if size + bin(cand).count("1") <= best:
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand &= ~low
            grow(size + 1, cand & g.adj[v])
            if size + bin(cand).count("1") <= best:
                return

    grow(0, (1 << n) - 1)
    return best


def has_induced_c4(g: DefGraph) -> bool:
    for quad in combinations(range(len(g)), 4):
        degs = []
        n_edges = 0
        for v in quad:
            d = sum(1 for w in quad if w != v and g.adjacent(v, w))
            degs.append(d)
            n_edges += d
        if n_edges == 8 and all(d == 2 for d in degs):
            return True
    return False


def is_connected(g: DefGraph) -> bool:
    n = len(g)
    if n == 0:
        return True
    seen = 1
    stack = [0]
    while stack:
        u = stack.pop()
        new = g.adj[u] & ~seen
        seen |= new
        stack.extend(v for v in range(n) if new >> v & 1)
    return seen == (1 << n) - 1


def crossing_connected(g: DefGraph) -> bool:
    # the clique-link of every vertex of the quasi-median graph is a copy of Γ
    return is_connected(g)


def hyperbolicity_profile(g: DefGraph) -> HyperbolicityProfile:
    n = len(g)
    omega = clique_number(g)
    qm_delta = None if has_induced_c4(g) else 5 * omega
    delta_crossing = 3 + Fraction(n, 2)
    bound_hyp = None if qm_delta is None else n ** (8 * qm_delta)
    return HyperbolicityProfile(
        n_cliques_per_vertex=n,
        delta_contact=3,
        delta_crossing=delta_crossing,
        clique_number=omega,
        qm_delta=qm_delta,
        denom_bound_hyperbolic=bound_hyp,
        denom_bound_gp=n ** (40 * omega),
    )
