"""Constructible quasi-median graphs.

Two backends share one interface: ``GraphProductQM`` (the Cayley graph of a
graph product with respect to the union of its vertex groups) and
``StaircaseQM`` (a periodic strip of the square grid).  Everything the
hyperplane calculus needs is expressed through intervals, clique menus and
the derived geodesic helpers below; balls are never materialised.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterator, NamedTuple, Optional

from .words import GraphProduct, NormalForm, Syllable, down_sets, linear_extensions

Vertex = Hashable

DEFAULT_GEODESIC_CAP = 10**6


class GeodesicCapExceeded(RuntimeError):
    pass


class BackendError(ValueError):
    pass


class OrientedEdge(NamedTuple):
    tail: Vertex
    head: Vertex

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.head, self.tail)


SameTest = Callable[[OrientedEdge, OrientedEdge], bool]


class QMGraph(ABC):
    """Common interface plus generic fallbacks written purely from intervals."""

    #: number of cliques through a vertex (upper bound N)
    n_cliques: int
    #: use backend-specific shortcuts validated against the generic paths in tests
    fast: bool = True
    #: intervals and ``hull`` outputs are convex, so gated sets meeting them pairwise meet inside
    convex_windows: bool = False

    @abstractmethod
    def adjacent(self, x: Vertex, y: Vertex) -> bool: ...

    @abstractmethod
    def edge_label(self, e: OrientedEdge) -> str: ...

    @abstractmethod
    def clique_menu(self, x: Vertex) -> list[Vertex]: ...

    @abstractmethod
    def interval(self, x: Vertex, y: Vertex) -> list[Vertex]: ...

    @abstractmethod
    def distance(self, x: Vertex, y: Vertex) -> int: ...

    @abstractmethod
    def geodesics(self, x: Vertex, y: Vertex, cap: int = DEFAULT_GEODESIC_CAP) -> Iterator[list[Vertex]]: ...

    @abstractmethod
    def base_vertex(self) -> Vertex: ...

    @abstractmethod
    def format_vertex(self, x: Vertex) -> str: ...

    def first_steps(self, x: Vertex, y: Vertex) -> list[Vertex]:
        """Neighbours of x lying on some geodesic from x to y."""
        d = self.distance(x, y)
        return [z for z in self.interval(x, y) if self.distance(x, z) == 1 and self.distance(z, y) == d - 1]

    def canonical_geodesic(self, x: Vertex, y: Vertex) -> list[Vertex]:
        path = [x]
        while path[-1] != y:
            path.append(self.first_steps(path[-1], y)[0])
        return path

    def in_interval(self, z: Vertex, x: Vertex, y: Vertex) -> bool:
        return self.distance(x, z) + self.distance(z, y) == self.distance(x, y)

    def in_clique(self, z: Vertex, e: OrientedEdge) -> bool:
        """Membership in the clique spanned by e: distance at most one to both ends."""
        return self.distance(z, e.tail) <= 1 and self.distance(z, e.head) <= 1

    def proj_clique(self, x: Vertex, e: OrientedEdge) -> Vertex:
        """Gate of x in the clique of e, as the unique point of I(x,p) ∩ I(x,q) ∩ C."""
        other = set(self.interval(x, e.head))
        found = [z for z in self.interval(x, e.tail) if z in other and self.in_clique(z, e)]
        if len(found) != 1:
            raise BackendError(f"clique projection is not unique: {found!r}")
        return found[0]

    def generic_proj_clique(self, x: Vertex, e: OrientedEdge) -> Vertex:
        return QMGraph.proj_clique(self, x, e)

    def hyperplane_key(self, e: OrientedEdge) -> Optional[Hashable]:
        """A canonical name for hyp(e) if the backend knows one."""
        return None

    def carrier_gate(self, v: Vertex, e: OrientedEdge) -> Optional[Vertex]:
        """Gate of v in the carrier of hyp(e) if the backend has a closed form."""
        return None

    def labels_may_touch(self, a: str, b: str) -> bool:
        """False only when hyperplanes with labels a, b can never be in contact."""
        return True

    def labels_may_cross(self, a: str, b: str) -> bool:
        """False only when hyperplanes with labels a, b can never be transverse."""
        return a != b

    def transverse_separated(
        self, p: Vertex, q: Vertex, e: OrientedEdge, f: OrientedEdge, same: SameTest
    ) -> bool:
        """Transversality of hyp(e), hyp(f), both known to separate p from q.

        Generic version: some geodesic from p to q has two consecutive edges
        lying in the two hyperplanes and spanning a square.
        """
        for path in self.geodesics(p, q):
            for i in range(len(path) - 2):
                a, b, c = path[i], path[i + 1], path[i + 2]
                first, second = OrientedEdge(a, b), OrientedEdge(b, c)
                hit = (same(first, e) and same(second, f)) or (same(first, f) and same(second, e))
                if hit and self._spans_square(a, b, c):
                    return True
        return False

    def _spans_square(self, a: Vertex, b: Vertex, c: Vertex) -> bool:
        if self.distance(a, c) != 2:
            return False
        return any(z != b for z in self.interval(a, c) if self.distance(a, z) == 1)


# ----------------------------------------------------------------------------
# graph products


class GraphProductQM(QMGraph):
    def __init__(self, gp: GraphProduct, fast: bool = True, cache_size: int = 1 << 16):
        self.gp = gp
        self.graph = gp.graph
        self.n_cliques = len(gp.graph)
        self.fast = fast
        self._menu_syllables = [gp.generator(v) for v in range(len(gp.graph))]
        self._dist = lru_cache(maxsize=cache_size)(self._distance_uncached)
        self._quot = lru_cache(maxsize=cache_size)(self._quotient_uncached)

    # core algebra, memoised
    def _quotient_uncached(self, x: NormalForm, y: NormalForm) -> NormalForm:
        gp = self.gp
        return gp.mul(gp.inv(x), y)

    def quotient(self, x: NormalForm, y: NormalForm) -> NormalForm:
        """x^-1 y."""
        return self._quot(x, y)

    def _distance_uncached(self, x: NormalForm, y: NormalForm) -> int:
        return len(self._quot(x, y))

    def distance(self, x: NormalForm, y: NormalForm) -> int:
        if x == y:
            return 0
        return self._dist(x, y) if x < y else self._dist(y, x)

    def adjacent(self, x: NormalForm, y: NormalForm) -> bool:
        return x != y and self.distance(x, y) == 1

    def edge_label(self, e: OrientedEdge) -> str:
        w = self.quotient(e.tail, e.head)
        if len(w) != 1:
            raise BackendError("not an edge")
        return self.graph.vertices[w.syllables[0].vertex]

    def edge_label_index(self, e: OrientedEdge) -> int:
        return self.quotient(e.tail, e.head).syllables[0].vertex

    def clique_menu(self, x: NormalForm) -> list[NormalForm]:
        return [self.gp.mul(x, s) for s in self._menu_syllables]

    def interval(self, x: NormalForm, y: NormalForm) -> list[NormalForm]:
        w = self.quotient(x, y)
        p = self.gp.poset(w)
        return [self.gp.mul(x, self.gp.sub_element(w, mask)) for mask in down_sets(p)]

    def geodesics(self, x: NormalForm, y: NormalForm, cap: int = DEFAULT_GEODESIC_CAP) -> Iterator[list[NormalForm]]:
        w = self.quotient(x, y)
        p = self.gp.poset(w)
        count = 0
        for order in linear_extensions(p):
            count += 1
            if count > cap:
                raise GeodesicCapExceeded(f"more than {cap} geodesics")
            path = [x]
            for i in order:
                path.append(self.gp.mul(path[-1], NormalForm((w.syllables[i],))))
            yield path

    def first_steps(self, x: NormalForm, y: NormalForm) -> list[NormalForm]:
        w = self.quotient(x, y)
        adj = self.graph.adj
        out = []
        seen = 0
        # a syllable is minimal iff every earlier syllable commutes with it
        for i, s in enumerate(w.syllables):
            if not seen >> s.vertex & 1:
                blocked = any(not adj[s.vertex] >> w.syllables[j].vertex & 1 for j in range(i))
                if not blocked:
                    out.append(self.gp.mul(x, NormalForm((s,))))
            seen |= 1 << s.vertex
        return out

    def canonical_geodesic(self, x: NormalForm, y: NormalForm) -> list[NormalForm]:
        w = self.quotient(x, y)
        path = [x]
        for s in w.syllables:
            path.append(self.gp.mul(path[-1], NormalForm((s,))))
        return path

    def proj_clique(self, x: NormalForm, e: OrientedEdge) -> NormalForm:
        if not self.fast:
            return self.generic_proj_clique(x, e)
        u = self.edge_label_index(e)
        w = self.quotient(e.tail, x)
        adj_u = self.graph.adj[u]
        for s in w.syllables:
            if s.vertex == u:
                return self.gp.mul(e.tail, NormalForm((s,)))
            if not adj_u >> s.vertex & 1:
                break
        return e.tail

    def hyperplane_key(self, e: OrientedEdge) -> Optional[Hashable]:
        """(label, shortest representative of tail·<star(label)>)."""
        if not self.fast:
            return None
        u = self.edge_label_index(e)
        p = e.tail
        syl = p.syllables
        n = len(syl)
        if n == 0:
            return (u, ())
        star = self.graph.star_mask(u)
        below = self.gp.poset(p).below
        above = [0] * n
        for j in range(n):
            b = below[j]
            while b:
                low = b & -b
                above[low.bit_length() - 1] |= 1 << j
                b ^= low
        stripped = 0
        for j in range(n - 1, -1, -1):
            if star >> syl[j].vertex & 1 and above[j] & ~stripped == 0:
                stripped |= 1 << j
        rep = self.gp.sub_element(p, ((1 << n) - 1) & ~stripped)
        return (u, rep.syllables)

    def carrier_gate(self, v: NormalForm, e: OrientedEdge) -> Optional[NormalForm]:
        # the carrier is the coset tail·<star(u)>; the gate keeps the largest
        # down-set of tail^-1 v spelled by star syllables
        if not self.fast:
            return None
        star = self.graph.star_mask(self.edge_label_index(e))
        w = self.quotient(e.tail, v)
        below = self.gp.poset(w).below
        keep = 0
        for i, s in enumerate(w.syllables):
            if star >> s.vertex & 1 and below[i] & ~keep == 0:
                keep |= 1 << i
        return self.gp.mul(e.tail, self.gp.sub_element(w, keep))

    def labels_may_touch(self, a: str, b: str) -> bool:
        # distinct hyperplanes sharing a label have disjoint carriers
        return a != b

    def labels_may_cross(self, a: str, b: str) -> bool:
        g = self.graph
        return a != b and g.adjacent(g.index[a], g.index[b])

    def transverse_separated(self, p, q, e, f, same) -> bool:
        if not self.fast:
            return super().transverse_separated(p, q, e, f, same)
        # positions of the two hyperplanes along the canonical spelling of p^-1 q;
        # they are consecutive in some spelling iff incomparable in the poset
        w = self.quotient(p, q)
        le, lf = self.edge_label_index(e), self.edge_label_index(f)
        path = self.canonical_geodesic(p, q)
        i = j = None
        for k, s in enumerate(w.syllables):
            edge = OrientedEdge(path[k], path[k + 1])
            if i is None and s.vertex == le and same(edge, e):
                i = k
            elif j is None and s.vertex == lf and same(edge, f):
                j = k
        if i is None or j is None:
            raise BackendError("hyperplane does not cross the chosen geodesic")
        below = self.gp.poset(w).below
        return not (below[j] >> i & 1 or below[i] >> j & 1)

    def base_vertex(self) -> NormalForm:
        return self.gp.identity

    def format_vertex(self, x: NormalForm) -> str:
        return self.gp.format(x)


# ----------------------------------------------------------------------------
# staircase strips


@dataclass(frozen=True)
class StaircaseParams:
    """Strip {f(x) <= y <= f(x) + n} under the staircase f(x) = h*floor(x/w)."""

    n: int
    w: int = 1
    h: int = 1

    def f(self, x: int) -> int:
        return self.h * (x // self.w)

    def contains(self, p: tuple[int, int]) -> bool:
        fx = self.f(p[0])
        return fx <= p[1] <= fx + self.n

    @property
    def period(self) -> tuple[int, int]:
        return (self.w, self.h)


HORIZONTAL = "horizontal"
VERTICAL = "vertical"


class StaircaseQM(QMGraph):
    """Induced subgraph of Z^2 on a staircase strip; a median graph."""

    n_cliques = 4
    convex_windows = True

    def __init__(self, params: StaircaseParams, fast: bool = True, check: bool = True):
        if params.n < 1 or params.w < 1 or params.h < 1:
            raise BackendError("staircase parameters must be positive")
        self.params = params
        self.fast = fast
        if check:
            self._check_window()

    def _check_window(self) -> None:
        """Connectivity, isometric embedding and shift invariance on a window."""
        P = self.params
        if P.h > P.n:
            raise BackendError("consecutive columns do not overlap: the strip is disconnected")
        span = 3 * P.w + 2 * P.n + 4
        pts = [(x, y) for x in range(-span, span + 1) for y in range(P.f(x), P.f(x) + P.n + 1)]
        pset = set(pts)
        centre = [p for p in pts if abs(p[0]) <= P.w + P.n]
        for src in centre[:: max(1, len(centre) // 12)]:
            dist = {src: 0}
            queue = deque([src])
            while queue:
                a = queue.popleft()
                for b in ((a[0] + 1, a[1]), (a[0] - 1, a[1]), (a[0], a[1] + 1), (a[0], a[1] - 1)):
                    if b in pset and b not in dist:
                        dist[b] = dist[a] + 1
                        queue.append(b)
            for t in centre:
                if dist.get(t) != abs(t[0] - src[0]) + abs(t[1] - src[1]):
                    raise BackendError("staircase region is not l1-convex on the check window")
        for p in pts:
            q = (p[0] + P.w, p[1] + P.h)
            if P.contains(p) != P.contains(q):
                raise BackendError("the step shift does not preserve the region")

    def contains(self, p: tuple[int, int]) -> bool:
        return self.params.contains(p)

    def adjacent(self, x, y) -> bool:
        return abs(x[0] - y[0]) + abs(x[1] - y[1]) == 1 and self.contains(x) and self.contains(y)

    def edge_label(self, e: OrientedEdge) -> str:
        return HORIZONTAL if e.tail[1] == e.head[1] else VERTICAL

    def clique_menu(self, x) -> list[tuple[int, int]]:
        a, b = x
        cands = ((a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1))
        return [p for p in cands if self.contains(p)]

    def interval(self, x, y) -> list[tuple[int, int]]:
        (x0, x1), (y0, y1) = sorted((x[0], y[0])), sorted((x[1], y[1]))
        return [(a, b) for a in range(x0, x1 + 1) for b in range(y0, y1 + 1) if self.contains((a, b))]

    def distance(self, x, y) -> int:
        return abs(x[0] - y[0]) + abs(x[1] - y[1])

    def first_steps(self, x, y) -> list[tuple[int, int]]:
        out = []
        if y[0] != x[0]:
            p = (x[0] + (1 if y[0] > x[0] else -1), x[1])
            if self.contains(p):
                out.append(p)
        if y[1] != x[1]:
            p = (x[0], x[1] + (1 if y[1] > x[1] else -1))
            if self.contains(p):
                out.append(p)
        return out

    def geodesics(self, x, y, cap: int = DEFAULT_GEODESIC_CAP) -> Iterator[list[tuple[int, int]]]:
        count = 0
        path = [x]

        def rec():
            nonlocal count
            if path[-1] == y:
                count += 1
                if count > cap:
                    raise GeodesicCapExceeded(f"more than {cap} geodesics")
                yield list(path)
                return
            for p in self.first_steps(path[-1], y):
                path.append(p)
                yield from rec()
                path.pop()

        return rec()

    def proj_clique(self, x, e: OrientedEdge):
        if not self.fast:
            return self.generic_proj_clique(x, e)
        # cliques are edges and the graph is bipartite: the nearer endpoint
        return e.tail if self.distance(x, e.tail) < self.distance(x, e.head) else e.head

    def hyperplane_key(self, e: OrientedEdge) -> Optional[Hashable]:
        # every grid line meets the strip in one interval of parallel edges, so
        # the dual hyperplane is determined by the line
        if not self.fast:
            return None
        if e.tail[1] == e.head[1]:
            return ("V", min(e.tail[0], e.head[0]))
        return ("H", min(e.tail[1], e.head[1]))

    def square_at(self, c: int, r: int) -> bool:
        return all(self.contains(p) for p in ((c, r), (c + 1, r), (c, r + 1), (c + 1, r + 1)))

    def transverse_separated(self, p, q, e, f, same) -> bool:
        if not self.fast:
            return super().transverse_separated(p, q, e, f, same)
        ke, kf = self.hyperplane_key(e), self.hyperplane_key(f)
        if ke[0] == kf[0]:
            return False
        c, r = (ke[1], kf[1]) if ke[0] == "V" else (kf[1], ke[1])
        return self.square_at(c, r)

    def carrier_box(self, key) -> tuple[int, int, int, int]:
        """(x0, x1, y0, y1) with the carrier equal to that box."""
        P = self.params
        kind, c = key
        if kind == "V":
            return c, c + 1, max(P.f(c), P.f(c + 1)), min(P.f(c), P.f(c + 1)) + P.n
        pts = self.carrier_points(key)
        xs = [p[0] for p in pts]
        return min(xs), max(xs), c, c + 1

    def carrier_gate(self, v, e: OrientedEdge):
        # carriers are boxes and the strip embeds isometrically in l1: clamp
        if not self.fast:
            return None
        x0, x1, y0, y1 = self.carrier_box(self.hyperplane_key(e))
        return (min(max(v[0], x0), x1), min(max(v[1], y0), y1))

    def carrier_points(self, key) -> set[tuple[int, int]]:
        """Vertices of the carrier of the hyperplane with the given key."""
        P = self.params
        kind, c = key
        out = set()
        if kind == "V":
            lo = max(P.f(c), P.f(c + 1))
            hi = min(P.f(c), P.f(c + 1)) + P.n
            for y in range(lo, hi + 1):
                out.add((c, y))
                out.add((c + 1, y))
        else:
            # columns containing both rows: f(x) <= c and f(x) + n >= c + 1
            x_lo = P.w * -((P.n - c - 1) // P.h)
            x_hi = P.w * (c // P.h) + P.w - 1
            for x in range(x_lo, x_hi + 1):
                if self.contains((x, c)) and self.contains((x, c + 1)):
                    out.add((x, c))
                    out.add((x, c + 1))
        return out

    def hull(self, points) -> list[tuple[int, int]]:
        """Bounding box of the points intersected with the strip (a convex set)."""
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        return [
            (a, b)
            for a in range(min(xs), max(xs) + 1)
            for b in range(max(min(ys), self.params.f(a)), min(max(ys), self.params.f(a) + self.params.n) + 1)
        ]

    def base_vertex(self):
        return (0, self.params.f(0))

    def format_vertex(self, x) -> str:
        return f"({x[0]},{x[1]})"
