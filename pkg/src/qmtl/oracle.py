"""Slow reference implementations, written only against the raw backend primitives.

Nothing here reuses the hyperplane calculus or the ΩX search of the main path:
projections come from interval intersections, transversality and carrier
distances from geodesic scans, and ΩX distances from an enumeration over
geodesics of X.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .qm import OrientedEdge, QMGraph, StaircaseQM, Vertex
from .words import GraphProduct, NormalForm


class OracleError(RuntimeError):
    pass


# ----- relations from first principles ---------------------------------------


class SlowRelations:
    def __init__(self, qm: QMGraph, geodesic_cap: int = 100_000):
        self.qm = qm
        self.cap = geodesic_cap
        self._proj: dict = {}
        self._adj: dict = {}

    def clique_of(self, e: OrientedEdge, x: Vertex) -> bool:
        d = self.qm.distance
        return d(x, e.tail) <= 1 and d(x, e.head) <= 1

    def project(self, x: Vertex, e: OrientedEdge) -> Vertex:
        hit = self._proj.get((x, e))
        if hit is None:
            hit = self._proj[(x, e)] = self._project(x, e)
        return hit

    def _project(self, x: Vertex, e: OrientedEdge) -> Vertex:
        a = self.qm.interval(x, e.tail)
        b = set(self.qm.interval(x, e.head))
        hits = [z for z in a if z in b and self.clique_of(e, z)]
        if len(hits) != 1:
            raise OracleError(f"projection onto a clique is not unique: {hits!r}")
        return hits[0]

    def same(self, e: OrientedEdge, f: OrientedEdge) -> bool:
        return self.project(e.tail, f) != self.project(e.head, f)

    def in_carrier(self, x: Vertex, e: OrientedEdge) -> bool:
        return any(self.same(OrientedEdge(x, m), e) for m in self.qm.clique_menu(x))

    def transverse(self, e: OrientedEdge, f: OrientedEdge) -> bool:
        if self.same(e, f):
            return False
        qm = self.qm
        for p in e:
            for q in f:
                for path in qm.geodesics(p, q, self.cap):
                    for i in range(len(path) - 2):
                        a, b, c = path[i], path[i + 1], path[i + 2]
                        s, t = OrientedEdge(a, b), OrientedEdge(b, c)
                        if not ((self.same(s, e) and self.same(t, f)) or (self.same(s, f) and self.same(t, e))):
                            continue
                        if qm.distance(a, c) == 2 and any(
                            z != b and qm.distance(a, z) == 1 for z in qm.interval(a, c)
                        ):
                            return True
        return False

    def carrier_distance(self, e: OrientedEdge, f: OrientedEdge) -> int:
        """Minimum over geodesics from e.tail to f.tail of (first in N(f)) - (last in N(e))."""
        best = math.inf
        for path in self.qm.geodesics(e.tail, f.tail, self.cap):
            last = max(i for i, v in enumerate(path) if self.in_carrier(v, e))
            first = min(i for i, v in enumerate(path) if self.in_carrier(v, f))
            best = min(best, max(0, first - last))
        return int(best)

    def contact(self, e: OrientedEdge, f: OrientedEdge) -> bool:
        return self.carrier_distance(e, f) == 0

    def adjacent(self, e: OrientedEdge, f: OrientedEdge, mode: str) -> bool:
        key = (mode, e, f)
        hit = self._adj.get(key)
        if hit is None:
            if self.same(e, f):
                hit = False
            else:
                hit = self.transverse(e, f) if mode == "crossing" else self.contact(e, f)
            self._adj[key] = self._adj[(mode, f, e)] = hit
        return hit


def bfs_reference_distance(
    qm: QMGraph, A: OrientedEdge, B: OrientedEdge, mode: str, rel: Optional[SlowRelations] = None
) -> float:
    """Min over geodesics γ from tail(A) to tail(B) of a BFS through hyperplanes meeting γ."""
    rel = rel or SlowRelations(qm)
    if rel.same(A, B):
        return 0
    best = math.inf
    for path in qm.geodesics(A.tail, B.tail, rel.cap):
        pool: list[OrientedEdge] = []
        for v in path:
            for m in qm.clique_menu(v):
                e = OrientedEdge(v, m)
                if not any(rel.same(e, f) for f in pool):
                    pool.append(e)
        pool = [e for e in pool if not rel.same(e, A) and not rel.same(e, B)] + [B]
        dist = {0: 0}
        nodes = [A] + pool
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in range(1, len(nodes)):
                if j not in dist and rel.adjacent(nodes[i], nodes[j], mode):
                    dist[j] = dist[i] + 1
                    queue.append(j)
        best = min(best, dist.get(len(nodes) - 1, math.inf))
    return best


# ----- staircase: the hyperplane graphs drawn explicitly ---------------------


def staircase_omega_distance(qm: StaircaseQM, a: tuple, b: tuple, mode: str, margin: int = 0) -> float:
    """ΩX distance between grid hyperplanes ('V', c) / ('H', r), built on an explicit window."""
    P = qm.params
    cols = [k[1] for k in (a, b) if k[0] == "V"]
    rows = [k[1] for k in (a, b) if k[0] == "H"]
    # a row r is met by columns with f(x) <= r <= f(x) + n
    for r in rows:
        cols += [P.w * ((r - P.n) // P.h), P.w * (r // P.h + 1)]
    pad = margin or (2 * P.w + 2 * P.n + 4)
    x0, x1 = min(cols) - pad, max(cols) + pad
    region = {(x, y) for x in range(x0, x1 + 2) for y in range(P.f(x), P.f(x) + P.n + 1)}
    carriers: dict[tuple, set] = {}
    for (x, y) in region:
        if (x + 1, y) in region:
            carriers.setdefault(("V", x), set()).update({(x, y), (x + 1, y)})
        if (x, y + 1) in region:
            carriers.setdefault(("H", y), set()).update({(x, y), (x, y + 1)})
    # rows whose carrier is cut by the window edge are dropped
    for key in [k for k in carriers if k[0] == "H"]:
        pts = [p[0] for p in carriers[key]]
        if min(pts) <= x0 or max(pts) >= x1:
            del carriers[key]
    for k in (a, b):
        if k not in carriers:
            raise OracleError(f"window misses hyperplane {k}")
    keys = list(carriers)

    def adj(k1, k2) -> bool:
        if k1 == k2:
            return False
        if mode == "contact":
            return bool(carriers[k1] & carriers[k2])
        if k1[0] == k2[0]:
            return False
        c, r = (k1[1], k2[1]) if k1[0] == "V" else (k2[1], k1[1])
        return all(p in region for p in ((c, r), (c + 1, r), (c, r + 1), (c + 1, r + 1)))

    dist = {a: 0}
    queue = deque([a])
    while queue:
        k = queue.popleft()
        if k == b:
            return dist[k]
        for m in keys:
            if m not in dist and adj(k, m):
                dist[m] = dist[k] + 1
                queue.append(m)
    return math.inf


# ----- translation ratio series ----------------------------------------------


@dataclass
class RatioSeries:
    base: object
    isometry: object
    samples: list[tuple[int, float]] = field(default_factory=list)

    @property
    def slopes(self) -> list[Fraction]:
        return [Fraction(int(d), n) for n, d in self.samples if not math.isinf(d)]

    def value(self, n: int) -> float:
        return dict(self.samples)[n]

    def stabilized_slope(self, lo: int = 8, hi: int = 12) -> Optional[Fraction]:
        """Common d(n)/n over [lo, hi], else the slope of an exact period d(n+q) - d(n)."""
        d = dict(self.samples)
        ns = [n for n in range(lo, hi + 1) if n in d]
        if not ns or any(math.isinf(d[n]) for n in ns):
            return None
        ratios = {Fraction(int(d[n]), n) for n in ns}
        if len(ratios) == 1:
            return ratios.pop()
        for q in range(1, len(ns)):
            pairs = [d[n + q] - d[n] for n in ns if n + q in d]
            # a period needs at least two repeats to count as evidence
            if len(pairs) >= 2 and len(set(pairs)) == 1:
                return Fraction(int(pairs[0]), q)
        return None

    def subadditivity_defect(self) -> float:
        """max over m, n of d(m+n) - d(m) - d(n); should be <= 0."""
        d = dict(self.samples)
        out = -math.inf
        for m in d:
            for n in d:
                if m + n in d:
                    out = max(out, d[m + n] - d[m] - d[n])
        return out


def ratio_estimate(
    distance: Callable[[int], float], base: object, g: object, n_max: int
) -> RatioSeries:
    """Samples n -> d(J, g^n J) for n = 1..n_max from a caller-supplied oracle distance."""
    s = RatioSeries(base, g)
    for n in range(1, n_max + 1):
        s.samples.append((n, distance(n)))
    return s


def graph_product_ratio(
    qm: QMGraph, gp: GraphProduct, g: NormalForm, J: OrientedEdge, n_max: int, mode: str
) -> RatioSeries:
    rel = SlowRelations(qm)

    def dist(n: int) -> float:
        h = gp.power(g, n)
        image = OrientedEdge(gp.mul(h, J.tail), gp.mul(h, J.head))
        return bfs_reference_distance(qm, J, image, mode, rel)

    return ratio_estimate(dist, J, g, n_max)


def staircase_ratio(qm: StaircaseQM, shift: tuple[int, int], n_max: int, mode: str) -> RatioSeries:
    """Series for the vertical hyperplane V_0 under a lattice shift."""
    dx, dy = shift
    if dy * qm.params.w != dx * qm.params.h:
        raise OracleError("the oracle only handles shifts along the staircase")
    return ratio_estimate(
        lambda n: staircase_omega_distance(qm, ("V", 0), ("V", n * dx), mode), ("V", 0), shift, n_max
    )


# ----- intervals and median triangles ----------------------------------------


def downset_count(gp: GraphProduct, g: NormalForm) -> int:
    """Subsets of syllable positions closed under 'earlier and dependent'."""
    syl = g.syllables
    n = len(syl)
    edges = graph_edges(gp)
    dep = [
        (i, j)
        for j in range(n)
        for i in range(j)
        if syl[i].vertex == syl[j].vertex or frozenset((syl[i].vertex, syl[j].vertex)) not in edges
    ]
    count = 0
    for bits in itertools.product((0, 1), repeat=n):
        if all(bits[i] or not bits[j] for i, j in dep):
            count += 1
    return count


def graph_edges(gp: GraphProduct) -> set[frozenset[int]]:
    idx = gp.graph.index
    return {frozenset(idx[v] for v in e) for e in gp.graph.edges}


def median_triangle(qm: QMGraph, a: Vertex, b: Vertex, c: Vertex) -> tuple[Vertex, Vertex, Vertex]:
    d = qm.distance
    A = [x for x in qm.interval(a, b) if x in set(qm.interval(a, c))]
    B = [y for y in qm.interval(b, a) if y in set(qm.interval(b, c))]
    C = [z for z in qm.interval(c, a) if z in set(qm.interval(c, b))]
    best, found = math.inf, []
    for x in A:
        for y in B:
            if d(a, b) != d(a, x) + d(x, y) + d(y, b):
                continue
            for z in C:
                if d(a, c) != d(a, x) + d(x, z) + d(z, c) or d(b, c) != d(b, y) + d(y, z) + d(z, c):
                    continue
                per = d(x, y) + d(y, z) + d(x, z)
                if per < best:
                    best, found = per, [(x, y, z)]
                elif per == best:
                    found.append((x, y, z))
    if len(found) != 1:
        raise OracleError(f"median triangle is not unique: {len(found)} candidates")
    return found[0]


def separates_slow(rel: SlowRelations, e: OrientedEdge, u: Vertex, v: Vertex) -> bool:
    return rel.project(u, e) != rel.project(v, e)


def crossing_hyperplanes(qm: QMGraph, pts: Sequence[Vertex], rel: SlowRelations) -> list[OrientedEdge]:
    """Hyperplanes dual to edges of geodesics between the given points, deduplicated."""
    out: list[OrientedEdge] = []
    for u, v in itertools.combinations(pts, 2):
        path = next(qm.geodesics(u, v))
        for i in range(len(path) - 1):
            e = OrientedEdge(path[i], path[i + 1])
            if not any(rel.same(e, f) for f in out):
                out.append(e)
    return out
