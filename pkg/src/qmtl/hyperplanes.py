"""Hyperplane calculus over a constructible quasi-median graph.

Every relation is decided from clique projections: two edges lie in the same
hyperplane iff the endpoints of the first project to distinct vertices of the
clique of the second, and the sector of a vertex with respect to hyp(e) is
read off its projection onto the clique of e.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Hashable, Optional, Union

from .qm import OrientedEdge, QMGraph, Vertex


class HyperplaneError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HyperplaneHandle:
    """A representative edge; equality goes through the interned ``key``."""

    rep: OrientedEdge
    label: str
    key: Hashable = field(repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HyperplaneHandle) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def fingerprint(self) -> str:
        return repr(self.key)


EdgeLike = Union[OrientedEdge, HyperplaneHandle]


def _edge(h: EdgeLike) -> OrientedEdge:
    return h.rep if isinstance(h, HyperplaneHandle) else h


class Hyperplanes:
    """Memoised hyperplane relations for one backend.

    ``handle`` interns edges: the backend's canonical key (when it has one)
    is used as a hash bucket, and membership in a bucket is always confirmed
    by ``same_hyperplane``.  Without a key the bucket is the edge label.
    """

    def __init__(self, qm: QMGraph):
        self.qm = qm
        self._lock = threading.RLock()
        self._buckets: dict[Hashable, list[HyperplaneHandle]] = {}
        self._edge_handle: dict[OrientedEdge, HyperplaneHandle] = {}
        self._rel: dict[tuple, bool] = {}
        self._minpair: dict[tuple, tuple[Vertex, Vertex, int]] = {}

    # ----- handles ---------------------------------------------------------

    def handle(self, e: EdgeLike) -> HyperplaneHandle:
        if isinstance(e, HyperplaneHandle):
            return e
        with self._lock:
            h = self._edge_handle.get(e)
            if h is not None:
                return h
        qm = self.qm
        if not qm.adjacent(e.tail, e.head):
            raise HyperplaneError(f"not an edge: {e!r}")
        label = qm.edge_label(e)
        key = qm.hyperplane_key(e)
        bucket_key = (label,) if key is None else key
        with self._lock:
            bucket = self._buckets.setdefault(bucket_key, [])
            for cand in bucket:
                if self.same_hyperplane(cand.rep, e):
                    h = cand
                    break
            else:
                h = HyperplaneHandle(e, label, bucket_key if not bucket else (bucket_key, len(bucket)))
                bucket.append(h)
            self._edge_handle[e] = h
        return h

    def menu_handles(self, x: Vertex) -> list[HyperplaneHandle]:
        """The hyperplanes whose carrier contains x, one per clique at x."""
        return [self.handle(OrientedEdge(x, m)) for m in self.qm.clique_menu(x)]

    # ----- relations ---------------------------------------------------------

    def same_hyperplane(self, e: EdgeLike, f: EdgeLike) -> bool:
        e, f = _edge(e), _edge(f)
        qm = self.qm
        if qm.edge_label(e) != qm.edge_label(f):
            return False
        return qm.proj_clique(e.tail, f) != qm.proj_clique(e.head, f)

    def same(self, a: EdgeLike, b: EdgeLike) -> bool:
        return self.handle(a) == self.handle(b)

    def _cached(self, name: str, a: HyperplaneHandle, b: HyperplaneHandle, fn) -> bool:
        k = (name, a.key, b.key) if hash(a.key) <= hash(b.key) else (name, b.key, a.key)
        with self._lock:
            hit = self._rel.get(k)
        if hit is None:
            hit = fn()
            with self._lock:
                self._rel[k] = hit
        return hit

    def _far_endpoint(self, e: OrientedEdge, f: OrientedEdge) -> Vertex:
        """The endpoint of e on the other side of hyp(e) from the edge f."""
        c = self.qm.proj_clique(f.tail, e)
        return e.head if c == e.tail else e.tail

    def transverse(self, a: EdgeLike, b: EdgeLike) -> bool:
        ha, hb = self.handle(a), self.handle(b)
        if ha == hb:
            return False
        if not self.qm.labels_may_cross(ha.label, hb.label):
            return False

        def compute() -> bool:
            e, f = ha.rep, hb.rep
            p = self._far_endpoint(e, f)
            q = self._far_endpoint(f, e)
            return self.qm.transverse_separated(p, q, e, f, self.same_hyperplane)

        return self._cached("x", ha, hb, compute)

    def carrier_contains(self, x: Vertex, e: EdgeLike) -> bool:
        e = _edge(e)
        label = self.qm.edge_label(e)
        for m in self.qm.clique_menu(x):
            g = OrientedEdge(x, m)
            if self.qm.edge_label(g) == label and self.same_hyperplane(g, e):
                return True
        return False

    def carrier_projection(self, v: Vertex, e: EdgeLike) -> Vertex:
        """Gate of v in the carrier of hyp(e).

        Walk from a carrier vertex towards v, staying in the carrier; the
        carrier is gated, so the walk stops exactly at the gate.
        """
        e = _edge(e)
        gate = self.qm.carrier_gate(v, e)
        if gate is not None:
            return gate
        c = e.tail
        while True:
            for s in self.qm.first_steps(c, v):
                if self.carrier_contains(s, e):
                    c = s
                    break
            else:
                return c

    def carrier_min_pair(self, a: EdgeLike, b: EdgeLike) -> tuple[Vertex, Vertex, int]:
        ha, hb = self.handle(a), self.handle(b)
        k = (ha.key, hb.key)
        with self._lock:
            hit = self._minpair.get(k)
        if hit is not None:
            return hit
        e, f = ha.rep, hb.rep
        x2 = self.carrier_projection(e.tail, f)
        x1 = self.carrier_projection(x2, e)
        out = (x1, x2, self.qm.distance(x1, x2))
        with self._lock:
            self._minpair[k] = out
        return out

    def in_contact(self, a: EdgeLike, b: EdgeLike) -> bool:
        ha, hb = self.handle(a), self.handle(b)
        if ha == hb:
            raise HyperplaneError("contact is only defined for distinct hyperplanes")
        if not self.qm.labels_may_touch(ha.label, hb.label):
            return False
        return self._cached("c", ha, hb, lambda: self.carrier_min_pair(ha, hb)[2] == 0)

    def tangent(self, a: EdgeLike, b: EdgeLike) -> bool:
        return self.in_contact(a, b) and not self.transverse(a, b)

    def _common_transverse_at(self, x: Vertex, ha: HyperplaneHandle, hb: HyperplaneHandle) -> bool:
        for h in self.menu_handles(x):
            if h != ha and h != hb and self.transverse(h, ha) and self.transverse(h, hb):
                return True
        return False

    def no_common_transverse(self, a: EdgeLike, b: EdgeLike) -> bool:
        """Distinct, non-transverse, and no hyperplane transverse to both."""
        ha, hb = self.handle(a), self.handle(b)
        if ha == hb or self.transverse(ha, hb):
            return False

        def compute() -> bool:
            x, _, _ = self.carrier_min_pair(ha, hb)
            return not self._common_transverse_at(x, ha, hb)

        return self._cached("n", ha, hb, compute)

    def strongly_separated(self, a: EdgeLike, b: EdgeLike) -> bool:
        """Disjoint carriers and no hyperplane transverse to both."""
        ha, hb = self.handle(a), self.handle(b)
        if ha == hb:
            raise HyperplaneError("strong separation needs distinct hyperplanes")
        if self.transverse(ha, hb) or self.in_contact(ha, hb):
            return False
        return self.no_common_transverse(ha, hb)

    # ----- separators ------------------------------------------------------

    def separators(self, x: Vertex, y: Vertex) -> list[HyperplaneHandle]:
        path = self.qm.canonical_geodesic(x, y)
        return [self.handle(OrientedEdge(path[i], path[i + 1])) for i in range(len(path) - 1)]

    def ss_count(self, a: EdgeLike, b: EdgeLike) -> int:
        """Longest chain of separating hyperplanes with no common transverse pair.

        Separators are ordered along one geodesic between the minimising
        pair; for such an ordered chain the relation is transitive, so a
        longest-path recursion over ordered pairs suffices.
        """
        ha, hb = self.handle(a), self.handle(b)
        if ha == hb:
            return 0
        x, y, d = self.carrier_min_pair(ha, hb)
        seps = self.separators(x, y)
        best = [1] * len(seps)
        for j in range(len(seps)):
            for i in range(j):
                if best[i] + 1 > best[j] and self.no_common_transverse(seps[i], seps[j]):
                    best[j] = best[i] + 1
        return max(best, default=0)

    def omega_adjacent(self, a: EdgeLike, b: EdgeLike, mode: str) -> bool:
        if mode == "crossing":
            return self.transverse(a, b)
        if mode == "contact":
            return self.in_contact(a, b)
        raise HyperplaneError(f"unknown mode {mode!r}")

    def sector_side(self, v: Vertex, e: EdgeLike) -> Vertex:
        """The vertex of the clique of e sharing v's sector of hyp(e)."""
        return self.qm.proj_clique(v, _edge(e))

    def separates(self, e: EdgeLike, u: Vertex, v: Vertex) -> bool:
        e = _edge(e)
        return self.qm.proj_clique(u, e) != self.qm.proj_clique(v, e)


def first_handle(hs: Hyperplanes, x: Vertex) -> Optional[HyperplaneHandle]:
    menu = hs.qm.clique_menu(x)
    return hs.handle(OrientedEdge(x, menu[0])) if menu else None
