"""Distances in the crossing graph and the contact graph of a quasi-median graph.

The workhorse restricts a breadth-first search to hyperplanes whose carrier
meets the interval between the two closest carrier points.  Some geodesic of
the hyperplane graph has all its carriers meeting a geodesic of X between any
two carrier points, so nothing outside that window is ever needed.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol, Sequence

from .hyperplanes import HyperplaneHandle, Hyperplanes
from .qm import OrientedEdge, Vertex

MODES = ("crossing", "contact")


class OmegaError(ValueError):
    pass


class IsometryLike(Protocol):
    def apply(self, x: Vertex) -> Vertex: ...

    def power(self, k: int) -> "IsometryLike": ...


@dataclass(frozen=True)
class OmegaDistance:
    value: float
    witness_chain: tuple[HyperplaneHandle, ...] = field(default=(), compare=False)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise OmegaError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def translate(hs: Hyperplanes, g: IsometryLike, h: HyperplaneHandle) -> HyperplaneHandle:
    e = h.rep
    return hs.handle(OrientedEdge(g.apply(e.tail), g.apply(e.head)))


class OmegaMetric:
    """Distance oracle for one backend; memoises values per (mode, pair)."""

    def __init__(self, hs: Hyperplanes, crossing_ok: bool = True):
        self.hs = hs
        self.qm = hs.qm
        self.crossing_ok = crossing_ok
        self._lock = threading.RLock()
        self._values: dict[tuple[str, str, str], float] = {}
        self.persisted: dict[tuple[str, str, str], float] = {}

    def _require(self, mode: str) -> None:
        check_mode(mode)
        if mode == "crossing" and not self.crossing_ok:
            raise OmegaError("the crossing graph is disconnected for this space (cut vertex)")

    def _key(self, mode: str, a: HyperplaneHandle, b: HyperplaneHandle) -> tuple[str, str, str]:
        fa, fb = a.fingerprint, b.fingerprint
        return (mode, fa, fb) if fa <= fb else (mode, fb, fa)

    def window_hyperplanes(self, vertices: Iterable[Vertex]) -> list[HyperplaneHandle]:
        """Hyperplanes whose carrier meets the given vertex set, deduplicated in order."""
        seen: set[HyperplaneHandle] = set()
        out = []
        for v in vertices:
            for h in self.hs.menu_handles(v):
                if h not in seen:
                    seen.add(h)
                    out.append(h)
        return out

    def distance(self, a: HyperplaneHandle, b: HyperplaneHandle, mode: str) -> OmegaDistance:
        self._require(mode)
        hs = self.hs
        a, b = hs.handle(a), hs.handle(b)
        if a == b:
            return OmegaDistance(0, (a,))
        p, q, _ = hs.carrier_min_pair(a, b)
        parent = self._search(a, {b}, self.qm.interval(p, q), mode)
        if b not in parent:
            result = OmegaDistance(math.inf, ())
        else:
            chain = [b]
            while parent[chain[-1]] is not None:
                chain.append(parent[chain[-1]])
            chain.reverse()
            result = OmegaDistance(len(chain) - 1, tuple(chain))
        with self._lock:
            self._values[self._key(mode, a, b)] = result.value
        return result

    def value(self, a: HyperplaneHandle, b: HyperplaneHandle, mode: str) -> float:
        """Distance only, served from the memo or the persisted cache when possible."""
        self._require(mode)
        a, b = self.hs.handle(a), self.hs.handle(b)
        if a == b:
            return 0
        k = self._key(mode, a, b)
        with self._lock:
            hit = self._values.get(k)
            if hit is None:
                hit = self.persisted.get(k)
        if hit is not None:
            return hit
        return self.distance(a, b, mode).value

    def _search(
        self, a: HyperplaneHandle, targets: set[HyperplaneHandle], window: Sequence[Vertex], mode: str
    ) -> dict[HyperplaneHandle, Optional[HyperplaneHandle]]:
        """BFS parents from a inside the hyperplanes meeting ``window``.

        Stops once every target is reached.  On backends whose windows are
        convex, neighbours are generated from carrier vertices inside the
        window (two adjacent hyperplanes meeting a convex window meet each
        other inside it); otherwise every pool member is tested.
        """
        hs = self.hs
        parent: dict[HyperplaneHandle, Optional[HyperplaneHandle]] = {a: None}
        remaining = set(targets) - {a}
        if not remaining:
            return parent
        queue = deque([a])
        if self.qm.convex_windows:
            menus = {v: hs.menu_handles(v) for v in window}
            incidence: dict[HyperplaneHandle, list[Vertex]] = {}
            for v, hv in menus.items():
                for h in hv:
                    incidence.setdefault(h, []).append(v)
            while queue and remaining:
                cur = queue.popleft()
                for v in incidence.get(cur, ()):
                    for h in menus[v]:
                        if h not in parent and hs.omega_adjacent(cur, h, mode):
                            parent[h] = cur
                            remaining.discard(h)
                            queue.append(h)
            return parent
        unvisited = [h for h in self.window_hyperplanes(window) if h != a]
        for t in targets:
            if t not in parent and t not in unvisited:
                unvisited.append(t)
        while queue and remaining:
            cur = queue.popleft()
            rest = []
            for h in unvisited:
                if hs.omega_adjacent(cur, h, mode):
                    parent[h] = cur
                    remaining.discard(h)
                    queue.append(h)
                else:
                    rest.append(h)
            unvisited = rest
        return parent

    def orbit_distances(
        self, a: HyperplaneHandle, g: IsometryLike, ks: Sequence[int], mode: str
    ) -> list[float]:
        """d(a, g^k a) for every k in ks.

        Backends with convex windows answer all of them with one search over
        the hull of the carrier minimising pairs; otherwise one search per k.
        """
        self._require(mode)
        hs = self.hs
        a = hs.handle(a)
        images = [translate(hs, g.power(k), a) for k in ks]
        if not self.qm.convex_windows:
            return [self.value(a, b, mode) for b in images]
        pts = []
        for b in images:
            if b != a:
                p, q, _ = hs.carrier_min_pair(a, b)
                pts += [p, q]
        if not pts:
            return [0] * len(images)
        parent = self._search(a, set(images), self.qm.hull(pts), mode)
        depth: dict[HyperplaneHandle, int] = {a: 0}

        def level(h: HyperplaneHandle) -> int:
            chain = []
            while h not in depth:
                chain.append(h)
                h = parent[h]
            n = depth[h]
            for c in reversed(chain):
                n += 1
                depth[c] = n
            return n

        out = [level(b) if b in parent else math.inf for b in images]
        with self._lock:
            for b, v in zip(images, out):
                if b != a:
                    self._values.setdefault(self._key(mode, a, b), v)
        return out

    def displacement(self, a: HyperplaneHandle, g: IsometryLike, k: int, mode: str) -> OmegaDistance:
        return self.distance(a, translate(self.hs, g.power(k), a), mode)

    def displacement_value(self, a: HyperplaneHandle, g: IsometryLike, k: int, mode: str) -> float:
        return self.value(a, translate(self.hs, g.power(k), a), mode)

    def export(self) -> dict[tuple[str, str, str], float]:
        with self._lock:
            out = dict(self.persisted)
            out.update(self._values)
        return out


def omega_distance(metric: OmegaMetric, a: HyperplaneHandle, b: HyperplaneHandle, mode: str) -> OmegaDistance:
    return metric.distance(a, b, mode)


def omega_displacement(
    metric: OmegaMetric, a: HyperplaneHandle, g: IsometryLike, k: int, mode: str
) -> OmegaDistance:
    return metric.displacement(a, g, k, mode)
