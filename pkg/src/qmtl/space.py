"""A backend bundled with its hyperplane calculus, ΩX metric and isometries."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .defgraph import HyperbolicityProfile, crossing_connected, hyperbolicity_profile
from .hypermetric import OmegaMetric, check_mode
from .hyperplanes import HyperplaneHandle, Hyperplanes, first_handle
from .qm import GraphProductQM, OrientedEdge, StaircaseParams, StaircaseQM, Vertex
from .words import GraphProduct, NormalForm


class BudgetExceeded(RuntimeError):
    pass


class Budget:
    """Wall-clock deadline shared by the long-running searches."""

    def __init__(self, seconds: Optional[float] = None):
        self.seconds = seconds
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def check(self, what: str = "search") -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"{what} exceeded the {self.seconds:g}s budget")


UNLIMITED = Budget(None)


@dataclass(frozen=True)
class LeftMult:
    g: NormalForm
    gp: GraphProduct = field(compare=False, repr=False)

    def apply(self, x: NormalForm) -> NormalForm:
        return self.gp.mul(self.g, x)

    def apply_edge(self, e: OrientedEdge) -> OrientedEdge:
        return OrientedEdge(self.apply(e.tail), self.apply(e.head))

    def power(self, k: int) -> "LeftMult":
        return LeftMult(self.gp.power(self.g, k), self.gp)

    def inverse(self) -> "LeftMult":
        return LeftMult(self.gp.inv(self.g), self.gp)

    @property
    def is_identity(self) -> bool:
        return not self.g.syllables

    def describe(self) -> str:
        return self.gp.format(self.g)


@dataclass(frozen=True)
class Shift:
    dx: int
    dy: int

    def apply(self, x: tuple[int, int]) -> tuple[int, int]:
        return (x[0] + self.dx, x[1] + self.dy)

    def apply_edge(self, e: OrientedEdge) -> OrientedEdge:
        return OrientedEdge(self.apply(e.tail), self.apply(e.head))

    def power(self, k: int) -> "Shift":
        return Shift(self.dx * k, self.dy * k)

    def inverse(self) -> "Shift":
        return Shift(-self.dx, -self.dy)

    @property
    def is_identity(self) -> bool:
        return self.dx == 0 and self.dy == 0

    def describe(self) -> str:
        return f"shift({self.dx},{self.dy})"


Isometry = Union[LeftMult, Shift]


def apply(g: Isometry, x: Vertex) -> Vertex:
    return g.apply(x)


def apply_edge(g: Isometry, e: OrientedEdge) -> OrientedEdge:
    return g.apply_edge(e)


class Space:
    """Everything the dynamics needs about one constructible quasi-median graph."""

    def __init__(
        self,
        qm: Union[GraphProductQM, StaircaseQM],
        profile: Optional[HyperbolicityProfile] = None,
        crossing_ok: bool = True,
    ):
        self.qm = qm
        self.hs = Hyperplanes(qm)
        self.metric = OmegaMetric(self.hs, crossing_ok)
        self.profile = profile
        self.N = qm.n_cliques

    @classmethod
    def from_graph_product(cls, gp: GraphProduct, fast: bool = True) -> "Space":
        return cls(GraphProductQM(gp, fast=fast), hyperbolicity_profile(gp.graph), crossing_connected(gp.graph))

    @classmethod
    def from_staircase(cls, params: StaircaseParams, fast: bool = True) -> "Space":
        qm = StaircaseQM(params, fast=fast)
        return cls(qm, None, staircase_crossing_connected(qm))

    @property
    def gp(self) -> Optional[GraphProduct]:
        return self.qm.gp if isinstance(self.qm, GraphProductQM) else None

    @property
    def is_staircase(self) -> bool:
        return isinstance(self.qm, StaircaseQM)

    def delta(self, mode: str) -> Fraction:
        check_mode(mode)
        return Fraction(3) if mode == "contact" else Fraction(3) + Fraction(self.N, 2)

    def base_handle(self) -> HyperplaneHandle:
        h = first_handle(self.hs, self.qm.base_vertex())
        if h is None:
            raise ValueError("the base vertex has no incident edge")
        return h

    def isometry(self, spec: Union[str, NormalForm, tuple[int, int]]) -> Isometry:
        if self.is_staircase:
            if isinstance(spec, str):
                spec = parse_shift(spec)
            s = Shift(*spec)
            check_shift(self.qm, s)
            return s
        gp = self.gp
        if isinstance(spec, str):
            spec = gp.parse(spec)
        return LeftMult(spec, gp)

    def cyclic_reduce(self, g: Isometry) -> tuple[Isometry, Isometry]:
        """(h, c) with g = c h c^-1; a no-op for lattice shifts."""
        if isinstance(g, LeftMult):
            h, c = g.gp.cyclic_reduce(g.g)
            return LeftMult(h, g.gp), LeftMult(c, g.gp)
        return g, Shift(0, 0)

    def format_edge(self, e: OrientedEdge) -> str:
        return f"({self.qm.format_vertex(e.tail)} -> {self.qm.format_vertex(e.head)})"

    def format_handle(self, h: HyperplaneHandle) -> str:
        return f"hyp{self.format_edge(h.rep)}[{h.label}]"


def parse_shift(text: str) -> tuple[int, int]:
    """'shift(1,1)', '1,1' or '1 1'."""
    s = text.strip()
    if s.lower().startswith("shift"):
        s = s[5:]
    s = s.strip("() ").replace(",", " ")
    parts = s.split()
    if len(parts) != 2:
        raise ValueError(f"cannot parse a shift from {text!r}")
    return int(parts[0]), int(parts[1])


def check_shift(qm: StaircaseQM, s: Shift) -> None:
    P = qm.params
    span = 4 * P.w + 2 * P.n + abs(s.dx) + 4
    for x in range(-span, span + 1):
        for y in range(P.f(x) - 2, P.f(x) + P.n + 3):
            if qm.contains((x, y)) != qm.contains(s.apply((x, y))):
                raise ValueError(f"{s.describe()} does not preserve the staircase region")


def staircase_crossing_connected(qm: StaircaseQM) -> bool:
    """Connectivity of the crossing graph, read off a window of a few periods.

    The crossing graph is invariant under the step shift, so it is connected
    iff the hyperplanes of one period all reach each other and reach their
    own translates.
    """
    P = qm.params
    cols = range(-4 * P.w - 2 * P.n, 6 * P.w + 2 * P.n)
    keys = [("V", c) for c in cols]
    rows = {r for c in cols for r in range(P.f(c) - 1, P.f(c) + P.n + 1)}
    keys += [("H", r) for r in sorted(rows) if qm.carrier_points(("H", r))]
    keys = [k for k in keys if k[0] == "H" or qm.carrier_points(k)]
    adj: dict[tuple, list[tuple]] = {k: [] for k in keys}
    for kv in keys:
        if kv[0] != "V":
            continue
        for kh in keys:
            if kh[0] == "H" and qm.square_at(kv[1], kh[1]):
                adj[kv].append(kh)
                adj[kh].append(kv)
    start = ("V", 0)
    seen = {start}
    stack = [start]
    while stack:
        k = stack.pop()
        for m in adj[k]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    need = [("V", c) for c in range(0, P.w + 1)]
    need += [("H", r) for r in range(P.f(0), P.f(0) + P.h + 1) if qm.carrier_points(("H", r))]
    return all(k in seen for k in need)
