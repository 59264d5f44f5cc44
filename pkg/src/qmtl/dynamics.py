"""Skewering, axes in X, and elliptic/loxodromic classification on ΩX."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .hypermetric import check_mode, translate
from .hyperplanes import HyperplaneHandle
from .qm import OrientedEdge, Vertex
from .space import UNLIMITED, Budget, BudgetExceeded, Isometry, Space

DEFAULT_SEARCH_DEPTH = 24
DEFAULT_HQC_NODES = 200_000


class ClassificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LoxodromicCertificate:
    """g^power skewers ``edge`` and hyp(edge), g^power hyp(edge) are strongly separated."""

    edge: OrientedEdge
    power: int


@dataclass(frozen=True)
class EllipticCertificate:
    """g^period fixes ``hyperplane`` (a vertex of ΩX)."""

    hyperplane: HyperplaneHandle
    period: int


@dataclass(frozen=True)
class Classification:
    loxodromic: bool
    certified: bool
    method: str
    certificate: object = None
    displacements: tuple[float, ...] = ()

    @property
    def verdict(self) -> str:
        return "loxodromic" if self.loxodromic else "elliptic"


@dataclass(frozen=True)
class AxisData:
    base: Vertex
    power: int
    tau_X: Fraction
    ss_edge: OrientedEdge
    ss_power: int
    hqc_bound: int
    hqc_exact: bool


def skewers(space: Space, g: Isometry, e: OrientedEdge) -> bool:
    """gS ⊊ S for the sector S of hyp(e) containing e.head.

    With hyp(ge) distinct from and not transverse to hyp(e), this holds
    exactly when the clique of ge lies in S and e.head lies outside gS.
    """
    qm, hs = space.qm, space.hs
    ge = g.apply_edge(e)
    a, b = hs.handle(e), hs.handle(ge)
    if a == b or hs.transverse(a, b):
        return False
    in_S = qm.proj_clique(ge.tail, e) == e.head and qm.proj_clique(ge.head, e) == e.head
    return in_S and qm.proj_clique(e.head, ge) != ge.head


def _period(space: Space, h: Isometry) -> list[OrientedEdge]:
    """Edges of [o, h o]; for cyclically reduced h their translates tile an axis."""
    path = space.qm.canonical_geodesic(space.qm.base_vertex(), h.apply(space.qm.base_vertex()))
    return [OrientedEdge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def _lox_certificate(
    space: Space, h: Isometry, edges: Sequence[OrientedEdge], r: int, budget: Budget
) -> Optional[LoxodromicCertificate]:
    """An edge skewered by h^r whose hyperplane is strongly separated from its h^r image."""
    hs = space.hs
    hr = h.power(r)
    for e in edges:
        budget.check("loxodromic certificate search")
        if skewers(space, hr, e) and hs.strongly_separated(e, hr.apply_edge(e)):
            return LoxodromicCertificate(e, r)
    return None


def _fixed_hyperplane(
    space: Space, h: Isometry, cands: Sequence[HyperplaneHandle], p: int
) -> Optional[EllipticCertificate]:
    hp = h.power(p)
    for H in cands:
        if translate(space.hs, hp, H) == H:
            return EllipticCertificate(H, p)
    return None


def classify_on_omega(
    space: Space,
    g: Isometry,
    mode: str,
    fixed_power: bool = False,
    depth: int = DEFAULT_SEARCH_DEPTH,
    budget: Budget = UNLIMITED,
) -> Classification:
    """Decide whether g acts elliptically or loxodromically on ΩX.

    Certified mode writes g = c h c^-1 with h cyclically reduced and, for
    m = 1, 2, ..., tries two semi-decisions on the first period of h: an
    edge skewered by h^m with a strongly separated image (loxodromic), and a
    hyperplane near o fixed by h^m (elliptic).  Certificates are carried back
    by c.  When neither appears by ``depth``, the orbit displacements
    d(o, h^m o) decide: a plateau is reported as elliptic, uncertified.
    """
    check_mode(mode)
    space.metric._require(mode)
    if fixed_power:
        return _classify_fixed_power(space, g, mode, budget)
    if g.is_identity:
        return Classification(False, True, "identity", EllipticCertificate(space.base_handle(), 1))
    hs = space.hs
    h, c = space.cyclic_reduce(g)
    edges = _period(space, h)
    cands = list(dict.fromkeys(H for e in edges for v in (e.tail, e.head) for H in hs.menu_handles(v)))
    for m in range(1, depth + 1):
        budget.check("classification")
        lox = _lox_certificate(space, h, edges, m, budget)
        if lox is not None:
            return Classification(
                True, True, "strongly separated skewer", LoxodromicCertificate(c.apply_edge(lox.edge), m)
            )
        ell = _fixed_hyperplane(space, h, cands, m)
        if ell is not None:
            return Classification(
                False, True, "periodic hyperplane", EllipticCertificate(translate(hs, c, ell.hyperplane), m)
            )
    o = space.base_handle()
    ds = tuple(space.metric.orbit_distances(o, h, range(1, depth + 1), mode))
    half = depth // 2
    if max(ds[half:]) <= max(ds[:half]):
        return Classification(False, False, "bounded displacement", None, ds)
    raise BudgetExceeded(
        f"no certificate within depth {depth} and displacements still grow: {list(ds)}"
    )


def _classify_fixed_power(space: Space, g: Isometry, mode: str, budget: Budget) -> Classification:
    """Single test at k = ceil(17 delta): some y on a geodesic [o, g^k o] of ΩX
    with d(y, g^k y) <= 32 delta means elliptic.  Never certified."""
    delta = space.delta(mode)
    k = math.ceil(17 * delta)
    o = space.base_handle()
    gk = g.power(k)
    chain = space.metric.distance(o, translate(space.hs, gk, o), mode).witness_chain
    ds = []
    # d(y, g^k y) is constant on <g>-orbits, and the chain meets few of them
    seen: dict[HyperplaneHandle, float] = {}
    for y in chain:
        budget.check("fixed-power classification")
        d = seen.get(y)
        if d is None:
            d = space.metric.displacement_value(y, g, k, mode)
            for j in range(-k, k + 1):
                seen.setdefault(translate(space.hs, g.power(j), y), d)
        ds.append(d)
        if d <= 32 * delta:
            return Classification(False, False, f"fixed-power test k={k}", y, tuple(ds))
    return Classification(True, False, f"fixed-power test k={k}", None, tuple(ds))


def is_strongly_contracting(
    space: Space, g: Isometry, mode: str, fixed_power: bool = False, budget: Budget = UNLIMITED
) -> bool:
    h, _ = space.cyclic_reduce(g)
    return classify_on_omega(space, h, mode, fixed_power, budget=budget).loxodromic


def find_axis_vertex(
    space: Space, g: Isometry, depth: int = 4 * DEFAULT_SEARCH_DEPTH, budget: Budget = UNLIMITED
) -> tuple[Vertex, int]:
    """(x, n): x lies on an axis of g^n for cyclically reduced g."""
    hs = space.hs
    edges = _period(space, g)
    for k in range(1, depth + 1):
        gk = g.power(k)
        for e in edges:
            budget.check("axis search")
            ge = gk.apply_edge(e)
            if skewers(space, gk, e) and hs.strongly_separated(e, ge):
                x, _, _ = hs.carrier_min_pair(e, ge)
                return x, 2 * k
    raise BudgetExceeded(f"no skewered strongly separated pair for powers up to {depth}")


def axis_data(
    space: Space,
    g: Isometry,
    hqc_nodes: int = DEFAULT_HQC_NODES,
    depth: int = 4 * DEFAULT_SEARCH_DEPTH,
    budget: Budget = UNLIMITED,
) -> AxisData:
    qm, hs = space.qm, space.hs
    x, n = find_axis_vertex(space, g, depth, budget)
    gn = g.power(n)
    xn = gn.apply(x)
    tau_X = Fraction(qm.distance(x, xn), n)
    path = qm.canonical_geodesic(x, xn)
    found = None
    for k in range(1, depth + 1):
        gkn = g.power(k * n)
        for i in range(len(path) - 1):
            budget.check("strong separation search")
            e = OrientedEdge(path[i], path[i + 1])
            if hs.strongly_separated(e, gkn.apply_edge(e)):
                found = (e, k * n)
                break
        if found:
            break
    if found is None:
        raise BudgetExceeded("no strongly separated translate along the axis")
    e, L = found
    xh = e.tail
    seps = hs.separators(g.power(-3 * L).apply(xh), g.power(3 * L).apply(xh))
    try:
        M, exact = hqc_exact(space, seps, hqc_nodes, budget), True
    except BudgetExceeded:
        M, exact = math.ceil(6 * L * tau_X), False
    return AxisData(x, n, tau_X, e, L, M, exact)


def hqc_exact(
    space: Space, handles: Sequence[HyperplaneHandle], max_nodes: int = DEFAULT_HQC_NODES, budget: Budget = UNLIMITED
) -> int:
    """Largest n with two disjoint n-families, every cross pair transverse.

    Depth-first over the first family H in index order, carrying the set of
    hyperplanes transverse to all of H; the second family is any n of them.
    """
    hs = space.hs
    hs_list = list(dict.fromkeys(handles))
    m = len(hs_list)
    nbr = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if hs.transverse(hs_list[i], hs_list[j]):
                nbr[i] |= 1 << j
                nbr[j] |= 1 << i
    best = 0
    nodes = 0
    order = [i for i in range(m) if nbr[i]]

    def rec(pos: int, size: int, common: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"HQC search exceeded {max_nodes} nodes")
        if nodes % 1024 == 0:
            budget.check("HQC search")
        c = bin(common).count("1")
        best = max(best, min(size, c))
        for t in range(pos, len(order)):
            if min(size + len(order) - t, c) <= best:
                return
            i = order[t]
            nc = common & nbr[i]
            if bin(nc).count("1") > best:
                rec(t + 1, size + 1, nc)

    rec(0, 0, (1 << m) - 1)
    return best
