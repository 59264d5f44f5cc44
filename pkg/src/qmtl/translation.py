"""Exact rational translation lengths on the crossing and contact graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .dynamics import (
    AxisData,
    Classification,
    EllipticCertificate,
    axis_data,
    classify_on_omega,
)
from .hypermetric import check_mode, translate
from .hyperplanes import HyperplaneHandle
from .space import UNLIMITED, Budget, Isometry, Space

RADII = ("proof", "statement")


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TranslationCertificate:
    tau: Fraction
    mode: str
    witness_k: int
    witness_hyperplane: Optional[HyperplaneHandle]
    witness_distance: int
    verified_depth: int
    elliptic: bool
    candidate_radius: int = 0
    search_bound: int = 0
    n_candidates: int = 0
    axis: Optional[AxisData] = field(default=None, compare=False)
    classification: Optional[Classification] = field(default=None, compare=False)


def single_shot_k(N: int, M: int) -> int:
    """The factorial power (N^{2M})! of the single-shot search; reporting only."""
    return math.factorial(N ** (2 * M))


def candidate_hyperplanes(
    space: Space, g: Isometry, x, L: int, M: int, radius: str = "proof"
) -> tuple[list[HyperplaneHandle], int]:
    """Hyperplanes in contact with B(x, R) ∩ I(g^-Q x, g^Q x), sorted canonically, and Q."""
    if radius not in RADII:
        raise ValueError(f"radius must be one of {RADII}")
    qm, hs = space.qm, space.hs
    R = 4 * M + 1
    Q = 1 + L * R
    if radius == "statement":
        R = space.N ** (2 * M)
    lo, hi = g.power(-Q).apply(x), g.power(Q).apply(x)
    window = [v for v in qm.interval(lo, hi) if qm.distance(x, v) <= R]
    seen: set[HyperplaneHandle] = set()
    for v in window:
        seen.update(hs.menu_handles(v))
    return sorted(seen, key=lambda h: h.fingerprint), Q


def distinct_orbits(
    space: Space, g: Isometry, handles: list[HyperplaneHandle], reach: int
) -> list[HyperplaneHandle]:
    """Drop every handle equal to g^j of an earlier one, |j| <= reach.

    d(K, g^k K) is constant along the orbit of K, so one representative per
    orbit gives the same ratios; the earliest one keeps the tie-break intact.
    """
    hs = space.hs
    seen: set[HyperplaneHandle] = set()
    out = []
    for K in handles:
        if K in seen:
            continue
        out.append(K)
        for j in range(-reach, reach + 1):
            seen.add(translate(hs, g.power(j), K))
    return out


def _elliptic(
    space: Space, g: Isometry, c: Isometry, mode: str, cls: Classification, jmax: int
) -> TranslationCertificate:
    cert = cls.certificate
    if isinstance(cert, EllipticCertificate):
        K = translate(space.hs, c, cert.hyperplane)
        k = cert.period
        for j in range(1, jmax + 1):
            if translate(space.hs, g.power(j * k), K) != K:
                raise VerificationError("periodic hyperplane is not fixed by the claimed power")
        return TranslationCertificate(Fraction(0), mode, k, K, 0, jmax, True, classification=cls)
    return TranslationCertificate(Fraction(0), mode, 1, None, 0, 0, True, classification=cls)


def translation_length_omega(
    space: Space,
    g: Isometry,
    mode: str,
    jmax: int = 4,
    budget: Budget = UNLIMITED,
    radius: str = "proof",
    fixed_power: bool = False,
) -> TranslationCertificate:
    check_mode(mode)
    space.metric._require(mode)
    metric, hs = space.metric, space.hs
    h, c = space.cyclic_reduce(g)
    cls = classify_on_omega(space, h, mode, fixed_power, budget=budget)
    if not cls.loxodromic:
        return _elliptic(space, g, c, mode, cls, jmax)

    ax = axis_data(space, h, budget=budget)
    M, L = ax.hqc_bound, ax.ss_power
    k_max = space.N ** (2 * M)
    cands, Q = candidate_hyperplanes(space, h, ax.ss_edge.tail, L, M, radius)

    best: Optional[tuple[Fraction, int, HyperplaneHandle, int]] = None
    ks = list(range(1, k_max + 1))
    for K in distinct_orbits(space, h, cands, 2 * Q + 1):
        budget.check("translation length search")
        ds = metric.orbit_distances(K, h, ks, mode)
        for k, r in zip(ks, ds):
            if math.isinf(r):
                raise VerificationError("ΩX is disconnected along the orbit")
            ratio = Fraction(int(r), k)
            if best is None or ratio < best[0] or (ratio == best[0] and k < best[1]):
                best = (ratio, k, K, int(r))
    if best is None:
        raise VerificationError("empty candidate set")
    tau, k, K, r = best

    for j in range(1, jmax + 1):
        budget.check("certificate verification")
        d = metric.displacement_value(K, h, j * k, mode)
        if d != j * r:
            raise VerificationError(
                f"additivity fails at j={j}: d(K, g^{j * k} K) = {d}, expected {j * r}"
            )
    if tau.denominator > k or k > k_max:
        raise VerificationError("denominator exceeds the witness power bound")
    prof = space.profile
    if prof is not None and prof.qm_delta is not None and tau.denominator > prof.denom_bound_gp:
        raise VerificationError("denominator exceeds |V|^(40 clique)")

    K_out = translate(hs, c, K)
    return TranslationCertificate(
        tau, mode, k, K_out, r, jmax, False, Q, k_max, len(cands), ax, cls
    )
