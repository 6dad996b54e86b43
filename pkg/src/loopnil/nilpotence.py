"""Central nilpotence of loops and nilpotence of their multiplication groups."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import VerificationFailed
from .loop import Loop, Subloop, center, compose, quotient, right_translation
from .permgrp import (
    DEFAULT_GROUP_BUDGET,
    PermGroup,
    center_series,
    inn,
    mlt,
    nilpotency_class,
    normalizer,
)


@dataclass(frozen=True)
class CentralSeries:
    subloops: tuple  # of Subloop, Z_0 = {0} first
    terminated: bool

    @property
    def nilpotency_class(self) -> int | None:
        return len(self.subloops) - 1 if self.terminated else None


@dataclass
class NilReport:
    cl_cn: int | None
    cl_m: int | None
    mlt_order: int
    inn_order: int
    normalizer_depth: int | None = None
    checks: dict = field(default_factory=dict)


def upper_central_series(Q: Loop) -> CentralSeries:
    n = Q.order
    series = [Subloop.of([0], n)]
    if n == 1:
        return CentralSeries(tuple(series), True)
    while True:
        Zi = series[-1]
        quo, proj = quotient(Q, Zi)
        zq = set(center(quo))
        nxt = Subloop.of([x for x in range(n) if proj[x] in zq], n)
        if len(nxt) == len(Zi):
            return CentralSeries(tuple(series), False)
        series.append(nxt)
        if len(nxt) == n:
            return CentralSeries(tuple(series), True)


def cl_cn(Q: Loop) -> int | None:
    return upper_central_series(Q).nilpotency_class


def cl_m(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> int | None:
    return nilpotency_class(mlt(Q, budget))


def normalizer_series(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> list[PermGroup]:
    """N_0 = Inn Q, N_{i+1} = normaliser of N_i in Mlt Q, until it stabilises."""
    M = mlt(Q, budget)
    series = [inn(Q, budget)]
    while True:
        nxt = normalizer(M, series[-1])
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def normalizer_description(Q: Loop, Z: Subloop, budget: int = DEFAULT_GROUP_BUDGET) -> frozenset:
    """The set {R_a f : a in Z, f in Inn Q}."""
    I = inn(Q, budget)
    out = set()
    for a in Z:
        Ra = right_translation(Q, a)
        out.update(compose(Ra, f) for f in I.elements)
    return frozenset(out)


def normalizer_depth(series: list[PermGroup], mlt_order: int) -> int | None:
    """Smallest k with N_k = Mlt Q."""
    for k, N in enumerate(series):
        if N.order == mlt_order:
            return k
    return None


def check_normalizer_series(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> dict:
    """Compare the normaliser series with the loop's upper central series.

    Checks, for each i, that N_i = {R_a f : a in Z_i(Q), f in Inn Q} and that
    Z_i(Mlt Q) is contained in N_i; also that the first i with N_i = Mlt Q is
    the central nilpotence class.
    """
    M = mlt(Q, budget)
    Ns = normalizer_series(Q, budget)
    Zs = upper_central_series(Q)
    Zmlt = center_series(M)
    length = max(len(Ns), len(Zs.subloops), len(Zmlt))
    description_ok = []
    contains_center = []
    for i in range(length):
        Ni = Ns[min(i, len(Ns) - 1)]
        Zi = Zs.subloops[min(i, len(Zs.subloops) - 1)]
        description_ok.append(Ni.as_set() == normalizer_description(Q, Zi, budget))
        Zmi = Zmlt[min(i, len(Zmlt) - 1)]
        contains_center.append(Zmi.issubset(Ni))
    depth = normalizer_depth(Ns, M.order)
    return {
        "description": all(description_ok),
        "contains_mlt_center": all(contains_center),
        "depth_matches_cl_cn": depth == Zs.nilpotency_class,
        "normalizer_orders": [N.order for N in Ns],
        "depth": depth,
    }


def nil_report(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET, verify: bool = True) -> NilReport:
    M = mlt(Q, budget)
    I = inn(Q, budget)
    cn = cl_cn(Q)
    cm = nilpotency_class(M)
    rep = NilReport(cl_cn=cn, cl_m=cm, mlt_order=M.order, inn_order=I.order)
    if verify:
        checks = check_normalizer_series(Q, budget)
        rep.normalizer_depth = checks["depth"]
        rep.checks = {k: checks[k] for k in ("description", "contains_mlt_center", "depth_matches_cl_cn")}
        if not all(rep.checks.values()):
            raise VerificationFailed(f"normaliser series cross-check failed: {rep.checks}")
    if cm is not None and (cn is None or cn > cm):
        raise VerificationFailed(f"cl_m = {cm} is below cl_cn = {cn}")
    return rep
