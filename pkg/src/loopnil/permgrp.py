"""Permutation groups by full element enumeration.

Groups met here are multiplication groups of loops of order at most a few
dozen, so every group is stored with its complete, sorted element list.
Centres, normalisers and Sylow subgroups then reduce to filters over that
list.  Commutators follow ``[g, h] = g^-1 h^-1 g h``.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InnerMismatch, NotNilpotent, NotSubgroup
from .loop import Loop, Perm, distinct_inner_generators, identity_perm, invert, left_translation, right_translation

DEFAULT_GROUP_BUDGET = 5_000_000


def _mul(f: Perm, g: Perm) -> Perm:
    return tuple(map(f.__getitem__, g))


def commutator(g: Perm, h: Perm) -> Perm:
    return _mul(invert(g), _mul(invert(h), _mul(g, h)))


def conjugate(g: Perm, s: Perm) -> Perm:
    """g s g^-1."""
    return _mul(g, _mul(s, invert(g)))


def element_order(g: Perm) -> int:
    seen = [False] * len(g)
    order = 1
    for start in range(len(g)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = g[x]
            length += 1
        order = order * length // gcd(order, length)
    return order


class PermGroup:
    """A permutation group together with its full element set."""

    def __init__(self, degree: int, gens: Sequence[Perm], elements: Iterable[Perm]):
        self.degree = degree
        self.gens = tuple(gens)
        self.elements = tuple(sorted(elements))
        self._set = frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, PermGroup) and self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def as_set(self) -> frozenset:
        return self._set

    @property
    def identity(self) -> Perm:
        return identity_perm(self.degree)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        return all(_mul(a, b) == _mul(b, a) for a in self.gens for b in self.gens)

    def issubset(self, other: "PermGroup") -> bool:
        return self._set <= other._set


def _closure(degree: int, gens: Sequence[Perm], start: Iterable[Perm] = (), budget: int = DEFAULT_GROUP_BUDGET):
    """Elements of <start, gens> by BFS, assuming ``start`` is already a group."""
    elems = set(start) or {identity_perm(degree)}
    frontier = list(elems)
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = _mul(s, g)
                if h not in elems:
                    elems.add(h)
                    new.append(h)
        if len(elems) > budget:
            raise BudgetExceeded(f"group exceeds budget of {budget} elements", partial=len(elems))
        frontier = new
    return elems


def generate(gens: Sequence[Perm], budget: int = DEFAULT_GROUP_BUDGET, degree: int | None = None) -> PermGroup:
    """Enumerate the group generated by ``gens``."""
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators have different degrees")
    ident = identity_perm(degree)
    uniq = []
    for g in gens:
        if g != ident and g not in uniq:
            uniq.append(g)
    elems = _closure(degree, uniq, budget=budget)
    return PermGroup(degree, uniq, elems)


def _gens_for(degree: int, elements: Iterable[Perm]) -> list[Perm]:
    """Greedy small generating set for a known subgroup."""
    target = sorted(elements)
    gens = []
    have = {identity_perm(degree)}
    for g in target:
        if g not in have:
            gens.append(g)
            have = _closure(degree, gens, start=have)
    return gens


def subgroup(G: PermGroup, elements: Iterable[Perm]) -> PermGroup:
    """Wrap a subset of ``G`` known (or claimed) to be a subgroup; verified."""
    elements = set(elements)
    if not elements <= G.as_set():
        raise NotSubgroup("elements are not contained in the parent group")
    gens = _gens_for(G.degree, elements)
    closed = _closure(G.degree, gens)
    if closed != elements:
        raise NotSubgroup("element set is not closed under composition")
    return PermGroup(G.degree, gens, elements)


def normal_closure(G: PermGroup, seeds: Iterable[Perm]) -> PermGroup:
    """Smallest normal subgroup of ``G`` containing ``seeds``."""
    degree = G.degree
    have = {identity_perm(degree)}
    gens: list[Perm] = []
    queue = list(seeds)
    while queue:
        x = queue.pop()
        if x in have:
            continue
        gens.append(x)
        have = _closure(degree, gens, start=have)
        queue.extend(conjugate(s, x) for s in G.gens)
    return PermGroup(degree, gens, have)


def commutator_subgroup(G: PermGroup, H: PermGroup) -> PermGroup:
    """[G, H] for H normal in G, as the normal closure of generator commutators."""
    return normal_closure(G, [commutator(g, h) for g in G.gens for h in H.gens])


def lower_central_series(G: PermGroup) -> list[PermGroup]:
    series = [G]
    while not series[-1].is_trivial():
        nxt = commutator_subgroup(G, series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    return series


def nilpotency_class(G: PermGroup) -> int | None:
    """Smallest c with gamma_{c+1} trivial, or None if G is not nilpotent."""
    if G.is_trivial():
        return 0
    series = lower_central_series(G)
    if not series[-1].is_trivial():
        return None
    return len(series) - 1


def center_series(G: PermGroup) -> list[PermGroup]:
    """Upper central series Z_0 = 1 < Z_1 < ... up to stabilisation."""
    series = [PermGroup(G.degree, [], [G.identity])]
    while True:
        Zi = series[-1]
        nxt = [g for g in G.elements if all(commutator(g, s) in Zi for s in G.gens)]
        if len(nxt) == Zi.order:
            return series
        series.append(subgroup(G, nxt))


def group_center(G: PermGroup) -> PermGroup:
    series = center_series(G)
    return series[1] if len(series) > 1 else series[0]


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    if not H.issubset(G):
        raise NotSubgroup("H is not contained in G")
    elems = [g for g in G.elements if all(conjugate(g, s) in H for s in H.gens)]
    N = subgroup(G, elems)
    if not H.issubset(N):
        raise NotSubgroup("normalizer does not contain H")
    return N


def is_normal_subgroup(G: PermGroup, H: PermGroup) -> bool:
    return H.issubset(G) and all(conjugate(s, h) in H for s in G.gens for h in H.gens)


def _is_prime_power_of(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def sylow_subgroup(G: PermGroup, p: int) -> PermGroup:
    """Sylow p-subgroup of a nilpotent group: all elements of p-power order."""
    if nilpotency_class(G) is None:
        raise NotNilpotent("Sylow subgroups by element filtering need a nilpotent group")
    return subgroup(G, [g for g in G.elements if _is_prime_power_of(element_order(g), p)])


def sylow_complement(G: PermGroup, p: int) -> PermGroup:
    """Elements of order prime to p; a normal complement in a nilpotent group."""
    if nilpotency_class(G) is None:
        raise NotNilpotent("Sylow complements by element filtering need a nilpotent group")
    return subgroup(G, [g for g in G.elements if element_order(g) % p != 0])


def point_orbit(G: PermGroup, pt: int) -> frozenset:
    return frozenset(g[pt] for g in G.elements)


def point_stabilizer(G: PermGroup, pt: int) -> PermGroup:
    return subgroup(G, [g for g in G.elements if g[pt] == pt])


def is_p_group(G: PermGroup) -> tuple[bool, int | None]:
    """(True, p) if every element has p-power order for one prime p."""
    primes = set()
    for g in G.elements:
        m = element_order(g)
        d = 2
        while d * d <= m:
            while m % d == 0:
                primes.add(d)
                m //= d
            d += 1
        if m > 1:
            primes.add(m)
        if len(primes) > 1:
            return False, None
    return True, (primes.pop() if primes else None)


# multiplication groups of loops

@lru_cache(maxsize=128)
def mlt(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> PermGroup:
    """Multiplication group <L_x, R_x : x in Q>."""
    n = Q.order
    gens = [left_translation(Q, a) for a in range(n)] + [right_translation(Q, a) for a in range(n)]
    return generate(gens, budget=budget, degree=n)


@lru_cache(maxsize=128)
def inn(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> PermGroup:
    """Inner mapping group, computed as a stabiliser and from its generators."""
    M = mlt(Q, budget)
    stab = [g for g in M.elements if g[0] == 0]
    via_gens = generate(distinct_inner_generators(Q), budget=budget, degree=Q.order)
    if set(stab) != via_gens.as_set():
        raise InnerMismatch(
            f"stabiliser of 1 has {len(stab)} elements but the inner generators give {via_gens.order}"
        )
    return via_gens
