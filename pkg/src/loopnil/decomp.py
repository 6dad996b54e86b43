"""Normal subloops versus normal subgroups of Mlt, and prime decomposition.

For a loop Q with nilpotent multiplication group, Mlt Q splits as P x R with
P its Sylow p-subgroup.  The orbits of the identity under P and R are normal
subloops whose product is all of Q, which gives one direct factor of
p-power order; the rest is handled recursively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MltNotNilpotent, OrbitNotSubloop, VerificationFailed
from .loop import Loop, Subloop, direct_product, is_isomorphism, is_permutation, is_subloop, is_normal, restrict
from .nilpotence import cl_cn
from .permgrp import (
    DEFAULT_GROUP_BUDGET,
    PermGroup,
    is_normal_subgroup,
    is_p_group,
    mlt,
    nilpotency_class,
    subgroup,
    sylow_complement,
    sylow_subgroup,
)


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def n_star(Q: Loop, N: Subloop, budget: int = DEFAULT_GROUP_BUDGET) -> PermGroup:
    """N* = {f in Mlt Q : f(x)/x in N for all x}."""
    M = mlt(Q, budget)
    members = N.as_set() if isinstance(N, Subloop) else frozenset(N)
    elems = [f for f in M.elements if all(Q.rdiv(f[x], x) in members for x in range(Q.order))]
    G = subgroup(M, elems)
    if not is_normal_subgroup(M, G):
        raise VerificationFailed("N* is not normal in Mlt Q")
    return G


def orbit_subloop(Q: Loop, G: PermGroup) -> Subloop:
    """G(1), the orbit of the identity; a normal subloop when G is normal in Mlt Q."""
    orbit = {g[0] for g in G.elements}
    if not is_subloop(Q, orbit) or not is_normal(Q, orbit):
        raise OrbitNotSubloop(f"orbit {sorted(orbit)} is not a normal subloop")
    if G.order % len(orbit):
        raise VerificationFailed(f"|G(1)| = {len(orbit)} does not divide |G| = {G.order}")
    return Subloop.of(orbit, Q.order)


@dataclass
class Factor:
    prime: int | None  # None only for the trivial loop
    loop: Loop
    embedding: tuple  # factor index -> index in the decomposed loop

    @property
    def order(self) -> int:
        return self.loop.order


@dataclass
class SplitStep:
    prime: int
    p_part: tuple  # P(1), indices in the decomposed loop
    rest: tuple  # R(1)
    pairing: tuple  # product index i*|R(1)| + j -> P(1)[i] * R(1)[j]


@dataclass
class Decomposition:
    order: int
    factors: list
    steps: list = field(default_factory=list)

    def primes(self) -> list:
        return [f.prime for f in self.factors]

    def factor_orders(self) -> list:
        return [f.order for f in self.factors]

    def to_dict(self, Q: Loop) -> dict:
        return {
            "order": self.order,
            "factors": [
                {
                    "prime": f.prime,
                    "order": f.order,
                    "labels": [Q.labels[x] for x in f.embedding],
                    "table": [[Q.labels[f.embedding[v]] for v in row] for row in f.loop.rows()],
                }
                for f in self.factors
            ],
            "steps": [
                {
                    "prime": s.prime,
                    "p_part": [Q.labels[x] for x in s.p_part],
                    "rest": [Q.labels[x] for x in s.rest],
                    "pairing": list(s.pairing),
                }
                for s in self.steps
            ],
        }


def prime_decompose(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> Decomposition:
    """Split Q into direct factors of prime-power order, smallest prime first.

    Every intermediate claim is checked: the two orbit subloops meet
    trivially, their orders multiply to the order of the current loop, and
    the pairing (a, b) -> ab is an isomorphism from their direct product.
    """
    if nilpotency_class(mlt(Q, budget)) is None:
        raise MltNotNilpotent("the multiplication group is not nilpotent")
    factors: list[Factor] = []
    steps: list[SplitStep] = []
    cur, embed = Q, tuple(range(Q.order))
    while True:
        primes = prime_factors(cur.order)
        if len(primes) <= 1:
            factors.append(Factor(primes[0] if primes else None, cur, embed))
            break
        p = primes[0]
        pe = 1
        while cur.order % (pe * p) == 0:
            pe *= p
        M = mlt(cur, budget)
        A = orbit_subloop(cur, sylow_subgroup(M, p))
        B = orbit_subloop(cur, sylow_complement(M, p))
        if A.as_set() & B.as_set() != {0}:
            raise VerificationFailed(f"P(1) and R(1) intersect in {sorted(A.as_set() & B.as_set())}")
        if len(A) != pe or len(A) * len(B) != cur.order:
            raise VerificationFailed(f"|P(1)| = {len(A)}, |R(1)| = {len(B)} for a loop of order {cur.order}")
        LA, ea = restrict(cur, A)
        LB, eb = restrict(cur, B)
        pairing = tuple(cur.mul(a, b) for a in ea for b in eb)
        if not is_permutation(pairing) or not is_isomorphism(direct_product(LA, LB), cur, pairing):
            raise VerificationFailed("the pairing P(1) x R(1) -> Q is not an isomorphism")
        steps.append(SplitStep(
            p,
            tuple(embed[x] for x in ea),
            tuple(embed[x] for x in eb),
            tuple(embed[x] for x in pairing),
        ))
        factors.append(Factor(p, LA, tuple(embed[x] for x in ea)))
        cur, embed = LB, tuple(embed[x] for x in eb)
    return Decomposition(Q.order, factors, steps)


def reconstruct(Q: Loop, dec: Decomposition) -> tuple[Loop, tuple]:
    """Direct product of the factors and its map into Q.

    The product element (f_1, ..., f_r) goes to f_1 (f_2 (... f_r)) with each
    f_i read through its embedding.
    """
    prod = dec.factors[-1].loop
    phi = list(dec.factors[-1].embedding)
    for f in reversed(dec.factors[:-1]):
        prod = direct_product(f.loop, prod)
        phi = [Q.mul(f.embedding[i], phi[j]) for i in range(f.order) for j in range(len(phi))]
    return prod, tuple(phi)


def verify_decomposition(Q: Loop, dec: Decomposition) -> bool:
    prod, phi = reconstruct(Q, dec)
    return is_isomorphism(prod, Q, phi)


@dataclass
class PGroupCheck:
    loop_side: bool  # Q centrally nilpotent of prime-power order
    group_side: bool  # Mlt Q a p-group
    prime: int | None

    @property
    def agree(self) -> bool:
        return self.loop_side == self.group_side


def pgroup_check(Q: Loop, budget: int = DEFAULT_GROUP_BUDGET) -> PGroupCheck:
    primes = prime_factors(Q.order)
    loop_side = len(primes) <= 1 and cl_cn(Q) is not None
    group_side, p = is_p_group(mlt(Q, budget))
    if Q.order == 1:
        group_side = True
    prime = primes[0] if len(primes) == 1 else p
    return PGroupCheck(loop_side, group_side, prime)
