"""Small named loops used by the built-in corpus and the tests."""

from __future__ import annotations

from functools import reduce
from typing import Callable, Sequence

from .loop import Loop, compose, direct_product, identity_perm


def from_operation(elements: Sequence, op: Callable, identity) -> Loop:
    """Build a loop from a list of hashable elements and a binary operation."""
    elements = list(elements)
    elements.remove(identity)
    elements.insert(0, identity)
    pos = {e: i for i, e in enumerate(elements)}
    return Loop([[pos[op(a, b)] for b in elements] for a in elements])


def cyclic(n: int) -> Loop:
    return Loop([[(a + b) % n for b in range(n)] for a in range(n)])


def trivial() -> Loop:
    return cyclic(1)


def dihedral(m: int) -> Loop:
    """Dihedral group of order 2m; element (i, j) stands for r^i s^j."""
    els = [(i, j) for j in range(2) for i in range(m)]

    def op(a, b):
        i, j = a
        k, l = b
        return ((i + (k if j == 0 else -k)) % m, (j + l) % 2)

    return from_operation(els, op, (0, 0))


def quaternion() -> Loop:
    # unit quaternions as (sign, basis) with basis in 1, i, j, k
    basis = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    els = [(s, b) for s in (1, -1) for b in "1ijk"]

    def op(x, y):
        s, b = basis[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    return from_operation(els, op, (1, "1"))


def permutation_group_table(perms: Sequence[tuple]) -> Loop:
    """Cayley table of a permutation group given by its full element list."""
    perms = list(perms)
    ident = identity_perm(len(perms[0]))
    return from_operation(perms, compose, ident)


def symmetric3() -> Loop:
    from itertools import permutations

    return permutation_group_table(list(permutations(range(3))))


def product_of(*loops: Loop) -> Loop:
    return reduce(direct_product, loops)


def central_extension(cocycle: Callable[[int, int], int]) -> Loop:
    """Loop on Z2 x (Z2 x Z2) with (a, x)(b, y) = (a + b + f(x, y), x + y).

    ``f`` must vanish when either argument is 0 for the result to be a loop
    with identity (0, 0).  Every such loop has Z2 x 0 inside its center.
    """
    els = [(a, x) for a in range(2) for x in range(4)]

    def op(u, v):
        return ((u[0] + v[0] + cocycle(u[1], v[1])) % 2, u[1] ^ v[1])

    return from_operation(els, op, (0, 0))
