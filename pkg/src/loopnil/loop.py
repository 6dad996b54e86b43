"""Finite loops given by Cayley tables.

Elements are stored as indices ``0..n-1`` with the identity at index 0.  The
original integer labels of the input table are kept in ``Loop.labels`` so that
tables can be written back in the form they were read.

Permutations of loop elements are plain tuples ``p`` with ``p[x]`` the image
of ``x``.  Composition is right-to-left: ``compose(f, g)(x) == f(g(x))``.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import MalformedInput, NoIdentity, NotASubloop, NotLatinSquare, NotNormal

Perm = tuple  # tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(f: Perm, g: Perm) -> Perm:
    """Return f∘g, i.e. apply ``g`` first."""
    return tuple(f[x] for x in g)


def invert(f: Perm) -> Perm:
    inv = [0] * len(f)
    for x, y in enumerate(f):
        inv[y] = x
    return tuple(inv)


def is_permutation(images: Sequence[int]) -> bool:
    return sorted(images) == list(range(len(images)))


class Loop:
    """A finite loop with precomputed multiplication and division tables.

    ``mul_table[a, b] = a*b``, ``ldiv_table[a, b] = a\\b`` and
    ``rdiv_table[a, b] = a/b``.
    """

    def __init__(self, table, labels: Sequence[int] | None = None, *, validate: bool = True):
        mul = np.asarray(table, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise MalformedInput(f"expected a non-empty square table, got shape {mul.shape}")
        n = mul.shape[0]
        if validate:
            _check_latin(mul)
            if not (np.array_equal(mul[0], np.arange(n)) and np.array_equal(mul[:, 0], np.arange(n))):
                raise NoIdentity("element 0 is not a two-sided identity")
        self.order = n
        self.mul_table = mul
        rows = np.arange(n)[:, None]
        ldiv = np.empty_like(mul)
        ldiv[rows, mul] = np.arange(n)[None, :]
        rdiv = np.empty_like(mul)
        rdiv[mul, np.arange(n)[None, :]] = rows
        self.ldiv_table = ldiv
        self.rdiv_table = rdiv
        for t in (self.mul_table, self.ldiv_table, self.rdiv_table):
            t.setflags(write=False)
        self.labels = tuple(int(x) for x in labels) if labels is not None else tuple(range(1, n + 1))
        if len(self.labels) != n:
            raise MalformedInput("label count does not match table order")
        self._mul = mul.tolist()
        self._ldiv = ldiv.tolist()
        self._rdiv = rdiv.tolist()

    # element operations

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def ldiv(self, a: int, b: int) -> int:
        """a\\b, the unique x with a*x = b."""
        return self._ldiv[a][b]

    def rdiv(self, a: int, b: int) -> int:
        """a/b, the unique x with x*b = a."""
        return self._rdiv[a][b]

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.order))

    def __eq__(self, other) -> bool:
        return isinstance(other, Loop) and np.array_equal(self.mul_table, other.mul_table)

    def __hash__(self) -> int:
        return hash(self.mul_table.tobytes())

    def __repr__(self) -> str:
        return f"Loop(order={self.order})"

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self._mul]

    def label(self, x: int) -> int:
        return self.labels[x]

    def index_of(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label}") from None

    # structural predicates

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    def is_associative(self) -> bool:
        m = self.mul_table
        return bool(np.array_equal(m[m, :], m[:, m]))

    def is_group(self) -> bool:
        return self.is_associative()

    def element_commutator(self, x: int, y: int) -> int:
        """c(x, y) = (yx)\\(xy); equals 1 exactly when x and y commute."""
        return self.ldiv(self.mul(y, x), self.mul(x, y))

    def element_associator(self, x: int, y: int, z: int) -> int:
        """a(x, y, z) = ((xy)z)\\(x(yz)); equals 1 exactly when the triple associates."""
        return self.ldiv(self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z)))


def _check_latin(mul: np.ndarray) -> None:
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise NotLatinSquare("entries out of range")
    for i in range(n):
        row = mul[i]
        if len(set(row.tolist())) != n:
            seen = {}
            for j, v in enumerate(row.tolist()):
                if v in seen:
                    raise NotLatinSquare(
                        f"row {i} repeats an entry in columns {seen[v]} and {j}", row=i, column=j
                    )
                seen[v] = j
        col = mul[:, i]
        if len(set(col.tolist())) != n:
            seen = {}
            for j, v in enumerate(col.tolist()):
                if v in seen:
                    raise NotLatinSquare(
                        f"column {i} repeats an entry in rows {seen[v]} and {j}", row=j, column=i
                    )
                seen[v] = j


@dataclass(frozen=True)
class Subloop:
    """A subset of a parent loop's elements, stored sorted."""

    elements: tuple
    parent_order: int

    @classmethod
    def of(cls, elements: Iterable[int], parent_order: int) -> "Subloop":
        return cls(tuple(sorted(set(int(e) for e in elements))), parent_order)

    def __contains__(self, x) -> bool:
        return x in self._set

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def _set(self) -> frozenset:
        cached = self.__dict__.get("_cached_set")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", cached)
        return cached

    def as_set(self) -> frozenset:
        return self._set

    def labels(self, Q: Loop) -> list[int]:
        return [Q.labels[x] for x in self.elements]


# parsing and formatting

def _identity_reindex(table: list[list[int]]) -> Loop:
    n = len(table)
    if any(len(r) != n for r in table):
        raise MalformedInput(f"table is not square: expected {n} entries per row")
    labels = sorted({v for r in table for v in r})
    if len(labels) != n:
        if len(labels) > n:
            raise NotLatinSquare(f"table uses {len(labels)} distinct labels, expected {n}")
        # too few labels means some row repeats an entry; find it for the message
        for i, r in enumerate(table):
            seen = {}
            for j, v in enumerate(r):
                if v in seen:
                    raise NotLatinSquare(
                        f"row {i + 1} repeats label {v} in columns {seen[v] + 1} and {j + 1}",
                        row=i, column=j,
                    )
                seen[v] = j
        raise NotLatinSquare("table uses too few distinct labels")
    pos = {lab: i for i, lab in enumerate(labels)}
    raw = [[pos[v] for v in r] for r in table]
    for i in range(n):
        seen = {}
        for j, v in enumerate(raw[i]):
            if v in seen:
                raise NotLatinSquare(
                    f"row {i + 1} repeats label {labels[v]} in columns {seen[v] + 1} and {j + 1}",
                    row=i, column=j,
                )
            seen[v] = j
        seen = {}
        for j in range(n):
            v = raw[j][i]
            if v in seen:
                raise NotLatinSquare(
                    f"column {i + 1} repeats label {labels[v]} in rows {seen[v] + 1} and {j + 1}",
                    row=j, column=i,
                )
            seen[v] = j
    ident = None
    for e in range(n):
        if raw[e] == list(range(n)) and all(raw[x][e] == x for x in range(n)):
            ident = e
            break
    if ident is None:
        raise NoIdentity("no element e with e*x = x*e = x for all x")
    order = [ident] + [x for x in range(n) if x != ident]
    new = {old: i for i, old in enumerate(order)}
    mul = [[new[raw[a][b]] for b in order] for a in order]
    return Loop(mul, labels=[labels[x] for x in order])


_COMMENT = re.compile(r"^\s*#")


def _split_blocks(text: str) -> list[list[str]]:
    blocks, cur = [], []
    for line in text.splitlines():
        if _COMMENT.match(line):
            continue
        if line.strip() == "":
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append(line)
    if cur:
        blocks.append(cur)
    return blocks


def _parse_block(lines: list[str]) -> Loop:
    body = " ".join(lines).strip()
    if body.startswith("["):
        # GAP-style nested list, e.g. the output of CayleyTable(L)
        try:
            table = ast.literal_eval(body)
        except (ValueError, SyntaxError) as exc:
            raise MalformedInput(f"cannot read bracketed table: {exc}") from None
        if not isinstance(table, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in table):
            raise MalformedInput("bracketed table must be a list of lists")
        try:
            table = [[int(v) for v in r] for r in table]
        except (TypeError, ValueError):
            raise MalformedInput("bracketed table entries must be integers") from None
        return _identity_reindex(table)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MalformedInput(f"first line must be the order, got {lines[0].strip()!r}") from None
    if n < 1:
        raise MalformedInput("order must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise MalformedInput(f"expected {n} table rows, got {len(rows)}")
    table = []
    for i, line in enumerate(rows):
        try:
            entries = [int(tok) for tok in line.split()]
        except ValueError:
            raise MalformedInput(f"row {i + 1} contains a non-integer label") from None
        if len(entries) != n:
            raise MalformedInput(f"row {i + 1} has {len(entries)} entries, expected {n}")
        table.append(entries)
    return _identity_reindex(table)


def parse_cayley(text: str) -> Loop:
    """Parse a single Cayley table.

    Comment lines start with ``#``; the first remaining line is the order
    ``n`` followed by ``n`` rows of ``n`` integer labels.  The identity is
    detected and moved to index 0.
    """
    blocks = _split_blocks(text)
    if not blocks:
        raise MalformedInput("no table found")
    if len(blocks) > 1:
        raise MalformedInput(f"expected one table, found {len(blocks)}")
    return _parse_block(blocks[0])


def parse_many(text: str) -> list[Loop]:
    """Parse a file holding several tables separated by blank lines."""
    blocks = _split_blocks(text)
    if not blocks:
        raise MalformedInput("no table found")
    return [_parse_block(b) for b in blocks]


def format_cayley(Q: Loop, comment: str | None = None) -> str:
    width = max(len(str(x)) for x in Q.labels)
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(str(Q.order))
    for row in Q._mul:
        out.append(" ".join(str(Q.labels[v]).rjust(width) for v in row))
    return "\n".join(out) + "\n"


# translations and inner mappings

def left_translation(Q: Loop, a: int) -> Perm:
    return tuple(Q._mul[a])


def right_translation(Q: Loop, a: int) -> Perm:
    return tuple(Q._mul[x][a] for x in range(Q.order))


def inner_generators(Q: Loop) -> list[Perm]:
    """L_{x,y}, R_{x,y} and T_x for all x, y (duplicates kept).

    L_{x,y} = L_{xy}^-1 L_x L_y,  R_{x,y} = R_{yx}^-1 R_x R_y,  T_x = R_x^-1 L_x.
    """
    n = Q.order
    L = [left_translation(Q, a) for a in range(n)]
    R = [right_translation(Q, a) for a in range(n)]
    Linv = [invert(p) for p in L]
    Rinv = [invert(p) for p in R]
    gens = []
    for x in range(n):
        for y in range(n):
            gens.append(compose(Linv[Q.mul(x, y)], compose(L[x], L[y])))
    for x in range(n):
        for y in range(n):
            gens.append(compose(Rinv[Q.mul(y, x)], compose(R[x], R[y])))
    for x in range(n):
        gens.append(compose(Rinv[x], L[x]))
    return gens


def distinct_inner_generators(Q: Loop) -> list[Perm]:
    ident = identity_perm(Q.order)
    seen = {ident}
    out = []
    for g in inner_generators(Q):
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def center(Q: Loop) -> Subloop:
    gens = distinct_inner_generators(Q)
    fixed = [a for a in range(Q.order) if all(g[a] == a for g in gens)]
    return Subloop.of(fixed, Q.order)


# subloops

def is_subloop(Q: Loop, S: Iterable[int]) -> bool:
    s = set(S)
    if 0 not in s:
        return False
    for a in s:
        for b in s:
            if Q._mul[a][b] not in s or Q._ldiv[a][b] not in s or Q._rdiv[a][b] not in s:
                return False
    return True


def subloop_generated(Q: Loop, seed: Iterable[int]) -> Subloop:
    elems = [0]
    have = {0}
    for x in seed:
        if x not in have:
            have.add(x)
            elems.append(x)
    # semi-naive closure: each new element is combined with all earlier ones
    i = 0
    while i < len(elems):
        a = elems[i]
        for j in range(i + 1):
            b = elems[j]
            for v in (Q._mul[a][b], Q._mul[b][a], Q._ldiv[a][b], Q._ldiv[b][a],
                      Q._rdiv[a][b], Q._rdiv[b][a]):
                if v not in have:
                    have.add(v)
                    elems.append(v)
        i += 1
    return Subloop.of(elems, Q.order)


def is_normal(Q: Loop, S: Subloop | Iterable[int]) -> bool:
    elems = set(S)
    if not is_subloop(Q, elems):
        raise NotASubloop(f"{sorted(elems)} is not closed under the loop operations")
    for g in distinct_inner_generators(Q):
        if any(g[x] not in elems for x in elems):
            return False
    return True


def normal_subloops(Q: Loop) -> list[Subloop]:
    """All normal subloops, by normal closure of every subset generated so far.

    Every normal subloop is a join of normal closures of single elements, so
    closing the singleton closures under joins finds them all.
    """
    gens = distinct_inner_generators(Q)

    def normal_closure(seed):
        cur = set(subloop_generated(Q, seed))
        while True:
            img = {g[x] for g in gens for x in cur} | cur
            if img == cur:
                return frozenset(cur)
            cur = set(subloop_generated(Q, img))

    singles = {normal_closure([x]) for x in range(Q.order)}
    found = set(singles)
    frontier = list(found)
    while frontier:
        new = []
        for A in frontier:
            for B in singles:
                J = normal_closure(A | B)
                if J not in found:
                    found.add(J)
                    new.append(J)
        frontier = new
    return sorted((Subloop.of(s, Q.order) for s in found), key=lambda s: (len(s), s.elements))


def cosets(Q: Loop, N: Subloop) -> list[tuple]:
    seen = set()
    out = []
    for x in range(Q.order):
        if x in seen:
            continue
        c = tuple(sorted(Q._mul[x][m] for m in N))
        seen.update(c)
        out.append(c)
    return out


def quotient(Q: Loop, N: Subloop) -> tuple[Loop, tuple]:
    """Return ``(Q/N, projection)`` where ``projection[x]`` is the coset index of x."""
    if not is_normal(Q, N):
        raise NotNormal(f"{list(N.elements)} is not a normal subloop")
    cs = cosets(Q, N)
    proj = [0] * Q.order
    for i, c in enumerate(cs):
        for x in c:
            proj[x] = i
    reps = [c[0] for c in cs]
    table = [[proj[Q._mul[a][b]] for b in reps] for a in reps]
    for a in range(Q.order):
        for b in range(Q.order):
            if table[proj[a]][proj[b]] != proj[Q._mul[a][b]]:
                raise NotNormal("coset multiplication is not well defined")
    return Loop(table, labels=[Q.labels[r] for r in reps]), tuple(proj)


def direct_product(Q1: Loop, Q2: Loop) -> Loop:
    """Componentwise product; the pair (i, j) gets index i*|Q2| + j."""
    n1, n2 = Q1.order, Q2.order
    m1 = Q1.mul_table
    m2 = Q2.mul_table
    table = (m1[:, None, :, None] * n2 + m2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    return Loop(table, validate=False)


def restrict(Q: Loop, A: Subloop | Iterable[int]) -> tuple[Loop, tuple]:
    """Re-index the subloop ``A`` as a standalone loop.

    Returns the loop and the embedding ``embed[i]`` = index in ``Q`` of the
    i-th element of the restricted loop.
    """
    elems = tuple(sorted(set(A)))
    if not is_subloop(Q, elems):
        raise NotASubloop(f"{list(elems)} is not a subloop")
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[Q._mul[a][b]] for b in elems] for a in elems]
    return Loop(table, labels=[Q.labels[x] for x in elems]), elems


def is_isomorphism(Q1: Loop, Q2: Loop, phi: Sequence[int]) -> bool:
    """True if ``x -> phi[x]`` is an isomorphism Q1 -> Q2 (full table comparison)."""
    if Q1.order != Q2.order or len(phi) != Q1.order or not is_permutation(phi):
        return False
    for a, b in product(range(Q1.order), repeat=2):
        if phi[Q1._mul[a][b]] != Q2._mul[phi[a]][phi[b]]:
            return False
    return True
