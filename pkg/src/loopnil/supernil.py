"""Supernilpotence of finite loops.

The decision procedure is the fork search: close the pattern tuples
``c_i(a, b)`` inside the loop power ``Q^(2^(k+1))`` and watch for two tuples
that agree everywhere except in the last coordinate.  No fork in the full
closure means the loop is k-supernilpotent; a fork means it is not.

Two falsifiers work from the polynomial side and never need the closure:
the q-term identity check and the search for nonconstant absorbing
polynomials.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ArityMismatch
from .loop import Loop, center, quotient

DEFAULT_TUPLE_BUDGET = 20_000_000

# work per batch, counted in candidate products
_BATCH_PRODUCTS = 1 << 22
# largest direct-address table (entries) for membership bitmaps and prefix arrays
_DENSE_LIMIT = 1 << 26
_INT64_LIMIT = 1 << 62


class ForkStatus(str, Enum):
    SUPERNILPOTENT = "SupernilpotentAtK"
    FORK = "ForkFound"
    INCONCLUSIVE = "Inconclusive"


# power tuples

def pack(coords: Sequence[int], n: int) -> int:
    """Base-n key with coordinate 0 most significant; the last coordinate is ``key % n``."""
    key = 0
    for c in coords:
        key = key * n + int(c)
    return key


def unpack(key: int, n: int, length: int) -> tuple:
    out = [0] * length
    for j in range(length - 1, -1, -1):
        key, out[j] = divmod(key, n)
    return tuple(out)


def pattern_generators(Q: Loop, k: int, dedup: bool = True) -> list[tuple]:
    """The tuples c_i(a, b) in Q^(2^(k+1)) for i = 1..k+1 and all a, b.

    Coordinate ``kappa`` of c_i(a, b) is ``b`` when bit i-1 of ``kappa`` is
    set and ``a`` otherwise (i = 1 is the least significant digit).
    """
    if k < 1:
        raise ValueError("level k must be at least 1")
    m = 2 ** (k + 1)
    n = Q.order
    out = []
    for i in range(1, k + 2):
        bit = 1 << (i - 1)
        sel = [(kappa & bit) != 0 for kappa in range(m)]
        for a in range(n):
            for b in range(n):
                out.append(tuple(b if s else a for s in sel))
    if not dedup:
        return out
    seen = set()
    uniq = []
    for t in out:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq


# fork search

@dataclass
class ForkResult:
    status: ForkStatus
    k: int
    closure_size: int
    witnesses: tuple | None = None  # two tuples of element indices
    traces: tuple | None = None  # derivation of each witness
    growth: list = field(default_factory=list)  # (elements processed, closure size)
    reason: str | None = None
    elapsed: float = 0.0

    def to_dict(self, Q: Loop | None = None) -> dict:
        d = {
            "k": self.k,
            "status": self.status.value,
            "closure_size": self.closure_size,
            "growth": [list(pt) for pt in thin(self.growth)],
        }
        if self.reason:
            d["reason"] = self.reason
        if self.witnesses is not None:
            d["witnesses"] = [list(w) for w in self.witnesses]
            if Q is not None:
                d["witness_labels"] = [[Q.labels[x] for x in w] for w in self.witnesses]
            d["traces"] = list(self.traces)
        return d


def thin(points: list, limit: int = 40) -> list:
    """Evenly spaced subset of a growth curve, always keeping the last point."""
    if len(points) <= limit:
        return list(points)
    step = len(points) / (limit - 1)
    picked = [points[int(i * step)] for i in range(limit - 1)]
    return picked + [points[-1]]


def _chunk_width(n: int, m: int) -> int:
    for w in (4, 2, 1):
        if w <= m and m % w == 0 and n ** (2 * w) <= 1 << 24:
            return w
    return 1


def _chunk_table(Q: Loop, w: int) -> np.ndarray:
    """Product table on blocks of ``w`` coordinates, indexed by packed block codes."""
    n = Q.order
    base = n ** w
    codes = np.arange(base)
    digits = np.stack([(codes // n ** (w - 1 - j)) % n for j in range(w)], axis=1)
    mul = Q.mul_table.astype(np.int32)
    dtype = np.uint16 if base <= 1 << 16 else np.int32
    table = np.zeros((base, base), dtype=np.int32)
    for j in range(w):
        table *= n
        table += mul[digits[:, j][:, None], digits[:, j][None, :]]
    return table.astype(dtype)


class PrefixIndex:
    """Index of stored tuples by their prefix (all coordinates but the last).

    Keys are packed so the prefix of ``key`` is ``key // n``.  Small prefix
    spaces use a direct-address array, larger ones a dict.  A lookup answers
    which stored tuple, if any, shares a prefix with a new one; since new
    tuples are never already stored, any hit is a fork.
    """

    def __init__(self, n: int, m: int):
        self.n = n
        space = n ** (m - 1)
        self.dense = space <= _DENSE_LIMIT
        if self.dense:
            self._slots = np.full(space, -1, dtype=np.int64)
        else:
            self._slots = {}

    def first_conflict(self, keys: np.ndarray) -> tuple[int, int, bool]:
        """Scan new keys in order; return (position, partner, partner_is_stored).

        ``position`` is -1 when no key collides with a stored tuple or with an
        earlier key of the same batch.  ``partner`` is a stored index or a
        batch position.
        """
        if len(keys) == 0:
            return -1, -1, False
        prefixes = keys // self.n
        if self.dense:
            hits = self._slots[prefixes]
            stored = np.flatnonzero(hits >= 0)
            p_store = int(stored[0]) if stored.size else len(keys)
            _, first = np.unique(prefixes, return_index=True)
            dup_mask = np.ones(len(keys), dtype=bool)
            dup_mask[first] = False
            dups = np.flatnonzero(dup_mask)
            p_dup = int(dups[0]) if dups.size else len(keys)
            if p_store == len(keys) and p_dup == len(keys):
                return -1, -1, False
            if p_store <= p_dup:
                return p_store, int(hits[p_store]), True
            same = np.flatnonzero(prefixes[:p_dup] == prefixes[p_dup])
            return p_dup, int(same[0]), False
        local = {}
        for pos, pre in enumerate(prefixes.tolist()):
            if pre in self._slots:
                return pos, self._slots[pre], True
            if pre in local:
                return pos, local[pre], False
            local[pre] = pos
        return -1, -1, False

    def insert(self, keys: np.ndarray, indices: np.ndarray) -> None:
        prefixes = keys // self.n
        if self.dense:
            self._slots[prefixes] = indices
        else:
            self._slots.update(zip(prefixes.tolist(), indices.tolist()))


class _Members:
    """Set of packed keys: a bitmap for small key spaces, a sorted array otherwise."""

    def __init__(self, space: int):
        self.dense = space <= _DENSE_LIMIT
        if self.dense:
            self._bits = np.zeros(space, dtype=bool)
        else:
            self._sorted = np.empty(0, dtype=np.int64)

    def contains(self, keys: np.ndarray) -> np.ndarray:
        if self.dense:
            return self._bits[keys]
        if self._sorted.size == 0:
            return np.zeros(len(keys), dtype=bool)
        pos = np.searchsorted(self._sorted, keys)
        pos[pos == self._sorted.size] = 0
        return self._sorted[pos] == keys

    def add(self, keys: np.ndarray) -> None:
        if self.dense:
            self._bits[keys] = True
        else:
            self._sorted = np.union1d(self._sorted, keys)


class _Store:
    """Growable arrays for closure elements and their derivations."""

    def __init__(self, nch: int, dtype):
        cap = 1024
        self.codes = np.empty((cap, nch), dtype=dtype)
        self.keys = np.empty(cap, dtype=np.int64)
        self.left = np.empty(cap, dtype=np.int64)
        self.right = np.empty(cap, dtype=np.int64)
        self.size = 0

    def append(self, codes, keys, left, right):
        need = self.size + len(keys)
        if need > len(self.keys):
            cap = max(need, 2 * len(self.keys))
            for name in ("codes", "keys", "left", "right"):
                old = getattr(self, name)
                new = np.empty((cap,) + old.shape[1:], dtype=old.dtype)
                new[: self.size] = old[: self.size]
                setattr(self, name, new)
        s, e = self.size, need
        self.codes[s:e] = codes
        self.keys[s:e] = keys
        self.left[s:e] = left
        self.right[s:e] = right
        self.size = need


def _trace(store_left, store_right, idx: int) -> dict:
    """Derivation of element ``idx``: generator indices and products, in order."""
    needed = set()
    stack = [idx]
    while stack:
        i = stack.pop()
        if i in needed:
            continue
        needed.add(i)
        if store_left[i] >= 0:
            stack.append(int(store_left[i]))
            stack.append(int(store_right[i]))
    steps = []
    for i in sorted(needed):
        if store_left[i] < 0:
            steps.append({"id": i, "gen": int(store_right[i])})
        else:
            steps.append({"id": i, "op": "mul", "left": int(store_left[i]), "right": int(store_right[i])})
    return {"result": idx, "steps": steps}


def replay_trace(Q: Loop, k: int, trace: dict) -> tuple:
    """Recompute a tuple from its derivation using only the pattern generators
    and coordinatewise loop operations."""
    gens = pattern_generators(Q, k)
    ops = {"mul": Q.mul, "ldiv": Q.ldiv, "rdiv": Q.rdiv}
    vals = {}
    for step in trace["steps"]:
        if "gen" in step:
            vals[step["id"]] = gens[step["gen"]]
        else:
            f = ops[step["op"]]
            a, b = vals[step["left"]], vals[step["right"]]
            vals[step["id"]] = tuple(f(x, y) for x, y in zip(a, b))
    return vals[trace["result"]]


def fork_search(
    Q: Loop,
    k: int,
    budget: int = DEFAULT_TUPLE_BUDGET,
    time_limit: float | None = None,
) -> ForkResult:
    """Close the pattern generators of level ``k`` and look for a fork.

    Elements are processed first-in first-out.  Each new element ``u`` is
    multiplied with every element ``v`` stored no later than the end of its
    batch, candidates ordered as ``v*u`` for all v, then ``u*v`` for all v.
    In a finite loop a subset closed under multiplication is closed under
    both divisions, so products alone reach the whole subpower.
    """
    if k < 1:
        raise ValueError("level k must be at least 1")
    n = Q.order
    m = 2 ** (k + 1)
    if n ** m >= _INT64_LIMIT:
        return _fork_search_python(Q, k, budget, time_limit)
    start = time.perf_counter()
    w = _chunk_width(n, m)
    nch = m // w
    base = n ** w
    table = _chunk_table(Q, w)
    weights = np.array([base ** (nch - 1 - c) for c in range(nch)], dtype=np.int64)

    gens = np.array(pattern_generators(Q, k), dtype=np.int64)
    gen_codes = np.zeros((len(gens), nch), dtype=np.int64)
    for c in range(nch):
        for j in range(w):
            gen_codes[:, c] = gen_codes[:, c] * n + gens[:, c * w + j]
    gen_keys = gen_codes @ weights

    store = _Store(nch, table.dtype)
    members = _Members(n ** m)
    index = PrefixIndex(n, m)
    growth = []

    def finish(status, witnesses=None, traces=None, reason=None):
        return ForkResult(status, k, store.size, witnesses, traces, growth, reason,
                          time.perf_counter() - start)

    def admit(codes, keys, left, right):
        """Insert new elements in order, stopping at the first fork or the budget."""
        pos, partner, partner_stored = index.first_conflict(keys)
        limit = len(keys) if pos < 0 else pos
        room = budget - store.size
        if room < (limit if pos < 0 else limit + 1):
            take = max(min(room, limit), 0)
            sl = slice(0, take)
            index.insert(keys[sl], np.arange(store.size, store.size + take))
            members.add(keys[sl])
            store.append(codes[sl], keys[sl], left[sl], right[sl])
            return "budget"
        first_new = store.size
        sl = slice(0, limit + 1 if pos >= 0 else limit)
        index.insert(keys[:limit], np.arange(first_new, first_new + limit))
        members.add(keys[sl])
        store.append(codes[sl], keys[sl], left[sl], right[sl])
        if pos >= 0:
            other = partner if partner_stored else first_new + partner
            return (other, first_new + pos)
        return None

    outcome = admit(gen_codes.astype(table.dtype), gen_keys,
                    np.full(len(gens), -1), np.arange(len(gens)))
    done = 0
    while outcome is None and done < store.size:
        if time_limit is not None and time.perf_counter() - start > time_limit:
            outcome = "time"
            break
        size = store.size
        b = max(1, min(size - done, _BATCH_PRODUCTS // (2 * size)))
        i0, i1 = done, done + b
        U = store.codes[i0:i1].astype(np.int64)
        V = store.codes[:i1].astype(np.int64)
        cand = np.empty((b, 2, i1, nch), dtype=table.dtype)
        for c in range(nch):
            cand[:, 0, :, c] = table[V[None, :, c], U[:, None, c]]
            cand[:, 1, :, c] = table[U[:, None, c], V[None, :, c]]
        cand = cand.reshape(-1, nch)
        keys = cand.astype(np.int64) @ weights
        fresh = np.flatnonzero(~members.contains(keys))
        if fresh.size:
            _, first = np.unique(keys[fresh], return_index=True)
            sel = fresh[np.sort(first)]
            row, rem = np.divmod(sel, 2 * i1)
            side, v = np.divmod(rem, i1)
            u = i0 + row
            left = np.where(side == 0, v, u)
            right = np.where(side == 0, u, v)
            outcome = admit(cand[sel], keys[sel], left, right)
        done = i1
        growth.append((done, store.size))

    if outcome is None:
        return finish(ForkStatus.SUPERNILPOTENT)
    if outcome in ("budget", "time"):
        return finish(ForkStatus.INCONCLUSIVE, reason=outcome)
    a, b = outcome
    witnesses = tuple(unpack(int(store.keys[i]), n, m) for i in (a, b))
    traces = tuple(_trace(store.left, store.right, i) for i in (a, b))
    return finish(ForkStatus.FORK, witnesses, traces)


def _fork_search_python(Q: Loop, k: int, budget: int, time_limit: float | None) -> ForkResult:
    """Same search with tuple keys, for powers too large to pack into 64 bits."""
    start = time.perf_counter()
    m = 2 ** (k + 1)
    mul = Q._mul
    elems: list[tuple] = []
    parents: list[tuple] = []
    prefix: dict = {}
    members: set = set()
    growth = []

    def trace_of(i):
        left = [p[0] for p in parents]
        right = [p[1] for p in parents]
        return _trace(left, right, i)

    def result(status, pair=None, reason=None):
        w = t = None
        if pair is not None:
            w = (elems[pair[0]], elems[pair[1]])
            t = (trace_of(pair[0]), trace_of(pair[1]))
        return ForkResult(status, k, len(elems), w, t, growth, reason, time.perf_counter() - start)

    def add(t, par):
        if t in members:
            return None
        if len(elems) >= budget:
            return "budget"
        members.add(t)
        elems.append(t)
        parents.append(par)
        pre = t[:-1]
        if pre in prefix:
            return (prefix[pre], len(elems) - 1)
        prefix[pre] = len(elems) - 1
        return None

    for g, t in enumerate(pattern_generators(Q, k)):
        out = add(t, (-1, g))
        if out == "budget":
            return result(ForkStatus.INCONCLUSIVE, reason="budget")
        if out is not None:
            return result(ForkStatus.FORK, out)
    done = 0
    while done < len(elems):
        if time_limit is not None and time.perf_counter() - start > time_limit:
            return result(ForkStatus.INCONCLUSIVE, reason="time")
        u = elems[done]
        limit = done + 1
        for side in (0, 1):
            for v_idx in range(limit):
                v = elems[v_idx]
                if side == 0:
                    t = tuple(mul[x][y] for x, y in zip(v, u))
                    par = (v_idx, done)
                else:
                    t = tuple(mul[x][y] for x, y in zip(u, v))
                    par = (done, v_idx)
                out = add(t, par)
                if out == "budget":
                    return result(ForkStatus.INCONCLUSIVE, reason="budget")
                if out is not None:
                    return result(ForkStatus.FORK, out)
        done += 1
        growth.append((done, len(elems)))
    return result(ForkStatus.SUPERNILPOTENT)


@dataclass
class SnBounds:
    lower: int
    upper: int | None
    inconclusive: tuple
    levels: list

    def to_dict(self, Q: Loop | None = None) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "inconclusive": list(self.inconclusive),
            "levels": [r.to_dict(Q) for r in self.levels],
        }


def sn_bounds(
    Q: Loop,
    k_max: int,
    budget: int = DEFAULT_TUPLE_BUDGET,
    time_limit: float | None = None,
) -> SnBounds:
    """Run the fork search for k = 1..k_max, stopping at the first fork-free level."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    lower, upper = 0, None
    inconclusive = []
    levels = []
    for k in range(1, k_max + 1):
        res = fork_search(Q, k, budget, time_limit)
        levels.append(res)
        if res.status is ForkStatus.FORK:
            lower = k
        elif res.status is ForkStatus.INCONCLUSIVE:
            inconclusive.append(k)
        else:
            upper = k
            break
    return SnBounds(lower, upper, tuple(inconclusive), levels)


def quotient_drop_check(Q: Loop, upper: int, budget: int = DEFAULT_TUPLE_BUDGET) -> bool:
    """Check that Q/Z(Q) is (upper-1)-supernilpotent when Q is upper-supernilpotent.

    Level 0 means the quotient must be trivial.  An inconclusive search at
    the lower level is reported as ``False``.
    """
    quo, _ = quotient(Q, center(Q))
    if upper <= 1:
        return quo.order == 1
    return fork_search(quo, upper - 1, budget).status is ForkStatus.SUPERNILPOTENT


# terms and the q-term identity

def maltsev(Q: Loop, x, y, z):
    """m(x, y, z) = (x/y)z; works elementwise on integer arrays."""
    return Q.mul_table[Q.rdiv_table[x, y], z]


def _q(Q: Loop, level: int, args: list):
    if level == 1:
        return args[0]
    half = 2 ** (level - 1)
    first = _q(Q, level - 1, args[: half - 1])
    second = _q(Q, level - 1, args[half:])
    return maltsev(Q, args[half - 1], first, second)


def eval_q(level: int, args: Sequence, Q: Loop):
    """Evaluate q_level on 2^level - 1 arguments.

    q_2(x1, x2, x3) = m(x2, x1, x3) and
    q_{n+1}(x_1..x_{2^(n+1)-1}) = m(x_{2^n}, q_n(first half), q_n(second half)).
    """
    if level < 2:
        raise ArityMismatch("q-terms start at level 2")
    if len(args) != 2 ** level - 1:
        raise ArityMismatch(f"q_{level} takes {2 ** level - 1} arguments, got {len(args)}")
    return _q(Q, level, list(args))


_OPS = ("*", "\\", "/")


def eval_term(Q: Loop, term, env: Sequence):
    """Evaluate a term over integer arrays (or plain ints).

    Terms are tuples: ``("x", i)`` variable, ``("c", a)`` constant element,
    ``("1",)`` identity, ``(op, left, right)`` with op in ``* \\ /``.
    """
    tag = term[0]
    if tag == "x":
        return env[term[1]]
    if tag == "c":
        return term[1]
    if tag == "1":
        return 0
    a = eval_term(Q, term[1], env)
    b = eval_term(Q, term[2], env)
    if tag == "*":
        return Q.mul_table[a, b]
    if tag == "\\":
        return Q.ldiv_table[a, b]
    return Q.rdiv_table[a, b]


def term_str(term, Q: Loop | None = None) -> str:
    tag = term[0]
    if tag == "x":
        return f"x{term[1] + 1}"
    if tag == "c":
        return f"[{Q.labels[term[1]] if Q else term[1]}]"
    if tag == "1":
        return "1"
    return f"({term_str(term[1], Q)}{tag}{term_str(term[2], Q)})"


def term_vars(term) -> set:
    if term[0] == "x":
        return {term[1]}
    if term[0] in ("c", "1"):
        return set()
    return term_vars(term[1]) | term_vars(term[2])


def substitute(term, var: int, value):
    if term[0] == "x":
        return value if term[1] == var else term
    if term[0] in ("c", "1"):
        return term
    return (term[0], substitute(term[1], var, value), substitute(term[2], var, value))


def random_term(rng: np.random.Generator, nvars: int, depth: int, constants: int = 0):
    """Random term of at most ``depth`` nested operations.

    ``constants`` is the loop order when constants are allowed, else 0.
    """
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if constants and r < 0.2:
            return ("c", int(rng.integers(constants)))
        if r < 0.25:
            return ("1",)
        return ("x", int(rng.integers(nvars)))
    op = _OPS[int(rng.integers(3))]
    return (op, random_term(rng, nvars, depth - 1, constants), random_term(rng, nvars, depth - 1, constants))


def commutator_term(x, y):
    """c(x, y) = (yx)\\(xy)."""
    return ("\\", ("*", y, x), ("*", x, y))


def associator_term(x, y, z):
    """a(x, y, z) = ((xy)z)\\(x(yz))."""
    return ("\\", ("*", ("*", x, y), z), ("*", x, ("*", y, z)))


@dataclass
class Q4Counterexample:
    k: int
    term: str
    batches: list  # variable indices per batch
    a: list
    b: list
    lhs: int
    rhs: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def condition4_falsifier(
    Q: Loop,
    k: int,
    trials: int = 1000,
    term_depth: int = 3,
    seed: int = 0,
    terms: Sequence | None = None,
    samples: int = 16,
) -> Q4Counterexample | None:
    """Search for a term t and tuples violating
    q_{k+1}(t(all a/b combinations but the last)) = t(b_1, ..., b_{k+1}).

    Combinations are listed by counting in binary with the last batch as
    the least significant digit: ``kappa = 1`` swaps in b for the last batch
    only, and the final combination (all b) is the right hand side.  Any
    violation proves the loop is not k-supernilpotent.
    """
    rng = np.random.default_rng(seed)
    n = Q.order
    nb = k + 1
    m = 2 ** nb
    candidates = list(terms) if terms is not None else None
    count = len(candidates) if candidates is not None else trials
    for trial in range(count):
        if candidates is not None:
            t = candidates[trial]
            widths = [1] * nb
            nv = nb
            if term_vars(t) and max(term_vars(t)) >= nv:
                raise ArityMismatch("explicit terms may only use variables x1..x{k+1}")
        else:
            widths = [int(w) for w in rng.integers(1, 3, size=nb)]
            nv = sum(widths)
            t = random_term(rng, nv, term_depth)
        batch_of = [i for i, w in enumerate(widths) for _ in range(w)]
        A = rng.integers(n, size=(samples, nv))
        B = rng.integers(n, size=(samples, nv))
        vals = []
        for kappa in range(m):
            env = [B[:, j] if (kappa >> (nb - 1 - batch_of[j])) & 1 else A[:, j] for j in range(nv)]
            vals.append(np.broadcast_to(eval_term(Q, t, env), (samples,)))
        lhs = eval_q(nb, vals[:-1], Q)
        bad = np.flatnonzero(lhs != vals[-1])
        if bad.size:
            s = int(bad[0])
            batches = []
            pos = 0
            for w in widths:
                batches.append(list(range(pos, pos + w)))
                pos += w
            return Q4Counterexample(
                k=k, term=term_str(t, Q), batches=batches,
                a=[Q.labels[int(x)] for x in A[s]], b=[Q.labels[int(x)] for x in B[s]],
                lhs=Q.labels[int(lhs[s])], rhs=Q.labels[int(vals[-1][s])],
            )
    return None


# absorbing polynomials

@dataclass
class AbsorberWitness:
    arity: int
    description: str
    inputs: tuple  # two input tuples (labels) with distinct outputs
    outputs: tuple

    def to_dict(self) -> dict:
        return {"arity": self.arity, "polynomial": self.description,
                "inputs": [list(x) for x in self.inputs], "outputs": list(self.outputs)}


def builtin_absorbers(arity: int) -> list:
    """Commutator/associator based absorbing terms in x1..x_arity."""
    x = [("x", i) for i in range(arity)]
    out = []
    if arity == 2:
        out.append(("commutator", commutator_term(x[0], x[1])))
    if arity == 3:
        out.append(("associator", associator_term(x[0], x[1], x[2])))
        out.append(("associator(x2,x1,x3)", associator_term(x[1], x[0], x[2])))
        out.append(("associator(x1,x3,x2)", associator_term(x[0], x[2], x[1])))
    if arity >= 3:
        t = commutator_term(x[0], x[1])
        for i in range(2, arity):
            t = commutator_term(t, x[i])
        out.append(("left-nested commutator", t))
    if arity >= 4:
        t = associator_term(x[0], x[1], x[2])
        for i in range(3, arity):
            t = commutator_term(t, x[i])
        out.append(("commutator of associator", t))
        t = x[0]
        for i in range(1, arity - 2):
            t = commutator_term(t, x[i])
        out.append(("associator of commutator", associator_term(t, x[arity - 2], x[arity - 1])))
    return out


def make_absorbing(term, arity: int):
    """p -> p / p[x_i := 1], for each variable in turn.

    The result takes the value 1 whenever some argument is 1.
    """
    for i in range(arity):
        term = ("/", term, substitute(term, i, ("1",)))
    return term


def _grid(n: int, arity: int) -> list:
    return [g.ravel() for g in np.indices((n,) * arity)]


def absorber_falsifier(
    Q: Loop,
    arity: int,
    trials: int = 1000,
    term_depth: int = 3,
    seed: int = 0,
) -> AbsorberWitness | None:
    """Look for a nonconstant polynomial of the given arity absorbing at (1..1) into 1.

    Built-in commutator/associator candidates go first, then random
    polynomials (terms with constants) made absorbing by successive division.
    Absorption and nonconstancy are both checked on every input.  A witness
    shows the loop is not (arity-1)-supernilpotent.
    """
    if arity < 2:
        raise ValueError("arity must be at least 2")
    n = Q.order
    env = _grid(n, arity)
    touches_one = np.zeros(n ** arity, dtype=bool)
    for g in env:
        touches_one |= g == 0
    rng = np.random.default_rng(seed)

    def check(desc, term):
        out = np.broadcast_to(eval_term(Q, term, env), touches_one.shape)
        if np.any(out[touches_one] != 0):
            return None
        bad = np.flatnonzero(out != 0)
        if bad.size == 0:
            return None
        i = int(bad[0])
        point = tuple(Q.labels[int(g[i])] for g in env)
        ones = tuple(Q.labels[0] for _ in range(arity))
        return AbsorberWitness(arity, desc, (point, ones), (Q.labels[int(out[i])], Q.labels[0]))

    for desc, term in builtin_absorbers(arity):
        w = check(desc, term)
        if w is not None:
            return w
    for _ in range(trials):
        base = random_term(rng, arity, term_depth, constants=n)
        term = make_absorbing(base, arity)
        w = check(f"absorbing form of {term_str(base, Q)}", term)
        if w is not None:
            return w
    return None
