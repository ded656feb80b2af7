"""Counting, ranking and buffer search over irreducible strings.

A repeat of length at most 6 ending at a new symbol only looks at the
previous five symbols, and irreducibility is blind to renaming symbols.
The transfer matrix therefore runs over equality patterns of the last
five symbols (at most 52 states for any q) instead of over Irr_q(5).
The explicit De Bruijn subgraph is kept for small q and cross-checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .core import Seq, is_irreducible

SIGMA = bytes((0, 1, 0, 2, 0))
BUFFER_LEN = {3: 13, 4: 7, 5: 6}


def buffer_length(q: int) -> int:
    return BUFFER_LEN.get(q, 5)


def _tail_ok(t) -> bool:
    n = len(t)
    return not any(n >= 2 * k and t[n - k:] == t[n - 2 * k:n - k] for k in (1, 2, 3))


def canonical(s) -> bytes:
    """Relabel symbols by order of first appearance."""
    seen: dict = {}
    return bytes(seen.setdefault(c, len(seen)) for c in s)


@lru_cache(maxsize=None)
def _moves(pattern: bytes, q: int) -> tuple:
    """(next pattern, multiplicity) for each way to extend ``pattern``."""
    k = len(set(pattern))
    out: dict = {}
    options = [(a, 1) for a in range(k)]
    if q > k:
        options.append((k, q - k))
    for a, mult in options:
        t = pattern + bytes((a,))
        if _tail_ok(t):
            nxt = canonical(t[-5:])
            out[nxt] = out.get(nxt, 0) + mult
    return tuple(out.items())


@lru_cache(maxsize=None)
def _ext(pattern: bytes, q: int, r: int) -> int:
    """Irreducible continuations of length ``r`` after a context with this pattern."""
    if r == 0:
        return 1
    return sum(m * _ext(nxt, q, r - 1) for nxt, m in _moves(pattern, q))


def count_irr(q: int, n: int) -> int:
    if q < 1 or n < 0:
        raise ValueError("need q >= 1 and n >= 0")
    if n > 600:
        return _count_iter(q, n)
    return _ext(b"", q, n)


def _count_iter(q: int, n: int) -> int:
    vec = {b"": 1}
    for _ in range(n):
        nxt: dict = {}
        for pat, c in vec.items():
            for p2, m in _moves(pat, q):
                nxt[p2] = nxt.get(p2, 0) + c * m
        vec = nxt
    return sum(vec.values())


def count_table(q: int, N: int) -> list:
    """counts[n] for n = 0..N."""
    vec = {b"": 1}
    out = [1]
    for _ in range(N):
        nxt: dict = {}
        for pat, c in vec.items():
            for p2, m in _moves(pat, q):
                nxt[p2] = nxt.get(p2, 0) + c * m
        vec = nxt
        out.append(sum(vec.values()))
    return out


def _context_count(prefix, q: int, remaining: int) -> int:
    return _ext(canonical(prefix[-5:]), q, remaining)


def unrank_irr(q: int, n: int, i: int) -> Seq:
    total = count_irr(q, n)
    if not 0 <= i < total:
        raise IndexError(f"rank {i} outside [0, {total})")
    out = bytearray()
    for pos in range(n):
        for a in range(q):
            out.append(a)
            if _tail_ok(out):
                c = _context_count(out, q, n - pos - 1)
                if i < c:
                    break
                i -= c
            out.pop()
        else:
            raise AssertionError("rank walk fell off the end")
    return bytes(out)


def rank_irr(x: Seq, q: int) -> int:
    if not is_irreducible(x) or (x and max(x) >= q):
        raise ValueError("rank needs an irreducible string over the alphabet")
    n = len(x)
    r = 0
    pre = bytearray()
    for pos, c in enumerate(x):
        for a in range(c):
            pre.append(a)
            if _tail_ok(pre):
                r += _context_count(pre, q, n - pos - 1)
            pre.pop()
        pre.append(c)
    return r


def growth_rate(q: int, tol: float = 1e-12) -> float:
    """Largest real root of x^3 - (q-2)x^2 - (q-3)x - (q-2)."""
    if q < 4:
        raise ValueError("the cubic describes q >= 4")

    def f(x):
        return x ** 3 - (q - 2) * x ** 2 - (q - 3) * x - (q - 2)

    lo, hi = float(q - 2), float(q)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def capacity_bits(q: int, n: int) -> int:
    """Data bits a length-``n`` irreducible word can carry."""
    c = count_irr(q, n)
    return c.bit_length() - 1 if c else 0


# -- explicit De Bruijn subgraph ------------------------------------------------


@dataclass
class DeBruijnIrrGraph:
    q: int
    vertices: list
    succ: dict

    @classmethod
    def build(cls, q: int) -> "DeBruijnIrrGraph":
        verts = [bytes(v) for v in itertools.product(range(q), repeat=5)
                 if is_irreducible(bytes(v))]
        succ = {}
        for v in verts:
            succ[v] = [(a, v[1:] + bytes((a,))) for a in range(q)
                       if is_irreducible(v + bytes((a,)))]
        return cls(q, verts, succ)

    def count_paths(self, length: int) -> int:
        """Irreducible strings of length 5 + ``length`` (walks with that many edges)."""
        vec = {v: 1 for v in self.vertices}
        for _ in range(length):
            nxt: dict = {}
            for v, c in vec.items():
                for _, w in self.succ[v]:
                    nxt[w] = nxt.get(w, 0) + c
            vec = nxt
        return sum(vec.values())


# -- buffers -------------------------------------------------------------------


class _Reach:
    """Exact-depth reachability of the context ``sigma``."""

    def __init__(self, q: int, sigma: Seq):
        self.q = q
        self.sigma = sigma
        self.memo: dict = {}

    def can(self, ctx: bytes, r: int) -> bool:
        key = (ctx, r)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if r == 0:
            ok = ctx == self.sigma
        else:
            ok = any(self.can(nxt, r - 1) for _, nxt in self.moves(ctx))
        self.memo[key] = ok
        return ok

    def moves(self, ctx: bytes):
        # descending symbol order is the default search order
        for a in range(self.q - 1, -1, -1):
            t = ctx + bytes((a,))
            if _tail_ok(t):
                yield a, t[-5:]


@lru_cache(maxsize=None)
def _reach(q: int, sigma: Seq) -> _Reach:
    return _Reach(q, sigma)


def find_buffer(x: Seq, q: int, sigma: Seq = SIGMA, length: Optional[int] = None) -> Seq:
    """Buffer b of fixed length with x + b + sigma irreducible."""
    if length is None:
        length = buffer_length(q)
    if not is_irreducible(x) or not is_irreducible(sigma) or len(sigma) != 5:
        raise ValueError("x and sigma must be irreducible, sigma of length 5")
    reach = _reach(q, sigma)
    ctx = x[-5:]
    depth = length + len(sigma)
    if not reach.can(ctx, depth):
        raise AssertionError(f"no buffer of length {length} after {x[-5:].hex()}")
    out = bytearray()
    for r in range(depth, len(sigma), -1):
        for a, nxt in reach.moves(ctx):
            if reach.can(nxt, r - 1):
                out.append(a)
                ctx = nxt
                break
    return bytes(out)


def buffer_exists_everywhere(q: int, length: Optional[int] = None,
                             sigma: Seq = SIGMA) -> tuple[int, int]:
    """Check every possible context of an irreducible string.

    Returns (contexts checked, contexts without a buffer).  Contexts are
    all irreducible strings of length 1..5 (shorter ones stand for short x).
    """
    if length is None:
        length = buffer_length(q)
    reach = _Reach(q, sigma)
    checked = bad = 0
    for m in range(1, 6):
        for v in itertools.product(range(q), repeat=m):
            v = bytes(v)
            if not is_irreducible(v):
                continue
            checked += 1
            if not reach.can(v, length + len(sigma)):
                bad += 1
    return checked, bad
