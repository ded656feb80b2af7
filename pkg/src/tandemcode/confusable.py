"""Computable supersets of confusable sets.

Two irreducible strings are confusable when a duplication channel with a
few substitutions can turn both into the same root.  Everything here is
built from one move, :func:`step_substitute`: replace the 5-window around
one symbol by an entry of the window table and take the root.  Composing
the move ``p`` times from ``x`` covers every root a channel with ``p``
substitutions can produce, and by symmetry of the channel the same
closure run backwards recovers the candidate inputs.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .automaton import (
    WindowRootTable,
    build_window_root_table,
    load_table,
    padded,
    save_table,
    sentinels,
    window_bounds,
)
from .core import MAX_DUP, Seq, dedup_root, dedup_splice, is_irreducible

L_DEFAULT = 17
WORK_LIMIT = 10 ** 5


class WorkLimitExceeded(RuntimeError):
    """Enumeration refused because it would exceed the configured budget."""


def step_bound(q: int, n: int) -> int:
    return 968 * q * n + 1


def superset_A_bound(q: int, n: int, p: int, L: int = L_DEFAULT) -> int:
    return (968 * q * (n + p * L) + 1) ** (2 * p)


def suffix_bound(q: int, n: int, p: int, L: int = L_DEFAULT) -> int:
    return q ** (4 * p * L) * (n + p * L) ** (2 * p)


def anchored_bound(q: int, n: int, p: int, L: int = L_DEFAULT) -> int:
    return superset_A_bound(q, n, p, L) * (2 * p * L + 1) ** 2


@dataclass
class ConfusableReport:
    x: Seq
    p: int
    variant: str
    members: frozenset
    bound: int
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.x in self.members:
            raise AssertionError("x must not be a member of its own confusable set")

    def to_json(self) -> str:
        doc = {
            "x": list(self.x),
            "p": self.p,
            "variant": self.variant,
            "bound": str(self.bound),
            "members": sorted(list(m) for m in self.members),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- the window-substitution move --------------------------------------------


def step_substitute_py(x: Seq, table: WindowRootTable) -> set:
    """Reference implementation of one substitution move (slow, plain Python)."""
    n = len(x)
    q = table.q
    pad = padded(x, q)
    out = {x}
    for i in range(n):
        lo, hi = window_bounds(n, i)
        head, tail = x[:lo], x[hi:]
        for e in table[pad[i:i + 5]]:
            out.add(dedup_splice(head, e, tail))
    return out


def unique_rows(arr: np.ndarray) -> np.ndarray:
    """Distinct rows of a uint8 matrix (order not preserved).

    Rows are packed into uint64 words so the sort runs on integers;
    ``np.unique(axis=0)`` sorts opaque records and is far slower.
    """
    rows, width = arr.shape
    if rows <= 1 or width == 0:
        return arr[:min(rows, 1)]
    w8 = -(-width // 8) * 8
    if w8 != width:
        pad = np.zeros((rows, w8), dtype=np.uint8)
        pad[:, :width] = arr
    else:
        pad = np.ascontiguousarray(arr)
    keys = pad.view(np.uint64)
    if keys.shape[1] == 1:
        _, idx = np.unique(keys[:, 0], return_index=True)
        return arr[idx]
    order = np.lexsort(keys.T[::-1])
    k = keys[order]
    keep = np.ones(rows, dtype=bool)
    keep[1:] = (k[1:] != k[:-1]).any(axis=1)
    return arr[order[keep]]


class StepEngine:
    """Compiled window-substitution closure for one alphabet size."""

    def __init__(self, table: WindowRootTable):
        self.q = q = table.q
        self.table = table
        self.base = q + 4
        self.sent = np.array(sentinels(q), dtype=np.int64)
        ncodes = self.base ** 5
        offs = np.zeros(ncodes + 1, dtype=np.int64)
        per_code: dict = {}
        for w, ents in table.entries.items():
            code = 0
            for c in w:
                code = code * self.base + c
            # longest first, so a length filter could stop early
            per_code[code] = sorted(ents, key=lambda e: (-len(e), e))
        counts = np.zeros(ncodes, dtype=np.int64)
        for code, ents in per_code.items():
            counts[code] = len(ents)
        offs[1:] = np.cumsum(counts)
        flat = []
        eoffs = [0]
        for code in sorted(per_code):
            for e in per_code[code]:
                flat.append(e)
                eoffs.append(eoffs[-1] + len(e))
        self.offs = offs
        self.eoffs = np.array(eoffs, dtype=np.int64)
        self.ents = np.frombuffer(b"".join(flat), dtype=np.uint8).copy()
        self.max_entry = max((len(e) for e in flat), default=0)

    def step_set(self, seqs: Iterable[Seq], target: Optional[int] = None,
                 keep_sources: bool = True, chunk: int = 512,
                 prefix: Optional[int] = None) -> set:
        """Union of one move applied to every sequence.

        With ``target`` set only results of that length are kept; with
        ``prefix`` set results are cut to that many symbols (shorter ones
        dropped).  Sources pass through unchanged (identity move) when
        ``keep_sources`` is true and they satisfy the same filter.
        """
        if target is not None and prefix is not None:
            raise ValueError("target and prefix are exclusive")
        seqs = list(seqs)
        if prefix == 0:
            return {b""} if seqs else set()
        if target == 0:
            return {b""} if keep_sources and b"" in seqs else set()
        out: set = set()
        if keep_sources:
            for s in seqs:
                if target is not None:
                    if len(s) == target:
                        out.add(s)
                elif prefix is not None:
                    if len(s) >= prefix:
                        out.add(s[:prefix])
                else:
                    out.add(s)
        seqs = [s for s in seqs if s]
        tgt = -1 if target is None else target
        pre = -1 if prefix is None else prefix
        for k in range(0, len(seqs), chunk):
            part = seqs[k:k + chunk]
            mlen = max(len(s) for s in part)
            rows = np.full((len(part), mlen), kernels.PAD, dtype=np.uint8)
            lens = np.empty(len(part), dtype=np.int64)
            for r, s in enumerate(part):
                rows[r, :len(s)] = np.frombuffer(s, dtype=np.uint8)
                lens[r] = len(s)
            total = kernels.count_splices(rows, lens, self.offs, self.base, self.sent)
            if target is not None:
                width = target
            elif prefix is not None:
                width = prefix
            else:
                width = mlen + self.max_entry
            res = np.empty((max(total, 1), width), dtype=np.uint8)
            rlens = np.empty(max(total, 1), dtype=np.int64)
            w, dropped = kernels.step_rows(rows, lens, self.offs, self.eoffs, self.ents,
                                           self.base, self.sent, tgt, pre, width, res, rlens)
            if dropped:
                raise AssertionError("result wider than the allocated row")
            if w == 0:
                continue
            res = res[:w]
            rlens = rlens[:w]
            if target is not None or prefix is not None:
                uniq = unique_rows(res)
                out.update(row.tobytes() for row in uniq)
            else:
                for ln in np.unique(rlens):
                    sub = unique_rows(res[rlens == ln, :ln])
                    out.update(row.tobytes() for row in sub)
        return out

    def step(self, x: Seq) -> set:
        return self.step_set([x])

    def closure(self, start: Iterable[Seq], steps: int, target: Optional[int] = None,
                prefix: Optional[int] = None) -> set:
        """``steps`` moves from ``start``; the last move is filtered by
        ``target`` (exact length) or ``prefix`` (cut length)."""
        frontier = set(start)
        if steps == 0:
            if target is not None:
                return {s for s in frontier if len(s) == target}
            if prefix is not None:
                return {s[:prefix] for s in frontier if len(s) >= prefix}
            return frontier
        for k in range(steps):
            last = k == steps - 1
            frontier = self.step_set(frontier, target if last else None,
                                     prefix=prefix if last else None)
        return frontier


CACHE_DIR = Path.home() / ".cache" / "tandemcode"


@lru_cache(maxsize=None)
def table_for(q: int, cache: bool = True) -> WindowRootTable:
    """Window table for ``q``, read from or written to the on-disk cache."""
    path = CACHE_DIR / f"window-table-q{q}.txt"
    if cache:
        table = load_table(path, q)
        if table is not None:
            return table
    table = build_window_root_table(q)
    if cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            save_table(table, tmp)
            tmp.replace(path)
        except OSError:
            pass
    return table


@lru_cache(maxsize=None)
def engine_for(q: int) -> StepEngine:
    return StepEngine(table_for(q))


def step_substitute(x: Seq, table: WindowRootTable | int) -> set:
    """All roots one window substitution can reach from ``x`` (x included)."""
    if isinstance(table, int):
        return engine_for(table).step(x)
    if table is table_for(table.q):
        return engine_for(table.q).step(x)
    return StepEngine(table).step(x)


# -- construction-A supersets --------------------------------------------------


def confusable_superset_A(x: Seq, p: int, q: int = 4, L: int = L_DEFAULT) -> ConfusableReport:
    if not is_irreducible(x):
        raise ValueError("x must be irreducible")
    n = len(x)
    bound = superset_A_bound(q, n, p, L)
    if p == 0:
        return ConfusableReport(x, p, "A", frozenset(), bound)
    members = engine_for(q).closure([x], 2 * p, target=n)
    members = frozenset(m for m in members if m != x and is_irreducible(m))
    return ConfusableReport(x, p, "A", members, bound)


def decode_candidates_A(v: Seq, p: int, n: int, q: int = 4) -> set:
    """Length-``n`` inputs whose channel outputs can have root ``v``."""
    return {z for z in engine_for(q).closure([v], p, target=n) if is_irreducible(z)}


# -- construction-B supersets --------------------------------------------------


def irreducible_extensions(s: Seq, q: int, max_len: int) -> list:
    """All e with |e| <= max_len and s+e irreducible (e = empty included)."""
    out = [b""]
    frontier = [bytearray(s)]
    for _ in range(max_len):
        nxt = []
        for t in frontier:
            for a in range(q):
                t.append(a)
                if _tail_ok(t):
                    nxt.append(bytearray(t))
                    out.append(bytes(t[len(s):]))
                t.pop()
        frontier = nxt
    return out


def _tail_ok(t) -> bool:
    n = len(t)
    for k in range(1, MAX_DUP + 1):
        if n >= 2 * k and t[n - k:] == t[n - 2 * k:n - k]:
            return False
    return True


def truncations(seqs: Iterable[Seq], max_cut: int, keep_len: Optional[int] = None) -> set:
    out = set()
    for v in seqs:
        if keep_len is not None:
            if len(v) >= keep_len:
                out.add(v[:keep_len])
            continue
        for j in range(min(max_cut, len(v)) + 1):
            out.add(v[:len(v) - j])
    return out


def edit_step(seqs: Iterable[Seq], q: int, L: int, target: Optional[int] = None) -> set:
    """Irreducible strings one substring edit (max(|u|,|v|) <= L) away.

    Sources are included.  This is the root-level edit model; the window
    move covers every edit a single substitution can cause, but at a
    reduced ``L`` the two relations differ, so strict decoding at test
    scale can use both.
    """
    reps = [bytes(v) for k in range(L + 1) for v in itertools.product(range(q), repeat=k)]
    by_len: dict = {}
    for v in reps:
        by_len.setdefault(len(v), []).append(v)
    out = set()
    for s in seqs:
        n = len(s)
        if target is None or n == target:
            out.add(s)
        for i in range(n + 1):
            for lu in range(0, min(L, n - i) + 1):
                u = s[i:i + lu]
                head, tail = s[:i], s[i + lu:]
                lens = range(L + 1) if target is None else [target - n + lu]
                for lv in lens:
                    if not 0 <= lv <= L or max(lu, lv) == 0:
                        continue
                    for v in by_len[lv]:
                        if v == u:
                            continue
                        z = head + v + tail
                        if z not in out and _window_irreducible(z, i, i + lv):
                            out.add(z)
    return out


def _window_irreducible(z: Seq, lo: int, hi: int) -> bool:
    # z is irreducible outside [lo, hi); only repeats touching it can appear
    return is_irreducible(z[max(0, lo - 5):hi + 5])


class MoveSet:
    """Closure under window moves, substring-edit moves, or both."""

    KINDS = ("window", "edit", "both")

    def __init__(self, q: int, kind: str = "window", L: int = L_DEFAULT):
        if kind not in self.KINDS:
            raise ValueError(f"unknown move kind {kind!r}")
        self.q, self.kind, self.L = q, kind, L

    def step_set(self, seqs: Iterable[Seq], target: Optional[int] = None) -> set:
        seqs = set(seqs)
        out: set = set()
        if self.kind in ("window", "both"):
            out |= engine_for(self.q).step_set(seqs, target)
        if self.kind in ("edit", "both"):
            out |= edit_step(seqs, self.q, self.L, target)
        return out

    def closure(self, start: Iterable[Seq], steps: int, target: Optional[int] = None) -> set:
        frontier = set(start)
        if steps == 0:
            return {s for s in frontier if target is None or len(s) == target}
        for k in range(steps):
            frontier = self.step_set(frontier, target if k == steps - 1 else None)
        return frontier


def strict_candidates(s_set: Iterable[Seq], p: int, n: int, q: int, L: int,
                      moves: str = "window") -> set:
    """Inputs reachable from prefixes by suffix extension then ``p`` moves."""
    ext = set()
    for s in s_set:
        for e in irreducible_extensions(s, q, 2 * p * L):
            ext.add(s + e)
    ms = MoveSet(q, moves, L)
    return {z for z in ms.closure(ext, p, target=n) if is_irreducible(z)}


def anchored_candidates(s_set: Iterable[Seq], p: int, n: int, tail: Seq, q: int) -> set:
    """Inputs ending in ``tail`` whose head is a prefix of a ``p``-move image."""
    k = n - len(tail)
    if k <= 0:
        return {tail[-n:]} if n else {b""}
    heads = engine_for(q).closure(s_set, p, prefix=k)
    out = set()
    for h in heads:
        z = h + tail
        # only the junction can hold a repeat
        if is_irreducible(z[max(0, k - 5):k + 6]):
            out.add(z)
    return out


def tail_length(p: int, L: int = L_DEFAULT) -> int:
    return 3 * p * L


def prefix_set(x: Seq, p: int, q: int, L: int, moves: str = "window") -> set:
    """Every (n - pL)-prefix a decoder can see: p moves, then a cut."""
    keep = len(x) - p * L
    if keep < 0:
        return {b""}
    if moves == "window":
        return engine_for(q).closure([x], p, prefix=keep)
    return {v[:keep] for v in MoveSet(q, moves, L).closure([x], p) if len(v) >= keep}


def confusable_superset_B(x: Seq, p: int, q: int = 4, L: int = L_DEFAULT,
                          mode: str = "strict", tail: Optional[Seq] = None,
                          work_limit: int = WORK_LIMIT, moves: str = "window") -> ConfusableReport:
    if not is_irreducible(x):
        raise ValueError("x must be irreducible")
    n = len(x)
    if mode == "strict":
        bound = suffix_bound(q, n, p, L)
        if p == 0:
            return ConfusableReport(x, p, "B", frozenset(), bound)
        if q ** (2 * p * L) > work_limit:
            raise WorkLimitExceeded(
                f"strict suffix enumeration needs q^(2pL) = {q}^{2 * p * L} extensions")
        v_set = MoveSet(q, moves, L).closure([x], p)
        s_set = truncations(v_set, 2 * p * L)
        members = strict_candidates(s_set, p, n, q, L, moves)
        members.discard(x)
        return ConfusableReport(x, p, "B", frozenset(members), bound,
                                {"prefixes": len(s_set)})
    if mode == "anchored":
        want = x[max(0, n - tail_length(p, L)):]
        if tail is None:
            tail = want
        if tail != want:
            raise ValueError("anchored mode needs the last 3pL symbols of x as tail")
        bound = anchored_bound(q, n, p, L)
        if p == 0 or n <= len(tail):
            return ConfusableReport(x, p, "B-anchored", frozenset(), bound)
        s_set = prefix_set(x, p, q, L)
        members = anchored_candidates(s_set, p, n, tail, q)
        members.discard(x)
        return ConfusableReport(x, p, "B-anchored", frozenset(members), bound,
                                {"prefixes": len(s_set)})
    raise ValueError(f"unknown mode {mode!r}")


# -- brute-force oracles ---------------------------------------------------------


def _prefix_roots(s: Seq) -> list:
    buf = bytearray()
    out = [b""]
    for c in s:
        buf.append(c)
        for k in (1, 2, 3):
            m = len(buf)
            if m >= 2 * k and buf[m - k:] == buf[m - 2 * k:m - k]:
                del buf[-k:]
                break
        out.append(bytes(buf))
    return out


def duplication_descendants(x: Seq, dup_cap: int, limit: int = 2_000_000) -> set:
    everything = {x}
    level = {x}
    for _ in range(dup_cap):
        nxt = set()
        for s in level:
            n = len(s)
            for k in range(1, MAX_DUP + 1):
                for i in range(n - k + 1):
                    nxt.add(s[:i + k] + s[i:i + k] + s[i + k:])
        level = nxt - everything
        everything |= nxt
        if len(everything) > limit:
            raise WorkLimitExceeded(f"more than {limit} descendants")
    return everything


def channel_roots(x: Seq, p: int, dup_cap: int, q: int, limit: int = 2_000_000) -> frozenset:
    """Roots of every output with at most ``dup_cap`` duplications and at
    most ``p`` substitutions, by exhaustive enumeration.

    Duplications after the last substitution never change the root, and
    the root of ``u a v`` equals the root of ``R(u) a R(v)``, so each
    descendant only contributes (prefix root, symbol, suffix root) triples.
    """
    roots = {dedup_root(x)}
    if p == 0:
        return frozenset(roots)
    starts = {x}
    for _ in range(p):
        triples = set()
        for s in starts:
            for d in duplication_descendants(s, dup_cap, limit):
                pre = _prefix_roots(d)
                suf = _prefix_roots(d[::-1])
                m = len(d)
                for i in range(m):
                    triples.add((pre[i], d[i], suf[m - 1 - i]))
        new = set()
        for u, w, v in triples:
            rv = v[::-1]
            for a in range(q):
                if a != w:
                    new.add(dedup_root(u + bytes((a,)) + rv))
        roots |= new
        starts = new
    return frozenset(roots)


def brute_force_confusable_oracle(x: Seq, y: Seq, p: int, dup_cap: int = 4,
                                  q: int = 4, limit: int = 2_000_000) -> bool:
    if len(x) != len(y):
        raise ValueError("oracle compares strings of equal length")
    if x == y:
        return True
    return bool(channel_roots(x, p, dup_cap, q, limit) & channel_roots(y, p, dup_cap, q, limit))


# -- bounds -------------------------------------------------------------------


def gv_lower_bound(q: int, n: int, p: int, L: int = L_DEFAULT) -> Fraction:
    from .constrained import count_irr
    if q < 3:
        raise ValueError("q must be at least 3")
    return Fraction(count_irr(q, n), superset_A_bound(q, n, p, L))


def gv_log_size(q: int, n: int, p: int, L: int = L_DEFAULT) -> float:
    """log_q of the existence bound."""
    from .constrained import count_irr
    return (math.log(count_irr(q, n)) - math.log(superset_A_bound(q, n, p, L))) / math.log(q)
