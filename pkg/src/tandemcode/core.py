"""Sequence algebra for short tandem duplications.

Sequences are ``bytes`` objects holding one symbol per byte, so slicing,
hashing and comparison run at C speed.  The alphabet size ``q`` travels
separately as an argument wherever it matters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Seq = bytes

MAX_DUP = 3
EDIT_KINDS = ("sub", "ins", "del")


class SequenceError(ValueError):
    """Raised for malformed sequences or out-of-range operations."""


def seq(symbols: Iterable[int] | str) -> Seq:
    """Build a sequence from an iterable of ints or a digit string."""
    if isinstance(symbols, str):
        return bytes(int(c) for c in symbols)
    return bytes(symbols)


def check_alphabet(s: Seq, q: int) -> None:
    if q < 2 or q > 256:
        raise SequenceError(f"alphabet size {q} unsupported")
    if s and max(s) >= q:
        raise SequenceError(f"symbol {max(s)} outside alphabet of size {q}")


@dataclass(frozen=True)
class Duplication:
    pos: int
    len: int


@dataclass(frozen=True)
class Edit:
    kind: str
    pos: int
    symbol: int = 0


# -- repeats and roots ------------------------------------------------------


def find_shortest_repeat(s: Seq) -> Optional[tuple[int, int]]:
    """Shortest repeat ``vv`` with ``|v| <= 3``; leftmost among equals.

    Returns ``(pos, len)`` with ``len = |v|`` or ``None`` if ``s`` is
    irreducible.
    """
    n = len(s)
    for k in range(1, MAX_DUP + 1):
        for i in range(n - 2 * k + 1):
            if s[i:i + k] == s[i + k:i + 2 * k]:
                return i, k
    return None


def _repeat_ending_at(buf, end: int) -> int:
    # length of a repeat vv ending at buf[end-1], 0 if none
    for k in range(1, MAX_DUP + 1):
        if end >= 2 * k and buf[end - k:end] == buf[end - 2 * k:end - k]:
            return k
    return 0


def is_irreducible(s: Seq) -> bool:
    n = len(s)
    for i in range(1, n):
        if s[i] == s[i - 1]:
            return False
    for i in range(3, n):
        if s[i] == s[i - 2] and s[i - 1] == s[i - 3]:
            return False
    for i in range(5, n):
        if s[i - 2:i + 1] == s[i - 5:i - 2]:
            return False
    return True


def dedup_root(s: Seq) -> Seq:
    """Unique duplication root of ``s``.

    Scans left to right keeping an irreducible stack.  A repeat can only
    appear at the top after a push; removing its second half leaves a
    prefix of an earlier irreducible stack, so one check per push is
    enough.  Uniqueness of the root makes the removal order irrelevant.
    """
    buf = bytearray()
    for c in s:
        buf.append(c)
        k = _repeat_ending_at(buf, len(buf))
        if k:
            del buf[-k:]
    return bytes(buf)


def dedup_splice(head: Seq, middle: Seq, tail: Seq) -> Seq:
    """``dedup_root(head + middle + tail)`` for irreducible ``head`` and ``tail``.

    Once five stack symbols agree with the untouched part of ``tail``
    no further repeat can form, so the rest is appended wholesale.
    """
    buf = bytearray(head)
    for c in middle:
        buf.append(c)
        k = _repeat_ending_at(buf, len(buf))
        if k:
            del buf[-k:]
    n = len(tail)
    for j in range(n):
        if j >= 5 and len(buf) >= 5 and buf[-5:] == tail[j - 5:j]:
            buf += tail[j:]
            return bytes(buf)
        buf.append(tail[j])
        k = _repeat_ending_at(buf, len(buf))
        if k:
            del buf[-k:]
    return bytes(buf)


def dedup_root_naive(s: Seq) -> Seq:
    """Root by repeatedly deleting the second half of the leftmost shortest repeat."""
    while True:
        r = find_shortest_repeat(s)
        if r is None:
            return s
        i, k = r
        s = s[:i + k] + s[i + 2 * k:]


def dedup_root_random(s: Seq, rng: random.Random) -> Seq:
    """Root obtained by removing a uniformly chosen repeat at every step."""
    while True:
        reps = [(i, k) for k in range(1, MAX_DUP + 1)
                for i in range(len(s) - 2 * k + 1)
                if s[i:i + k] == s[i + k:i + 2 * k]]
        if not reps:
            return s
        i, k = rng.choice(reps)
        s = s[:i + k] + s[i + 2 * k:]


# -- duplications and edits ------------------------------------------------


def apply_duplication(s: Seq, d: Duplication) -> Seq:
    if not 1 <= d.len <= MAX_DUP or d.pos < 0 or d.pos + d.len > len(s):
        raise SequenceError(f"duplication {d} out of bounds for length {len(s)}")
    end = d.pos + d.len
    return s[:end] + s[d.pos:end] + s[end:]


def apply_edit(s: Seq, e: Edit) -> Seq:
    n = len(s)
    if e.kind == "sub":
        if not 0 <= e.pos < n:
            raise SequenceError(f"substitution at {e.pos} out of bounds")
        if s[e.pos] == e.symbol:
            raise SequenceError("substitution must change the symbol")
        return s[:e.pos] + bytes((e.symbol,)) + s[e.pos + 1:]
    if e.kind == "ins":
        if not 0 <= e.pos <= n:
            raise SequenceError(f"insertion at {e.pos} out of bounds")
        return s[:e.pos] + bytes((e.symbol,)) + s[e.pos:]
    if e.kind == "del":
        if not 0 <= e.pos < n:
            raise SequenceError(f"deletion at {e.pos} out of bounds")
        return s[:e.pos] + s[e.pos + 1:]
    raise SequenceError(f"unknown edit kind {e.kind!r}")


def inverse_edit(s: Seq, e: Edit) -> Edit:
    """The edit undoing ``e`` when applied to ``apply_edit(s, e)``."""
    if e.kind == "sub":
        return Edit("sub", e.pos, s[e.pos])
    if e.kind == "ins":
        return Edit("del", e.pos)
    return Edit("ins", e.pos, s[e.pos])


# -- channel ---------------------------------------------------------------


@dataclass(frozen=True)
class ChannelSpec:
    """Random realization of a duplication channel with a few edits.

    The number of duplications is uniform in ``[0, max_dups]``; exactly
    ``num_edits`` edits are applied, their kinds uniform over
    ``edit_kinds``.  All events are interleaved in a uniformly random
    order and positions are uniform over the current sequence.
    """

    max_dups: int = 0
    num_edits: int = 0
    edit_kinds: tuple[str, ...] = ("sub",)
    seed: int = 0

    def __post_init__(self):
        if self.max_dups < 0 or self.num_edits < 0:
            raise SequenceError("channel budgets must be non-negative")
        bad = set(self.edit_kinds) - set(EDIT_KINDS)
        if bad or (self.num_edits and not self.edit_kinds):
            raise SequenceError(f"bad edit kinds {self.edit_kinds}")


@dataclass
class ChannelTrace:
    output: Seq
    events: list = field(default_factory=list)


def run_channel_traced(x: Seq, spec: ChannelSpec, q: int) -> ChannelTrace:
    rng = random.Random(spec.seed)
    ndups = rng.randint(0, spec.max_dups)
    plan = ["dup"] * ndups + ["edit"] * spec.num_edits
    rng.shuffle(plan)
    s = x
    events: list = []
    for what in plan:
        n = len(s)
        if what == "dup":
            if n == 0:
                continue
            k = rng.randint(1, min(MAX_DUP, n))
            d = Duplication(rng.randrange(n - k + 1), k)
            s = apply_duplication(s, d)
            events.append(d)
            continue
        kind = rng.choice(spec.edit_kinds)
        if kind != "ins" and n == 0:
            kind = "ins"
        if kind == "sub":
            pos = rng.randrange(n)
            sym = rng.randrange(q - 1)
            if sym >= s[pos]:
                sym += 1
            e = Edit("sub", pos, sym)
        elif kind == "ins":
            e = Edit("ins", rng.randrange(n + 1), rng.randrange(q))
        else:
            e = Edit("del", rng.randrange(n))
        s = apply_edit(s, e)
        events.append(e)
    return ChannelTrace(s, events)


def run_channel(x: Seq, spec: ChannelSpec, q: int = 4) -> Seq:
    return run_channel_traced(x, spec, q).output


# -- bounded substring-edit distance --------------------------------------


def _lcp(a: Seq, b: Seq) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def _one_edit(a: Seq, b: Seq, L: int) -> bool:
    d = _lcp(a, b)
    cap = min(len(a), len(b)) - d
    e = 0
    while e < cap and a[-1 - e] == b[-1 - e]:
        e += 1
    return len(a) - d - e <= L and len(b) - d - e <= L


def check_substring_edits(a: Seq, b: Seq, p: int, L: int) -> bool:
    """True if at most ``p`` replacements ``u -> v`` with ``|u|, |v| <= L``
    turn ``a`` into ``b``.

    The search is constructive: the leftmost pending edit is placed at
    most ``L - 1`` positions before the first disagreement and writes
    the matching part of ``b``.  The last edit is decided exactly.
    """
    if p < 0 or L < 1:
        raise ValueError("need p >= 0 and L >= 1")
    return _check(a, b, p, L, {})


def _check(a: Seq, b: Seq, p: int, L: int, memo: dict) -> bool:
    if a == b:
        return True
    if p == 0 or abs(len(a) - len(b)) > p * L:
        return False
    if p == 1:
        return _one_edit(a, b, L)
    key = (a, p)
    if key in memo:
        return memo[key]
    d = _lcp(a, b)
    found = False
    for i in range(d, max(0, d - L + 1) - 1, -1):
        for lu in range(0, min(L, len(a) - i) + 1):
            rest = a[i + lu:]
            for lv in range(0, min(L, len(b) - i) + 1):
                if lu == 0 and lv == 0:
                    continue
                nxt = b[:i + lv] + rest
                if _check(nxt, b, p - 1, L, memo):
                    found = True
                    break
            if found:
                break
        if found:
            break
    memo[key] = found
    return found
