"""Automaton for the duplication descendants of 01234 and the window tables
built on top of it.

The language of all strings reachable from ``01234`` by short tandem
duplications is regular.  ``FA5`` is its hand-written recognizer; every
other object in this module is derived from it by fixpoint searches that
track roots instead of raw strings (the root of ``u a`` only depends on
the root of ``u``).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

from .core import Seq, dedup_root, is_irreducible

START = "Start"
ACCEPT = "S9"
ROOT_CAP = 16

# (from, label, to)
_EDGES = (
    ("Start", 0, "S1"),
    ("S1", 0, "S1"), ("S1", 1, "S2"),
    ("S2", 1, "S2"), ("S2", 2, "S3"), ("S2", 0, "T2"),
    ("T2", 0, "T2"), ("T2", 1, "S2"),
    ("S3", 2, "S3"), ("S3", 0, "S4"), ("S3", 1, "T3"), ("S3", 3, "S6"),
    ("T3", 1, "T3"), ("T3", 2, "S3"),
    ("S4", 1, "S2"), ("S4", 0, "S4"), ("S4", 2, "T4"),
    ("T4", 2, "T4"), ("T4", 0, "S4"),
    ("S6", 1, "S7"), ("S6", 3, "S6"), ("S6", 2, "T6"), ("S6", 4, "S9"),
    ("T6", 2, "T6"), ("T6", 3, "S6"),
    ("S7", 2, "S5"), ("S7", 1, "S7"), ("S7", 3, "T7"),
    ("T7", 3, "T7"), ("T7", 1, "S7"),
    ("S5", 3, "S6"), ("S5", 2, "S5"), ("S5", 1, "T5"),
    ("T5", 1, "T5"), ("T5", 2, "S5"),
    ("S9", 2, "S10"), ("S9", 4, "S9"), ("S9", 3, "T9"),
    ("T9", 3, "T9"), ("T9", 4, "S9"),
    ("S10", 3, "S8"), ("S10", 2, "S10"), ("S10", 4, "T10"),
    ("T10", 4, "T10"), ("T10", 2, "S10"),
    ("S8", 4, "S9"), ("S8", 3, "S8"), ("S8", 2, "T8"),
    ("T8", 2, "T8"), ("T8", 3, "S8"),
)


class AutomatonError(RuntimeError):
    pass


@dataclass(frozen=True)
class Fa5:
    states: tuple[str, ...]
    edges: tuple[tuple[str, int, str], ...]
    start: str = START
    accept: str = ACCEPT

    def delta(self) -> dict:
        out: dict = {}
        for a, w, b in self.edges:
            if (a, w) in out:
                raise AutomatonError(f"nondeterministic at {(a, w)}")
            out[a, w] = b
        return out

    def accepts(self, s: Seq) -> bool:
        d = _delta()
        state = self.start
        for c in s:
            state = d.get((state, c))
            if state is None:
                return False
        return state == self.accept


def build_fa5() -> Fa5:
    states = []
    for a, _, b in _EDGES:
        for s in (a, b):
            if s not in states:
                states.append(s)
    return Fa5(tuple(states), _EDGES)


@lru_cache(maxsize=None)
def _delta() -> dict:
    return build_fa5().delta()


def _fixpoint(seeds, steps) -> dict:
    """Generic closure over (state, root) pairs."""
    seen = set(seeds)
    todo = list(seeds)
    while todo:
        state, root = todo.pop()
        for nstate, nroot in steps(state, root):
            if len(nroot) > ROOT_CAP:
                raise AutomatonError("root length cap exceeded; check the edge list")
            if (nstate, nroot) not in seen:
                seen.add((nstate, nroot))
                todo.append((nstate, nroot))
    out: dict = {}
    for state, root in seen:
        out.setdefault(state, set()).add(root)
    return out


@lru_cache(maxsize=None)
def prefix_roots_by_state() -> dict:
    """Roots of labels of paths Start -> state, per state."""
    fa = build_fa5()
    fwd: dict = {}
    for a, w, b in fa.edges:
        fwd.setdefault(a, []).append((w, b))

    def steps(state, root):
        for w, b in fwd.get(state, ()):
            yield b, dedup_root(root + bytes((w,)))

    res = _fixpoint([(fa.start, b"")], steps)
    return {k: frozenset(v) for k, v in res.items()}


@lru_cache(maxsize=None)
def suffix_roots_by_state() -> dict:
    """Roots of labels of paths state -> S9, per state."""
    fa = build_fa5()
    back: dict = {}
    for a, w, b in fa.edges:
        back.setdefault(b, []).append((w, a))

    def steps(state, root):
        for w, a in back.get(state, ()):
            yield a, dedup_root(bytes((w,)) + root)

    res = _fixpoint([(fa.accept, b"")], steps)
    return {k: frozenset(v) for k, v in res.items()}


def enumerate_RU() -> frozenset:
    return frozenset().union(*prefix_roots_by_state().values())


def apply_h(s: Seq) -> Seq:
    """Reverse the string and map each symbol a to 4 - a."""
    if any(c > 4 for c in s):
        raise ValueError("h is defined on the alphabet {0,...,4}")
    return bytes(4 - c for c in reversed(s))


def enumerate_RV() -> frozenset:
    direct = frozenset().union(*suffix_roots_by_state().values())
    mirrored = frozenset(apply_h(u) for u in enumerate_RU())
    if direct != mirrored:
        raise AutomatonError("suffix roots disagree with the mirror of prefix roots")
    return direct


# -- dominance -----------------------------------------------------------


def find_dominance(s: Seq, t: Seq) -> Optional[dict]:
    """Map eta with eta(s) = t symbol-wise, or None."""
    if len(s) != len(t):
        raise ValueError("dominance needs equal lengths")
    eta: dict = {}
    for a, b in zip(s, t):
        if eta.setdefault(a, b) != b:
            return None
    return eta


# -- window roots -----------------------------------------------------------

STAR = 255  # stands for a substituted symbol outside 0..4


@lru_cache(maxsize=None)
def _window_templates() -> frozenset:
    """R(ru w' rv) with w' in {0..4} minus the edge label, or the generic
    fresh symbol ``STAR``.  Any fresh symbol behaves like any other, so this
    finite set describes the window roots for every alphabet size."""
    pre = prefix_roots_by_state()
    suf = suffix_roots_by_state()
    out = set()
    for a, w, b in build_fa5().edges:
        for ru in pre.get(a, ()):
            for rv in suf.get(b, ()):
                for w2 in (0, 1, 2, 3, 4, STAR):
                    if w2 != w:
                        out.add(dedup_root(ru + bytes((w2,)) + rv))
    return frozenset(out)


def window_roots_01234(q_hat: int) -> frozenset:
    """Superset of the roots of one substitution applied to any duplication
    descendant of 01234, substituted symbols drawn from an alphabet of
    size ``q_hat``."""
    if q_hat < 5:
        raise ValueError("q_hat must be at least 5")
    out = set()
    for r in _window_templates():
        if STAR in r:
            i = r.index(STAR)
            for a in range(5, q_hat):
                out.add(r[:i] + bytes((a,)) + r[i + 1:])
        else:
            out.add(r)
    return frozenset(out)


# -- per-window tables ---------------------------------------------------

LEFT_PAD = 2


def sentinels(q: int) -> tuple[int, int, int, int]:
    """Two reserved symbols per side, outside the alphabet."""
    return q, q + 1, q + 2, q + 3


def padded(x: Seq, q: int) -> Seq:
    l1, l2, r1, r2 = sentinels(q)
    return bytes((l1, l2)) + x + bytes((r1, r2))


@lru_cache(maxsize=None)
def window_entry(window: Seq, q: int) -> frozenset:
    """Replacement strings for one padded 5-window.

    Every template is pushed through the map 0..4 -> window symbols, with
    the fresh symbol sent to each alphabet symbol in turn.  Images that
    move or duplicate a sentinel are dropped; sentinels are then stripped,
    so an entry replaces only the alphabet part of the window.
    """
    if len(window) != 5:
        raise ValueError("windows have length 5")
    sent = set(sentinels(q))
    # leading/trailing sentinel counts fix where the real symbols sit
    lead = 0
    while lead < 5 and window[lead] in sent:
        lead += 1
    trail = 0
    while trail < 5 - lead and window[4 - trail] in sent:
        trail += 1
    pre_s = window[:lead]
    post_s = window[5 - trail:]
    out = set()
    eta = list(window)
    for r in _window_templates():
        star = r.find(STAR)
        choices = range(q) if star >= 0 else (None,)
        for a in choices:
            img = bytes(a if c == STAR else eta[c] for c in r)
            cnt = sum(1 for c in img if c in sent)
            if cnt != lead + trail:
                continue
            if img[:lead] != pre_s or img[len(img) - trail:] != post_s:
                continue
            core = img[lead:len(img) - trail]
            out.add(dedup_root(core))
    return frozenset(out)


def window_bounds(n: int, i: int) -> tuple[int, int]:
    """Span of x covered by padded window ``i`` (centered at x[i])."""
    return max(0, i - 2), min(n, i + 3)


def window_at(x: Seq, q: int, i: int) -> Seq:
    return padded(x, q)[i:i + 5]


def all_windows(q: int) -> list:
    """Every padded window that can occur around an irreducible string."""
    l1, l2, r1, r2 = sentinels(q)
    wins = set()
    for n in range(1, 6):
        for x in itertools.product(range(q), repeat=n):
            x = bytes(x)
            if not is_irreducible(x):
                continue
            p = padded(x, q)
            for i in range(n):
                wins.add(p[i:i + 5])
    return sorted(wins)


@dataclass
class WindowRootTable:
    q: int
    entries: dict

    def __getitem__(self, window: Seq) -> frozenset:
        e = self.entries.get(window)
        if e is None:
            e = window_entry(window, self.q)
            self.entries[window] = e
        return e


TABLE_FORMAT = "tandemcode-window-table v1"


def build_window_root_table(q: int) -> WindowRootTable:
    if q < 3:
        raise ValueError("q must be at least 3")
    return WindowRootTable(q, {w: window_entry(w, q) for w in all_windows(q)})


def _enc(s: Seq) -> str:
    return ",".join(map(str, s)) if s else "-"


def _dec(t: str) -> Seq:
    return b"" if t == "-" else bytes(int(c) for c in t.split(","))


def save_table(table: WindowRootTable, path: os.PathLike) -> None:
    lines = [f"# {TABLE_FORMAT} q={table.q}"]
    for w in sorted(table.entries):
        lines.append(_enc(w) + "\t" + " ".join(sorted(_enc(e) for e in table.entries[w])))
    Path(path).write_text("\n".join(lines) + "\n")


def load_table(path: os.PathLike, q: int) -> Optional[WindowRootTable]:
    """Load a cached table; None when the header does not match."""
    try:
        text = Path(path).read_text().splitlines()
    except OSError:
        return None
    if not text or text[0] != f"# {TABLE_FORMAT} q={q}":
        return None
    entries = {}
    for line in text[1:]:
        w, _, rest = line.partition("\t")
        entries[_dec(w)] = frozenset(_dec(t) for t in rest.split()) if rest else frozenset()
    return WindowRootTable(q, entries)
