"""Invariant suites shared by the CLI ``verify`` command and the tests.

Each suite yields ``Check`` results; a failing check carries the seed or
input that reproduces it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from . import automaton, constrained, core
from .rs import RSCode

RU_LITERAL = frozenset(core.seq(s) for s in (
    "", "0", "01", "01201", "012", "0120", "010", "012010", "0121", "01202", "0123",
    "01232", "01231", "012313", "012312", "0123121", "01234", "012343", "012342",
    "0123424", "0123423", "01234232",
))


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def _roots(trials: int, seed: int) -> Iterator[Check]:
    rng = random.Random(seed)
    bad = None
    for t in range(trials):
        n = rng.randrange(0, 40)
        s = bytes(rng.randrange(4) for _ in range(n))
        a = core.dedup_root_random(s, random.Random(seed * 7919 + t))
        b = core.dedup_root_random(s, random.Random(seed * 7919 + t + 10 ** 6))
        if a != b or a != core.dedup_root(s):
            bad = s.hex()
            break
    yield Check("root uniqueness", bad is None, f"counterexample {bad}" if bad else f"{trials} inputs")


def suite_core(seed: int = 0) -> Iterator[Check]:
    yield from _roots(2000, seed)
    rng = random.Random(seed)
    ok = True
    for t in range(300):
        x = core.dedup_root(bytes(rng.randrange(4) for _ in range(20)))
        y = core.run_channel(x, core.ChannelSpec(6, 0, ("sub",), seed + t), 4)
        if core.dedup_root(y) != x:
            ok = False
            break
    yield Check("duplications preserve the root", ok)


def suite_automaton(seed: int = 0) -> Iterator[Check]:
    ru = automaton.enumerate_RU()
    yield Check("|R(U)| = 22", len(ru) == 22, str(len(ru)))
    yield Check("R(U) equals the literal set", ru == RU_LITERAL,
                "" if ru == RU_LITERAL else str(sorted(ru ^ RU_LITERAL)))
    rv = automaton.enumerate_RV()
    yield Check("R(V) = h(R(U))", rv == frozenset(automaton.apply_h(u) for u in ru))


def suite_buffers(seed: int = 0, qs: tuple = (3, 4, 5, 6)) -> Iterator[Check]:
    depths = {3: 13, 4: 7, 5: 6, 6: 5}
    for q in qs:
        checked, bad = constrained.buffer_exists_everywhere(q, depths[q])
        yield Check(f"buffers q={q} length {depths[q]}", bad == 0,
                    f"{checked} contexts, {bad} without a buffer")


def suite_constrained(seed: int = 0) -> Iterator[Check]:
    g = constrained.growth_rate(4)
    yield Check("growth rate q=4", abs(g - 2.6590) <= 5e-5, f"{g:.6f}")
    ratio = constrained.count_irr(4, 41) / constrained.count_irr(4, 40)
    yield Check("count ratio near growth rate", abs(ratio - g) <= 1e-2, f"{ratio:.6f}")
    rng = random.Random(seed)
    ok = True
    for _ in range(200):
        n = rng.randrange(1, 30)
        i = rng.randrange(constrained.count_irr(4, n))
        if constrained.rank_irr(constrained.unrank_irr(4, n, i), 4) != i:
            ok = False
    yield Check("rank inverts unrank", ok)


def suite_rs(seed: int = 0) -> Iterator[Check]:
    code = RSCode(15, 3, 4)
    rng = random.Random(seed)
    ok = True
    for _ in range(500):
        msg = [rng.randrange(16) for _ in range(3)]
        cw = code.encode(msg)
        t = rng.randrange(0, 7)
        e = rng.randrange(0, 13 - 2 * t)
        pos = rng.sample(range(15), t + e)
        word: list = list(cw)
        for i in pos[:t]:
            word[i] ^= rng.randrange(1, 16)
        for i in pos[t:]:
            word[i] = None
        if code.decode_message(word) != msg:
            ok = False
            break
    yield Check("RS(15,3) corrects 2t+e <= 12", ok)


def suite_aux(seed: int = 0, trials: int = 50) -> Iterator[Check]:
    from .auxcode import DEFAULT_AUX, AuxDecodeError, decode_CE, encode_CE
    p = DEFAULT_AUX.validate()
    rng = random.Random(seed)
    bad = None
    for t in range(trials):
        bits = [rng.randrange(2) for _ in range(p.capacity)]
        c = encode_CE(bits, p)
        y = core.run_channel(c, core.ChannelSpec(10, 3, ("sub",), seed + t), p.q)
        try:
            if decode_CE(core.dedup_root(y), p) != bits:
                bad = seed + t
        except AuxDecodeError:
            bad = seed + t
        if bad is not None:
            break
    yield Check("aux code under dups + 3 subs", bad is None,
                f"seed {bad}" if bad is not None else f"{trials} channels")


def _roundtrip(construction: str, seed: int, trials: int) -> Iterator[Check]:
    from .experiments import run_experiment
    if construction == "A":
        rep = run_experiment("A", 4, 16, 1, trials=trials, seed=seed, max_dups=8)
    else:
        rep = run_experiment("B", 4, 24, 1, "anchored", trials=trials, seed=seed)
    yield Check(f"roundtrip-{construction}", rep["successes"] == rep["trials"],
                f"{rep['successes']}/{rep['trials']}; failures "
                f"{[f['seed'] for f in rep['failures']]}")


SUITES: dict[str, Callable[..., Iterator[Check]]] = {
    "core": suite_core,
    "automaton": suite_automaton,
    "buffers": suite_buffers,
    "constrained": suite_constrained,
    "rs": suite_rs,
    "aux": suite_aux,
    "roundtrip-A": lambda seed=0: _roundtrip("A", seed, 20),
    "roundtrip-B": lambda seed=0: _roundtrip("B", seed, 30),
}
