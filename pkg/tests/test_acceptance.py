"""Acceptance run.  Each test records one PASS/FAIL line, printed in the
terminal summary, and then asserts.  Budgets are wall-clock seconds."""

import itertools
import random
import time


import conftest
from tandemcode import automaton
from tandemcode.auxcode import (
    DEFAULT_AUX,
    AuxDecodeError,
    decode_CE,
    encode_CE,
)
from tandemcode.codec import (
    DecodeError,
    decode_A,
    decode_B,
    encode_A,
    encode_B,
    redundancy,
    sample_words,
    syndrome_A,
)
from tandemcode.confusable import (
    channel_roots,
    confusable_superset_A,
    confusable_superset_B,
    step_substitute,
    suffix_bound,
    step_bound,
    superset_A_bound,
)
from tandemcode.constrained import (
    buffer_exists_everywhere,
    canonical,
    capacity_bits,
    count_irr,
    growth_rate,
)
from tandemcode.core import (
    ChannelSpec,
    check_substring_edits,
    dedup_root,
    dedup_root_random,
    is_irreducible,
    run_channel,
)
from tandemcode.experiments import run_experiment
from tandemcode.rs import RSCode, RSDecodeError
from tandemcode.verify import RU_LITERAL


def record(k, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail} ({elapsed:.1f}s, budget {budget}s)"
    conftest.ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def random_bits(rng, n):
    return [rng.randrange(2) for _ in range(n)]


def test_c01_root_uniqueness():
    t0 = time.perf_counter()
    rng = random.Random(101)
    bad = 0
    for _ in range(10_000):
        s = bytes(rng.randrange(4) for _ in range(rng.randrange(1, 40)))
        a = dedup_root_random(s, random.Random(rng.random()))
        b = dedup_root_random(s, random.Random(rng.random()))
        bad += a != b
    record(1, bad == 0, f"{bad} disagreements in 10^4 pairs", time.perf_counter() - t0, 10)


def test_c02_RU_RV():
    t0 = time.perf_counter()
    automaton.prefix_roots_by_state.cache_clear()
    automaton.suffix_roots_by_state.cache_clear()
    ru, rv = automaton.enumerate_RU(), automaton.enumerate_RV()
    ok = len(ru) == 22 and ru == RU_LITERAL and rv == {automaton.apply_h(u) for u in ru}
    record(2, ok, f"|R(U)|={len(ru)}, |R(V)|={len(rv)}", time.perf_counter() - t0, 1)


def test_c03_buffers():
    t0 = time.perf_counter()
    res = {q: buffer_exists_everywhere(q, c) for q, c in ((3, 13), (4, 7), (5, 6), (6, 5))}
    bad = sum(b for _, b in res.values())
    detail = ", ".join(f"q={q}: {c} contexts, {b} without" for q, (c, b) in res.items())
    record(3, bad == 0, detail, time.perf_counter() - t0, 300)


def test_c04_growth_rate():
    t0 = time.perf_counter()
    g = growth_rate(4)
    ratio = count_irr(4, 41) / count_irr(4, 40)
    ok = abs(g - 2.6590) <= 5e-5 and abs(ratio - g) <= 1e-2
    record(4, ok, f"rate {g:.6f}, DP ratio {ratio:.6f}", time.perf_counter() - t0, 10)


def test_c05_substring_edit_replay():
    t0 = time.perf_counter()
    rng = random.Random(105)
    bad = []
    kinds = ("sub", "ins", "del")
    for p in (1, 2):
        for seed in range(1000):
            n = 4 + seed % 9
            x = sample_words(4, n, 1, rng.randrange(1 << 30))[0]
            spec = ChannelSpec(6, p, (kinds[seed % 3],), seed)
            y = run_channel(x, spec, 4)
            if not check_substring_edits(dedup_root(x), dedup_root(y), p, 17):
                bad.append((p, seed))
    record(5, not bad, f"{len(bad)} failures over 2x10^3 trials", time.perf_counter() - t0, 300)


def test_c06_bounds():
    t0 = time.perf_counter()
    rng = random.Random(106)
    viol = {"step": 0, "A": 0, "strict-B": 0}
    worst = {"step": 0.0, "A": 0.0, "strict-B": 0.0}
    for _ in range(100):
        n = rng.randrange(5, 21)
        x = sample_words(4, n, 1, rng.randrange(1 << 30))[0]
        size, b = len(step_substitute(x, 4)), step_bound(4, n)
        viol["step"] += size > b
        worst["step"] = max(worst["step"], size / b)
    for x in sample_words(4, 10, 100, 1061):
        rep = confusable_superset_A(x, 1)
        b = superset_A_bound(4, 10, 1)
        viol["A"] += len(rep.members) > b
        worst["A"] = max(worst["A"], len(rep.members) / b)
    for x in sample_words(3, 10, 100, 1062):
        rep = confusable_superset_B(x, 1, q=3, L=3, mode="strict")
        b = suffix_bound(3, 10, 1, 3)
        viol["strict-B"] += len(rep.members) > b
        worst["strict-B"] = max(worst["strict-B"], len(rep.members) / b)
    detail = ", ".join(f"{k}: {v} violations (max size/bound {worst[k]:.2e})" for k, v in viol.items())
    record(6, not any(viol.values()), detail, time.perf_counter() - t0, 600)


def _roots_by_class(q, n, p, cap):
    """Channel roots of every y in Irr_q(n), computed once per relabeling class."""
    base = {}
    out = {}
    for y in conftest.irreducible_strings(q, n):
        c = canonical(y)
        if c not in base:
            base[c] = channel_roots(c, p, cap, q)
        perm = {}
        for a, b in zip(c, y):
            perm[a] = b
        free = iter(sorted(set(range(q)) - set(perm.values())))
        for a in range(q):
            if a not in perm:
                perm[a] = next(free)
        table = bytes.maketrans(bytes(range(q)), bytes(perm[a] for a in range(q)))
        out[y] = frozenset(r.translate(table) for r in base[c])
    return out


def test_c07_oracle_containment():
    t0 = time.perf_counter()
    rng = random.Random(107)
    misses, pairs, tested = [], 0, 0
    for n in range(4, 9):
        roots = _roots_by_class(4, n, 1, 4)
        index: dict = {}
        for y, rs in roots.items():
            for r in rs:
                index.setdefault(r, set()).add(y)
        for x in rng.sample(sorted(roots), 40):
            tested += 1
            partners = set().union(*(index[r] for r in roots[x])) - {x}
            members = confusable_superset_A(x, 1).members
            pairs += len(partners)
            misses.extend((x, y) for y in partners if y not in members)
    record(7, not misses and tested >= 200,
           f"{tested} x, {pairs} oracle pairs, {len(misses)} outside the superset",
           time.perf_counter() - t0, 600)


def _rs_patterns(n, budget):
    """Orbit representatives (under rotation) of error/erasure supports."""
    seen = set()
    for t in range(budget // 2 + 1):
        for errs in itertools.combinations(range(n), t):
            rest = [i for i in range(n) if i not in errs]
            for e in range(budget - 2 * t + 1):
                for eras in itertools.combinations(rest, e):
                    state = [0] * n
                    for i in errs:
                        state[i] = 2
                    for i in eras:
                        state[i] = 1
                    key = min(tuple(state[(i + k) % n] for i in range(n)) for k in range(n))
                    if key not in seen:
                        seen.add(key)
                        yield key


def test_c08_rs_layer():
    t0 = time.perf_counter()
    P = DEFAULT_AUX
    code = RSCode(P.N_hat, P.k, P.gamma)
    rng = random.Random(108)
    words = [code.encode([rng.randrange(1 << P.gamma) for _ in range(P.k)]) for _ in range(100)]
    fails = count = 0
    for idx, pattern in enumerate(_rs_patterns(P.N_hat, 4 * P.p_tilde)):
        c = words[idx % 100]
        r = list(c)
        for i, s in enumerate(pattern):
            if s == 1:
                r[i] = None
            elif s == 2:
                r[i] ^= rng.randrange(1, 1 << P.gamma)
        count += 1
        try:
            fails += code.decode(r) != c
        except RSDecodeError:
            fails += 1
    record(8, fails == 0, f"{count} support orbits on 100 codewords, {fails} failures",
           time.perf_counter() - t0, 300)


def _adversary_edits(rng, c, k, L=17):
    y = c
    for _ in range(k):
        i = rng.randrange(len(y) + 1)
        lu = rng.randrange(0, min(L, len(y) - i) + 1)
        lv = rng.randrange(0 if lu else 1, L + 1)
        y = y[:i] + bytes(rng.randrange(4) for _ in range(lv)) + y[i + lu:]
    return y


def _scripted_corpus(rng, c, P):
    """Edits aimed at the framing: markers, block seams and the ends."""
    step = P.m + len(P.sigma)
    out = []
    for b in range(0, P.N_hat * P.T - 1, 7):
        seam = b * step + P.m
        out.append(c[:seam] + c[seam + len(P.sigma):])                     # drop a marker
        out.append(c[:seam - 8] + bytes(rng.randrange(4) for _ in range(17)) + c[seam + 9:])
        out.append(c[:seam] + c[seam - 12:seam] + c[seam:])                # repeat a run
    out.append(c[17:])
    out.append(c[:-17])
    out.append(c[:-17] + bytes(rng.randrange(4) for _ in range(17)))
    for k in (1, 2, 3):
        for _ in range(100):
            out.append(_adversary_edits(rng, c, k))
    return out


def test_c09_aux_end_to_end():
    t0 = time.perf_counter()
    P = DEFAULT_AUX
    rng = random.Random(109)
    bad_chan = 0
    for seed in range(1000):
        bits = random_bits(rng, P.capacity)
        y = run_channel(encode_CE(bits, P), ChannelSpec(10, seed % 4, ("sub",), seed), 4)
        try:
            bad_chan += decode_CE(dedup_root(y), P) != bits
        except AuxDecodeError:
            bad_chan += 1
    bad_adv = total_adv = 0
    for w in range(4):
        bits = random_bits(rng, P.capacity)
        c = encode_CE(bits, P)
        for y in _scripted_corpus(rng, c, P):
            total_adv += 1
            try:
                bad_adv += decode_CE(dedup_root(y), P) != bits
            except AuxDecodeError:
                bad_adv += 1
    record(9, bad_chan == 0 and bad_adv == 0,
           f"channels 1000 with {bad_chan} failures, adversary {total_adv} with {bad_adv} failures",
           time.perf_counter() - t0, 900)


def test_c10_construction_B_anchored():
    t0 = time.perf_counter()
    runs = [run_experiment("B", n=24, p=1, trials=1000, seed=0),
            run_experiment("B", n=40, p=1, trials=1000, seed=0),
            run_experiment("B", n=24, p=2, trials=200, seed=0)]
    detail = "; ".join(f"n={r['params']['n']} p={r['params']['p']}: {r['successes']}/{r['trials']}"
                       for r in runs)
    ok = all(r["successes"] == r["trials"] for r in runs)
    record(10, ok, detail, time.perf_counter() - t0, 3600)


def _all_substring_edits(w, i, L, q):
    for lu in range(0, min(L, len(w) - i) + 1):
        for lv in range(0, L + 1):
            if lu == lv == 0:
                continue
            for v in itertools.product(range(q), repeat=lv):
                v = bytes(v)
                if v != w[i:i + lu]:
                    yield w[:i] + v + w[i + lu:]


def test_c11_strict_exhaustive():
    # The adversary: every word whose root is one <=3-substring edit away
    # from the codeword, at every position of the payload, buffer, marker and the
    # first and last aux blocks, plus one seeded edit per aux-interior
    # position.  Some edits collapse further under deduplication and leave
    # the one-edit model; they are decoded too and their recovery rate is
    # reported, but not required.
    t0 = time.perf_counter()
    q, n, p, L = 3, 10, 1, 3
    rng = random.Random(111)
    done = {}
    model = {"total": 0, "bad": 0}
    outside = {"total": 0, "ok": 0}

    def decodes(r, cw, bits):
        if (r, cw.seq) not in done:
            try:
                done[r, cw.seq] = decode_B(r, q, n, p, cw.aux, "strict", L) == bits
            except DecodeError:
                done[r, cw.seq] = False
        return done[r, cw.seq]

    for _ in range(2):
        bits = random_bits(rng, capacity_bits(q, n))
        cw = encode_B(bits, q, n, p, mode="strict", L=L)
        w = cw.seq
        block = cw.aux.m + len(cw.aux.sigma)
        head = len(w) - cw.aux.length + block
        tail = len(w) - block
        for i in range(len(w) + 1):
            if i < head or i >= tail:
                ys = _all_substring_edits(w, i, L, q)
            else:
                lu = rng.randrange(0, L + 1)
                lv = rng.randrange(0 if lu else 1, L + 1)
                ys = [w[:i] + bytes(rng.randrange(q) for _ in range(lv)) + w[i + lu:]]
            for y in ys:
                r = y if is_irreducible(y) else dedup_root(y)
                if r is y or check_substring_edits(w, r, 1, L):
                    model["total"] += 1
                    model["bad"] += not decodes(r, cw, bits)
                else:
                    outside["total"] += 1
                    outside["ok"] += decodes(r, cw, bits)
    detail = (f"{model['total']} words with a one-edit root, {model['bad']} not recovered; "
              f"outside the model {outside['ok']}/{outside['total']} recovered")
    record(11, model["bad"] == 0, detail, time.perf_counter() - t0, 1800)


def test_c12_negative():
    t0 = time.perf_counter()
    rows = []
    crashes = []

    def trial(name, fn):
        try:
            return "ok" if fn() else "wrong"
        except DecodeError as exc:
            return "detected:" + exc.kind
        except Exception as exc:  # anything else counts as a crash
            crashes.append((name, repr(exc)))
            return "crash"

    rng = random.Random(112)
    stats: dict = {}
    for seed in range(200):
        bits = random_bits(rng, capacity_bits(4, 10))
        x, rec = encode_A(bits, 4, 10, 1)
        y = run_channel(x, ChannelSpec(6, 2, ("sub",), seed), 4)
        s = trial("A", lambda: decode_A(y, rec, 4, 10, 1, verify=True) == bits)
        stats.setdefault("A n=10", []).append(s)
    kinds = ("sub", "ins", "del")
    for n, count in ((24, 200), (64, 8)):
        for seed in range(count):
            bits = random_bits(rng, capacity_bits(4, n))
            cw = encode_B(bits, 4, n, 1)
            y = run_channel(cw.seq, ChannelSpec(10, 2, (kinds[seed % 3],), seed), 4)
            s = trial(f"B n={n}", lambda: decode_B(y, 4, n, 1, cw.aux, verify=True) == bits)
            stats.setdefault(f"B n={n}", []).append(s)
    for name, ss in stats.items():
        wrong = ss.count("wrong")
        det = sum(s.startswith("detected") for s in ss)
        rows.append(f"{name}: silent wrong {wrong}/{len(ss)}, detected {det}, ok {ss.count('ok')}")
    record(12, not crashes, "; ".join(rows) + f"; crashes {len(crashes)}",
           time.perf_counter() - t0, 1800)


def test_c13_redundancy_report():
    t0 = time.perf_counter()
    rows = [redundancy(4, n, 1) for n in (24, 32, 48, 64, 100, 150, 200, 300, 400)]
    a_bits = {}
    for n in (8, 10, 12):
        a_bits[n] = sorted(syndrome_A(x, 1, 4).a_prime.bit_length()
                           for x in sample_words(4, n, 20, 113))
    for r in rows:
        print(f"n={r['n']:4d} N={r['N']} r_len={r['r_len']} record_bits={r['record_bits']} "
              f"redundancy={r['redundancy']:.1f} log_q n={r['log_q_n']:.2f}")
    for n, b in a_bits.items():
        print(f"construction A n={n}: a' bits min {b[0]} median {b[len(b) // 2]} max {b[-1]}")
    r_lens = [r["r_len"] for r in rows]
    ok = r_lens == sorted(r_lens) and all(b[-1] <= 64 for b in a_bits.values())
    detail = (f"r_len {r_lens[0]}..{r_lens[-1]} over n=24..400, redundancy "
              f"{rows[0]['redundancy']:.0f}..{rows[-1]['redundancy']:.0f} symbols, "
              f"a' bits (A, n=12) median {a_bits[12][10]}")
    record(13, ok, detail, time.perf_counter() - t0, 600)
