"""Seeded Monte-Carlo runs of the codecs, with JSON reports."""

from __future__ import annotations

import json
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from typing import Optional

from .auxcode import AuxParams, dump_params
from .codec import (
    DecodeError,
    aux_for,
    codeword_length,
    decode_A,
    decode_B,
    encode_A,
    encode_B,
    record_width,
)
from .constrained import capacity_bits
from .core import ChannelSpec, run_channel

SCHEMA_NAME = "experiment_report.schema.json"
KINDS = ("sub", "ins", "del")


def load_schema() -> dict:
    return json.loads(resources.files("tandemcode").joinpath(SCHEMA_NAME).read_text())


def _percentiles(xs: list) -> dict:
    if not xs:
        return {"p50": 0.0, "p90": 0.0, "max": 0.0}
    xs = sorted(xs)
    pick = lambda f: xs[min(len(xs) - 1, int(f * len(xs)))]  # noqa: E731
    return {"p50": pick(0.5), "p90": pick(0.9), "max": xs[-1]}


def run_trial(construction: str, q: int, n: int, p: int, mode: str, seed: int,
              max_dups: int, edits: int, kinds: tuple, L: int,
              aux: Optional[AuxParams]) -> dict:
    """One encode/channel/decode round; all randomness comes from ``seed``."""
    rng = random.Random(seed)
    cap = capacity_bits(q, n)
    data = [rng.randrange(2) for _ in range(cap)]
    kind = kinds[seed % len(kinds)]
    spec = ChannelSpec(max_dups, edits, (kind,), seed)
    t0 = time.perf_counter()
    out = {"seed": seed, "kind": kind}
    rec = None
    try:
        if construction == "A":
            x, rec = encode_A(data, q, n, p)
            y = run_channel(x, spec, q)
            got = decode_A(y, rec, q, n, p)
        else:
            cw = encode_B(data, q, n, p, aux, mode, L)
            rec = cw.record
            y = run_channel(cw.seq, spec, q)
            got = decode_B(y, q, n, p, cw.aux, mode, L)
        out["status"] = "ok" if got == data else "wrong"
    except DecodeError as exc:
        out["status"] = "detected"
        out["error"] = exc.kind
    out["a_prime_bits"] = rec.a_prime.bit_length() if rec is not None else 0
    out["ms"] = (time.perf_counter() - t0) * 1000.0
    return out


def run_experiment(construction: str = "B", q: int = 4, n: int = 24, p: int = 1,
                   mode: str = "anchored", seeds: Optional[list] = None, trials: int = 100,
                   seed: int = 0, max_dups: int = 10, edits: Optional[int] = None,
                   kinds: tuple = KINDS, L: int = 17, aux: Optional[AuxParams] = None,
                   workers: int = 1) -> dict:
    if seeds is None:
        seeds = list(range(seed, seed + trials))
    seeds = sorted(seeds)
    if edits is None:
        edits = p
    if construction == "A":
        kinds = ("sub",)
    args = [(construction, q, n, p, mode, s, max_dups, edits, tuple(kinds), L, aux)
            for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_star, args, chunksize=8))
    else:
        rows = [run_trial(*a) for a in args]
    rows.sort(key=lambda r: r["seed"])
    return build_report(construction, q, n, p, mode, seeds, max_dups, edits, kinds, L, aux, rows)


def _star(a):
    return run_trial(*a)


def build_report(construction, q, n, p, mode, seeds, max_dups, edits, kinds, L, aux, rows) -> dict:
    ok = sum(r["status"] == "ok" for r in rows)
    failures = [{k: r[k] for k in ("seed", "kind", "status") if k in r}
                | ({"error": r["error"]} if "error" in r else {})
                for r in rows if r["status"] != "ok"]
    bits = [r["a_prime_bits"] for r in rows]
    hist: dict = {}
    for b in bits:
        hist[str(b)] = hist.get(str(b), 0) + 1
    params = {"construction": construction, "q": q, "n": n, "p": p, "mode": mode,
              "L": L, "max_dups": max_dups, "edits": edits, "kinds": list(kinds),
              "seeds": list(seeds)}
    report = {
        "params": params,
        "trials": len(rows),
        "successes": ok,
        "wrong": sum(r["status"] == "wrong" for r in rows),
        "detected": sum(r["status"] == "detected" for r in rows),
        "failures": failures,
        "timing_ms": _percentiles([r["ms"] for r in rows]),
        "a_prime_bits": {"histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
                         "mean": statistics.fmean(bits) if bits else 0.0},
    }
    if construction == "B":
        a = aux_for(q, n, p, mode, L, aux)
        params["aux"] = dump_params(a)
        report["r_len"] = a.length
        report["codeword_len"] = codeword_length(q, n, p, mode, L, a)
        report["record_bits"] = record_width(q, n, p, mode, L)
    return report


def deterministic_view(report: dict) -> dict:
    """The report without wall-clock fields."""
    return {k: v for k, v in report.items() if k != "timing_ms"}
