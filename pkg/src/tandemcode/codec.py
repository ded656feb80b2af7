"""Top-level codes.

Construction A keeps the syndrome ``(a, label(x) mod a)`` on a separate
lossless side channel.  Construction B appends it to the data word as
``x + b + sigma + r``, where ``b`` is a buffer and ``r`` an auxiliary
codeword placed in reverse, so that the whole word goes through one
noisy channel.

Decoding is a brute-force search: every input that could have produced
the received root is generated, and the syndrome keeps exactly one.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .auxcode import AuxDecodeError, AuxParams, decode_E1, encode_E1
from .confusable import (
    L_DEFAULT,
    WORK_LIMIT,
    anchored_candidates,
    confusable_superset_A,
    confusable_superset_B,
    decode_candidates_A,
    prefix_set,
    strict_candidates,
    tail_length,
)
from .constrained import SIGMA, capacity_bits, find_buffer, rank_irr, unrank_irr
from .core import ChannelSpec, Seq, dedup_root, is_irreducible, run_channel

FIELD_BITS = 64
MODES = ("anchored", "strict")
# strict mode runs at reduced L, where substitution moves and L-substring
# edits no longer coincide; both relations are closed over
STRICT_MOVES = "both"


class CodecError(ValueError):
    """Invalid parameters or data."""


class DecodeError(Exception):
    """Decoding failed; ``kind`` says at which stage."""

    def __init__(self, kind: str, message: str, diagnostics: Optional[dict] = None):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.diagnostics = diagnostics or {}


# -- labels and moduli ---------------------------------------------------------


def label(x: Seq, q: int = 4) -> int:
    """x read as a base-q number (first symbol most significant)."""
    v = 0
    for c in x:
        v = v * q + c
    return v


def binary_rows(x: Seq, q: int = 4) -> list:
    """Row i holds bit i (most significant first) of every symbol."""
    width = max(1, (q - 1).bit_length())
    return [[(c >> (width - 1 - i)) & 1 for c in x] for i in range(width)]


def find_modulus(fx: int, others: Iterable[int], limit: int = 1 << FIELD_BITS) -> int:
    """Smallest a >= 2 with fx != fy (mod a) for every fy in ``others``."""
    diffs = sorted({abs(fx - fy) for fy in others})
    if diffs and diffs[0] == 0:
        raise CodecError("fx is among the labels to separate")
    a = 2
    while a < limit:
        for d in diffs:
            if d % a == 0:
                break
        else:
            return a
        a += 1
    raise CodecError(f"no modulus below {limit}")


# -- syndrome record -------------------------------------------------------------


def symbol_bits(q: int) -> int:
    return max(1, (q - 1).bit_length())


def _int_bits(v: int, width: int) -> list:
    if not 0 <= v < (1 << width):
        raise CodecError(f"value {v} does not fit in {width} bits")
    return [(v >> (width - 1 - i)) & 1 for i in range(width)]


def _bits_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v


@dataclass(frozen=True)
class SyndromeRecord:
    a_prime: int
    residue: int
    tail: Optional[Seq] = None

    def __post_init__(self):
        if self.a_prime < 2 or not 0 <= self.residue < self.a_prime:
            raise CodecError("residue must lie in [0, a')")

    def to_bits(self, q: int) -> list:
        out = _int_bits(self.a_prime, FIELD_BITS) + _int_bits(self.residue, FIELD_BITS)
        if self.tail is not None:
            w = symbol_bits(q)
            for c in self.tail:
                out += _int_bits(c, w)
        return out

    @classmethod
    def from_bits(cls, bits: Sequence[int], q: int, tail_len: Optional[int]) -> "SyndromeRecord":
        a = _bits_int(bits[:FIELD_BITS])
        res = _bits_int(bits[FIELD_BITS:2 * FIELD_BITS])
        tail = None
        if tail_len is not None:
            w = symbol_bits(q)
            off = 2 * FIELD_BITS
            tail = bytes(_bits_int(bits[off + i * w:off + (i + 1) * w]) for i in range(tail_len))
            if tail and max(tail) >= q:
                raise CodecError("tail symbol outside the alphabet")
        return cls(a, res, tail)

    @staticmethod
    def width(q: int, tail_len: Optional[int]) -> int:
        return 2 * FIELD_BITS + (0 if tail_len is None else tail_len * symbol_bits(q))


# -- data <-> words --------------------------------------------------------------


def data_to_word(data: Sequence[int], q: int, n: int) -> Seq:
    cap = capacity_bits(q, n)
    if len(data) > cap:
        raise CodecError(f"{len(data)} data bits exceed the capacity {cap} of Irr_{q}({n})")
    if any(b not in (0, 1) for b in data):
        raise CodecError("data must be bits")
    return unrank_irr(q, n, _bits_int(data))


def word_to_data(x: Seq, q: int, nbits: Optional[int] = None) -> list:
    cap = capacity_bits(q, len(x))
    width = cap if nbits is None else nbits
    v = rank_irr(x, q)
    if v >= (1 << width):
        raise DecodeError("range", f"rank {v} does not fit in {width} bits")
    return _int_bits(v, width) if width else []


def _unique(cands: set, a: int, residue: int, q: int, diag: dict) -> Seq:
    surv = sorted(z for z in cands if label(z, q) % a == residue)
    diag["candidates"] = len(cands)
    diag["survivors"] = len(surv)
    if not surv:
        raise DecodeError("no-survivor", "no candidate matches the syndrome", diag)
    if len(surv) > 1:
        raise DecodeError("multiple-survivors", f"{len(surv)} candidates match", diag)
    return surv[0]


# -- construction A ---------------------------------------------------------------


def encode_A(data: Sequence[int], q: int, n: int, p: int) -> tuple:
    x = data_to_word(data, q, n)
    rec = syndrome_A(x, p, q)
    return x, rec


def syndrome_A(x: Seq, p: int, q: int) -> SyndromeRecord:
    if p == 0:
        return SyndromeRecord(2, label(x, q) % 2)
    members = confusable_superset_A(x, p, q).members
    fx = label(x, q)
    a = find_modulus(fx, (label(y, q) for y in members))
    return SyndromeRecord(a, fx % a)


def decode_A(y: Seq, rec: SyndromeRecord, q: int, n: int, p: int,
             nbits: Optional[int] = None, verify: bool = False) -> list:
    v = dedup_root(y)
    diag: dict = {"root_len": len(v)}
    if p == 0:
        cands = {v} if len(v) == n else set()
    else:
        cands = decode_candidates_A(v, p, n, q)
    x = _unique(cands, rec.a_prime, rec.residue, q, diag)
    if verify and syndrome_A(x, p, q) != rec:
        raise DecodeError("survivor-mismatch", "survivor re-encodes to another syndrome", diag)
    return word_to_data(x, q, nbits)


# -- construction B ---------------------------------------------------------------


@dataclass(frozen=True)
class CodewordB:
    x: Seq
    b: Seq
    sigma: Seq
    r: Seq
    record: SyndromeRecord
    aux: AuxParams
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def seq(self) -> Seq:
        return self.x + self.b + self.sigma + self.r

    def __len__(self) -> int:
        return len(self.x) + len(self.b) + len(self.sigma) + len(self.r)


def _check_mode(mode: str):
    if mode not in MODES:
        raise CodecError(f"mode must be one of {MODES}")


def record_width(q: int, n: int, p: int, mode: str, L: int = L_DEFAULT) -> int:
    _check_mode(mode)
    tl = min(n, tail_length(p, L)) if mode == "anchored" else None
    return SyndromeRecord.width(q, tl)


def aux_for(q: int, n: int, p: int, mode: str, L: int = L_DEFAULT,
            aux: Optional[AuxParams] = None) -> AuxParams:
    """Auxiliary parameters able to carry the record (auto-sized if not given)."""
    nbits = record_width(q, n, p, mode, L)
    p_tilde = max(1, 3 * p)
    if aux is None:
        return AuxParams.sized_for(q, p_tilde, nbits, L=aux_L(L))
    if aux.q != q:
        raise CodecError(f"aux alphabet {aux.q} differs from q={q}")
    if aux.p_tilde < p_tilde:
        raise CodecError(f"aux must correct {p_tilde} substring edits")
    if aux.capacity < nbits:
        raise CodecError(f"aux capacity {aux.capacity} < record width {nbits}")
    return aux.validate()


def aux_L(L: int) -> int:
    # the auxiliary code needs m > L; at reduced L it keeps its own default
    return max(L, L_DEFAULT)


def syndrome_B(x: Seq, p: int, q: int, mode: str, L: int = L_DEFAULT,
               work_limit: int = WORK_LIMIT) -> tuple:
    _check_mode(mode)
    n = len(x)
    tail = x[max(0, n - tail_length(p, L)):] if mode == "anchored" else None
    if mode == "strict":
        rep = confusable_superset_B(x, p, q, L, "strict", work_limit=work_limit,
                                    moves=STRICT_MOVES)
    else:
        rep = confusable_superset_B(x, p, q, L, "anchored", tail=tail)
    fx = label(x, q)
    a = find_modulus(fx, (label(y, q) for y in rep.members))
    return SyndromeRecord(a, fx % a, tail), rep


def encode_B(data: Sequence[int], q: int, n: int, p: int, aux: Optional[AuxParams] = None,
             mode: str = "anchored", L: int = L_DEFAULT,
             work_limit: int = WORK_LIMIT) -> CodewordB:
    x = data_to_word(data, q, n)
    return encode_word_B(x, q, p, aux, mode, L, work_limit)


def encode_word_B(x: Seq, q: int, p: int, aux: Optional[AuxParams] = None,
                  mode: str = "anchored", L: int = L_DEFAULT,
                  work_limit: int = WORK_LIMIT) -> CodewordB:
    n = len(x)
    aux = aux_for(q, n, p, mode, L, aux)
    rec, rep = syndrome_B(x, p, q, mode, L, work_limit)
    b = find_buffer(x, q, SIGMA)
    r = encode_E1(rec.to_bits(q), aux)
    cw = CodewordB(x, b, SIGMA, r, rec, aux,
                   {"members": len(rep.members), "a_prime_bits": rec.a_prime.bit_length()})
    if not is_irreducible(cw.seq):
        raise AssertionError("codeword is not irreducible")
    return cw


def codeword_length(q: int, n: int, p: int, mode: str = "anchored", L: int = L_DEFAULT,
                    aux: Optional[AuxParams] = None) -> int:
    from .constrained import buffer_length
    a = aux_for(q, n, p, mode, L, aux)
    return n + buffer_length(q) + len(SIGMA) + a.length


def recover_record(w: Seq, q: int, n: int, p: int, aux: AuxParams, mode: str,
                   L: int = L_DEFAULT) -> SyndromeRecord:
    tl = min(n, tail_length(p, L)) if mode == "anchored" else None
    nbits = SyndromeRecord.width(q, tl)
    try:
        bits = decode_E1(w, aux, nbits)
    except AuxDecodeError as exc:
        raise DecodeError("aux", str(exc), exc.diagnostics) from exc
    try:
        return SyndromeRecord.from_bits(bits, q, tl)
    except CodecError as exc:
        raise DecodeError("record", str(exc)) from exc


def candidates_B(s: Seq, rec: SyndromeRecord, q: int, n: int, p: int, mode: str,
                 L: int = L_DEFAULT) -> set:
    if mode == "anchored":
        return anchored_candidates({s}, p, n, rec.tail, q)
    return strict_candidates({s}, p, n, q, L, STRICT_MOVES)


def decode_B(y: Seq, q: int, n: int, p: int, aux: Optional[AuxParams] = None,
             mode: str = "anchored", L: int = L_DEFAULT, nbits: Optional[int] = None,
             verify: bool = False) -> list:
    _check_mode(mode)
    aux = aux_for(q, n, p, mode, L, aux)
    w = dedup_root(y)
    rec = recover_record(w, q, n, p, aux, mode, L)
    s = w[:max(0, n - p * L)]
    diag: dict = {"root_len": len(w), "a_prime": rec.a_prime}
    cands = candidates_B(s, rec, q, n, p, mode, L)
    x = _unique(cands, rec.a_prime, rec.residue, q, diag)
    moves = "window" if mode == "anchored" else STRICT_MOVES
    if p and s not in prefix_set(x, p, q, L, moves):
        raise DecodeError("survivor-mismatch", "survivor cannot produce the received prefix", diag)
    if verify:
        again, _ = syndrome_B(x, p, q, mode, L)
        if again != rec:
            raise DecodeError("survivor-mismatch", "survivor re-encodes to another syndrome", diag)
    return word_to_data(x, q, nbits)


# -- audits and reports ------------------------------------------------------------


@dataclass
class AuditReport:
    trials: int
    misses: list
    candidate_sizes: list

    @property
    def ok(self) -> bool:
        return not self.misses

    def summary(self) -> dict:
        sizes = self.candidate_sizes or [0]
        return {"trials": self.trials, "misses": len(self.misses),
                "miss_seeds": [m["seed"] for m in self.misses],
                "candidates_max": max(sizes), "candidates_mean": statistics.fmean(sizes)}


class AuditFailure(AssertionError):
    pass


def candidate_generator_completeness_audit(x: Seq, p: int, trials: int, q: int = 4,
                                           mode: str = "anchored", L: int = L_DEFAULT,
                                           max_dups: int = 10, seed: int = 0,
                                           kinds: Sequence[str] = ("sub", "ins", "del"),
                                           strict: bool = True) -> AuditReport:
    """Run channels on ``x + b + sigma`` and check x is always generated."""
    _check_mode(mode)
    n = len(x)
    tail = x[max(0, n - tail_length(p, L)):]
    rec = SyndromeRecord(2, 0, tail if mode == "anchored" else None)
    head = x + find_buffer(x, q) + SIGMA
    keep = max(0, n - p * L)
    misses, sizes = [], []
    for t in range(trials):
        s_seed = seed + t
        kind = kinds[t % len(kinds)]
        spec = ChannelSpec(max_dups, p, (kind,), s_seed)
        w = dedup_root(run_channel(head, spec, q))
        cands = candidates_B(w[:keep], rec, q, n, p, mode, L)
        sizes.append(len(cands))
        if x not in cands:
            misses.append({"seed": s_seed, "kind": kind, "root": w.hex()})
            if strict:
                raise AuditFailure(f"x missing from candidates (seed {s_seed}, {kind})")
    return AuditReport(trials, misses, sizes)


def redundancy(q: int, n: int, p: int, mode: str = "anchored", L: int = L_DEFAULT,
               a_prime: Optional[int] = None) -> dict:
    """Length accounting for one codeword size, in q-ary symbols."""
    from .constrained import buffer_length, count_irr
    aux = aux_for(q, n, p, mode, L)
    N = codeword_length(q, n, p, mode, L, aux)
    info = math.log(count_irr(q, n), q)
    out = {"q": q, "n": n, "p": p, "mode": mode, "N": N, "r_len": aux.length,
           "buffer": buffer_length(q), "record_bits": record_width(q, n, p, mode, L),
           "redundancy": N - info, "log_q_n": math.log(n, q)}
    if a_prime is not None:
        out["a_prime_bits"] = a_prime.bit_length()
        out["syndrome_symbols"] = 2 * math.log(a_prime, q)
    return out


def sample_words(q: int, n: int, count: int, seed: int) -> list:
    from .constrained import count_irr
    rng = random.Random(seed)
    total = count_irr(q, n)
    return [unrank_irr(q, n, rng.randrange(total)) for _ in range(count)]
