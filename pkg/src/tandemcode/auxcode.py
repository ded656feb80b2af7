"""Marker-framed auxiliary code that survives duplications and a few
substring edits.

A codeword is ``N_hat * T`` blocks of length ``m`` separated by the
marker ``sigma``.  Blocks are drawn from the strings ``B`` for which
``sigma B sigma`` is irreducible and contains ``sigma`` only at its two
ends; these are sorted and cut into ``T`` contiguous colors.  Block
``i`` carries one symbol of the RS codeword of color ``i mod T``, so a
run of ``T`` consecutive colored blocks (a T-group) holds one symbol of
each of the ``T`` interleaved RS codewords.

The blocks are never listed: they are ranked and unranked through a
path count on the irreducible De Bruijn graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from .constrained import SIGMA, buffer_length
from .core import Seq, is_irreducible
from .rs import RSCode, RSDecodeError

L_DEFAULT = 17


class AuxParamsError(ValueError):
    pass


class AuxDecodeError(Exception):
    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def _tail_ok(t) -> bool:
    n = len(t)
    return not any(n >= 2 * k and t[n - k:] == t[n - 2 * k:n - k] for k in (1, 2, 3))


# -- block set -----------------------------------------------------------------


class BlockSet:
    """Lexicographically ranked blocks for one (q, sigma, m)."""

    def __init__(self, q: int, sigma: Seq, m: int):
        if len(sigma) != 5 or not is_irreducible(sigma):
            raise AuxParamsError("marker must be an irreducible string of length 5")
        self.q, self.sigma, self.m = q, sigma, m
        self._memo: dict = {}
        self.size = self._count(sigma, m)

    def _closing_ok(self, ctx: bytes) -> bool:
        c = ctx
        for i, a in enumerate(self.sigma):
            t = c + bytes((a,))
            if not _tail_ok(t):
                return False
            c = t[-5:]
            if c == self.sigma and i < 4:
                return False
        return True

    def _count(self, ctx: bytes, r: int) -> int:
        key = (ctx, r)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if r == 0:
            v = 1 if self._closing_ok(ctx) else 0
        else:
            v = 0
            for a in range(self.q):
                t = ctx + bytes((a,))
                if _tail_ok(t) and t[-5:] != self.sigma:
                    v += self._count(t[-5:], r - 1)
        self._memo[key] = v
        return v

    def contains(self, b: Seq) -> bool:
        if len(b) != self.m:
            return False
        ctx = self.sigma
        for a in b:
            if a >= self.q:
                return False
            t = ctx + bytes((a,))
            if not _tail_ok(t) or t[-5:] == self.sigma:
                return False
            ctx = t[-5:]
        return self._closing_ok(ctx)

    def unrank(self, i: int) -> Seq:
        if not 0 <= i < self.size:
            raise IndexError("block rank out of range")
        ctx = self.sigma
        out = bytearray()
        for pos in range(self.m):
            for a in range(self.q):
                t = ctx + bytes((a,))
                if not _tail_ok(t) or t[-5:] == self.sigma:
                    continue
                c = self._count(t[-5:], self.m - pos - 1)
                if i < c:
                    out.append(a)
                    ctx = t[-5:]
                    break
                i -= c
            else:
                raise AssertionError("block unrank walk failed")
        return bytes(out)

    def rank(self, b: Seq) -> int:
        if not self.contains(b):
            raise ValueError("not a block")
        ctx = self.sigma
        r = 0
        for pos, c in enumerate(b):
            for a in range(c):
                t = ctx + bytes((a,))
                if _tail_ok(t) and t[-5:] != self.sigma:
                    r += self._count(t[-5:], self.m - pos - 1)
            ctx = (ctx + bytes((c,)))[-5:]
        return r

    def color_bounds(self, T: int) -> list:
        """Start rank of each color (plus the end), near-equal contiguous parts."""
        base, extra = divmod(self.size, T)
        starts = [0]
        for j in range(T):
            starts.append(starts[-1] + base + (1 if j < extra else 0))
        return starts

    def enumerate(self) -> list:
        """Explicit sorted list; only sensible for small m."""
        return [self.unrank(i) for i in range(self.size)]


@lru_cache(maxsize=None)
def block_set(q: int, sigma: Seq, m: int) -> BlockSet:
    return BlockSet(q, sigma, m)


def brute_force_blocks(q: int, sigma: Seq, m: int) -> list:
    out = []
    for b in itertools.product(range(q), repeat=m):
        s = sigma + bytes(b) + sigma
        if is_irreducible(s) and _occurrences(s, sigma) == 2:
            out.append(bytes(b))
    return out


def _occurrences(s: Seq, pat: Seq) -> int:
    return sum(1 for i in range(len(s) - len(pat) + 1) if s[i:i + len(pat)] == pat)


# -- parameters ------------------------------------------------------------------


@dataclass(frozen=True)
class AuxParams:
    q: int = 4
    m: int = 18
    p_tilde: int = 3
    T: int = 9
    N_hat: int = 15
    gamma: int = 4
    sigma: Seq = SIGMA
    L: int = L_DEFAULT

    @property
    def k(self) -> int:
        return self.N_hat - 4 * self.p_tilde

    @property
    def capacity(self) -> int:
        return self.k * self.T * self.gamma

    @property
    def length(self) -> int:
        return self.N_hat * self.T * (self.m + 5) - 5

    def blocks(self) -> BlockSet:
        return block_set(self.q, self.sigma, self.m)

    def validate(self) -> "AuxParams":
        problems = []
        if self.q < 3:
            problems.append("q >= 3")
        if not self.m > self.L:
            problems.append("m > L")
        if not self.m > len(self.sigma):
            problems.append("m > |sigma|")
        if self.p_tilde < 1:
            problems.append("p_tilde >= 1")
        if not self.T >= 3 * self.p_tilde:
            problems.append("T >= 3 p_tilde")
        if not self.N_hat >= 4 * self.p_tilde + 1:
            problems.append("N_hat >= 4 p_tilde + 1")
        if not self.N_hat <= (1 << self.gamma) - 1:
            problems.append("N_hat <= 2^gamma - 1")
        if problems:
            raise AuxParamsError("violated: " + ", ".join(problems))
        bs = self.blocks()
        smallest = bs.size // self.T
        if (1 << self.gamma) > smallest:
            raise AuxParamsError(
                f"violated: 2^gamma <= min color size ({1 << self.gamma} > {smallest})")
        if bs.size < 24 * self.p_tilde ** 2 + 15 * self.p_tilde:
            raise AuxParamsError("violated: block count >= 24 p~^2 + 15 p~")
        return self

    @classmethod
    def sized_for(cls, q: int, p_tilde: int, nbits: int, m: Optional[int] = None,
                  sigma: Seq = SIGMA, L: int = L_DEFAULT) -> "AuxParams":
        """Smallest field, then shortest code, then shortest block fitting ``nbits``."""
        T = 3 * p_tilde
        for gamma in range(2, 17):
            if (1 << gamma) - 1 < 4 * p_tilde + 1:
                continue
            per = T * gamma
            need = -(-nbits // per) if nbits > 0 else 1
            N_hat = max(4 * p_tilde + 1, 4 * p_tilde + need)
            if N_hat > (1 << gamma) - 1:
                continue
            mm = m if m is not None else max(L + 1, 6)
            while True:
                try:
                    return cls(q, mm, p_tilde, T, N_hat, gamma, sigma, L).validate()
                except AuxParamsError:
                    if m is not None or mm > 64:
                        break
                    mm += 1
        raise AuxParamsError(f"no parameters carry {nbits} bits")


def load_params(path: Path | str) -> AuxParams:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    fields = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise AuxParamsError(f"bad config line: {raw!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        fields[key] = value
    return params_from_mapping(fields)


def params_from_mapping(fields: dict) -> AuxParams:
    known = {"q", "m", "p_tilde", "T", "N_hat", "gamma", "sigma", "L"}
    bad = set(fields) - known
    if bad:
        raise AuxParamsError(f"unknown keys: {sorted(bad)}")
    kw = {}
    for k, v in fields.items():
        if k == "sigma":
            kw[k] = bytes(int(c) for c in str(v))
        else:
            kw[k] = int(v)
    return AuxParams(**kw).validate()


def dump_params(p: AuxParams) -> str:
    return "\n".join([
        f"q = {p.q}", f"m = {p.m}", f"p_tilde = {p.p_tilde}", f"T = {p.T}",
        f"N_hat = {p.N_hat}", f"gamma = {p.gamma}",
        "sigma = " + "".join(map(str, p.sigma)), f"L = {p.L}",
    ]) + "\n"


# -- encoder ----------------------------------------------------------------------


def _rs(params: AuxParams) -> RSCode:
    return _rs_cached(params.N_hat, params.k, params.gamma)


@lru_cache(maxsize=None)
def _rs_cached(n: int, k: int, gamma: int) -> RSCode:
    return RSCode(n, k, gamma)


def _bits_to_symbols(bits: Sequence[int], gamma: int) -> list:
    out = []
    for i in range(0, len(bits), gamma):
        v = 0
        for b in bits[i:i + gamma]:
            v = (v << 1) | b
        out.append(v)
    return out


def _symbols_to_bits(symbols: Sequence[int], gamma: int) -> list:
    out = []
    for v in symbols:
        out.extend((v >> (gamma - 1 - i)) & 1 for i in range(gamma))
    return out


def zeta(params: AuxParams, color: int, value: int) -> Seq:
    """Block for ``value`` in color ``color`` (0-based)."""
    bs = params.blocks()
    start = bs.color_bounds(params.T)[color]
    return bs.unrank(start + value)


@lru_cache(maxsize=1 << 16)
def _block_rank(params: AuxParams, block: Seq) -> Optional[int]:
    # received blocks repeat a lot across decodes of nearby words
    bs = params.blocks()
    return bs.rank(block) if bs.contains(block) else None


def zeta_inverse(params: AuxParams, color: int, block: Seq) -> Optional[int]:
    """Field value of a block of the given color, None when it carries none."""
    r = _block_rank(params, bytes(block))
    if r is None:
        return None
    starts = params.blocks().color_bounds(params.T)
    if not starts[color] <= r < starts[color + 1]:
        return None
    v = r - starts[color]
    return v if v < (1 << params.gamma) else None


def block_color(params: AuxParams, block: Seq) -> Optional[int]:
    r = _block_rank(params, bytes(block))
    if r is None:
        return None
    starts = params.blocks().color_bounds(params.T)
    for j in range(params.T):
        if r < starts[j + 1]:
            return j
    return None


def encode_CE(bits: Sequence[int], params: AuxParams) -> Seq:
    bits = list(bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("message must be a bit sequence")
    if len(bits) > params.capacity:
        raise AuxParamsError(f"message of {len(bits)} bits exceeds capacity {params.capacity}")
    bits += [0] * (params.capacity - len(bits))
    code = _rs(params)
    per = params.k * params.gamma
    words = []
    for j in range(params.T):
        msg = _bits_to_symbols(bits[j * per:(j + 1) * per], params.gamma)
        words.append(code.encode(msg))
    blocks = []
    for r in range(params.N_hat):
        for j in range(params.T):
            blocks.append(zeta(params, j, words[j][r]))
    return params.sigma.join(blocks)


# -- decoder --------------------------------------------------------------------------


@dataclass
class ScanResult:
    slots: list                      # per slot: list of T blocks or None
    m_blocks: int = 0
    groups: int = 0
    collisions: list = field(default_factory=list)


def _marker_cover(y: Seq, sigma: Seq) -> list:
    covered = [False] * len(y)
    start = 0
    while True:
        i = y.find(sigma, start)
        if i < 0:
            break
        for t in range(i, i + len(sigma)):
            covered[t] = True
        start = i + 1
    return covered


def scan_T_groups(y: Seq, params: AuxParams) -> ScanResult:
    sigma, m, T, pt = params.sigma, params.m, params.T, params.p_tilde
    covered = _marker_cover(y, sigma)
    runs = []  # maximal uncovered runs
    i = 0
    n = len(y)
    while i < n:
        if covered[i]:
            i += 1
            continue
        j = i
        while j < n and not covered[j]:
            j += 1
        runs.append((i, j))
        i = j
    colors = []
    mb_index = []  # number of m-blocks before each run
    count = 0
    for a, b in runs:
        mb_index.append(count)
        if b - a == m:
            colors.append(block_color(params, y[a:b]))
            count += 1
        else:
            colors.append(None)
    res = ScanResult([None] * params.N_hat, m_blocks=count)
    owner: dict = {}
    for s in range(len(runs) - T + 1):
        ok = True
        for t in range(T):
            if colors[s + t] != t:
                ok = False
                break
            if t and (runs[s + t][0] - runs[s + t - 1][1] != len(sigma)
                      or y[runs[s + t - 1][1]:runs[s + t][0]] != sigma):
                ok = False
                break
        if not ok:
            continue
        res.groups += 1
        b = mb_index[s]
        # slot r (0-based) accepts b in [rT - 2p, rT + p - 1]
        r = (b + 2 * pt) // T
        if not (r * T - 2 * pt <= b <= r * T + pt - 1) or r >= params.N_hat:
            continue
        group = [y[runs[s + t][0]:runs[s + t][1]] for t in range(T)]
        if r in owner:
            res.collisions.append(r)
            res.slots[r] = None
            continue
        owner[r] = b
        res.slots[r] = group
    for r in set(res.collisions):
        res.slots[r] = None
    return res


def decode_CE(y: Seq, params: AuxParams, nbits: Optional[int] = None) -> list:
    scan = scan_T_groups(y, params)
    code = _rs(params)
    bits: list = []
    diag = {"m_blocks": scan.m_blocks, "groups": scan.groups,
            "erased_slots": [r for r, g in enumerate(scan.slots) if g is None],
            "collisions": scan.collisions}
    for j in range(params.T):
        word = []
        for g in scan.slots:
            word.append(None if g is None else zeta_inverse(params, j, g[j]))
        try:
            msg = code.decode_message(word)
        except RSDecodeError as exc:
            diag["failed_color"] = j
            raise AuxDecodeError(f"color {j}: {exc}", diag) from exc
        bits.extend(_symbols_to_bits(msg, params.gamma))
    return bits if nbits is None else bits[:nbits]


# -- reversed placement -----------------------------------------------------------


def mirrored(params: AuxParams) -> AuxParams:
    """Parameters over the reversed marker, used for trailing placement."""
    return replace(params, sigma=params.sigma[::-1]).validate()


def encode_E1(bits: Sequence[int], params: AuxParams) -> Seq:
    """Trailing segment r with ``sigma + r`` irreducible.

    ``r`` is the reversal of a codeword over the reversed marker, so
    decoding reads the received root from its end.
    """
    return encode_CE(bits, mirrored(params))[::-1]


def decode_E1(w: Seq, params: AuxParams, nbits: Optional[int] = None) -> list:
    """Decode from the end of ``w``; only the trailing window is scanned."""
    mp = mirrored(params)
    window = params.length + len(params.sigma) + params.p_tilde * params.L
    return decode_CE(w[::-1][:window], mp, nbits)


DEFAULT_AUX = AuxParams()
