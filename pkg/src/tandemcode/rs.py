"""Reed-Solomon codes over GF(2^gamma) with errors-and-erasures decoding.

Codewords are lists of field elements (ints), message first, parity last.
Position ``i`` of a length-``n`` word carries the coefficient of
``x^(n-1-i)``; shortened codes simply use the low ``n`` positions of the
full length ``2^gamma - 1``.  Generator roots are alpha^1 .. alpha^(n-k).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

# primitive polynomials (bit i = coefficient of x^i), fixed for interoperability
PRIMITIVE_POLY = {
    2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x89, 8: 0x11D,
    9: 0x211, 10: 0x409, 11: 0x805, 12: 0x1053, 13: 0x201B,
    14: 0x4443, 15: 0x8003, 16: 0x1100B,
}


class RSDecodeError(Exception):
    """Too many errors for the code, detected during decoding."""


class GF:
    def __init__(self, gamma: int):
        if gamma not in PRIMITIVE_POLY:
            raise ValueError(f"field exponent {gamma} unsupported")
        self.gamma = gamma
        self.size = 1 << gamma
        self.order = self.size - 1
        poly = PRIMITIVE_POLY[gamma]
        exp = [0] * (2 * self.order)
        log = [0] * self.size
        v = 1
        for i in range(self.order):
            exp[i] = v
            log[v] = i
            v <<= 1
            if v & self.size:
                v ^= poly
        if v != 1 or len(set(exp[:self.order])) != self.order:
            raise AssertionError(f"polynomial {poly:#x} is not primitive")
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self.exp = exp
        self.log = log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % self.order]

    def inv(self, a: int) -> int:
        return self.div(1, a)

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k else 1
        return self.exp[(self.log[a] * k) % self.order]

    def alpha(self, k: int) -> int:
        return self.exp[k % self.order]


@lru_cache(maxsize=None)
def field(gamma: int) -> GF:
    return GF(gamma)


def _poly_eval_low(gf: GF, p: Sequence[int], x: int) -> int:
    # coefficients low degree first
    acc = 0
    for c in reversed(p):
        acc = gf.mul(acc, x) ^ c
    return acc


class RSCode:
    """Systematic (n, k) Reed-Solomon code, distance n - k + 1."""

    def __init__(self, n: int, k: int, gamma: int):
        gf = field(gamma)
        if not 0 < k < n <= gf.order:
            raise ValueError(f"need 0 < k < n <= {gf.order}, got n={n}, k={k}")
        self.n, self.k, self.gamma, self.gf = n, k, gamma, gf
        self.nsym = n - k
        g = [1]  # high degree first
        for j in range(1, self.nsym + 1):
            root = gf.alpha(j)
            nxt = g + [0]
            for i, c in enumerate(g):
                nxt[i + 1] ^= gf.mul(c, root)
            g = nxt
        self.generator = g
        # syndrome contribution of value v at position i, packed per syndrome
        self._pos_pow = [[gf.alpha(j * (n - 1 - i)) for j in range(1, self.nsym + 1)]
                         for i in range(n)]

    def encode(self, msg: Sequence[int]) -> list:
        if len(msg) != self.k:
            raise ValueError(f"message must have {self.k} symbols")
        gf = self.gf
        if any(not 0 <= m < gf.size for m in msg):
            raise ValueError("message symbol outside the field")
        rem = list(msg) + [0] * self.nsym
        g = self.generator
        for i in range(self.k):
            c = rem[i]
            if c:
                lc = gf.log[c]
                for j in range(1, len(g)):
                    if g[j]:
                        rem[i + j] ^= gf.exp[lc + gf.log[g[j]]]
        return list(msg) + rem[self.k:]

    def syndromes(self, word: Sequence[int]) -> list:
        gf = self.gf
        s = [0] * self.nsym
        for i, v in enumerate(word):
            if v:
                lv = gf.log[v]
                pw = self._pos_pow[i]
                for j in range(self.nsym):
                    s[j] ^= gf.exp[lv + gf.log[pw[j]]]
        return s

    def decode(self, word: Sequence[Optional[int]]) -> list:
        """Correct ``t`` errors and ``e`` erasures (``None`` entries) when
        ``2t + e <= n - k``.  Returns the corrected codeword."""
        n, gf = self.n, self.gf
        if len(word) != n:
            raise ValueError(f"received word must have {n} symbols")
        eras = [i for i, v in enumerate(word) if v is None]
        if len(eras) > self.nsym:
            raise RSDecodeError("more erasures than parity symbols")
        r = [0 if v is None else v for v in word]
        synd = self.syndromes(r)
        if not any(synd):
            return r
        # erasure locator, low degree first
        gamma_poly = [1]
        for i in eras:
            X = gf.alpha(n - 1 - i)
            gamma_poly = _mul_linear(gf, gamma_poly, X)
        lam = list(gamma_poly)
        B = list(gamma_poly)
        L = len(eras)
        e = len(eras)
        for rr in range(e + 1, self.nsym + 1):
            delta = 0
            for j in range(min(len(lam), rr)):
                if lam[j]:
                    delta ^= gf.mul(lam[j], synd[rr - 1 - j])
            xB = [0] + B
            if delta == 0:
                B = xB
                continue
            T = _poly_add(lam, [gf.mul(delta, c) for c in xB])
            if 2 * L <= rr + e - 1:
                inv = gf.inv(delta)
                B = [gf.mul(inv, c) for c in lam]
                L = rr + e - L
            else:
                B = xB
            lam = T
        while len(lam) > 1 and lam[-1] == 0:
            lam.pop()
        deg = len(lam) - 1
        if deg != L or 2 * (L - e) + e > self.nsym:
            raise RSDecodeError("error locator inconsistent with the distance")
        locs = []
        for i in range(n):
            Xinv = gf.alpha(-(n - 1 - i))
            if _poly_eval_low(gf, lam, Xinv) == 0:
                locs.append(i)
        if len(locs) != deg:
            raise RSDecodeError("error locator roots fall outside the code")
        # Forney with first consecutive root alpha^1
        omega = [0] * self.nsym
        for a, la in enumerate(lam):
            if la:
                for b in range(self.nsym - a):
                    omega[a + b] ^= gf.mul(la, synd[b])
        dlam = [lam[j] if j % 2 == 1 else 0 for j in range(1, len(lam))]
        out = list(r)
        for i in locs:
            Xinv = gf.alpha(-(n - 1 - i))
            num = _poly_eval_low(gf, omega, Xinv)
            den = _poly_eval_low(gf, dlam, Xinv)
            if den == 0:
                raise RSDecodeError("repeated error locator root")
            out[i] ^= gf.div(num, den)
        if any(self.syndromes(out)):
            raise RSDecodeError("correction did not yield a codeword")
        return out

    def decode_message(self, word: Sequence[Optional[int]]) -> list:
        return self.decode(word)[:self.k]


def _mul_linear(gf: GF, p: list, X: int) -> list:
    """p(x) * (1 - X x), low degree first."""
    out = p + [0]
    for i, c in enumerate(p):
        out[i + 1] ^= gf.mul(c, X)
    return out


def _poly_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return out
