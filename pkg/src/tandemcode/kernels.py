"""Compiled inner loops for window-substitution closures.

Sequences travel as rows of a padded ``uint8`` matrix plus a length
vector.  The pure-Python path in :mod:`tandemcode.confusable` computes
the same sets and serves as the reference in tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

PAD = 255


@njit(cache=True)
def _push(buf, n, c):
    buf[n] = c
    n += 1
    for k in range(1, 4):
        if n >= 2 * k:
            same = True
            for j in range(k):
                if buf[n - k + j] != buf[n - 2 * k + j]:
                    same = False
                    break
            if same:
                return n - k
    return n


@njit(cache=True)
def _splice(buf, z, m, lo, hi, ents, a, b):
    """dedup_root(z[:lo] + ents[a:b] + z[hi:m]) into buf; returns length."""
    for j in range(lo):
        buf[j] = z[j]
    n = lo
    for j in range(a, b):
        n = _push(buf, n, ents[j])
    j = hi
    while j < m:
        if j >= 5 and n >= 5:
            same = True
            for t in range(5):
                if buf[n - 5 + t] != z[j - 5 + t]:
                    same = False
                    break
            if same:
                for t in range(j, m):
                    buf[n] = z[t]
                    n += 1
                return n
        n = _push(buf, n, z[j])
        j += 1
    return n


@njit(cache=True)
def _window_code(z, m, i, base, l1, l2, r1, r2):
    code = 0
    for t in range(i - 2, i + 3):
        if t == -2:
            c = l1
        elif t == -1:
            c = l2
        elif t == m:
            c = r1
        elif t == m + 1:
            c = r2
        else:
            c = z[t]
        code = code * base + c
    return code


@njit(cache=True)
def count_splices(rows, lens, offs, base, sent):
    total = 0
    for r in range(rows.shape[0]):
        m = lens[r]
        for i in range(m):
            code = _window_code(rows[r], m, i, base, sent[0], sent[1], sent[2], sent[3])
            total += offs[code + 1] - offs[code]
    return total


@njit(cache=True)
def step_rows(rows, lens, offs, eoffs, ents, base, sent, target, prefix, width,
              out, out_lens):
    """All single-window splices of every row.

    Entry ``k`` of window code ``c`` is ``ents[eoffs[k]:eoffs[k+1]]`` for
    ``offs[c] <= k < offs[c+1]``.  With ``target >= 0`` only results of that
    length are kept; with ``prefix >= 0`` only results at least that long
    are kept, cut to their first ``prefix`` symbols.  Results wider than
    ``width`` are dropped and counted.
    Returns (number written, number dropped for width).
    """
    buf = np.empty(4 * width + 64, dtype=np.uint8)
    w = 0
    dropped = 0
    for r in range(rows.shape[0]):
        z = rows[r]
        m = lens[r]
        for i in range(m):
            code = _window_code(z, m, i, base, sent[0], sent[1], sent[2], sent[3])
            lo = i - 2 if i >= 2 else 0
            hi = i + 3 if i + 3 <= m else m
            keep = m - (hi - lo)
            for k in range(offs[code], offs[code + 1]):
                a = eoffs[k]
                b = eoffs[k + 1]
                if target >= 0 and keep + (b - a) < target:
                    continue
                n = _splice(buf, z, m, lo, hi, ents, a, b)
                if target >= 0 and n != target:
                    continue
                if prefix >= 0:
                    if n < prefix:
                        continue
                    n = prefix
                if n > width:
                    dropped += 1
                    continue
                for t in range(n):
                    out[w, t] = buf[t]
                for t in range(n, width):
                    out[w, t] = PAD
                out_lens[w] = n
                w += 1
    return w, dropped
