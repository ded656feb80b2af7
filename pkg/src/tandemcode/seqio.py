"""Text forms of sequences.

Alphabets up to size 10 use plain digit strings, larger ones use
comma-separated integers.  For q = 4 the letters ACGT are accepted too.
"""

from __future__ import annotations

from .core import Seq, SequenceError, check_alphabet

DNA = "ACGT"
_DNA_INDEX = {c: i for i, c in enumerate(DNA)}


def format_seq(s: Seq, q: int = 4, dna: bool = False) -> str:
    if dna:
        if q != 4:
            raise SequenceError("DNA rendering needs q = 4")
        return "".join(DNA[c] for c in s)
    if q <= 10:
        return "".join(map(str, s))
    return ",".join(map(str, s))


def parse_seq(text: str, q: int = 4) -> Seq:
    text = text.strip()
    if not text:
        return b""
    if q == 4 and set(text.upper()) <= set(DNA):
        return bytes(_DNA_INDEX[c] for c in text.upper())
    try:
        if q <= 10 and "," not in text:
            out = bytes(int(c) for c in text)
        else:
            out = bytes(int(t) for t in text.split(","))
    except ValueError as exc:
        raise SequenceError(f"malformed sequence text: {text[:40]!r}") from exc
    check_alphabet(out, q)
    return out
