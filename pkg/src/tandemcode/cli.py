"""Command-line interface.

Exit status: 0 success, 1 decode failure or violated invariant, 2 usage
error (bad flags, malformed sequences, invalid parameters).
"""

from __future__ import annotations

import json
import math
import sys
from typing import Optional

import click

from . import codec
from .auxcode import AuxParams, AuxParamsError, dump_params, load_params
from .confusable import L_DEFAULT, WorkLimitExceeded, gv_log_size, gv_lower_bound, superset_A_bound
from .constrained import capacity_bits, count_irr, growth_rate
from .core import EDIT_KINDS, ChannelSpec, SequenceError, run_channel
from .seqio import format_seq, parse_seq

EXIT_DECODE = 1
EXIT_USAGE = 2


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _usage(msg: str):
    raise click.UsageError(msg)


def _read_input(value: Optional[str]) -> str:
    if value is None or value == "-":
        return sys.stdin.read()
    return value


def _aux(config: Optional[str]) -> Optional[AuxParams]:
    if config is None:
        return None
    try:
        return load_params(config)
    except (OSError, AuxParamsError) as exc:
        _usage(f"bad aux config: {exc}")


def _hex_to_bits(text: str, width: int) -> list:
    text = text.strip().lower().removeprefix("0x") or "0"
    try:
        v = int(text, 16)
    except ValueError:
        _usage(f"data is not hexadecimal: {text!r}")
    if v >= 1 << width:
        _usage(f"data needs {v.bit_length()} bits, capacity is {width}")
    return [(v >> (width - 1 - i)) & 1 for i in range(width)]


def _bits_to_hex(bits: list) -> str:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return format(v, "x")


common = [
    click.option("--q", type=click.IntRange(3, 255), default=4, show_default=True),
    click.option("--n", type=click.IntRange(1), required=True),
    click.option("--p", type=click.IntRange(0), default=1, show_default=True),
    click.option("--mode", type=click.Choice(["anchored", "strict", "side"]), default="anchored",
                 show_default=True, help="side = syndrome on a separate lossless channel"),
    click.option("--L", "L", type=click.IntRange(1), default=L_DEFAULT, show_default=True),
    click.option("--config", type=click.Path(dir_okay=False), default=None,
                 help="key = value file with auxiliary code parameters"),
    click.option("--dna", is_flag=True, help="sequences over ACGT (q=4)"),
    click.option("--json", "as_json", is_flag=True),
]


def with_common(f):
    for opt in reversed(common):
        f = opt(f)
    return f


@click.group()
def main():
    """Codes correcting short tandem duplications and a few edits."""


@main.command()
@with_common
@click.option("--data", required=True, help="payload as hexadecimal")
def encode(q, n, p, mode, L, config, dna, as_json, data):
    """Encode a hexadecimal payload into a codeword."""
    if dna and q != 4:
        _usage("--dna needs q=4")
    bits = _hex_to_bits(data, capacity_bits(q, n))
    try:
        if mode == "side":
            x, rec = codec.encode_A(bits, q, n, p)
            out = {"x": format_seq(x, q, dna), "a": rec.a_prime, "residue": rec.residue}
            _emit(out) if as_json else click.echo(f"{out['x']} {rec.a_prime} {rec.residue}")
            return
        cw = codec.encode_B(bits, q, n, p, _aux(config), mode, L)
    except (codec.CodecError, AuxParamsError, WorkLimitExceeded) as exc:
        _usage(str(exc))
    text = format_seq(cw.seq, q, dna)
    if as_json:
        _emit({"codeword": text, "length": len(cw), "a_prime": cw.record.a_prime,
               "r_len": len(cw.r), "aux": dump_params(cw.aux)})
    else:
        click.echo(text)


@main.command()
@with_common
@click.option("--input", "input_", default=None, help="received sequence (default stdin)")
@click.option("--a", "a_prime", type=click.IntRange(2), default=None, help="side mode: modulus")
@click.option("--residue", type=click.IntRange(0), default=None, help="side mode: residue")
def decode(q, n, p, mode, L, config, dna, as_json, input_, a_prime, residue):
    """Decode a received sequence back to the hexadecimal payload."""
    try:
        y = parse_seq(_read_input(input_).strip(), q)
    except SequenceError as exc:
        _usage(str(exc))
    try:
        if mode == "side":
            if a_prime is None or residue is None:
                _usage("side mode needs --a and --residue")
            bits = codec.decode_A(y, codec.SyndromeRecord(a_prime, residue), q, n, p)
        else:
            bits = codec.decode_B(y, q, n, p, _aux(config), mode, L)
    except codec.DecodeError as exc:
        _emit({"error": exc.kind, "message": str(exc), "diagnostics": exc.diagnostics})
        sys.exit(EXIT_DECODE)
    except (codec.CodecError, AuxParamsError, WorkLimitExceeded) as exc:
        _usage(str(exc))
    h = _bits_to_hex(bits)
    _emit({"data": h}) if as_json else click.echo(h)


@main.command()
@click.option("--q", type=click.IntRange(2, 255), default=4, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--dups", type=click.IntRange(0), default=10, show_default=True,
              help="at most this many duplications")
@click.option("--edits", type=click.IntRange(0), default=0, show_default=True,
              help="exactly this many edits")
@click.option("--kinds", default="sub", show_default=True, help="comma list of sub,ins,del")
@click.option("--dna", is_flag=True)
def channel(q, seed, dups, edits, kinds, dna):
    """Pass a sequence from stdin through a seeded duplication/edit channel."""
    kinds_t = tuple(k.strip() for k in kinds.split(",") if k.strip())
    if not kinds_t or any(k not in EDIT_KINDS for k in kinds_t):
        _usage(f"--kinds must be a comma list of {EDIT_KINDS}")
    try:
        x = parse_seq(sys.stdin.read().strip(), q)
    except SequenceError as exc:
        _usage(str(exc))
    y = run_channel(x, ChannelSpec(dups, edits, kinds_t, seed), q)
    click.echo(format_seq(y, q, dna))


@main.command()
@click.option("--q", type=click.IntRange(3, 255), default=4, show_default=True)
@click.option("--n", type=click.IntRange(1), required=True)
@click.option("--p", type=click.IntRange(0), default=1, show_default=True)
@click.option("--L", "L", type=click.IntRange(1), default=L_DEFAULT, show_default=True)
def bounds(q, n, p, L):
    """Counts, existence bound and redundancy estimates as JSON."""
    irr = count_irr(q, n)
    gv = gv_lower_bound(q, n, p, L)
    out = {
        "q": q, "n": n, "p": p, "L": L,
        "irr_count": str(irr),
        "capacity_bits": capacity_bits(q, n),
        "confusable_bound": str(superset_A_bound(q, n, p, L)),
        "gv_bound": str(gv),
        "gv_log_q_size": gv_log_size(q, n, p, L),
        "gv_log_q_gap": math.log(irr, q) - gv_log_size(q, n, p, L),
        "growth_rate": growth_rate(q) if q >= 4 else None,
        "redundancy_estimate_symbols": 8 * p * math.log(n, q),
    }
    for mode in ("anchored", "strict"):
        try:
            out[f"codeword_len_{mode}"] = codec.codeword_length(q, n, p, mode, L)
        except AuxParamsError:
            out[f"codeword_len_{mode}"] = None
    _emit(out)


@main.command()
@click.argument("suite")
@click.option("--seed", type=int, default=0, show_default=True)
def verify(suite, seed):
    """Run an invariant suite; exit 1 if any check fails."""
    from .verify import SUITES
    if suite not in SUITES:
        _usage(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    failed = 0
    for check in SUITES[suite](seed=seed):
        click.echo(f"{'PASS' if check.ok else 'FAIL'}  {check.name}  {check.detail}")
        failed += not check.ok
    sys.exit(EXIT_DECODE if failed else 0)


@main.command()
@click.option("--construction", type=click.Choice(["A", "B"]), default="B", show_default=True)
@click.option("--q", type=click.IntRange(3, 255), default=4, show_default=True)
@click.option("--n", type=click.IntRange(1), required=True)
@click.option("--p", type=click.IntRange(0), default=1, show_default=True)
@click.option("--mode", type=click.Choice(["anchored", "strict"]), default="anchored",
              show_default=True)
@click.option("--L", "L", type=click.IntRange(1), default=L_DEFAULT, show_default=True)
@click.option("--trials", type=click.IntRange(1), default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="first seed")
@click.option("--dups", type=click.IntRange(0), default=10, show_default=True)
@click.option("--edits", type=click.IntRange(0), default=None, help="default: p")
@click.option("--kinds", default="sub,ins,del", show_default=True)
@click.option("--workers", type=click.IntRange(1), default=1, show_default=True)
@click.option("--config", type=click.Path(dir_okay=False), default=None)
def experiment(construction, q, n, p, mode, L, trials, seed, dups, edits, kinds, workers, config):
    """Monte-Carlo encode/channel/decode runs; prints a JSON report."""
    from .experiments import run_experiment
    kinds_t = tuple(k.strip() for k in kinds.split(",") if k.strip())
    if not kinds_t or any(k not in EDIT_KINDS for k in kinds_t):
        _usage(f"--kinds must be a comma list of {EDIT_KINDS}")
    try:
        rep = run_experiment(construction, q, n, p, mode, trials=trials, seed=seed,
                             max_dups=dups, edits=edits, kinds=kinds_t, L=L,
                             aux=_aux(config), workers=workers)
    except (codec.CodecError, AuxParamsError, WorkLimitExceeded) as exc:
        _usage(str(exc))
    _emit(rep)
    sys.exit(0 if rep["successes"] == rep["trials"] else EXIT_DECODE)


if __name__ == "__main__":
    main()
