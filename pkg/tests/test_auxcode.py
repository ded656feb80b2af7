import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from tandemcode.auxcode import (
    DEFAULT_AUX,
    AuxDecodeError,
    AuxParams,
    AuxParamsError,
    block_color,
    block_set,
    decode_CE,
    decode_E1,
    dump_params,
    encode_CE,
    encode_E1,
    load_params,
    params_from_mapping,
    scan_T_groups,
    zeta,
    zeta_inverse,
)
from tandemcode.constrained import SIGMA, buffer_length
from tandemcode.core import ChannelSpec, dedup_root, is_irreducible, run_channel, seq

P = DEFAULT_AUX


def count_occ(s, pat):
    return sum(1 for i in range(len(s) - len(pat) + 1) if s[i:i + len(pat)] == pat)


def blocks_by_filter(q, m):
    out = []
    for b in itertools.product(range(q), repeat=m):
        s = SIGMA + bytes(b) + SIGMA
        if is_irreducible(s) and count_occ(s, SIGMA) == 2:
            out.append(bytes(b))
    return out


def random_bits(rng, n):
    return [rng.randrange(2) for _ in range(n)]


def substring_edit(y, rng, L):
    i = rng.randrange(len(y) + 1)
    lu = rng.randrange(0, min(L, len(y) - i) + 1)
    lv = rng.randrange(0 if lu else 1, L + 1)
    v = bytes(rng.randrange(4) for _ in range(lv))
    return y[:i] + v + y[i + lu:]


def test_block_count_m8_frozen():
    # 860 comes from the exhaustive filter over all 4^8 strings
    assert block_set(4, SIGMA, 8).size == 860
    assert block_set(4, SIGMA, 8).enumerate() == blocks_by_filter(4, 8)


def test_block_count_q3_m9():
    assert block_set(3, SIGMA, 9).enumerate() == blocks_by_filter(3, 9)


def test_block_count_lower_bound():
    bs = block_set(4, SIGMA, 18)
    assert bs.size >= 2 ** (18 - buffer_length(4))


@given(st.integers(0, 10 ** 9))
def test_block_rank_roundtrip(i):
    bs = block_set(4, SIGMA, 18)
    i %= bs.size
    b = bs.unrank(i)
    assert bs.contains(b) and bs.rank(b) == i
    s = SIGMA + b + SIGMA
    assert is_irreducible(s) and count_occ(s, SIGMA) == 2


def test_color_bounds_contiguous():
    bs = block_set(4, SIGMA, 18)
    starts = bs.color_bounds(9)
    sizes = [b - a for a, b in zip(starts, starts[1:])]
    assert starts[0] == 0 and starts[-1] == bs.size
    assert max(sizes) - min(sizes) <= 1


def test_default_params_valid():
    p = P.validate()
    assert (p.q, p.m, p.p_tilde, p.T, p.N_hat, p.gamma, p.L) == (4, 18, 3, 9, 15, 4, 17)
    assert p.k == 3 and p.capacity == 108
    assert p.length == 15 * 9 * 23 - 5 == 3100


@pytest.mark.parametrize("change", [
    {"m": 17}, {"T": 8}, {"N_hat": 12}, {"N_hat": 16}, {"q": 2}, {"p_tilde": 0},
    {"m": 6, "L": 5, "gamma": 8, "N_hat": 15},
])
def test_invalid_params(change):
    fields = dict(q=4, m=18, p_tilde=3, T=9, N_hat=15, gamma=4, L=17)
    fields.update(change)
    with pytest.raises(AuxParamsError):
        AuxParams(**fields).validate()


def test_config_roundtrip(tmp_path):
    path = tmp_path / "aux.conf"
    path.write_text("# aux\n" + dump_params(P) + "\n")
    assert load_params(path) == P
    with pytest.raises(AuxParamsError):
        params_from_mapping({"bogus": 1})
    path.write_text("m 18\n")
    with pytest.raises(AuxParamsError):
        load_params(path)


def test_sized_for():
    p = AuxParams.sized_for(4, 3, 200)
    assert p.capacity >= 200
    small = AuxParams.sized_for(4, 3, 10)
    assert small.capacity >= 10 and small.length <= p.length
    with pytest.raises(AuxParamsError):
        AuxParams.sized_for(4, 3, 10 ** 7)


def test_zeta_maps():
    for j in range(P.T):
        for v in range(1 << P.gamma):
            b = zeta(P, j, v)
            assert block_color(P, b) == j
            assert zeta_inverse(P, j, b) == v
            assert zeta_inverse(P, (j + 1) % P.T, b) is None
    assert zeta_inverse(P, 0, seq("0" * 18)) is None


def test_encode_structure():
    rng = random.Random(0)
    bits = random_bits(rng, P.capacity)
    c = encode_CE(bits, P)
    assert len(c) == P.length
    assert is_irreducible(c)
    assert count_occ(c, SIGMA) == P.N_hat * P.T - 1
    blocks = [c[i * 23:i * 23 + 18] for i in range(P.N_hat * P.T)]
    assert all(c[i * 23 + 18:i * 23 + 23] == SIGMA for i in range(P.N_hat * P.T - 1))
    assert [block_color(P, b) for b in blocks] == [i % P.T for i in range(P.N_hat * P.T)]
    assert decode_CE(c, P) == bits


def test_encode_errors():
    with pytest.raises(AuxParamsError):
        encode_CE([0] * (P.capacity + 1), P)
    with pytest.raises(ValueError):
        encode_CE([2], P)


def test_short_message_padding():
    assert decode_CE(encode_CE([1, 0, 1], P), P, nbits=3) == [1, 0, 1]


def test_scan_error_free():
    c = encode_CE(random_bits(random.Random(1), P.capacity), P)
    scan = scan_T_groups(c, P)
    assert all(g is not None for g in scan.slots)
    assert scan.m_blocks == P.N_hat * P.T and not scan.collisions


def _slot_damage(c, y):
    clean = scan_T_groups(c, P).slots
    got = scan_T_groups(y, P)
    erased = sum(g is None for g in got.slots)
    wrong = sum(g is not None and g != h for g, h in zip(got.slots, clean))
    return wrong, erased, got


def test_one_edit_leaves_most_slots():
    rng = random.Random(2)
    c = encode_CE(random_bits(rng, P.capacity), P)
    for _ in range(40):
        y = dedup_root(substring_edit(c, rng, 17))
        wrong, erased, _ = _slot_damage(c, y)
        assert wrong + erased <= 2


def test_three_edits_within_budget():
    rng = random.Random(3)
    c = encode_CE(random_bits(rng, P.capacity), P)
    for _ in range(40):
        y = c
        for _ in range(3):
            y = substring_edit(y, rng, 17)
        y = dedup_root(y)
        wrong, erased, scan = _slot_damage(c, y)
        assert wrong + erased <= 2 * P.p_tilde
        assert scan.m_blocks < P.N_hat * P.T + P.p_tilde


def test_channel_roundtrip():
    rng = random.Random(4)
    for t in range(20):
        bits = random_bits(rng, P.capacity)
        y = run_channel(encode_CE(bits, P), ChannelSpec(10, 3, ("sub",), t), 4)
        assert decode_CE(dedup_root(y), P) == bits


def test_decode_failure_has_diagnostics():
    junk = dedup_root(bytes(random.Random(5).randrange(4) for _ in range(400)))
    with pytest.raises(AuxDecodeError) as info:
        decode_CE(junk, P)
    assert "erased_slots" in info.value.diagnostics


def test_E1_properties():
    rng = random.Random(6)
    bits = random_bits(rng, P.capacity)
    r = encode_E1(bits, P)
    assert is_irreducible(SIGMA + r)
    from tandemcode.auxcode import mirrored
    assert decode_CE(r[::-1], mirrored(P)) == bits
    x = dedup_root(bytes(rng.randrange(4) for _ in range(80)))
    from tandemcode.constrained import find_buffer
    w = x + find_buffer(x, 4) + SIGMA + r
    assert is_irreducible(w)
    assert decode_E1(w, P) == bits
    y = run_channel(w, ChannelSpec(10, 3, ("sub", "ins", "del"), 9), 4)
    assert decode_E1(dedup_root(y), P, nbits=len(bits)) == bits
