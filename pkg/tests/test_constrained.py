import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import irreducible_strings
from tandemcode.constrained import (
    SIGMA,
    DeBruijnIrrGraph,
    buffer_exists_everywhere,
    buffer_length,
    capacity_bits,
    count_irr,
    count_table,
    find_buffer,
    growth_rate,
    rank_irr,
    unrank_irr,
)
from tandemcode.core import dedup_root, is_irreducible

# frozen from the brute-force filter in conftest.irreducible_strings
BRUTE_COUNTS = {
    3: [1, 3, 6, 12, 18, 30, 42, 60, 90, 132, 192, 282, 414],
    4: [1, 4, 12, 36, 96, 264, 696, 1848, 4920, 13080],
    5: [1, 5, 20, 80, 300, 1140, 4260],
}


@pytest.mark.parametrize("q", sorted(BRUTE_COUNTS))
def test_counts_frozen(q):
    assert [count_irr(q, n) for n in range(len(BRUTE_COUNTS[q]))] == BRUTE_COUNTS[q]


def test_counts_bruteforce_live():
    for n in range(7):
        assert count_irr(4, n) == len(irreducible_strings(4, n))


def test_count_examples():
    assert count_irr(4, 2) == 12
    assert count_irr(4, 4) == 96
    assert count_irr(4, 5) == 264


@pytest.mark.parametrize("q", [3, 4])
def test_debruijn_path_counts(q):
    g = DeBruijnIrrGraph.build(q)
    assert all(len(g.succ[v]) >= q - 2 for v in g.vertices)
    for k in range(6):
        assert g.count_paths(k) == count_irr(q, 5 + k)


def test_count_table_and_iterative_path():
    t = count_table(4, 50)
    assert t == [count_irr(4, n) for n in range(51)]
    from tandemcode.constrained import _count_iter
    assert _count_iter(4, 80) == count_irr(4, 80)


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_count_sandwich(q):
    c = [count_irr(q, n) for n in range(61)]
    for n in range(1, 60):
        assert (q - 2) * c[n] <= c[n + 1] <= q * c[n]


@pytest.mark.parametrize("q", [4, 5, 6])
def test_partial_sum_bound(q):
    c = [count_irr(q, n) for n in range(61)]
    for N in range(1, 61):
        assert Fraction(sum(c[1:N + 1])) <= Fraction(q - 2, q - 3) * c[N]


def test_unrank_examples():
    assert unrank_irr(4, 3, 0) == bytes([0, 1, 0])
    assert unrank_irr(4, 5, 263) == sorted(irreducible_strings(4, 5))[-1]
    assert [unrank_irr(3, 6, i) for i in range(42)] == sorted(irreducible_strings(3, 6))
    with pytest.raises(IndexError):
        unrank_irr(4, 5, 264)
    with pytest.raises(ValueError):
        rank_irr(bytes([0, 0]), 4)


def test_rank_roundtrip_many():
    rng = random.Random(0)
    for _ in range(10_000):
        n = rng.randrange(1, 40)
        i = rng.randrange(count_irr(4, n))
        assert rank_irr(unrank_irr(4, n, i), 4) == i


@given(st.integers(1, 60), st.integers(0, 2 ** 200), st.integers(0, 2 ** 200))
def test_unrank_monotone(n, a, b):
    c = count_irr(4, n)
    a, b = sorted((a % c, b % c))
    x, y = unrank_irr(4, n, a), unrank_irr(4, n, b)
    assert is_irreducible(x) and len(x) == n
    assert (a < b) == (x < y)


def test_capacity_bits():
    assert capacity_bits(4, 5) == 8
    assert 2 ** capacity_bits(4, 40) <= count_irr(4, 40) < 2 ** (capacity_bits(4, 40) + 1)


def test_growth_rate():
    g = growth_rate(4)
    assert abs(g - 2.6590) <= 5e-5
    assert abs(count_irr(4, 41) / count_irr(4, 40) - g) < 1e-2
    assert 62 < growth_rate(64) < 63
    with pytest.raises(ValueError):
        growth_rate(3)


def test_buffer_lengths():
    assert [buffer_length(q) for q in (3, 4, 5, 6, 9)] == [13, 7, 6, 5, 5]


@pytest.mark.parametrize("q", [4, 5, 6])
def test_buffers_everywhere(q):
    checked, bad = buffer_exists_everywhere(q)
    assert checked > 0 and bad == 0


def test_buffers_q3():
    checked, bad = buffer_exists_everywhere(3)
    assert bad == 0


def test_buffer_q6_uses_large_symbols():
    rng = random.Random(4)
    for _ in range(200):
        x = dedup_root(bytes(rng.randrange(6) for _ in range(30)))
        b = find_buffer(x, 6)
        assert len(b) == 5 and set(b) <= {3, 4, 5}
        assert is_irreducible(x + b + SIGMA)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=30).map(bytes))
def test_buffer_postcondition(s):
    x = dedup_root(s)
    b = find_buffer(x, 4)
    assert len(b) == 7 and is_irreducible(x + b + SIGMA)


def test_buffer_rejects_reducible():
    with pytest.raises(ValueError):
        find_buffer(bytes([0, 0]), 4)
