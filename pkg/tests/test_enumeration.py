import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monkeyzipf.enumeration import (
    TIE_TOL,
    CountingTable,
    brute_force_top_n,
    count_N,
    top_n,
    verify_csiszar_bounds,
    verify_rank_bounds,
    word_log_base,
)
from monkeyzipf.errors import ResourceError
from monkeyzipf.exponent import solve_root
from monkeyzipf.keyboard import (
    DistributionSpec,
    Keyboard,
    alphas,
    keyboard_from_spacings,
    miller_keyboard,
    sample_spacings,
)

GOLDEN_KB = Keyboard((0.5, 0.25), 0.25)


def random_keyboard(K, seed, c=0.82):
    return keyboard_from_spacings(sample_spacings(DistributionSpec.uniform(), K, seed), c)


def words(ranked):
    return [rw.word.letters for rw in ranked]


def exhaustive_sorted(kb, max_len):
    """Every word up to ``max_len``: sort by rounded log base, then alphabetically."""
    log_q = [math.log(q) for q in kb.q]
    pool = [
        (round(math.fsum(log_q[i - 1] for i in w), 9), w)
        for n in range(max_len + 1)
        for w in itertools.product(range(1, kb.K + 1), repeat=n)
    ]
    pool.sort(key=lambda e: (-e[0], e[1]))
    return [w for _, w in pool]


def test_golden_order_example():
    expected = [(), (1,), (1, 1), (2,), (1, 1, 1), (1, 2), (2, 1), (1, 1, 1, 1)]
    assert exhaustive_sorted(GOLDEN_KB, 6)[:8] == expected
    assert words(top_n(GOLDEN_KB, 8)) == expected
    assert words(brute_force_top_n(GOLDEN_KB, 8, 6)) == expected


def test_n1_is_null_word():
    for kb in (GOLDEN_KB, miller_keyboard(26, 0.18), random_keyboard(9, 4)):
        (first,) = top_n(kb, 1)
        assert first.rank == 1 and first.word.letters == () and first.log_base == 0.0
        assert words(brute_force_top_n(kb, 1, 1)) == [()]


def test_small_miller_geometric_counts():
    kb = miller_keyboard(3, 0.1)
    ranked = brute_force_top_n(kb, 13, 3)
    assert [rw.rank for rw in ranked] == list(range(1, 14))
    assert [len(w) for w in words(ranked)] == [0] + [1] * 3 + [2] * 9
    assert words(top_n(kb, 13)) == words(ranked)


def test_brute_force_guards():
    with pytest.raises(ResourceError, match="too large"):
        brute_force_top_n(miller_keyboard(26, 0.18), 10, 6)
    with pytest.raises(ValueError, match="truncation unsafe"):
        brute_force_top_n(miller_keyboard(3, 0.1), 14, 2)


def test_frontier_budget():
    with pytest.raises(ResourceError):
        top_n(miller_keyboard(26, 0.18), 1000, budget=100)


def oracle(kb, N):
    """Brute force at the shortest truncation length that is provably safe."""
    for max_len in range(1, 200):
        try:
            return brute_force_top_n(kb, N, max_len)
        except ValueError:
            continue
    raise AssertionError("no safe truncation length")


def test_oracle_on_skewed_keyboard():
    # the top words here are long runs of the first letter
    kb = Keyboard.normalized([0.9, 0.02, 0.01], 0.07)
    ranked = oracle(kb, 500)
    assert max(len(w) for w in words(ranked)) > 20
    assert words(ranked) == words(top_n(kb, 500))


def _assert_sorted(ranked, kb):
    lbs = [rw.log_base for rw in ranked]
    assert [rw.rank for rw in ranked] == list(range(1, len(ranked) + 1))
    for a, b in zip(ranked, ranked[1:]):
        assert b.log_base <= a.log_base + TIE_TOL
        if abs(a.log_base - b.log_base) <= TIE_TOL:
            assert a.word.letters < b.word.letters
    for rw in ranked[:: max(1, len(ranked) // 500)]:
        assert abs(word_log_base(kb, rw.word.letters) - rw.log_base) <= 1e-9
    assert all(lb <= 0 for lb in lbs)


@settings(max_examples=40, deadline=None)
@given(K=st.integers(2, 6), seed=st.integers(0, 2**32), N=st.integers(1, 400),
       c=st.floats(0.3, 0.95))
def test_top_n_matches_oracle(K, seed, N, c):
    kb = random_keyboard(K, seed, c)
    fast = top_n(kb, N)
    _assert_sorted(fast, kb)
    slow = oracle(kb, N)
    assert words(fast) == words(slow)
    assert np.allclose([r.log_base for r in fast], [r.log_base for r in slow],
                       rtol=0, atol=1e-12)


def test_exact_ties_in_equal_model():
    ranked = top_n(miller_keyboard(4, 0.2), 1 + 4 + 16)
    assert words(ranked)[5:] == list(itertools.product(range(1, 5), repeat=2))


def test_permutation_ties_are_alphabetical():
    kb = Keyboard.normalized([0.37, 0.21, 0.13], 0.29)
    ranked = top_n(kb, 400)
    _assert_sorted(ranked, kb)
    by_multiset = {}
    for rw in ranked:
        by_multiset.setdefault(tuple(sorted(rw.word.letters)), []).append(rw)
    for group in by_multiset.values():
        ranks = [rw.rank for rw in group]
        if len(group) > 1 and ranks[-1] - ranks[0] == len(group) - 1:
            assert [rw.word.letters for rw in group] == sorted(rw.word.letters for rw in group)


def compositions(parts, lo, hi):
    """Number of ordered sequences over ``parts`` with sum in (lo, hi]."""
    total = 0
    stack = [0]
    while stack:
        acc = stack.pop()
        if lo < acc <= hi:
            total += 1
        stack.extend(acc + p for p in parts if acc + p <= hi)
    return total


def test_counts_golden():
    rep = count_N(GOLDEN_KB, 5)
    assert rep.N_t == compositions((1, 2), 4, 5) == 8
    assert rep.N_cum_t == compositions((1, 2), -1, 5) == 20
    table = CountingTable(GOLDEN_KB, 20)
    for t in range(2, 21):
        assert table.N(t) == table.N(t - 1) + table.N(t - 2)


def test_counts_equal_probabilities():
    for K in (2, 3, 7, 26):
        table = CountingTable(miller_keyboard(K, 0.18), 4 if K == 26 else 6)
        for j in range(int(table.t_max) + 1):
            assert table.N(j) == K**j
            assert table.N_cum(j) == sum(K**i for i in range(j + 1))


@pytest.mark.parametrize("t", [0.0, 0.3, 0.999])
def test_counts_below_one(t):
    for kb in (GOLDEN_KB, random_keyboard(5, 2)):
        rep = count_N(kb, t)
        assert rep.N_t == 1 and rep.N_cum_t == 1


def test_count_report_invariants():
    kb = random_keyboard(6, 13)
    table = CountingTable(kb, 9)
    for t in np.arange(0, 9.01, 0.25):
        n_cum = table.N_cum(t)
        assert n_cum >= 1 and table.N(t) >= 0
        assert n_cum == sum(table.N(t - j) for j in range(int(math.floor(t)) + 1))


@settings(max_examples=25, deadline=None)
@given(K=st.integers(2, 7), seed=st.integers(0, 2**32))
def test_count_recursion(K, seed):
    kb = random_keyboard(K, seed)
    a = alphas(kb)
    table = CountingTable(kb, 8)
    for t in np.arange(1, 8.01, 0.37):
        assert table.N(t) == sum(table.N(t - ai) if t - ai >= 0 else 0 for ai in a)


@settings(max_examples=25, deadline=None)
@given(K=st.integers(2, 6), seed=st.integers(0, 2**32), t=st.floats(0, 6))
def test_ncum_matches_top_n(K, seed, t):
    kb = random_keyboard(K, seed)
    n_cum = count_N(kb, t).N_cum_t
    ranked = top_n(kb, n_cum + 1)
    log_q1 = math.log(kb.q[0])
    radix = [rw.log_base / log_q1 for rw in ranked]
    assert sum(x <= t + TIE_TOL for x in radix) == n_cum
    assert radix[-1] > t - TIE_TOL


def test_count_cap_and_budget():
    with pytest.raises(ResourceError) as err:
        count_N(GOLDEN_KB, 31)
    assert err.value.estimate == pytest.approx((1 / 0.618033988749895) ** 31, rel=1e-9)
    with pytest.raises(ResourceError):
        CountingTable(miller_keyboard(26, 0.18), 12, node_budget=10_000)
    with pytest.raises(ValueError):
        count_N(GOLDEN_KB, -1)


def test_csiszar_examples():
    rows = verify_csiszar_bounds(miller_keyboard(5, 0.1), range(0, 9))
    assert all(r.ok for r in rows)
    assert [r.N for r in rows] == [5**j for j in range(9)]
    assert rows[0].N == 1 == rows[0].upper

    rows = verify_csiszar_bounds(GOLDEN_KB, [0.5, 1, 2.5, 5, 10])
    rep = solve_root(GOLDEN_KB)
    expected = {0.5: 1, 1: 1, 2.5: 2, 5: 8, 10: 89}
    for r in rows:
        assert r.N == expected[r.t]
        assert rep.b * rep.R0**r.t < r.N <= rep.R0**r.t * (1 + 1e-12)
        assert r.ok


@settings(max_examples=20, deadline=None)
@given(K=st.integers(2, 8), seed=st.integers(0, 2**32))
def test_csiszar_random(K, seed):
    rows = verify_csiszar_bounds(random_keyboard(K, seed), np.arange(0, 10.01, 0.5))
    assert all(r.ok for r in rows)


def test_rank_bounds():
    kb = miller_keyboard(26, 0.18)
    ranked = top_n(kb, 20_000)
    report = verify_rank_bounds(kb, ranked)
    assert report.violations == 0 and report.ok.all()
    rep = solve_root(kb)
    assert report.lower[0] == pytest.approx(rep.C1) and report.upper[0] == pytest.approx(rep.C2)
    assert rep.C1 < 1 < rep.C2


def test_rank_bounds_flag_bad_ranks():
    kb = random_keyboard(6, 1)
    ranked = top_n(kb, 50)
    shuffled = [type(rw)(rw.rank * 1000, rw.word) for rw in ranked]
    assert verify_rank_bounds(kb, shuffled).violations > 0


@settings(max_examples=5, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_rank_bounds_random_k26(seed):
    kb = random_keyboard(26, seed)
    assert verify_rank_bounds(kb, top_n(kb, 20_000)).violations == 0
