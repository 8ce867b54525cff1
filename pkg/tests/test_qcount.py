from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from linkage.qcount import (
    anticode_bound,
    count_matrices_of_rank,
    count_matrices_of_rank_factorial,
    count_matrices_rank_at_most,
    delta,
    mrd_rank_distribution,
    mrd_size,
    q_binomial,
    q_binomial_estimate_check,
    q_number,
)

QS = st.sampled_from((2, 3, 4, 5, 7, 8, 9))


def test_small_values():
    assert q_binomial(2, 4, 2) == 35
    assert q_binomial(2, 7, 3) == 11811
    assert q_binomial(3, 4, 2) == 130
    assert q_number(2, 4) == 15
    assert mrd_size(2, 4, 4, 2) == 4096
    assert mrd_size(2, 4, 8, 2) == 2**24
    assert mrd_size(2, 3, 2, 3) == 1
    assert delta(2, 4, 4, 2, 2) == 526
    assert delta(2, 4, 8, 2, 2) == 8926
    assert anticode_bound(2, 9, 4, 4) == 52535


@given(QS, st.integers(1, 12), st.integers(0, 12))
def test_q_pascal_and_symmetry(q, v, k):
    if k > v:
        return
    assert q_binomial(q, v, k) == q_binomial(q, v, v - k)
    if 0 < k < v:
        assert q_binomial(q, v, k) == q_binomial(q, v - 1, k - 1) + q**k * q_binomial(q, v - 1, k)


@given(QS, st.integers(2, 14), st.integers(1, 13))
def test_q_binomial_estimate(q, v, k):
    if 0 < k < v:
        assert q_binomial_estimate_check(q, v, k)
        assert Fraction(q_binomial(q, v, k), q ** (k * (v - k))) > 1


@given(QS, st.integers(1, 8), st.integers(1, 8))
def test_rank_counts_partition_all_matrices(q, a, b):
    assert sum(count_matrices_of_rank(q, a, b, r) for r in range(min(a, b) + 1)) == q ** (a * b)
    for r in range(min(a, b) + 1):
        assert count_matrices_of_rank(q, a, b, r) == count_matrices_of_rank_factorial(q, a, b, r)
        assert count_matrices_of_rank(q, a, b, r) == count_matrices_of_rank(q, b, a, r)


@given(QS, st.integers(1, 8), st.integers(1, 8), st.integers(1, 8), st.integers(0, 8))
def test_delta_between_one_and_mrd_size(q, a, b, d, u):
    if d > min(a, b):
        return
    dl = delta(q, a, b, d, u)
    assert 1 <= dl <= mrd_size(q, a, b, d)
    assert dl <= count_matrices_rank_at_most(q, a, b, u)
    if u >= min(a, b):
        assert dl == mrd_size(q, a, b, d)


def test_rank_distribution_rejects_impossible_rank():
    with pytest.raises(ValueError):
        mrd_rank_distribution(2, 4, 4, 2, 1)
    with pytest.raises(ValueError):
        q_binomial(2, 3, 4)
