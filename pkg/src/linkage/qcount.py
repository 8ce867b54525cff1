"""Exact counting formulas over GF(q): q-numbers, Gaussian binomials,
matrices of given rank, MRD sizes and the MRD rank distribution.

Everything here is integer arithmetic on Python ints; nothing rounds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

# Upper bound for q-binomial / q^(k(v-k)) from the infinite product over (1 - q^-i).
QBINOM_RATIO_CAP = Fraction(347, 100)


def q_number(q: int, n: int) -> int:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (q**n - 1) // (q - 1)


def q_factorial(q: int, n: int) -> int:
    out = 1
    for i in range(1, n + 1):
        out *= q_number(q, i)
    return out


@lru_cache(maxsize=None)
def q_binomial(q: int, v: int, k: int) -> int:
    """Number of k-subspaces of GF(q)^v."""
    if k < 0 or k > v:
        raise ValueError(f"need 0 <= k <= v, got v={v}, k={k}")
    num = den = 1
    for i in range(k):
        num *= q**v - q**i
        den *= q**k - q**i
    out, rem = divmod(num, den)
    assert rem == 0
    return out


def q_binomial_or_zero(q: int, v: int, k: int) -> int:
    return q_binomial(q, v, k) if 0 <= k <= v else 0


def q_binomial_estimate_check(q: int, v: int, k: int) -> bool:
    """True iff 1 < [v k]_q / q^(k(v-k)) < 3.47, compared exactly."""
    if not 0 < k < v:
        raise ValueError("need 0 < k < v")
    ratio = Fraction(q_binomial(q, v, k), q ** (k * (v - k)))
    return 1 < ratio < QBINOM_RATIO_CAP


@lru_cache(maxsize=None)
def count_matrices_of_rank(q: int, a: int, b: int, r: int) -> int:
    """Number of a x b matrices over GF(q) with rank exactly r (product form)."""
    if r < 0 or r > min(a, b):
        raise ValueError(f"rank {r} impossible for {a}x{b} matrices")
    num = den = 1
    for i in range(r):
        num *= (q**a - q**i) * (q**b - q**i)
        den *= q**r - q**i
    out, rem = divmod(num, den)
    assert rem == 0
    return out


def count_matrices_of_rank_factorial(q: int, a: int, b: int, r: int) -> int:
    """Same count, via q^C(r,2) (q-1)^r [r]_q! [a r]_q [b r]_q."""
    if r < 0 or r > min(a, b):
        raise ValueError(f"rank {r} impossible for {a}x{b} matrices")
    return q ** comb(r, 2) * (q - 1) ** r * q_factorial(q, r) * q_binomial(q, a, r) * q_binomial(q, b, r)


def count_matrices_rank_at_most(q: int, a: int, b: int, u: int) -> int:
    return sum(count_matrices_of_rank(q, a, b, r) for r in range(0, min(u, a, b) + 1)) if u >= 0 else 0


def mrd_exponent(a: int, b: int, d: int) -> int:
    return max(a, b) * (min(a, b) - d + 1)


def mrd_size(q: int, a: int, b: int, d: int) -> int:
    """Maximum size of an a x b rank-metric code with minimum distance d.

    Equal to ceil(q^(max(a,b) (min(a,b) - d + 1))), so 1 when the exponent is
    not positive.
    """
    e = mrd_exponent(a, b, d)
    return q**e if e > 0 else 1


@lru_cache(maxsize=None)
def mrd_rank_distribution(q: int, a: int, b: int, d: int, r: int) -> int:
    """Number of rank-r words in a linear MRD code (a x b, minimum distance d)."""
    n, m = min(a, b), max(a, b)
    if not (d <= r <= n):
        raise ValueError(f"rank {r} outside [{d}, {n}]")
    total = 0
    for i in range(r - d + 1):
        total += (-1) ** i * q ** comb(i, 2) * q_binomial(q, r, i) * (q ** (m * (r - d + 1 - i)) - 1)
    total *= q_binomial(q, n, r)
    if total < 0:
        raise AssertionError("negative rank distribution count")
    return total


def delta(q: int, a: int, b: int, d: int, u: int) -> int:
    """Size of the rank-<=u part of a linear MRD code, zero matrix included."""
    return 1 + sum(mrd_rank_distribution(q, a, b, d, i) for i in range(d, min(u, a, b) + 1))


def anticode_bound(q: int, v: int, d: int, k: int) -> int:
    """floor([v, k-d/2+1]_q / [k, k-d/2+1]_q)."""
    if d % 2 or not (2 <= d // 2 <= k <= v):
        raise ValueError(f"anticode bound needs 2 <= d/2 <= k <= v, got v={v}, d={d}, k={k}")
    j = k - d // 2 + 1
    return q_binomial(q, v, j) // q_binomial(q, k, j)


def spread_size(q: int, v: int, k: int) -> int:
    if k < 1 or v % k:
        raise ValueError(f"k={k} does not divide v={v}")
    return q_number(q, v) // q_number(q, k)
