from __future__ import annotations

import cmath
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsieve.qpoly import (
    ONE,
    ZERO,
    DivisionNotExact,
    QPoly,
    cyclotomic,
    exact_div,
    product,
    q_binomial,
    q_factorial,
    q_int,
    q_multinomial,
    reduce_mod_cyclo,
    substitute_q_squared,
    totient,
)

polys = st.dictionaries(st.integers(0, 12), st.integers(-9, 9), max_size=6).map(QPoly)


def subset_qbinomial(n: int, k: int) -> dict[int, int]:
    """Oracle: sum over k-subsets S of {0..n-1} of q^(sum S - k(k-1)/2)."""
    out: dict[int, int] = {}
    for s in combinations(range(n), k):
        e = sum(s) - k * (k - 1) // 2
        out[e] = out.get(e, 0) + 1
    return out


def inversion_factorial(n: int) -> dict[int, int]:
    """Oracle: generating function of inversions over permutations of n."""
    out: dict[int, int] = {}
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        out[inv] = out.get(inv, 0) + 1
    return out


def test_q_int_small():
    assert q_int(0) == ZERO
    assert q_int(1) == ONE
    assert q_int(3) == QPoly({0: 1, 1: 1, 2: 1})


@pytest.mark.parametrize("n", range(0, 9))
def test_q_binomial_matches_subset_oracle(n):
    for k in range(n + 1):
        assert q_binomial(n, k) == QPoly(subset_qbinomial(n, k))


def test_q_binomial_outside_range_is_zero():
    assert q_binomial(3, 4) == ZERO
    assert q_binomial(3, -1) == ZERO


@pytest.mark.parametrize("n", range(0, 7))
def test_q_factorial_is_inversion_generating_function(n):
    assert q_factorial(n) == QPoly(inversion_factorial(n))


def test_q_multinomial_counts_words():
    # [5]!/([2]![2]![1]!) at q=1 is 30
    assert q_multinomial(5, [2, 2, 1]).at_one() == 30
    # the leftover block is implicit
    assert q_multinomial(5, [2, 2]) == q_multinomial(5, [2, 2, 1])
    assert q_multinomial(3, [2, 2]) == ZERO


def test_format():
    assert str(QPoly({7: 1, 8: 1, 9: 1, 10: 1})) == "q^7 + q^8 + q^9 + q^10"
    assert str(QPoly({14: 2})) == "2*q^14"
    assert str(ZERO) == "0"


def test_exact_division_and_failure():
    assert exact_div(q_int(6), q_int(2)) == QPoly({0: 1, 2: 1, 4: 1})
    with pytest.raises(DivisionNotExact):
        exact_div(q_int(5), q_int(2))


def test_substitute_q_squared():
    assert substitute_q_squared(q_int(3)) == QPoly({0: 1, 2: 1, 4: 1})


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_product(n):
    divs = [d for d in range(1, n + 1) if n % d == 0]
    assert product(cyclotomic(d) for d in divs) == QPoly({n: 1, 0: -1})
    assert cyclotomic(n).degree() == totient(n)


@settings(max_examples=60, deadline=None)
@given(polys, st.integers(1, 12))
def test_reduction_agrees_with_complex_evaluation(p, d):
    red = reduce_mod_cyclo(p, d)
    w = cmath.exp(2j * cmath.pi / d)
    direct = sum(c * w**e for e, c in p.items())
    assert abs(red.to_complex() - direct) < 1e-6


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_divmod_identity(a, b):
    if b.is_zero() or abs(b.coeffs()[-1]) != 1:
        return
    quo, rem = a.divmod(b)
    assert quo * b + rem == a
    assert rem.is_zero() or rem.degree() < b.degree()


@settings(max_examples=50, deadline=None)
@given(polys, polys)
def test_product_then_divide_recovers_factor(a, b):
    if b.is_zero() or abs(b.coeffs()[-1]) != 1:
        return
    assert exact_div(a * b, b) == a


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10), st.integers(0, 10))
def test_q_binomial_symmetry_and_pascal(n, k):
    if k > n:
        return
    assert q_binomial(n, k) == q_binomial(n, n - k)
    if k >= 1:
        lhs = q_binomial(n + 1, k)
        rhs = q_binomial(n, k - 1) + q_binomial(n, k).shift(k)
        assert lhs == rhs
