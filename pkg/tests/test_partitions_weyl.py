from __future__ import annotations

from math import comb, factorial, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsieve.partitions import (
    BadParity,
    BadPartition,
    Partition,
    conjugate,
    enumerate_partitions,
    is_principal_in_levi,
)
from qsieve.weyl import NotVeryGood, catalan_at_one, degrees_of, is_very_good, q_catalan

KNOWN_P = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def partitions_by_smallest(n: int, low: int = 1) -> list[tuple[int, ...]]:
    """Oracle: partitions built by choosing the smallest part first."""
    if n == 0:
        return [()]
    out = []
    for first in range(low, n + 1):
        for rest in partitions_by_smallest(n - first, first):
            out.append(tuple(sorted((first,) + rest, reverse=True)))
    return out


def family_oracle(parts: tuple[int, ...], family: str) -> bool:
    bad_parity = 0 if family in ("B", "D") else 1
    return all(parts.count(p) % 2 == 0 for p in set(parts) if p % 2 == bad_parity)


@pytest.mark.parametrize("n", range(0, 13))
def test_partition_counts(n):
    assert len(enumerate_partitions(n)) == KNOWN_P[n]


@pytest.mark.parametrize("family,size", [("B", 5), ("B", 7), ("B", 9), ("C", 4), ("C", 6), ("C", 8), ("D", 8), ("D", 10)])
def test_family_enumeration_matches_oracle(family, size):
    want = sorted(p for p in partitions_by_smallest(size) if family_oracle(p, family))
    got = sorted(p.parts for p in enumerate_partitions(size, family))
    assert got == want


def test_parity_errors():
    with pytest.raises(BadParity):
        enumerate_partitions(4, "B")
    with pytest.raises(BadParity):
        enumerate_partitions(5, "D")


def test_parse_and_validation():
    assert Partition.parse("[3,1,1]").parts == (3, 1, 1)
    assert str(Partition.parse("[3, 1]")) == "[3,1]"
    with pytest.raises(BadPartition):
        Partition.parse("[3,1")
    with pytest.raises(BadPartition):
        Partition((1, 3))


def test_stats_examples():
    st_ = Partition.of([3, 3, 1, 1]).stats
    assert st_.mu == {1: 2, 3: 2}
    assert st_.conjugate == (4, 2, 2)
    assert st_.c == 4 * 2 + 2 * 2
    assert (st_.ell, st_.L, st_.ell_hat, st_.L_hat) == (4, 0, 2, 0)
    # regular and zero orbits
    assert Partition.of([5]).stats.c == 4
    assert Partition.of([1, 1, 1]).stats.c == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14).flatmap(lambda n: st.sampled_from(enumerate_partitions(n))))
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam.parts)) == lam.parts
    assert sum(conjugate(lam.parts)) == lam.size


def test_principal_in_levi_rule():
    assert is_principal_in_levi(Partition.of([3, 1, 1]), "B")
    assert not is_principal_in_levi(Partition.of([5, 3, 1]), "B")
    assert is_principal_in_levi(Partition.of([5, 3]), "D") is False
    assert is_principal_in_levi(Partition.of([7, 1]), "D")


# Weyl data and the q-Catalan product


def test_degrees_and_orders():
    assert degrees_of("A", 4).degrees == (2, 3, 4)
    assert degrees_of("B", 3).degrees == (2, 4, 6)
    assert degrees_of("D", 4).degrees == (2, 4, 4, 6)
    assert degrees_of("E8").order == 696729600
    assert degrees_of("E7").coxeter_number == 18
    assert degrees_of("D", 5).num_positive_roots == 20
    assert degrees_of("A", 4).name == "A3"


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("s", [1, 2, 3])
def test_type_A_fuss_catalan(n, s):
    w = degrees_of("A", n)
    m = s * n + 1
    assert catalan_at_one(w, m) == comb((s + 1) * n, n) // (s * n + 1)
    assert q_catalan(w, m).at_one() == catalan_at_one(w, m)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("m", [1, 3, 5, 7, 9])
def test_type_BC_catalan_is_binomial(n, m):
    assert q_catalan(degrees_of("B", n), m).at_one() == comb((m - 1) // 2 + n, n)
    assert q_catalan(degrees_of("B", n), m) == q_catalan(degrees_of("C", n), m)


def test_catalan_recurrence():
    cat = [1] + [q_catalan(degrees_of("A", n), n + 1).at_one() for n in range(2, 10)]
    cat = [1] + cat
    for n in range(1, 9):
        assert cat[n + 1] == sum(cat[i] * cat[n - i] for i in range(n + 1))


def test_catalan_A3_is_14():
    assert q_catalan(degrees_of("A", 4), 5).at_one() == 14


@pytest.mark.parametrize("family,n", [("A", 5), ("B", 4), ("D", 5), ("G2", None), ("F4", None)])
def test_q_catalan_palindromic_and_degree(family, n):
    w = degrees_of(family, n)
    for m in range(1, 2 * w.coxeter_number + 2):
        if not is_very_good(w, m):
            continue
        cat = q_catalan(w, m)
        assert cat.is_palindromic()
        assert cat.degree() == (m - 1) * w.rank


def test_not_very_good():
    with pytest.raises(NotVeryGood):
        q_catalan(degrees_of("B", 2), 4)
    with pytest.raises(NotVeryGood):
        q_catalan(degrees_of("A", 4), 6)
    assert all(gcd(m, 4) == 1 for m in range(1, 20) if is_very_good(degrees_of("A", 4), m))


def test_order_identity():
    for n in range(2, 8):
        assert degrees_of("A", n).order == factorial(n)
        assert degrees_of("D", n).order == 2 ** (n - 1) * factorial(n)
