"""End-to-end acceptance checks, one test per criterion, each with its time budget."""

from __future__ import annotations

import time
from contextlib import contextmanager
from math import gcd

from qsieve.coxeter import group_census
from qsieve.exceptional import check_values, verify_exceptional_sum, verify_factorization_shape, very_good_values
from qsieve.kreweras import (
    all_krew,
    krew,
    narayana,
    narayana_closed_form,
    narayana_grouped,
    verify_divisibility_positivity,
    verify_sum_identity,
)
from qsieve.ncmodels import verify_csp
from qsieve.nilcount import count_nilpotent_by_rank_A, count_nilpotent_by_rank_BC, bc_rank_pairs
from qsieve.partitions import Partition, is_principal_in_levi, orbit_partitions
from qsieve.qpoly import ZERO, QPoly
from qsieve.sieve_eval import cross_check, divisors
from qsieve.weyl import degrees_of, q_catalan


@contextmanager
def criterion(number: int, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        verdict = "pass" if ok and within else "fail"
        print(f"\ncriterion {number}: {verdict} ({elapsed:.2f}s, limit {limit:g}s)")
    assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def grid():
    """(w, m) pairs: A n<=8 with m<=17 coprime, B/C n<=6 and D 2<=n<=6 with odd m<=15."""
    out = []
    for n in range(2, 9):
        w = degrees_of("A", n)
        out += [(w, m) for m in range(1, 18) if gcd(m, n) == 1]
    for fam in "BC":
        for n in range(1, 7):
            out += [(degrees_of(fam, n), m) for m in range(1, 16, 2)]
    for n in range(2, 7):
        out += [(degrees_of("D", n), m) for m in range(1, 16, 2)]
    return out


def test_criterion_01_intro_table():
    with criterion(1, 1.0):
        w = degrees_of("A", 4)
        lams = [[4], [3, 1], [2, 2], [2, 1, 1], [1, 1, 1, 1]]
        assert [krew(w, Partition.of(x), 5).poly.at_one() for x in lams] == [1, 4, 2, 6, 1]
        assert [narayana(w, 5, k).at_one() for k in range(4)] == [1, 6, 6, 1]


def test_criterion_02_sum_identity():
    with criterion(2, 30.0):
        for w, m in grid():
            assert verify_sum_identity(w, m).ok, (w.name, m)


def test_criterion_03_narayana():
    with criterion(3, 10.0):
        for w, m in grid():
            if w.family == "D":
                continue
            ks = range(w.rank + 1)
            total = ZERO
            for k in ks:
                closed = narayana_closed_form(w, m, k)
                assert closed == narayana_grouped(w, m, k), (w.name, m, k)
                if w.family == "B":
                    assert closed == narayana_closed_form(degrees_of("C", w.n), m, k)
                total = total + closed
            assert total == q_catalan(w, m), (w.name, m)


def test_criterion_04_positivity_divisibility():
    with criterion(4, 30.0):
        for w, m in grid():
            assert verify_divisibility_positivity(w, m).ok, (w.name, m)


def test_criterion_05_D4_polynomial():
    with criterion(5, 1.0):
        got = krew(degrees_of("D", 4), Partition.of([3, 3, 1, 1]), 9).poly
        assert got == QPoly({14: 2, 16: 4, 18: 6, 20: 7, 22: 5, 24: 3, 26: 1})


def test_criterion_06_roots_of_unity():
    cases = (
        [("A", n, s) for n in range(2, 7) for s in (1, 2)]
        + [(f, n, s) for f in "BC" for n in range(1, 5) for s in (1, 2)]
        + [("D", n, s) for n in range(2, 5) for s in (1, 2)]
    )
    with criterion(6, 60.0):
        for fam, n, s in cases:
            w = degrees_of(fam, n)
            for lam in orbit_partitions(fam, n):
                if not is_principal_in_levi(lam, fam):
                    continue
                for d in divisors(s * w.coxeter_number):
                    assert cross_check(w, lam, s, d).agrees, (w.name, lam, s, d)


def test_criterion_07_csp_brute_force():
    cases = (
        [("A", n, 1) for n in range(2, 6)]
        + [("A", n, 2) for n in range(2, 5)]
        + [("A", 3, 3)]
        + [(f, n, 1) for f in "BC" for n in range(1, 4)]
        + [(f, 2, s) for f in "BC" for s in (2, 3)]
        + [("D", 4, 1)]
    )
    with criterion(7, 300.0):
        for fam, n, s in cases:
            assert verify_csp(degrees_of(fam, n), s).ok, (fam, n, s)


def test_criterion_08_group_census():
    cases = (
        [("A", n, s) for n in range(2, 6) for s in (1, 2)]
        + [("B", n, s) for n in range(1, 4) for s in (1, 2)]
        + [("D", 4, 1)]
    )
    with criterion(8, 120.0):
        for fam, n, s in cases:
            w = degrees_of(fam, n)
            m = s * w.coxeter_number + 1
            total, by_type = group_census(w, s)
            assert total == q_catalan(w, m).at_one()
            for r in all_krew(w, m):
                assert by_type.get(r.lam, 0) == r.poly.at_one(), (w.name, s, r.lam)


def test_criterion_09_finite_fields():
    with criterion(9, 120.0):
        for n in range(1, 5):
            assert count_nilpotent_by_rank_A(n, 2).ok
        for n in range(1, 4):
            assert count_nilpotent_by_rank_A(n, 3).ok
        assert count_nilpotent_by_rank_BC(2, 3, "B").ok
        assert count_nilpotent_by_rank_BC(2, 3, "C").ok
        for _, b, c in bc_rank_pairs(2, 3):
            assert b == c


def test_criterion_10_exceptional():
    with criterion(10, 120.0):
        for g in ("G2", "F4"):
            for m in very_good_values(g):
                assert verify_exceptional_sum(g, m).ok, (g, m)
        for g in ("E6", "E7", "E8"):
            ms = check_values(g)
            assert len(ms) == 3
            for m in ms:
                assert verify_exceptional_sum(g, m).ok, (g, m)
        for g in ("G2", "F4", "E6", "E7", "E8"):
            assert verify_factorization_shape(g).ok, g
