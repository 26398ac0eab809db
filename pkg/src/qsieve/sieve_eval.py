"""Kreweras polynomials at roots of unity: exact reduction versus closed forms."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd

from qsieve.kreweras import KrewerasResult, krew
from qsieve.partitions import Partition, is_principal_in_levi
from qsieve.qpoly import CycloElt, reduce_mod_cyclo
from qsieve.weyl import WeylType


class BadDivisor(ValueError):
    pass


class OutOfScope(ValueError):
    pass


class Mismatch(AssertionError):
    pass


def multinomial(n: int, parts: list[int]) -> int:
    """n! / (prod parts! (n - sum)!), zero when the parts overflow n."""
    if n < 0 or any(p < 0 for p in parts) or sum(parts) > n:
        return 0
    out, rest = 1, n
    for p in parts:
        out *= comb(rest, p)
        rest -= p
    return out


def eval_exact(kr: KrewerasResult, d: int) -> CycloElt:
    if d < 1 or (kr.m - 1) % d:
        raise BadDivisor(f"d={d} does not divide m-1={kr.m - 1}")
    return reduce_mod_cyclo(kr.poly, d)


def _dminus(d: int) -> int:
    return d // gcd(2, d)


def _dplus(d: int) -> int:
    return d * 2 // gcd(2, d)


def _closed_A(n: int, lam: Partition, s: int, d: int) -> int:
    mu = list(lam.stats.mu.values())
    m = s * n + 1
    if d == 1:
        total = multinomial(m, mu)
        assert total % m == 0
        return total // m
    off = [v for v in mu if v % d]
    if len(off) > 1 or (off and off[0] % d != 1):
        return 0
    return multinomial(s * n // d, [v // d for v in mu])


def _closed_BC(n: int, lam: Partition, s: int, d: int) -> int:
    hats = list(lam.stats.mu_hat.values())
    if any((2 * v) % d for v in hats):
        return 0
    dm = _dminus(d)
    return multinomial(s * n // dm, [v // dm for v in hats])


def _closed_D(n: int, lam: Partition, s: int, d: int) -> int:
    st = lam.stats
    N = s * (n - 1)
    hats = list(st.mu_hat.values())
    if st.L_hat == 1:
        if any((2 * v) % d for v in hats):
            return 0
        dm = _dminus(d)
        return multinomial(N // dm, [v // dm for v in hats])
    mu1 = st.mu.get(1, 0)
    rest = [v for j, v in st.mu.items() if j >= 2]
    hat1 = st.mu_hat.get(1, 0)
    hat_rest = [v for j, v in st.mu_hat.items() if j >= 2]
    dp = _dplus(d)
    if any(v % dp for v in rest) or mu1 % dp not in (0, 2 % dp):
        return 0
    if d in (1, 2):
        first = multinomial(N, hat_rest) * multinomial(N + 1 - sum(hat_rest), [hat1])
        sign = 1 if d == 1 else (-1) ** n
        return first + sign * multinomial(N, hats)
    top = 2 * N // dp
    if mu1 % dp == 0:
        mus = list(st.mu.values())
        return (1 + (-1) ** (2 * n // d)) * multinomial(top, [v // dp for v in mus])
    return multinomial(top, [(mu1 - 2) // dp] + [v // dp for v in rest])


def eval_closed_form(w: WeylType, lam: Partition, s: int, d: int) -> int:
    """Closed-form value at a primitive d-th root of unity, m = s*h + 1."""
    sh = s * w.coxeter_number
    if d < 1 or sh % d:
        raise BadDivisor(f"d={d} does not divide s*h={sh}")
    if not is_principal_in_levi(lam, w.family):
        raise OutOfScope(f"{lam} is not principal in a Levi subalgebra")
    if w.family == "A":
        return _closed_A(w.n, lam, s, d)
    if w.family in ("B", "C"):
        return _closed_BC(w.n, lam, s, d)
    if w.family == "D":
        return _closed_D(w.n, lam, s, d)
    raise OutOfScope(f"no closed form for {w.name}")


@dataclass(frozen=True)
class SieveEval:
    weyl: WeylType
    lam: Partition
    m: int
    d: int
    exact_value: CycloElt
    closed_form: int | None
    agrees: bool


def cross_check(w: WeylType, lam: Partition, s: int, d: int) -> SieveEval:
    m = s * w.coxeter_number + 1
    kr = krew(w, lam, m)
    exact = eval_exact(kr, d)
    if not kr.principal_in_levi:
        ok = exact.is_zero()
        if not ok:
            raise Mismatch(f"{w.name} {lam} d={d}: non-principal orbit does not vanish")
        return SieveEval(w, lam, m, d, exact, None, True)
    closed = eval_closed_form(w, lam, s, d)
    ok = exact.equals_int(closed)
    if not ok:
        raise Mismatch(
            f"{w.name} {lam} s={s} d={d}: exact {exact.residue} vs closed form {closed}"
        )
    return SieveEval(w, lam, m, d, exact, closed, ok)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]
