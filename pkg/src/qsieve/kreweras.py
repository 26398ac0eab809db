"""q-Kreweras and q-Narayana polynomials for the classical types."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from qsieve.partitions import (
    BadPartition,
    Partition,
    family_size,
    in_family,
    is_principal_in_levi,
    is_very_even,
    orbit_partitions,
)
from qsieve.qpoly import (
    ZERO,
    QPoly,
    exact_div,
    product,
    q_binomial,
    q_int,
    q_multinomial,
    substitute_q_squared,
)
from qsieve.weyl import NotVeryGood, WeylType, degrees_of, q_catalan, require_very_good


class NonIntegerExponent(ArithmeticError):
    pass


class UnsupportedType(ValueError):
    pass


class IdentityViolation(AssertionError):
    def __init__(self, message: str, difference: QPoly | None = None) -> None:
        super().__init__(message)
        self.difference = difference


class PropertyViolation(AssertionError):
    pass


@dataclass(frozen=True)
class KrewerasResult:
    weyl: WeylType
    lam: Partition
    m: int
    poly: QPoly
    exponent_offset: int
    principal_in_levi: bool
    d_stat: int
    very_even: bool = False

    def per_so_orbit(self) -> QPoly:
        """Value for one of the two SO-orbits of a very even type D class."""
        if not self.very_even:
            raise ValueError("only very even type D classes split")
        halves = {}
        for e, c in self.poly.items():
            if c % 2:
                raise ArithmeticError("odd coefficient in a very even class")
            halves[e] = c // 2
        return QPoly(halves)


def _int_exponent(x: Fraction, where: str) -> int:
    if x.denominator != 1:
        raise NonIntegerExponent(f"exponent {x} is not an integer ({where})")
    return int(x)


def _q2_multinomial(n: int, nu: list[int]) -> QPoly:
    if n < 0:
        return ZERO
    return substitute_q_squared(q_multinomial(n, nu))


def _eta_factors(m: int, count: int) -> QPoly:
    """prod_{i=1}^{count} (q^{m-2i+1} - 1)."""
    return product(QPoly({m - 2 * i + 1: 1, 0: -1}) for i in range(1, count + 1))


def _check(family: str, n: int, lam: Partition) -> WeylType:
    w = degrees_of(family, n)
    size = family_size(family, n)
    if lam.size != size or not in_family(lam.parts, family):
        raise BadPartition(f"{lam} does not index a {w.name} orbit")
    return w


def krew_A(n: int, lam: Partition, m: int) -> KrewerasResult:
    w = _check("A", n, lam)
    if gcd(m, n) != 1:
        raise NotVeryGood(f"gcd(m, n) must be 1, got m={m}, n={n}")
    st = lam.stats
    e = m * (n - st.ell) - st.c
    body = exact_div(q_multinomial(m, list(st.mu.values())), q_int(m))
    return KrewerasResult(w, lam, m, body.shift(e), e, True, st.ell - 1)


def _bcd_base(n: int, lam: Partition, m: int) -> Fraction:
    st = lam.stats
    return m * (n - st.ell_hat) - Fraction(st.c, 2) - Fraction(st.L, 4)


def _krew_bc(family: str, n: int, lam: Partition, m: int) -> KrewerasResult:
    w = _check(family, n, lam)
    require_very_good(w, m)
    st = lam.stats
    if family == "B":
        ex = _bcd_base(n, lam, m) + st.tau1 + Fraction(1, 4)
    else:
        ex = _bcd_base(n, lam, m) + st.tau0 + st.delta
    e = _int_exponent(ex, f"{family}{n} {lam} m={m}")
    mhat = m // 2
    body = _eta_factors(m, st.L_hat) * _q2_multinomial(mhat - st.L_hat, list(st.mu_hat.values()))
    return KrewerasResult(
        w, lam, m, body.shift(e), e, is_principal_in_levi(lam, family), st.ell_hat
    )


def krew_B(n: int, lam: Partition, m: int) -> KrewerasResult:
    return _krew_bc("B", n, lam, m)


def krew_C(n: int, lam: Partition, m: int) -> KrewerasResult:
    return _krew_bc("C", n, lam, m)


def krew_D(n: int, lam: Partition, m: int) -> KrewerasResult:
    w = _check("D", n, lam)
    require_very_good(w, m)
    st = lam.stats
    where = f"D{n} {lam} m={m}"
    e = _int_exponent(_bcd_base(n, lam, m) + st.tau1, where)
    mhat = m // 2
    mu1 = st.mu.get(1, 0)
    hat_rest = [v for j, v in st.mu_hat.items() if j >= 2]
    hat1 = st.mu_hat.get(1, 0)
    hat_all = list(st.mu_hat.values())
    d_stat = st.ell_hat
    if mu1 % 2 == 1:
        body = _eta_factors(m, st.L_hat - 1) * _q2_multinomial(
            mhat + 1 - st.L_hat, hat_all
        )
        e += m - st.ell_hat + 1
        d_stat = st.ell_hat - 1
    elif st.L_hat >= 1:
        body = (
            _eta_factors(m, st.L_hat)
            * _q2_multinomial(mhat - st.L_hat, hat_rest)
            * _q2_multinomial(mhat + 1 - st.L_hat - sum(hat_rest), [hat1])
        )
        e += st.ell_hat - mu1
    else:
        first = _q2_multinomial(mhat, hat_all)
        second = _q2_multinomial(mhat, hat_rest) * _q2_multinomial(
            mhat + 1 - sum(hat_rest), [hat1]
        )
        s1 = _int_exponent(st.ell_hat - st.tau1, where)
        s2 = st.ell_hat - mu1
        low = min(s1, s2)
        body = first.shift(s1 - low) + second.shift(s2 - low)
        e += low
    if body.is_zero():
        total = ZERO
    elif e < 0:
        raise NonIntegerExponent(f"negative exponent {e} ({where})")
    else:
        total = body.shift(e)
    return KrewerasResult(
        w,
        lam,
        m,
        total,
        e,
        is_principal_in_levi(lam, "D"),
        d_stat,
        very_even=is_very_even(lam),
    )


def krew(w: WeylType, lam: Partition, m: int) -> KrewerasResult:
    if w.family == "A":
        return krew_A(w.n, lam, m)
    if w.family == "B":
        return krew_B(w.n, lam, m)
    if w.family == "C":
        return krew_C(w.n, lam, m)
    if w.family == "D":
        return krew_D(w.n, lam, m)
    raise UnsupportedType(f"{w.name} has no classical orbit formula")


def all_krew(w: WeylType, m: int) -> list[KrewerasResult]:
    return [krew(w, lam, m) for lam in orbit_partitions(w.family, w.n)]


def narayana_closed_form(w: WeylType, m: int, k: int) -> QPoly:
    if w.family == "A":
        n = w.n
        if not 0 <= k <= n - 1:
            raise ValueError(f"k must lie in 0..{n - 1}")
        num = q_binomial(n - 1, k) * q_binomial(m - 1, k)
        return exact_div(num, q_int(k + 1)).shift((n - 1 - k) * (m - 1 - k))
    if w.family in ("B", "C"):
        n = w.n
        if not 0 <= k <= n:
            raise ValueError(f"k must lie in 0..{n}")
        mhat = m // 2
        body = substitute_q_squared(q_binomial(n, k) * q_binomial(mhat, k))
        return body.shift(2 * (n - k) * (mhat - k))
    raise UnsupportedType(f"no q-Narayana formula for {w.name}")


def narayana_grouped(w: WeylType, m: int, k: int) -> QPoly:
    return sum((r.poly for r in all_krew(w, m) if r.d_stat == k), ZERO)


def narayana(w: WeylType, m: int, k: int) -> QPoly:
    """Closed form, checked against the grouped Kreweras sum."""
    if w.family not in ("A", "B", "C"):
        raise UnsupportedType(f"no q-Narayana formula for {w.name}")
    require_very_good(w, m)
    closed = narayana_closed_form(w, m, k)
    grouped = narayana_grouped(w, m, k)
    if closed != grouped:
        raise IdentityViolation(
            f"Narayana mismatch for {w.name}, m={m}, k={k}", closed - grouped
        )
    return closed


@dataclass
class Report:
    title: str
    ok: bool = True
    rows: list[tuple[str, object, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, key: str, value: object, ok: bool) -> None:
        self.rows.append((key, value, "pass" if ok else "fail"))
        self.ok = self.ok and ok


def verify_sum_identity(w: WeylType, m: int, *, raise_on_fail: bool = True) -> Report:
    require_very_good(w, m)
    results = all_krew(w, m)
    total = sum((r.poly for r in results), ZERO)
    cat = q_catalan(w, m)
    rep = Report(f"sum identity {w.name} m={m}")
    for r in results:
        rep.add(str(r.lam), r.poly, True)
    rep.add("Cat", cat, total == cat)
    if not rep.ok and raise_on_fail:
        raise IdentityViolation(f"orbit sum differs from Cat for {w.name}, m={m}", total - cat)
    return rep


def verify_divisibility_positivity(
    w: WeylType, m: int, *, raise_on_fail: bool = True
) -> Report:
    require_very_good(w, m)
    rep = Report(f"divisibility/positivity {w.name} m={m}")
    divisor = QPoly({m - 1: 1, 0: -1})
    for r in all_krew(w, m):
        if r.principal_in_levi:
            ok = r.poly.is_nonnegative()
        else:
            _, rem = r.poly.divmod(divisor)
            ok = rem.is_zero()
        rep.add(str(r.lam), r.poly, ok)
        if not ok and raise_on_fail:
            raise PropertyViolation(f"{w.name} m={m}: property fails at {r.lam}")
    return rep


def easy_identity_holds(n: int, s: int, lam: Partition) -> bool:
    """Binomial identity used for the type D, L-hat = 0, d = 2 case."""
    from math import comb

    def multi(N: int, parts: list[int]) -> int:
        if any(p < 0 for p in parts) or sum(parts) > N or N < 0:
            return 0
        out, rest = 1, N
        for p in parts:
            out *= comb(rest, p)
            rest -= p
        return out

    st = lam.stats
    N = s * (n - 1)
    hat1 = st.mu_hat.get(1, 0)
    rest = [v for j, v in st.mu_hat.items() if j >= 2]
    if hat1 < 1:
        return True
    lhs = multi(N, [hat1 - 1] + rest)
    rhs = multi(N, rest) * multi(N + 1 - sum(rest), [hat1]) - multi(N, [hat1] + rest)
    return lhs == rhs
