"""Exact integer polynomials in one variable q, q-analogs, cyclotomic reduction."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence


class DivisionNotExact(ArithmeticError):
    """Polynomial division left a nonzero remainder."""


class QPoly:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None) -> None:
        clean: dict[int, int] = {}
        if terms:
            for e, c in terms.items():
                if e < 0:
                    raise ValueError(f"negative exponent {e}")
                if c:
                    clean[int(e)] = int(c)
        self._terms = dict(sorted(clean.items()))
        self._hash: int | None = None

    # construction helpers

    @classmethod
    def const(cls, c: int) -> QPoly:
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> QPoly:
        return cls({e: c})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> QPoly:
        return cls({i: c for i, c in enumerate(coeffs) if c})

    @classmethod
    def _from_clean(cls, terms: dict[int, int]) -> QPoly:
        p = cls.__new__(cls)
        p._terms = dict(sorted(terms.items()))
        p._hash = None
        return p

    # accessors

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[int, int]]:
        return list(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest exponent; -1 for the zero polynomial."""
        return max(self._terms) if self._terms else -1

    def low_degree(self) -> int:
        return min(self._terms) if self._terms else -1

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def coeffs(self) -> list[int]:
        """Dense coefficient list, index = exponent."""
        out = [0] * (self.degree() + 1)
        for e, c in self._terms.items():
            out[e] = c
        return out

    def __call__(self, x: int) -> int:
        return sum(c * x**e for e, c in self._terms.items())

    def at_one(self) -> int:
        return sum(self._terms.values())

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def is_palindromic(self) -> bool:
        if not self._terms:
            return True
        lo, hi = self.low_degree(), self.degree()
        return all(self.coeff(lo + hi - e) == c for e, c in self._terms.items())

    # arithmetic

    def __add__(self, other: QPoly | int) -> QPoly:
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return QPoly._from_clean(out)

    __radd__ = __add__

    def __neg__(self) -> QPoly:
        return QPoly._from_clean({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: QPoly | int) -> QPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> QPoly:
        return _coerce(other) - self

    def __mul__(self, other: QPoly | int) -> QPoly:
        other = _coerce(other)
        if not self._terms or not other._terms:
            return ZERO
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return QPoly._from_clean({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QPoly:
        if k < 0:
            raise ValueError("negative power")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> QPoly:
        """Multiply by q^k."""
        return QPoly({e + k: c for e, c in self._terms.items()})

    def divmod(self, den: QPoly) -> tuple[QPoly, QPoly]:
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        num = self.coeffs()
        d = den.coeffs()
        dd = len(d) - 1
        lead = d[dd]
        if len(num) - 1 < dd:
            return ZERO, self
        quot = [0] * (len(num) - dd)
        for i in range(len(num) - 1, dd - 1, -1):
            c = num[i]
            if not c:
                continue
            if c % lead:
                raise DivisionNotExact("leading coefficient does not divide")
            f = c // lead
            quot[i - dd] = f
            base = i - dd
            for j, dj in enumerate(d):
                if dj:
                    num[base + j] -= f * dj
        return QPoly.from_coeffs(quot), QPoly.from_coeffs(num[:dd])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"QPoly({self._terms!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _coerce(x: QPoly | int) -> QPoly:
    if isinstance(x, QPoly):
        return x
    return QPoly.const(int(x))


ZERO = QPoly()
ONE = QPoly({0: 1})
Q = QPoly({1: 1})


def format_poly(p: QPoly) -> str:
    """Human form in increasing degree, e.g. 'q^7 + q^8'."""
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for e, c in p.items():
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = "q" if e == 1 else f"q^{e}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(("+ " if c > 0 else "- ") + body)
    return " ".join(chunks)


def exact_div(num: QPoly, den: QPoly) -> QPoly:
    quot, rem = num.divmod(den)
    if not rem.is_zero():
        raise DivisionNotExact(f"remainder {rem} dividing {num} by {den}")
    return quot


def product(polys: Iterable[QPoly]) -> QPoly:
    out = ONE
    for p in polys:
        out = out * p
    return out


def q_int(n: int) -> QPoly:
    if n < 0:
        raise ValueError("q_int needs n >= 0")
    return QPoly._from_clean({i: 1 for i in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n: int) -> QPoly:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    return product(q_int(k) for k in range(1, n + 1))


def q_multinomial(n: int, nu: Sequence[int]) -> QPoly:
    """[n]!/(prod [nu_i]! [n-|nu|]!), zero when |nu| > n."""
    if any(v < 0 for v in nu) or n < 0:
        raise ValueError("negative argument")
    return _multinomial(n, tuple(sorted(nu)))


@lru_cache(maxsize=4096)
def _multinomial(n: int, nu: tuple[int, ...]) -> QPoly:
    rest = n - sum(nu)
    if rest < 0:
        return ZERO
    den = product(q_factorial(v) for v in nu) * q_factorial(rest)
    return exact_div(q_factorial(n), den)


def q_binomial(n: int, k: int) -> QPoly:
    if k < 0 or k > n:
        return ZERO
    return q_multinomial(n, [k])


def substitute_q_squared(p: QPoly) -> QPoly:
    return QPoly._from_clean({2 * e: c for e, c in p.items()})


_CYCLO: dict[int, QPoly] = {}
_CYCLO_LOCK = threading.RLock()


def cyclotomic(d: int) -> QPoly:
    if d < 1:
        raise ValueError("cyclotomic needs d >= 1")
    hit = _CYCLO.get(d)
    if hit is not None:
        return hit
    with _CYCLO_LOCK:
        if d not in _CYCLO:
            den = product(cyclotomic(e) for e in range(1, d) if d % e == 0)
            _CYCLO[d] = exact_div(QPoly({d: 1, 0: -1}), den)
        return _CYCLO[d]


def totient(d: int) -> int:
    return sum(1 for k in range(1, d + 1) if gcd(k, d) == 1)


@dataclass(frozen=True)
class CycloElt:
    """Residue of a polynomial modulo the d-th cyclotomic polynomial."""

    d: int
    residue: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.residue)

    def as_integer(self) -> int | None:
        """The rational integer this residue represents, or None."""
        if any(self.residue[1:]):
            return None
        return self.residue[0] if self.residue else 0

    def equals_int(self, n: int) -> bool:
        return (self - CycloElt.of_int(n, self.d)).is_zero()

    def __sub__(self, other: CycloElt) -> CycloElt:
        if self.d != other.d:
            raise ValueError("different root orders")
        return CycloElt(self.d, tuple(a - b for a, b in zip(self.residue, other.residue)))

    @classmethod
    def of_int(cls, n: int, d: int) -> CycloElt:
        return reduce_mod_cyclo(QPoly.const(n), d)

    def to_complex(self) -> complex:
        """Floating approximation, for display only."""
        import cmath

        w = cmath.exp(2j * cmath.pi / self.d)
        return sum(c * w**i for i, c in enumerate(self.residue))


def reduce_mod_cyclo(p: QPoly, d: int) -> CycloElt:
    phi = cyclotomic(d)
    # fold exponents mod d first; q^d = 1 at any d-th root of unity
    folded: dict[int, int] = {}
    for e, c in p.items():
        folded[e % d] = folded.get(e % d, 0) + c
    _, rem = QPoly(folded).divmod(phi)
    width = phi.degree()
    vec = rem.coeffs() + [0] * width
    return CycloElt(d, tuple(vec[:width]))
