"""Root-system metadata and the q-Catalan product."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, gcd, prod

from qsieve.qpoly import QPoly, exact_div, product, q_int

CLASSICAL = ("A", "B", "C", "D")
EXCEPTIONAL = ("G2", "F4", "E6", "E7", "E8")

_EXCEPTIONAL_DEGREES = {
    "G2": (2, 6),
    "F4": (2, 6, 8, 12),
    "E6": (2, 5, 6, 8, 9, 12),
    "E7": (2, 6, 8, 10, 12, 14, 18),
    "E8": (2, 8, 12, 14, 18, 20, 24, 30),
}
_EXCEPTIONAL_ORDERS = {
    "G2": 12,
    "F4": 1152,
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
}


class BadRank(ValueError):
    pass


class NotVeryGood(ValueError):
    pass


@dataclass(frozen=True)
class WeylType:
    """A root system: A_{n-1} is stored with family 'A' and n = rank + 1."""

    family: str
    n: int
    rank: int
    degrees: tuple[int, ...]

    @property
    def coxeter_number(self) -> int:
        return max(self.degrees)

    @property
    def order(self) -> int:
        return prod(self.degrees)

    @property
    def num_positive_roots(self) -> int:
        return sum(d - 1 for d in self.degrees)

    @property
    def is_classical(self) -> bool:
        return self.family in CLASSICAL

    @property
    def name(self) -> str:
        if self.family == "A":
            return f"A{self.n - 1}"
        if self.family in CLASSICAL:
            return f"{self.family}{self.n}"
        return self.family

    def __str__(self) -> str:
        return self.name


def degrees_of(family: str, n: int | None = None) -> WeylType:
    """Build a WeylType. For family 'A', n is the size of the permuted set."""
    if family in EXCEPTIONAL:
        degs = _EXCEPTIONAL_DEGREES[family]
        if prod(degs) != _EXCEPTIONAL_ORDERS[family]:
            raise AssertionError(f"degree table for {family} is inconsistent")
        return WeylType(family, len(degs), len(degs), degs)
    if family not in CLASSICAL:
        raise BadRank(f"unknown family {family!r}")
    if n is None or n < 1:
        raise BadRank(f"{family} needs a positive rank parameter")
    if family == "A":
        if n < 2:
            raise BadRank("A_{n-1} needs n >= 2")
        degs = tuple(range(2, n + 1))
        order = factorial(n)
        rank = n - 1
    elif family in ("B", "C"):
        degs = tuple(range(2, 2 * n + 1, 2))
        order = 2**n * factorial(n)
        rank = n
    else:
        if n < 2:
            raise BadRank("D_n needs n >= 2")
        degs = tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
        order = 2 ** (n - 1) * factorial(n)
        rank = n
    if prod(degs) != order:
        raise AssertionError(f"degree table for {family}{n} is inconsistent")
    return WeylType(family, n, rank, degs)


def is_very_good(w: WeylType, m: int) -> bool:
    if m < 1:
        return False
    if w.family in ("B", "C", "D"):
        return m % 2 == 1
    return gcd(m, w.coxeter_number) == 1


def require_very_good(w: WeylType, m: int) -> None:
    if not is_very_good(w, m):
        raise NotVeryGood(f"m={m} is not very good for {w.name}")


def q_catalan(w: WeylType, m: int) -> QPoly:
    require_very_good(w, m)
    num = product(q_int(m - 1 + d) for d in w.degrees)
    den = product(q_int(d) for d in w.degrees)
    return exact_div(num, den)


def catalan_at_one(w: WeylType, m: int) -> int:
    num = prod(m - 1 + d for d in w.degrees)
    den = prod(w.degrees)
    if num % den:
        raise AssertionError("Catalan number is not an integer")
    return num // den
