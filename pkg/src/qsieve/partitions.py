"""Integer partitions, the nilpotent-orbit families and their statistics."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

FAMILIES = ("A", "B", "C", "D")


class BadParity(ValueError):
    """Size parity does not fit the requested family."""


class BadPartition(ValueError):
    """Not a partition, or not in the required family."""


@dataclass(frozen=True)
class PartitionStats:
    mu: dict[int, int]
    conjugate: tuple[int, ...]
    c: int
    ell: int
    L: int
    tau0: Fraction
    tau1: Fraction
    ell_hat: int
    L_hat: int
    mu_hat: dict[int, int]
    delta: Fraction


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise BadPartition(f"not a partition: {parts}")

    @classmethod
    def of(cls, parts: Sequence[int]) -> Partition:
        return cls(tuple(sorted(parts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Read the '[3,1,1]' text form."""
        body = text.strip()
        if not re.fullmatch(r"\[\s*(\d+\s*(,\s*\d+\s*)*)?\]", body):
            raise BadPartition(f"cannot read partition {text!r}")
        inner = body[1:-1].strip()
        parts = [int(x) for x in inner.split(",")] if inner else []
        return cls(tuple(parts))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def multiplicity(self, j: int) -> int:
        return self.stats.mu.get(j, 0)

    @cached_property
    def stats(self) -> PartitionStats:
        return stats(self)


def conjugate(parts: Sequence[int]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


def stats(lam: Partition) -> PartitionStats:
    parts = lam.parts
    mu: dict[int, int] = {}
    for p in parts:
        mu[p] = mu.get(p, 0) + 1
    conj = conjugate(parts)
    c = sum(a * b for a, b in zip(conj, conj[1:]))
    ell = len(parts)
    L = sum(1 for v in mu.values() if v % 2)
    tau = [Fraction(0), Fraction(0)]
    for j, v in mu.items():
        if v % 2 == 0:
            tau[j % 2] += Fraction(v, 2)
    delta = Fraction(1, 4) - Fraction(ell, 2) if ell % 2 else Fraction(0)
    return PartitionStats(
        mu=dict(sorted(mu.items())),
        conjugate=conj,
        c=c,
        ell=ell,
        L=L,
        tau0=tau[0],
        tau1=tau[1],
        ell_hat=ell // 2,
        L_hat=L // 2,
        mu_hat={j: v // 2 for j, v in sorted(mu.items())},
        delta=delta,
    )


@lru_cache(maxsize=None)
def _all_partitions(n: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []

    def rec(rest: int, cap: int, acc: list[int]) -> None:
        if rest == 0:
            out.append(tuple(acc))
            return
        for p in range(min(rest, cap), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def in_family(parts: Sequence[int], family: str) -> bool:
    mu: dict[int, int] = {}
    for p in parts:
        mu[p] = mu.get(p, 0) + 1
    if family == "A":
        return True
    if family in ("B", "D"):
        return all(v % 2 == 0 for j, v in mu.items() if j % 2 == 0)
    if family == "C":
        return all(v % 2 == 0 for j, v in mu.items() if j % 2 == 1)
    raise ValueError(f"unknown family {family!r}")


def check_parity(size: int, family: str) -> None:
    if family == "B" and size % 2 == 0:
        raise BadParity(f"type B partitions have odd size, got {size}")
    if family in ("C", "D") and size % 2 == 1:
        raise BadParity(f"type {family} partitions have even size, got {size}")


def enumerate_partitions(size: int, family: str = "A") -> list[Partition]:
    """Partitions of ``size`` in the family, lexicographically decreasing."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if size < 0:
        raise ValueError("size must be nonnegative")
    check_parity(size, family)
    return [Partition(p) for p in _all_partitions(size) if in_family(p, family)]


def family_size(family: str, n: int) -> int:
    """Size of the partitions indexing orbits for rank parameter n."""
    return {"A": n, "B": 2 * n + 1, "C": 2 * n, "D": 2 * n}[family]


def orbit_partitions(family: str, n: int) -> list[Partition]:
    return enumerate_partitions(family_size(family, n), family)


def is_principal_in_levi(lam: Partition, family: str) -> bool:
    st = lam.stats
    if family == "A":
        return True
    if family in ("B", "C"):
        return st.L_hat == 0
    if family == "D":
        return st.L_hat == 0 or (st.L_hat == 1 and st.mu.get(1, 0) % 2 == 1)
    raise ValueError(f"unknown family {family!r}")


def is_very_even(lam: Partition) -> bool:
    return all(p % 2 == 0 for p in lam.parts)
