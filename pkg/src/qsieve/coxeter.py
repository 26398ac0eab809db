"""Signed permutation groups, absolute order, and noncrossing multichains."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product as cartesian

from qsieve.partitions import Partition
from qsieve.weyl import WeylType

MAX_RANK = 5
MAX_CHAIN_WORK = 10**7


class TooLarge(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SignedPerm:
    """images[i-1] = w(i) as a signed integer; w(-i) = -w(i)."""

    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> SignedPerm:
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        v = self.images[abs(i) - 1]
        return v if i > 0 else -v

    def __mul__(self, other: SignedPerm) -> SignedPerm:
        # (self * other)(i) = self(other(i))
        return SignedPerm(tuple(self(other(i)) for i in range(1, len(self.images) + 1)))

    def inverse(self) -> SignedPerm:
        out = [0] * len(self.images)
        for i, v in enumerate(self.images, start=1):
            out[abs(v) - 1] = i if v > 0 else -i
        return SignedPerm(tuple(out))

    @property
    def negatives(self) -> int:
        return sum(1 for v in self.images if v < 0)

    def signed_cycles(self) -> list[tuple[int, bool]]:
        """(length, is_negative) for each cycle of the underlying permutation."""
        n = len(self.images)
        seen = [False] * (n + 1)
        out = []
        for start in range(1, n + 1):
            if seen[start]:
                continue
            length, flips, x = 0, 0, start
            while not seen[x]:
                seen[x] = True
                v = self.images[x - 1]
                flips += v < 0
                x = abs(v)
                length += 1
            out.append((length, flips % 2 == 1))
        return out


def _transposition(n: int, i: int, j: int, sign: int = 1) -> SignedPerm:
    img = list(range(1, n + 1))
    img[i - 1] = sign * j
    img[j - 1] = sign * i
    return SignedPerm(tuple(img))


def _sign_change(n: int, i: int) -> SignedPerm:
    img = list(range(1, n + 1))
    img[i - 1] = -i
    return SignedPerm(tuple(img))


def _rank_param(w: WeylType) -> int:
    if not w.is_classical:
        raise ValueError(f"{w.name} is not a classical type")
    if w.rank > MAX_RANK:
        raise TooLarge(f"rank {w.rank} exceeds the guard {MAX_RANK}")
    return w.n


def reflections(w: WeylType) -> list[SignedPerm]:
    n = _rank_param(w)
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(_transposition(n, i, j))
            if w.family != "A":
                out.append(_transposition(n, i, j, -1))
    if w.family in ("B", "C"):
        out.extend(_sign_change(n, i) for i in range(1, n + 1))
    return sorted(out)


def simple_reflections(w: WeylType) -> list[SignedPerm]:
    n = _rank_param(w)
    out = [_transposition(n, i, i + 1) for i in range(1, n)]
    if w.family in ("B", "C"):
        out.append(_sign_change(n, n))
    elif w.family == "D":
        out.append(_transposition(n, n - 1, n, -1))
    return out


def coxeter_element(w: WeylType) -> SignedPerm:
    c = SignedPerm.identity(w.n)
    for s in simple_reflections(w):
        c = c * s
    return c


class ReflectionLength:
    """BFS distances from the identity in the Cayley graph on all reflections."""

    def __init__(self, w: WeylType) -> None:
        self.weyl = w
        gens = reflections(w)
        start = SignedPerm.identity(w.n)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for t in gens:
                y = x * t
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        self.dist = dist

    def __call__(self, x: SignedPerm) -> int:
        return self.dist[x]

    def leq(self, x: SignedPerm, y: SignedPerm) -> bool:
        return self.dist[x] + self.dist[x.inverse() * y] == self.dist[y]


def group_order_check(w: WeylType, lengths: ReflectionLength) -> bool:
    return len(lengths.dist) == w.order


def cycle_formula_length(x: SignedPerm) -> int:
    """n - #cycles for permutations; for signed ones, n - #positive cycles."""
    cyc = x.signed_cycles()
    return len(x.images) - sum(1 for _, neg in cyc if not neg)


@dataclass(frozen=True)
class AbsOrderElt:
    w: SignedPerm
    refl_length: int


class NCPoset:
    def __init__(self, w: WeylType, c: SignedPerm | None = None) -> None:
        self.weyl = w
        self.length = ReflectionLength(w)
        self.c = c if c is not None else coxeter_element(w)
        lc = self.length(self.c)
        self.elements = sorted(
            (x for x in self.length.dist if self.length.leq(x, self.c)),
            key=lambda x: (self.length(x), x),
        )
        self.rank = lc

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def up_sets(self) -> dict[SignedPerm, list[SignedPerm]]:
        return {
            x: [y for y in self.elements if self.length.leq(x, y)] for x in self.elements
        }

    def rank_sizes(self) -> list[int]:
        counts = Counter(self.length(x) for x in self.elements)
        return [counts.get(k, 0) for k in range(self.rank + 1)]

    def items(self) -> list[AbsOrderElt]:
        return [AbsOrderElt(x, self.length(x)) for x in self.elements]


def nc_poset(w: WeylType, c: SignedPerm | None = None) -> NCPoset:
    return NCPoset(w, c)


def multichain_counts(poset: NCPoset, s: int) -> dict[SignedPerm, int]:
    """Number of multichains w1 <= ... <= ws with a given bottom w1."""
    if s < 1:
        raise ValueError("s must be positive")
    ups = poset.up_sets
    f = {x: 1 for x in poset.elements}
    for _ in range(s - 1):
        f = {x: sum(f[y] for y in ups[x]) for x in poset.elements}
    return f


def multichains(poset: NCPoset, s: int) -> list[tuple[SignedPerm, ...]]:
    total = sum(multichain_counts(poset, s).values())
    if total * s > MAX_CHAIN_WORK:
        raise TooLarge(f"{total} multichains exceed the guard")
    ups = poset.up_sets
    out: list[tuple[SignedPerm, ...]] = []

    def extend(chain: list[SignedPerm]) -> None:
        if len(chain) == s:
            out.append(tuple(chain))
            return
        for y in ups[chain[-1]]:
            chain.append(y)
            extend(chain)
            chain.pop()

    for x in poset.elements:
        extend([x])
    return out


def orbit_type(w1: SignedPerm, family: str) -> Partition:
    cyc = w1.signed_cycles()
    n = len(w1.images)
    if family == "A":
        return Partition.of([length for length, _ in cyc])
    nu = [length for length, neg in cyc if not neg]
    z = sum(length for length, neg in cyc if neg)
    if family == "B":
        return Partition.of(nu + nu + [2 * z + 1])
    if family == "C":
        return Partition.of(nu + nu + ([2 * z] if z else []))
    if family == "D":
        if z == 0:
            return Partition.of(nu + nu)
        assert z >= 2, "a type D element cannot have a single negative coordinate"
        return Partition.of(nu + nu + [2 * z - 1, 1])
    raise ValueError(f"unknown family {family!r}")


def group_census(w: WeylType, s: int) -> tuple[int, Counter[Partition]]:
    """Total multichain count and the census by orbit type of the bottom element."""
    poset = nc_poset(w)
    counts = multichain_counts(poset, s)
    by_type: Counter[Partition] = Counter()
    for x, k in counts.items():
        by_type[orbit_type(x, w.family)] += k
    return sum(counts.values()), by_type


def all_signed_perms(n: int, family: str) -> list[SignedPerm]:
    """Brute-force listing, used to check the BFS reaches the whole group."""
    out = []
    for perm in permutations(range(1, n + 1)):
        if family == "A":
            out.append(SignedPerm(perm))
            continue
        for signs in cartesian((1, -1), repeat=n):
            if family == "D" and signs.count(-1) % 2:
                continue
            out.append(SignedPerm(tuple(s * p for s, p in zip(signs, perm))))
    return out
