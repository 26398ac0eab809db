"""Finite-field brute-force counts of nilpotent elements, checked against closed forms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

import numpy as np

from qsieve.partitions import Partition, conjugate
from qsieve.qpoly import QPoly, q_binomial, q_factorial, substitute_q_squared
from qsieve.weyl import degrees_of

MAX_SPACE = 10**7


class TooLarge(ValueError):
    pass


class FormulaMismatch(AssertionError):
    pass


def _require_prime(q: int) -> None:
    if q < 2 or any(q % p == 0 for p in range(2, int(q**0.5) + 1)):
        raise ValueError(f"q={q} must be prime")


def _guard(size: int, what: str) -> None:
    if size > MAX_SPACE:
        raise TooLarge(f"{what}: {size} elements exceed the guard {MAX_SPACE}")


def all_vectors(q: int, dim: int) -> np.ndarray:
    """Every vector of F_q^dim, one per row."""
    _guard(q**dim, f"F_{q}^{dim}")
    idx = np.arange(q**dim, dtype=np.int64)
    out = np.empty((q**dim, dim), dtype=np.int64)
    for j in range(dim - 1, -1, -1):
        out[:, j] = idx % q
        idx //= q
    return out


def _is_nilpotent(mats: np.ndarray, q: int) -> np.ndarray:
    n = mats.shape[-1]
    power = mats.copy()
    for _ in range(n - 1):
        power = np.matmul(power, mats) % q
    return ~power.reshape(len(mats), -1).any(axis=1)


def rank_mod_p(mat: np.ndarray, q: int) -> int:
    a = [[int(x) % q for x in row] for row in mat]
    rows, cols = len(a), len(a[0]) if a else 0
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], -1, q)
        a[rank] = [x * inv % q for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def nullspace_mod_p(mat: np.ndarray, q: int) -> np.ndarray:
    """Basis of {x : mat @ x = 0} over F_q, one vector per row."""
    a = [[int(x) % q for x in row] for row in mat]
    rows, cols = len(a), len(a[0])
    pivots: list[int] = []
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], -1, q)
        a[rank] = [x * inv % q for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [0] * cols
        v[free] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-a[r][free]) % q
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def _rank_census(mats: np.ndarray, q: int) -> Counter[int]:
    nil = mats[_is_nilpotent(mats, q)]
    return Counter(rank_mod_p(x, q) for x in nil)


@dataclass
class NilCensus:
    family: str
    n: int
    q: int
    brute: dict[int, int]
    closed: dict[int, int]
    checks: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.brute == self.closed and all(a == b for _, a, b in self.checks)


# type A


def closed_nilpotent_count_A(n: int, k: int) -> QPoly:
    """Nilpotent n x n matrices of rank n-k-1."""
    r = n - k - 1
    q_minus_1 = QPoly({1: 1, 0: -1})
    quot = q_factorial(n).divmod(q_factorial(k + 1))[0]
    return (q_minus_1**r * quot * q_binomial(n - 1, k)).shift(comb(r, 2))


def gl_order(n: int) -> QPoly:
    return (QPoly({1: 1, 0: -1}) ** n * q_factorial(n)).shift(comb(n, 2))


def count_nilpotent_by_rank_A(n: int, q: int) -> NilCensus:
    _require_prime(q)
    _guard(q ** (n * n), f"gl_{n}(F_{q})")
    mats = all_vectors(q, n * n).reshape(-1, n, n)
    brute = dict(sorted(_rank_census(mats, q).items()))
    closed = {n - k - 1: closed_nilpotent_count_A(n, k)(q) for k in range(n)}
    res = NilCensus("A", n, q, brute, closed)
    res.checks.append(("total", sum(brute.values()), q ** (n * n - n)))
    if not res.ok:
        raise FormulaMismatch(f"gl_{n}(F_{q}): brute {brute} vs closed {closed}")
    return res


def narayana_chain_A(n: int, m: int, k: int, q: int) -> Fraction:
    """Narayana value at q rebuilt from the rank-(n-k-1) nilpotent count."""
    if gcd(m, n) != 1:
        raise ValueError("m must be coprime to n")
    r = n - k - 1
    if k + 1 > m:
        return Fraction(0)
    falling = Fraction(q_factorial(m - 1)(q), q_factorial(m - k - 1)(q))
    count = closed_nilpotent_count_A(n, k)(q)
    scale = Fraction(q) ** (m * r + comb(k + 1, 2)) * (q - 1) ** (k + 1)
    return scale * falling * count / gl_order(n)(q)


# centralizers in GL_n


def centralizer_order_A(lam: Partition, q: int) -> int:
    st = lam.stats
    poly = QPoly({1: 1, 0: -1}) ** st.ell
    for v in st.mu.values():
        poly = poly * q_factorial(v)
    return poly.shift(comb(st.ell, 2) + st.c)(q)


def jordan_matrix(lam: Partition) -> np.ndarray:
    n = lam.size
    e = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for p in lam.parts:
        for i in range(p - 1):
            e[pos + i, pos + i + 1] = 1
        pos += p
    return e


def _det_mod(mats: np.ndarray, q: int) -> np.ndarray:
    return np.rint(np.linalg.det(mats.astype(float))).astype(np.int64) % q


def brute_centralizer_order_A(lam: Partition, q: int) -> int:
    n = lam.size
    _guard(q ** (n * n), f"GL_{n}(F_{q})")
    e = jordan_matrix(lam)
    g = all_vectors(q, n * n).reshape(-1, n, n)
    commute = ~((np.matmul(g, e) - np.matmul(e, g)) % q).reshape(len(g), -1).any(axis=1)
    g = g[commute]
    return int(np.count_nonzero(_det_mod(g, q)))


def jordan_type(mat: np.ndarray, q: int) -> Partition:
    """Jordan type of a nilpotent matrix from the ranks of its powers."""
    n = mat.shape[0]
    ranks = [n]
    power = np.eye(n, dtype=np.int64)
    while ranks[-1]:
        power = power @ mat % q
        ranks.append(rank_mod_p(power, q))
    conj = [a - b for a, b in zip(ranks, ranks[1:])]
    return Partition.of(conjugate(conj))


def orbit_census_A(n: int, q: int) -> Counter[Partition]:
    _guard(q ** (n * n), f"gl_{n}(F_{q})")
    mats = all_vectors(q, n * n).reshape(-1, n, n)
    nil = mats[_is_nilpotent(mats, q)]
    return Counter(jordan_type(x, q) for x in nil)


# types B and C


def _eta(N: int) -> QPoly:
    out = QPoly.const(1)
    while N > 0:
        out = out * QPoly({N: 1, 0: -1})
        N -= 2
    return out


def closed_nilpotent_count_BC(n: int, s: int) -> QPoly:
    """Type B nilpotents of rank 2s (equivalently type C of rank 2s or 2s-1)."""
    body = _eta(2 * n).divmod(_eta(2 * n - 2 * s))[0]
    return (body * substitute_q_squared(q_binomial(n, s))).shift(s * s - s)


def closed_nilpotent_count_C_split(n: int, s: int, rank: int) -> QPoly:
    """Type C nilpotents of rank 2s or 2s-1, s >= 1."""
    base = substitute_q_squared(q_binomial(n, s)) * _eta(2 * n - 2)
    if rank == 2 * s:
        num = base * (QPoly.monomial(2 * n - 2 * s) - 1)
        shift = s * s + s
    elif rank == 2 * s - 1:
        num = base * QPoly({2 * s: 1, 0: -1})
        shift = s * s - s
    else:
        raise ValueError("rank must be 2s or 2s-1")
    quot, rem = num.divmod(_eta(2 * n - 2 * s))
    if not rem.is_zero():
        raise FormulaMismatch("non-polynomial type C split")
    return quot.shift(shift)


def form_matrix(n: int, family: str) -> np.ndarray:
    if family == "B":
        return np.fliplr(np.eye(2 * n + 1, dtype=np.int64))
    if family == "C":
        k = np.fliplr(np.eye(n, dtype=np.int64))
        z = np.zeros((n, n), dtype=np.int64)
        return np.block([[z, k], [-k, z]])
    raise ValueError(f"family must be B or C, got {family!r}")


def lie_algebra_basis(n: int, family: str, q: int) -> np.ndarray:
    """Basis of {X : X^T J + J X = 0} over F_q, as flattened matrices."""
    j = form_matrix(n, family)
    size = j.shape[0]
    cols = []
    for idx in range(size * size):
        x = np.zeros(size * size, dtype=np.int64)
        x[idx] = 1
        x = x.reshape(size, size)
        cols.append(((x.T @ j + j @ x) % q).ravel())
    return nullspace_mod_p(np.array(cols).T, q)


def count_nilpotent_by_rank_BC(n: int, q: int, family: str) -> NilCensus:
    _require_prime(q)
    if q == 2:
        raise ValueError("the orthogonal and symplectic counts need odd q")
    basis = lie_algebra_basis(n, family, q)
    dim = len(basis)
    size = basis.shape[1]
    side = int(round(size**0.5))
    _guard(q**dim, f"{family}{n} Lie algebra over F_{q}")
    mats = (all_vectors(q, dim) @ basis % q).reshape(-1, side, side)
    brute = dict(sorted(_rank_census(mats, q).items()))
    if family == "B":
        closed = {2 * s: closed_nilpotent_count_BC(n, s)(q) for s in range(n + 1)}
    else:
        closed = {0: 1}
        for s in range(1, n + 1):
            closed[2 * s] = closed_nilpotent_count_C_split(n, s, 2 * s)(q)
            closed[2 * s - 1] = closed_nilpotent_count_C_split(n, s, 2 * s - 1)(q)
        closed = {r: v for r, v in sorted(closed.items()) if v}
    res = NilCensus(family, n, q, brute, closed)
    w = degrees_of(family, n)
    res.checks.append(("dimension", dim, w.rank + 2 * w.num_positive_roots))
    res.checks.append(("total", sum(brute.values()), q ** (2 * w.num_positive_roots)))
    if family == "C":
        for s in range(n + 1):
            pair = brute.get(2 * s, 0) + brute.get(2 * s - 1, 0)
            res.checks.append((f"B-C pairing s={s}", pair, closed_nilpotent_count_BC(n, s)(q)))
    if not res.ok:
        raise FormulaMismatch(f"{family}{n} over F_{q}: brute {brute} vs closed {closed}")
    return res


def bc_rank_pairs(n: int, q: int) -> list[tuple[int, int, int]]:
    """(s, type B rank-2s count, type C rank-2s plus rank-(2s-1) count)."""
    b = count_nilpotent_by_rank_BC(n, q, "B").brute
    c = count_nilpotent_by_rank_BC(n, q, "C").brute
    return [
        (s, b.get(2 * s, 0), c.get(2 * s, 0) + c.get(2 * s - 1, 0)) for s in range(n + 1)
    ]


def group_order_BC(n: int) -> QPoly:
    return _eta(2 * n).shift(n * n)

