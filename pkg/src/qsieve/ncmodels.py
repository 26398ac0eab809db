"""Planar and annular noncrossing partition models with their rotations.

Types A and B/C live on a circle; type D lives on an annulus whose outer
labels run clockwise and inner labels counterclockwise.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable, Iterable, Iterator, Sequence

from qsieve.kreweras import krew
from qsieve.partitions import Partition, orbit_partitions
from qsieve.sieve_eval import divisors, eval_exact
from qsieve.weyl import WeylType, degrees_of

MAX_GROUND = 14

Block = tuple[int, ...]


class TooLarge(ValueError):
    pass


class CSPViolation(AssertionError):
    pass


def _guard(size: int, limit: int | None) -> None:
    cap = MAX_GROUND if limit is None else limit
    if size > cap:
        raise TooLarge(f"ground set of size {size} exceeds the guard {cap}")


@dataclass(frozen=True, order=True)
class NCPart:
    """A set partition stored canonically: sorted blocks sorted by minimum."""

    blocks: tuple[Block, ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> NCPart:
        canon = sorted(tuple(sorted(b)) for b in blocks if b)
        return cls(tuple(canon))

    def block_sizes(self) -> list[int]:
        return sorted((len(b) for b in self.blocks), reverse=True)

    def zero_block(self) -> Block | None:
        for b in self.blocks:
            if b and -b[0] in b:
                return b
        return None


@dataclass(frozen=True)
class RotationAction:
    """Cyclic action of order ``order`` generated by a label map."""

    order: int
    step: dict[int, int] = field(hash=False, compare=False)
    # optional canonical form applied after relabelling (type D inner pair)
    normalize: Callable[[NCPart], NCPart] | None = field(default=None, hash=False, compare=False)

    def power(self, k: int) -> dict[int, int]:
        k %= self.order
        out = {x: x for x in self.step}
        for _ in range(k):
            out = {x: self.step[y] for x, y in out.items()}
        return out

    def apply(self, part: NCPart, k: int = 1) -> NCPart:
        mp = self.power(k)
        out = NCPart.of([mp[x] for x in b] for b in part.blocks)
        return self.normalize(out) if self.normalize else out


def cycle_action(cycles: Sequence[Sequence[int]], order: int) -> RotationAction:
    step: dict[int, int] = {}
    for cyc in cycles:
        for i, x in enumerate(cyc):
            step[x] = cyc[(i + 1) % len(cyc)]
    return RotationAction(order, step)


# circular noncrossing test


def _crosses(pos_a: list[int], pos_b: list[int]) -> bool:
    """True if two blocks, given by sorted positions on a circle, cross."""
    if len(pos_a) < 2 or len(pos_b) < 2:
        return False
    n = len(pos_a)
    gaps = {bisect_left(pos_a, p) % n for p in pos_b}
    return len(gaps) > 1


def is_noncrossing(blocks: Sequence[Block], order: Sequence[int]) -> bool:
    where = {x: i for i, x in enumerate(order)}
    pos = [sorted(where[x] for x in b) for b in blocks]
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if _crosses(pos[i], pos[j]):
                return False
    return True


# type A


def _nc_blocks(labels: list[int], s: int = 1) -> Iterator[list[Block]]:
    # the block holding labels[0] splits the rest into independent gaps
    if not labels:
        yield []
        return
    first, rest = labels[0], labels[1:]
    n = len(rest)

    def pick(start: int, chosen: list[int]) -> Iterator[list[int]]:
        if (len(chosen) + 1) % s == 0:
            yield chosen
        for i in range(start, n):
            yield from pick(i + 1, chosen + [i])

    for idx in pick(0, []):
        block = (first,) + tuple(rest[i] for i in idx)
        cuts = [-1] + idx + [n]
        segments = [rest[cuts[k] + 1 : cuts[k + 1]] for k in range(len(cuts) - 1)]
        if any(len(seg) % s for seg in segments):
            continue
        for combo in cartesian(*[list(_nc_blocks(seg, s)) for seg in segments]):
            out = [block]
            for c in combo:
                out.extend(c)
            yield out


def enum_nc_A(N: int, *, max_ground: int | None = None) -> list[NCPart]:
    if N < 0:
        raise ValueError("N must be nonnegative")
    _guard(N, max_ground)
    return sorted(NCPart.of(bl) for bl in _nc_blocks(list(range(1, N + 1))))


def enum_sdivisible_A(n: int, s: int, *, max_ground: int | None = None) -> list[NCPart]:
    """Noncrossing partitions of [sn] with every block size divisible by s."""
    _guard(s * n, max_ground)
    return sorted(NCPart.of(bl) for bl in _nc_blocks(list(range(1, s * n + 1)), s))


def rotation_A(n: int, s: int) -> RotationAction:
    N = s * n
    return cycle_action([list(range(1, N + 1))], N)


def orbit_type_A(part: NCPart, s: int) -> Partition:
    return Partition.of([len(b) // s for b in part.blocks])


# centrally symmetric set partitions, shared by B/C and D


def iota_stable_partitions(N: int) -> Iterator[list[Block]]:
    """All iota-stable set partitions of {+-1..+-N}, each exactly once."""

    def rec(a: int, blocks: list[list[int]], zero: list[int]) -> Iterator[list[Block]]:
        if a > N:
            out: list[Block] = []
            for b in blocks:
                out.append(tuple(b))
                out.append(tuple(-x for x in b))
            if zero:
                out.append(tuple(zero + [-x for x in zero]))
            yield out
            return
        zero.append(a)
        yield from rec(a + 1, blocks, zero)
        zero.pop()
        blocks.append([a])
        yield from rec(a + 1, blocks, zero)
        blocks.pop()
        for b in blocks:
            for sign in (1, -1):
                b.append(sign * a)
                yield from rec(a + 1, blocks, zero)
                b.pop()

    yield from rec(1, [], [])


def bc_circle(n: int, s: int) -> list[int]:
    N = s * n
    return list(range(1, N + 1)) + [-x for x in range(1, N + 1)]


def enum_iota_stable_BC(n: int, s: int, *, max_ground: int | None = None) -> list[NCPart]:
    _guard(2 * s * n, max_ground)
    circle = bc_circle(n, s)
    out = []
    for blocks in iota_stable_partitions(s * n):
        if any(len(b) % s for b in blocks):
            continue
        if is_noncrossing(blocks, circle):
            out.append(NCPart.of(blocks))
    return sorted(out)


def rotation_BC(n: int, s: int) -> RotationAction:
    return cycle_action([bc_circle(n, s)], 2 * s * n)


def _nu(part: NCPart, s: int) -> list[int]:
    # one representative per nonzero pair: the block whose smallest |label| is positive
    sizes = []
    for b in part.blocks:
        if -b[0] in b:
            continue
        lead = min(b, key=abs)
        if lead > 0:
            sizes.append(len(b) // s)
    return sizes


def orbit_type_BC(part: NCPart, n: int, s: int, family: str) -> Partition:
    nu = _nu(part, s)
    rest = 2 * (n - sum(nu)) + (1 if family == "B" else 0)
    return Partition.of(nu + nu + ([rest] if rest else []))


# type D annulus


@dataclass(frozen=True)
class Annulus:
    n: int
    s: int

    @property
    def outer(self) -> list[int]:
        N = self.s * (self.n - 1)
        return list(range(1, N + 1)) + [-x for x in range(1, N + 1)]

    @property
    def inner(self) -> list[int]:
        lo, hi = self.s * (self.n - 1) + 1, self.s * self.n
        return list(range(lo, hi + 1)) + [-x for x in range(lo, hi + 1)]

    def canonical_inner(self) -> tuple[Block, Block]:
        s = self.s
        first = tuple(sorted(self.inner[:s]))
        return first, tuple(sorted(-x for x in first))


def _cycle_options(block: Block, outer_pos: dict[int, int], inner_pos: dict[int, int]) -> list[list[int]]:
    outs = sorted((x for x in block if x in outer_pos), key=outer_pos.__getitem__)
    ins = sorted((x for x in block if x in inner_pos), key=inner_pos.__getitem__)
    if not outs or not ins:
        return [outs or ins]
    return [
        outs[i:] + outs[:i] + ins[j:] + ins[:j]
        for i in range(len(outs))
        for j in range(len(ins))
    ]


def _count_cycles(perm: dict[int, int]) -> int:
    seen: set[int] = set()
    count = 0
    for x in perm:
        if x in seen:
            continue
        count += 1
        while x not in seen:
            seen.add(x)
            x = perm[x]
    return count


def _residue_steps_ok(cycle: list[int], s: int) -> bool:
    if s == 1:
        return True
    k = len(cycle)
    return all((abs(cycle[(i + 1) % k]) - abs(cycle[i]) - 1) % s == 0 for i in range(k))


def annular_ok(blocks: Sequence[Block], ann: Annulus) -> bool:
    """NCD1 and NCD4 for an annular set partition with a traversing block.

    Searches for a cycle order of the blocks making the pair (sigma, gamma)
    planar on the annulus: #cycles(sigma) + #cycles(sigma^-1 gamma) = N.
    """
    outer, inner = ann.outer, ann.inner
    outer_pos = {x: i for i, x in enumerate(outer)}
    inner_pos = {x: i for i, x in enumerate(inner)}
    gamma: dict[int, int] = {}
    for cyc in (outer, inner):
        for i, x in enumerate(cyc):
            gamma[x] = cyc[(i + 1) % len(cyc)]
    N = len(gamma)
    options = [_cycle_options(b, outer_pos, inner_pos) for b in blocks]
    for choice in cartesian(*options):
        if not all(_residue_steps_ok(c, ann.s) for c in choice):
            continue
        sigma_inv: dict[int, int] = {}
        for c in choice:
            for i, x in enumerate(c):
                sigma_inv[c[(i + 1) % len(c)]] = x
        composed = {x: sigma_inv[gamma[x]] for x in gamma}
        if len(choice) + _count_cycles(composed) == N:
            return True
    return False


def _classify_D(blocks: Sequence[Block], ann: Annulus) -> str | None:
    """Return 'zero', 'traversing', 'inner-pair' or None when rejected."""
    inner = set(ann.inner)
    outer = set(ann.outer)
    if any(len(b) % ann.s for b in blocks):
        return None
    zero = [b for b in blocks if -b[0] in b]
    if zero and not inner <= set(zero[0]):
        return None
    traversing = [b for b in blocks if set(b) & inner and set(b) & outer]
    if traversing:
        if not annular_ok(blocks, ann):
            return None
        return "zero" if zero else "traversing"
    # no traversing block: inner circle must carry the canonical pair
    inner_blocks = sorted(tuple(sorted(b)) for b in blocks if set(b) <= inner)
    if inner_blocks != sorted(ann.canonical_inner()):
        return None
    outer_blocks = [b for b in blocks if set(b) <= outer]
    if not is_noncrossing(outer_blocks, ann.outer):
        return None
    if ann.s > 1:
        pos = {x: i for i, x in enumerate(ann.outer)}
        for b in outer_blocks:
            if not _residue_steps_ok(sorted(b, key=pos.__getitem__), ann.s):
                return None
    return "inner-pair"


def enum_annular_D(n: int, s: int, *, max_ground: int | None = None) -> list[NCPart]:
    if n < 2:
        raise ValueError("type D needs n >= 2")
    _guard(2 * s * n, max_ground)
    ann = Annulus(n, s)
    out = []
    for blocks in iota_stable_partitions(s * n):
        kind = _classify_D(blocks, ann)
        if kind is None:
            continue
        if kind == "inner-pair":
            inner = set(ann.inner)
            whole = [b for b in blocks if set(b) <= inner]
            assert len(whole) == 2 and all(len(b) == s for b in whole)
        out.append(NCPart.of(blocks))
    return sorted(out)


def rotation_D(n: int, s: int) -> RotationAction:
    ann = Annulus(n, s)
    act = cycle_action([ann.outer, ann.inner], 2 * s * (n - 1))
    inner, pair = set(ann.inner), list(ann.canonical_inner())

    def normalize(part: NCPart) -> NCPart:
        # without traversing blocks the inner pair is determined: keep the canonical one
        if any(set(b) & inner and not set(b) <= inner for b in part.blocks):
            return part
        return NCPart.of([b for b in part.blocks if not set(b) <= inner] + pair)

    return RotationAction(act.order, act.step, normalize)


def rotational_symmetry_D(part: NCPart, n: int, s: int, d: int) -> bool:
    """Fixed by the geometric 1/d turn (inner labels also turning clockwise)."""
    ann = Annulus(n, s)
    outer, inner = ann.outer, ann.inner
    if len(outer) % d or len(inner) % d:
        return False
    ko, ki = len(outer) // d, len(inner) // d
    mp = {x: outer[(i + ko) % len(outer)] for i, x in enumerate(outer)}
    mp.update({x: inner[(i - ki) % len(inner)] for i, x in enumerate(inner)})
    return NCPart.of([mp[x] for x in b] for b in part.blocks) == part


def has_traversing(part: NCPart, n: int, s: int) -> bool:
    ann = Annulus(n, s)
    inner, outer = set(ann.inner), set(ann.outer)
    return any(set(b) & inner and set(b) & outer for b in part.blocks)


def orbit_type_D(part: NCPart, n: int, s: int) -> Partition:
    nu = _nu(part, s)
    zero = part.zero_block()
    if zero is None:
        return Partition.of(nu + nu)
    k = len(zero) // (2 * s)
    return Partition.of(nu + nu + [2 * k - 1, 1])


# model dispatch


@dataclass(frozen=True)
class Model:
    weyl: WeylType
    s: int
    parts: list[NCPart]
    action: RotationAction
    orbit_type: Callable[[NCPart], Partition]


def build_model(w: WeylType, s: int, *, max_ground: int | None = None) -> Model:
    n = w.n
    if w.family == "A":
        parts = enum_sdivisible_A(n, s, max_ground=max_ground)
        return Model(w, s, parts, rotation_A(n, s), lambda p: orbit_type_A(p, s))
    if w.family in ("B", "C"):
        parts = enum_iota_stable_BC(n, s, max_ground=max_ground)
        fam = w.family
        return Model(
            w, s, parts, rotation_BC(n, s), lambda p: orbit_type_BC(p, n, s, fam)
        )
    if w.family == "D":
        parts = enum_annular_D(n, s, max_ground=max_ground)
        return Model(w, s, parts, rotation_D(n, s), lambda p: orbit_type_D(p, n, s))
    raise ValueError(f"no planar model for {w.name}")


def census(model: Model) -> Counter[Partition]:
    return Counter(model.orbit_type(p) for p in model.parts)


def fixed_points(
    parts: Sequence[NCPart],
    action: RotationAction,
    d: int,
    orbit_type: Callable[[NCPart], Partition],
) -> Counter[Partition]:
    """Census by orbit type of the elements fixed by the order-d subgroup."""
    if action.order % d:
        raise ValueError(f"d={d} does not divide the order {action.order}")
    k = action.order // d
    out: Counter[Partition] = Counter()
    for p in parts:
        if action.apply(p, k) == p:
            out[orbit_type(p)] += 1
    return out


@dataclass
class CSPReport:
    weyl: WeylType
    s: int
    total: int
    rows: list[tuple[Partition, int, int, int]] = field(default_factory=list)
    ok: bool = True


def verify_csp(
    w: WeylType, s: int, *, max_ground: int | None = None, raise_on_fail: bool = True
) -> CSPReport:
    """Compare fixed-point censuses with Kreweras values at roots of unity."""
    model = build_model(w, s, max_ground=max_ground)
    m = s * w.coxeter_number + 1
    lams = orbit_partitions(w.family, w.n)
    polys = {lam: krew(w, lam, m) for lam in lams}
    rep = CSPReport(w, s, len(model.parts))
    for d in divisors(s * w.coxeter_number):
        fixed = fixed_points(model.parts, model.action, d, model.orbit_type)
        stray = set(fixed) - set(lams)
        if stray:
            rep.ok = False
            if raise_on_fail:
                raise CSPViolation(f"unknown orbit types {sorted(map(str, stray))}")
        for lam in lams:
            val = eval_exact(polys[lam], d)
            got = fixed.get(lam, 0)
            ok = val.equals_int(got)
            expect = val.as_integer()
            rep.rows.append((lam, d, got, expect if expect is not None else -1))
            if not ok:
                rep.ok = False
                if raise_on_fail:
                    raise CSPViolation(
                        f"{w.name} s={s}: lambda={lam} d={d} fixed={got} value={val.residue}"
                    )
    return rep


def model_for(family: str, n: int, s: int, *, max_ground: int | None = None) -> Model:
    return build_model(degrees_of(family, n), s, max_ground=max_ground)
