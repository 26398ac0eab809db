"""Tables of f_{e,phi}(m; q) for the exceptional types: parsing, evaluation, checks."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Union

from qsieve.kreweras import IdentityViolation, PropertyViolation, Report
from qsieve.qpoly import ZERO, QPoly, exact_div, q_int
from qsieve.weyl import EXCEPTIONAL, NotVeryGood, WeylType, degrees_of, q_catalan

TABLE_ENV = "QSIEVE_TABLE_PATH"
EXPECTED_TRIVIAL_ROWS = {"G2": 5, "F4": 16, "E6": 21, "E7": 45, "E8": 70}
DEFAULT_TEST_M = {"E6": (5, 7, 13), "E7": (5, 7, 19), "E8": (7, 11, 31)}


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NegativeExponent(ArithmeticError):
    pass


# AST


@dataclass(frozen=True)
class Lin:
    """a*m + b."""

    a: int
    b: int

    def at(self, m: int) -> int:
        return self.a * m + self.b

    def __str__(self) -> str:
        if self.a == 0:
            return str(self.b)
        head = "m" if self.a == 1 else "-m" if self.a == -1 else f"{self.a}m"
        if self.b == 0:
            return head
        return f"{head}{self.b:+d}"


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class QPow:
    exponent: Lin


@dataclass(frozen=True)
class Bracket:
    arg: Lin


@dataclass(frozen=True)
class Group:
    expr: Expr


@dataclass(frozen=True)
class Power:
    base: Atom
    k: int


@dataclass(frozen=True)
class Term:
    # (in_denominator, factor)
    factors: tuple[tuple[bool, Factor], ...]


@dataclass(frozen=True)
class Expr:
    # (sign, term) with sign in {+1, -1}
    terms: tuple[tuple[int, Term], ...]


Atom = Union[Int, QPow, Bracket, Group]
Factor = Union[Atom, Power]


# printer


def _fmt_atom(a: Atom) -> str:
    if isinstance(a, Int):
        return str(a.value)
    if isinstance(a, QPow):
        return f"q^{{{a.exponent}}}"
    if isinstance(a, Bracket):
        return f"[{a.arg}]"
    return f"({format_expr(a.expr)})"


def _fmt_factor(f: Factor) -> str:
    if isinstance(f, Power):
        return f"{_fmt_atom(f.base)}^{f.k}"
    return _fmt_atom(f)


def _fmt_term(t: Term) -> str:
    out = _fmt_factor(t.factors[0][1])
    for den, f in t.factors[1:]:
        out += (" / " if den else " * ") + _fmt_factor(f)
    return out


def format_expr(e: Expr) -> str:
    parts = []
    for i, (sign, t) in enumerate(e.terms):
        body = _fmt_term(t)
        if i == 0:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(("+ " if sign > 0 else "- ") + body)
    return " ".join(parts)


# parser

class _Parser:
    def __init__(self, text: str, line: int = 0, col0: int = 0) -> None:
        self.text = text
        self.pos = 0
        self.line = line
        self.col0 = col0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line, self.col0 + self.pos + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])

    def lin(self) -> Lin:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        if self.peek() == "m":
            a = 1
        else:
            a = self.integer()
            if self.peek() != "m":
                return Lin(0, sign * a)
        self.pos += 1
        b = 0
        if self.peek() in ("+", "-") and self._digit_follows():
            op = self.text[self.pos]
            self.pos += 1
            b = self.integer() * (1 if op == "+" else -1)
        return Lin(sign * a, b)

    def _digit_follows(self) -> bool:
        j = self.pos + 1
        while j < len(self.text) and self.text[j].isspace():
            j += 1
        return j < len(self.text) and self.text[j].isdigit()

    def expr(self) -> Expr:
        terms = []
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        terms.append((sign, self.term()))
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            terms.append((sign, self.term()))
        return Expr(tuple(terms))

    def term(self) -> Term:
        factors = [(False, self.factor())]
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                factors.append((False, self.factor()))
            elif ch == "/":
                self.pos += 1
                factors.append((True, self.factor()))
            elif ch and (ch in "q[(" or ch.isdigit()):
                factors.append((False, self.factor()))
            else:
                return Term(tuple(factors))

    def factor(self) -> Factor:
        base = self.atom()
        if self.peek() == "^":
            if isinstance(base, QPow):
                raise self.error("q^... cannot be raised to a further power")
            self.pos += 1
            return Power(base, self.integer())
        return base

    def atom(self) -> Atom:
        ch = self.peek()
        if ch.isdigit():
            return Int(self.integer())
        if ch == "q":
            self.pos += 1
            if self.peek() != "^":
                return QPow(Lin(0, 1))
            self.pos += 1
            nxt = self.peek()
            if nxt in ("{", "["):
                close = "}" if nxt == "{" else "]"
                self.pos += 1
                lin = self.lin()
                self.take(close)
                return QPow(lin)
            return QPow(self.lin())
        if ch == "[":
            self.pos += 1
            lin = self.lin()
            self.take("]")
            return Bracket(lin)
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.take(")")
            return Group(inner)
        raise self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")


def parse_expr(text: str, line: int = 0, column: int = 0) -> Expr:
    p = _Parser(text, line, column)
    e = p.expr()
    if p.peek():
        raise p.error(f"unexpected {p.peek()!r}")
    return e


# table rows


@dataclass(frozen=True)
class TableEntry:
    group: WeylType
    orbit_label: str
    phi: str
    exponents_mi: tuple[int, ...]
    expr: Expr
    line: int = 0

    @property
    def trivial_phi(self) -> bool:
        return self.phi == "1"

    @property
    def principal_in_levi(self) -> bool:
        return is_principal_label(self.orbit_label)

    def format(self) -> str:
        mi = ",".join(map(str, self.exponents_mi)) or "-"
        return " | ".join(
            [self.group.name, self.orbit_label, self.phi, mi, format_expr(self.expr)]
        )


_PRINCIPAL_MARK = re.compile(r"\([ab]\d+\)")


def is_principal_label(label: str) -> bool:
    """Labels like G2(a1) or E8(b5) are distinguished; primed labels are not."""
    return _PRINCIPAL_MARK.search(label) is None


def parse_table(src: str) -> list[TableEntry]:
    entries = []
    seen: set[tuple[str, str, str]] = set()
    for lineno, raw in enumerate(src.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        cells = line.split("|")
        if len(cells) != 5:
            raise ParseError(f"expected 5 fields, found {len(cells)}", lineno, 1)
        group, orbit, phi, mi, expr_text = (c.strip() for c in cells)
        if group not in EXCEPTIONAL:
            raise ParseError(f"unknown group {group!r}", lineno, 1)
        if not orbit:
            raise ParseError("empty orbit label", lineno, 1)
        if mi == "-":
            mis: tuple[int, ...] = ()
        else:
            try:
                mis = tuple(int(x) for x in mi.split(","))
            except ValueError:
                raise ParseError(f"bad m_i list {mi!r}", lineno, 1) from None
        key = (group, orbit, phi)
        if key in seen:
            raise ParseError(f"duplicate row {orbit} {phi} for {group}", lineno, 1)
        seen.add(key)
        column = len("|".join(cells[:4])) + 2 + (len(cells[4]) - len(cells[4].lstrip()))
        expr = parse_expr(expr_text, lineno, column)
        entries.append(TableEntry(degrees_of(group), orbit, phi, mis, expr, lineno))
    return entries


def format_table(entries: list[TableEntry]) -> str:
    return "".join(e.format() + "\n" for e in entries)


def default_table_path() -> Path:
    override = os.environ.get(TABLE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("qsieve") / "data" / "exceptional_tables.txt"))


@lru_cache(maxsize=8)
def _load(path: str, mtime: float) -> tuple[TableEntry, ...]:
    return tuple(parse_table(Path(path).read_text(encoding="utf-8")))


def load_table(path: str | Path | None = None) -> list[TableEntry]:
    p = Path(path) if path is not None else default_table_path()
    return list(_load(str(p), p.stat().st_mtime))


def entries_for(group: str, path: str | Path | None = None) -> list[TableEntry]:
    return [e for e in load_table(path) if e.group.family == group]


# evaluation over Laurent polynomials, stored as (poly, shift) = q^shift * poly


@dataclass(frozen=True)
class _Laurent:
    poly: QPoly
    shift: int = 0

    def __add__(self, other: _Laurent) -> _Laurent:
        low = min(self.shift, other.shift)
        return _Laurent(
            self.poly.shift(self.shift - low) + other.poly.shift(other.shift - low), low
        )

    def __neg__(self) -> _Laurent:
        return _Laurent(-self.poly, self.shift)

    def __mul__(self, other: _Laurent) -> _Laurent:
        return _Laurent(self.poly * other.poly, self.shift + other.shift)

    def normalized(self) -> _Laurent:
        if self.poly.is_zero():
            return _Laurent(ZERO, 0)
        low = self.poly.low_degree()
        return _Laurent(QPoly({e - low: c for e, c in self.poly.items()}), self.shift + low)

    def divide(self, other: _Laurent) -> _Laurent:
        den = other.normalized()
        if den.poly.is_zero():
            raise ZeroDivisionError("division by a zero value in the table")
        return _Laurent(exact_div(self.poly, den.poly), self.shift - den.shift)

    def to_poly(self) -> QPoly:
        n = self.normalized()
        if n.poly.is_zero():
            return ZERO
        if n.shift < 0:
            raise NegativeExponent(f"value has a q^{n.shift} term")
        return n.poly.shift(n.shift)


_ONE = _Laurent(QPoly.const(1))


def _bracket(k: int) -> _Laurent:
    if k >= 0:
        return _Laurent(q_int(k))
    # [k] = -q^k [-k] for negative k
    return _Laurent(-q_int(-k), k)


def _eval(node: object, m: int) -> _Laurent:
    if isinstance(node, Int):
        return _Laurent(QPoly.const(node.value))
    if isinstance(node, QPow):
        return _Laurent(QPoly.const(1), node.exponent.at(m))
    if isinstance(node, Bracket):
        return _bracket(node.arg.at(m))
    if isinstance(node, Group):
        return _eval(node.expr, m)
    if isinstance(node, Power):
        base = _eval(node.base, m)
        out = _ONE
        for _ in range(node.k):
            out = out * base
        return out
    if isinstance(node, Term):
        num, den = _ONE, _ONE
        for is_den, f in node.factors:
            v = _eval(f, m)
            if is_den:
                den = den * v
            else:
                num = num * v
        return num.divide(den) if den != _ONE else num
    if isinstance(node, Expr):
        total = _Laurent(ZERO)
        for sign, t in node.terms:
            v = _eval(t, m)
            total = total + (v if sign > 0 else -v)
        return total
    raise TypeError(f"unknown node {node!r}")


def is_very_good_exceptional(w: WeylType, m: int) -> bool:
    return m >= 1 and gcd(m, w.coxeter_number) == 1


def eval_expr(expr: Expr, m: int) -> QPoly:
    return _eval(expr, m).to_poly()


def eval_entry(e: TableEntry, m: int) -> QPoly:
    if not is_very_good_exceptional(e.group, m):
        raise NotVeryGood(f"m={m} is not very good for {e.group.name}")
    try:
        return eval_expr(e.expr, m)
    except NegativeExponent as exc:
        raise NegativeExponent(f"{e.group.name} {e.orbit_label} m={m}: {exc}") from None


def very_good_values(group: str, upto: int | None = None) -> list[int]:
    w = degrees_of(group)
    top = 2 * w.coxeter_number + 1 if upto is None else upto
    return [m for m in range(1, top + 1) if is_very_good_exceptional(w, m)]


def check_values(group: str) -> list[int]:
    if group in DEFAULT_TEST_M:
        return list(DEFAULT_TEST_M[group])
    return very_good_values(group)


def verify_exceptional_sum(
    group: str, m: int, *, path: str | Path | None = None, raise_on_fail: bool = True
) -> Report:
    w = degrees_of(group)
    if not is_very_good_exceptional(w, m):
        raise NotVeryGood(f"m={m} is not very good for {group}")
    rep = Report(f"sum identity {group} m={m}")
    rows = [e for e in entries_for(group, path) if e.trivial_phi]
    count_ok = len(rows) == EXPECTED_TRIVIAL_ROWS[group]
    rep.add("trivial rows", len(rows), count_ok)
    total = ZERO
    for e in rows:
        v = eval_entry(e, m)
        total = total + v
        rep.add(e.orbit_label, v, True)
    cat = q_catalan(w, m)
    rep.add("Cat", cat, total == cat)
    if not rep.ok and raise_on_fail:
        raise IdentityViolation(f"{group} m={m}: orbit sum differs from Cat", total - cat)
    return rep


def max_summands(expr: Expr) -> int:
    """Largest number of summands in any sum appearing in the expression."""
    best = len(expr.terms)
    for _, t in expr.terms:
        for _, f in t.factors:
            base = f.base if isinstance(f, Power) else f
            if isinstance(base, Group):
                best = max(best, max_summands(base.expr))
    return best


def verify_factorization_shape(
    group: str,
    m_values: list[int] | None = None,
    *,
    path: str | Path | None = None,
    raise_on_fail: bool = True,
) -> Report:
    ms = m_values if m_values is not None else check_values(group)
    rep = Report(f"shape {group}")
    for e in entries_for(group, path):
        if not e.trivial_phi:
            continue
        ok_shape = max_summands(e.expr) <= 2
        rep.add(f"{e.orbit_label} summands", max_summands(e.expr), ok_shape)
        for m in ms:
            v = eval_entry(e, m)
            if e.principal_in_levi:
                ok = v.is_nonnegative()
            elif m == 1:
                ok = v.is_zero()
            else:
                ok = v.divmod(QPoly({m - 1: 1, 0: -1}))[1].is_zero() and v.at_one() == 0
            rep.add(f"{e.orbit_label} m={m}", v, ok)
            if not ok and raise_on_fail:
                raise PropertyViolation(f"{group} {e.orbit_label} m={m}: shape check fails")
        if not ok_shape and raise_on_fail:
            raise PropertyViolation(f"{group} {e.orbit_label}: more than two summands")
    return rep
