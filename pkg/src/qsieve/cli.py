"""Command-line entry point: ``qsieve <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

from qsieve.exceptional import (
    ParseError,
    check_values,
    entries_for,
    verify_exceptional_sum,
    verify_factorization_shape,
)
from qsieve.kreweras import IdentityViolation, PropertyViolation, UnsupportedType, krew, narayana
from qsieve.ncmodels import CSPViolation, verify_csp
from qsieve.nilcount import FormulaMismatch, count_nilpotent_by_rank_A, count_nilpotent_by_rank_BC
from qsieve.partitions import Partition
from qsieve.qpoly import CycloElt, QPoly
from qsieve.sieve_eval import Mismatch, cross_check
from qsieve.weyl import CLASSICAL, EXCEPTIONAL, WeylType, degrees_of, q_catalan

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# Raised by the library for bad input; rendered as usage errors.
USAGE_ERRORS = (ValueError, UnsupportedType)
VERIFY_ERRORS = (
    IdentityViolation,
    PropertyViolation,
    CSPViolation,
    Mismatch,
    FormulaMismatch,
    ArithmeticError,
)


class UsageError(Exception):
    pass


Value = object


@dataclass
class RunReport:
    command: str
    parameters: dict[str, object]
    items: list[tuple[str, Value, str]] = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def verdict(self) -> str:
        return "pass" if all(status == "pass" for _, _, status in self.items) else "fail"

    def add(self, key: str, value: Value, ok: bool = True) -> None:
        self.items.append((key, value, "pass" if ok else "fail"))


# serialization


def _json_value(v: Value) -> object:
    if isinstance(v, QPoly):
        return [[e, c] for e, c in v.items()]
    if isinstance(v, CycloElt):
        n = v.as_integer()
        return n if n is not None else {"cyclotomic_order": v.d, "residue": list(v.residue)}
    if isinstance(v, (int, str)) or v is None:
        return v
    return str(v)


def _text_value(v: Value) -> str:
    if isinstance(v, CycloElt):
        n = v.as_integer()
        return str(n) if n is not None else f"residue {list(v.residue)} mod Phi_{v.d}"
    return str(v)


def render(rep: RunReport, fmt: str) -> str:
    if fmt == "json":
        obj = {
            "command": rep.command,
            "parameters": rep.parameters,
            "verdict": rep.verdict,
            "items": [
                {"key": k, "value": _json_value(v), "status": s} for k, v, s in rep.items
            ],
            "elapsed_ms": rep.elapsed_ms,
        }
        return json.dumps(obj, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value", "status"])
        for k, v, s in rep.items:
            writer.writerow([k, _text_value(v), s])
        return buf.getvalue()
    params = " ".join(f"{k}={v}" for k, v in rep.parameters.items())
    lines = [f"{rep.command} {params}".rstrip()]
    width = max((len(k) for k, _, _ in rep.items), default=0)
    for k, v, s in rep.items:
        lines.append(f"  {k.ljust(width)}  {_text_value(v)}  [{s}]")
    lines.append(f"verdict: {rep.verdict}")
    return "\n".join(lines) + "\n"


# argument helpers


def parse_weyl(kind: str, n: str) -> WeylType:
    if kind in EXCEPTIONAL:
        if n not in ("-", ""):
            raise UsageError(f"{kind} takes '-' in place of the rank")
        return degrees_of(kind)
    if kind not in CLASSICAL:
        raise UsageError(f"unknown type {kind!r}")
    try:
        rank = int(n)
    except ValueError:
        raise UsageError(f"rank must be an integer, got {n!r}") from None
    return degrees_of(kind, rank)


def _classical(w: WeylType) -> None:
    if not w.is_classical:
        raise UsageError(f"{w.name} is not a classical type")


# commands


def cmd_catalan(args: argparse.Namespace) -> RunReport:
    w = parse_weyl(args.type, args.n)
    rep = RunReport("catalan", {"type": w.name, "m": args.m})
    cat = q_catalan(w, args.m)
    rep.add("Cat", cat)
    rep.add("Cat(q=1)", cat.at_one())
    return rep


def cmd_kreweras(args: argparse.Namespace) -> RunReport:
    w = parse_weyl(args.type, args.n)
    _classical(w)
    lam = Partition.parse(args.lam)
    rep = RunReport("kreweras", {"type": w.name, "lambda": str(lam), "m": args.m})
    kr = krew(w, lam, args.m)
    rep.add(str(lam), kr.poly)
    rep.add("value at q=1", kr.poly.at_one())
    if kr.very_even:
        rep.add("per SO-orbit", kr.per_so_orbit())
    return rep


def cmd_narayana(args: argparse.Namespace) -> RunReport:
    w = parse_weyl(args.type, args.n)
    _classical(w)
    rep = RunReport("narayana", {"type": w.name, "m": args.m, "k": args.k})
    nar = narayana(w, args.m, args.k)
    rep.add(f"Nar k={args.k}", nar)
    rep.add("value at q=1", nar.at_one())
    return rep


def cmd_sieve(args: argparse.Namespace) -> RunReport:
    w = parse_weyl(args.type, args.n)
    _classical(w)
    lam = Partition.parse(args.lam)
    params = {"type": w.name, "lambda": str(lam), "s": args.s, "d": args.d}
    rep = RunReport("sieve", params)
    ev = cross_check(w, lam, args.s, args.d)
    rep.add("exact", ev.exact_value, ev.agrees)
    rep.add("closed form", ev.closed_form if ev.closed_form is not None else 0, ev.agrees)
    return rep


def cmd_csp(args: argparse.Namespace) -> RunReport:
    w = parse_weyl(args.type, args.n)
    _classical(w)
    rep = RunReport("csp", {"type": w.name, "s": args.s})
    res = verify_csp(w, args.s, max_ground=args.max_ground, raise_on_fail=False)
    rep.add("model size", res.total)
    for lam, d, got, expect in res.rows:
        rep.add(f"{lam} d={d}", got, got == expect)
    if not res.ok and rep.verdict == "pass":
        rep.add("orbit types", "unexpected orbit type in model", False)
    return rep


def cmd_nilcount(args: argparse.Namespace) -> RunReport:
    w = parse_weyl(args.type, args.n)
    if w.family == "A":
        res = count_nilpotent_by_rank_A(w.n, args.q)
    elif w.family in ("B", "C"):
        res = count_nilpotent_by_rank_BC(w.n, args.q, w.family)
    else:
        raise UsageError("nilcount supports types A, B and C")
    rep = RunReport("nilcount", {"type": w.name, "q": args.q})
    for r in sorted(set(res.brute) | set(res.closed)):
        got = res.brute.get(r, 0)
        rep.add(f"rank {r}", got, got == res.closed.get(r, 0))
    for key, a, b in res.checks:
        rep.add(key, a, a == b)
    return rep


def cmd_exceptional(args: argparse.Namespace) -> RunReport:
    group = args.group
    if group not in EXCEPTIONAL:
        raise UsageError(f"unknown exceptional group {group!r}")
    ms = args.m or check_values(group)
    rep = RunReport("exceptional", {"group": group, "m": ",".join(map(str, ms))})
    entries_for(group, args.table)
    for m in ms:
        res = verify_exceptional_sum(group, m, path=args.table, raise_on_fail=False)
        total = [v for k, v, _ in res.rows if k == "Cat"][0]
        rep.add(f"sum = Cat, m={m}", total, res.ok)
    shape = verify_factorization_shape(group, ms, path=args.table, raise_on_fail=False)
    failures = [k for k, _, s in shape.rows if s == "fail"]
    rep.add("shape checks", len(shape.rows) - len(failures), not failures)
    for k in failures:
        rep.add(k, "shape check failed", False)
    return rep


def cmd_selftest(args: argparse.Namespace) -> RunReport:
    rep = RunReport("selftest", {})
    a3 = degrees_of("A", 4)
    rep.add("Cat(A3,5;1) = 14", q_catalan(a3, 5).at_one(), q_catalan(a3, 5).at_one() == 14)
    values = [krew(a3, Partition.parse(t), 5).poly.at_one() for t in ("[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]")]
    rep.add("Krew(A3,5;1)", str(values), values == [1, 4, 2, 6, 1])
    d4 = krew(degrees_of("D", 4), Partition.parse("[3,3,1,1]"), 9).poly
    want = QPoly({14: 2, 16: 4, 18: 6, 20: 7, 22: 5, 24: 3, 26: 1})
    rep.add("Krew(D4,[3,3,1,1],9)", d4, d4 == want)
    csp = verify_csp(a3, 1, raise_on_fail=False)
    rep.add("CSP A3 s=1", csp.total, csp.ok)
    nil = count_nilpotent_by_rank_A(2, 2)
    rep.add("nilpotent census gl2(F2)", nil.brute.get(1, 0), nil.ok)
    g2 = verify_exceptional_sum("G2", 5, path=args.table, raise_on_fail=False)
    rep.add("G2 sum identity m=5", q_catalan(degrees_of("G2"), 5).at_one(), g2.ok)
    return rep


COMMANDS: dict[str, Callable[[argparse.Namespace], RunReport]] = {
    "catalan": cmd_catalan,
    "kreweras": cmd_kreweras,
    "narayana": cmd_narayana,
    "sieve": cmd_sieve,
    "csp": cmd_csp,
    "nilcount": cmd_nilcount,
    "exceptional": cmd_exceptional,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--max-ground", type=int, default=None, help="enumeration guard override")
    common.add_argument("--table", default=None, help="exceptional table file")
    common.add_argument(
        "--no-timing", action="store_true", help="report elapsed_ms as 0 for reproducible JSON"
    )

    parser = argparse.ArgumentParser(
        prog="qsieve", description="q-Kreweras, q-Narayana and cyclic sieving verifier."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalan", parents=[common], help="q-Catalan polynomial")
    p.add_argument("type")
    p.add_argument("n", help="rank parameter (A uses n = rank + 1; '-' for exceptional)")
    p.add_argument("m", type=int)

    p = sub.add_parser("kreweras", parents=[common], help="q-Kreweras polynomial of one orbit")
    p.add_argument("type")
    p.add_argument("n")
    p.add_argument("lam", metavar="lambda", help="partition such as [3,1]")
    p.add_argument("m", type=int)

    p = sub.add_parser("narayana", parents=[common], help="q-Narayana polynomial")
    p.add_argument("type")
    p.add_argument("n")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("sieve", parents=[common], help="value at a primitive d-th root of unity")
    p.add_argument("type")
    p.add_argument("n")
    p.add_argument("lam", metavar="lambda")
    p.add_argument("s", type=int)
    p.add_argument("d", type=int)

    p = sub.add_parser("csp", parents=[common], help="brute-force cyclic sieving check")
    p.add_argument("type")
    p.add_argument("n")
    p.add_argument("s", type=int)

    p = sub.add_parser("nilcount", parents=[common], help="finite-field nilpotent census")
    p.add_argument("type")
    p.add_argument("n")
    p.add_argument("q", type=int)

    p = sub.add_parser("exceptional", parents=[common], help="exceptional table checks")
    p.add_argument("group")
    p.add_argument("m", type=int, nargs="*")

    sub.add_parser("selftest", parents=[common], help="quick end-to-end check")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep = COMMANDS[args.command](args)
    except VERIFY_ERRORS as exc:
        print(f"qsieve {args.command}: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ParseError, OSError, *USAGE_ERRORS) as exc:
        print(f"qsieve {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.no_timing:
        rep.elapsed_ms = int((time.perf_counter() - start) * 1000)
    sys.stdout.write(render(rep, args.format))
    return EXIT_PASS if rep.verdict == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
