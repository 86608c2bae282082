"""Command line entry point: ``simpleperms <subcommand> ...``.

Exit status is 0 on success, 1 when a mathematical check fails and 2 on
usage errors (bad flags, malformed permutations or marks).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import asymptotics, congruence, sequences
from .errors import (
    CrossCheckFailure,
    NoSimpleOfLength3,
    NotAMinimalBlock,
    SimplePermsError,
    TooLarge,
    VerificationError,
)
from .perm import Block, Permutation, blocks, decompose, is_simple, marked_decompose, parse_permutation
from .series import check_ode_identities, check_structure_identities, comtet_series, lagrange_com


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=None, sort_keys=False))


def _perm_arg(text: str) -> Permutation:
    try:
        return parse_permutation(text)
    except (SimplePermsError, ValueError) as exc:
        raise UsageError(str(exc)) from None


# -- seq ------------------------------------------------------------------------------

def _compute_sequence(name: str, m: int | None, N: int) -> tuple[sequences.SequenceTable, list[str]]:
    """The table plus the names of the independent routes it was checked against."""
    if name == "s":
        return sequences.s_sequence_checked(N), ["relation"]
    if name == "com":
        a = sequences.com_sequence(N, "newton")
        a.check_against(sequences.com_sequence(N, "lagrange"))
        return a, ["lagrange"]
    if name == "i":
        a = sequences.i_sequence(N)
        for n in range(1, min(N, 8) + 1):
            b = sequences.brute_count_plus_indecomposable(n)
            if b != a[n]:
                raise CrossCheckFailure("i", n, a[n], b)
        return a, [f"brute_force(n<={min(N, 8)})"]
    if name == "fm":
        if m is None or m < 2:
            raise UsageError("--name fm needs --m M with M >= 2")
        a = sequences.fm_sequence(m, N, "series")
        top = min(N, 20)
        a_short = sequences.fm_sequence(m, top, "bivariate")
        a.check_against(a_short)
        return a, [f"bivariate(n<={top})"]
    raise UsageError(f"unknown sequence {name!r}")


def _verify_cached(name: str, m: int | None) -> Callable[[sequences.SequenceTable], None]:
    def verify(table: sequences.SequenceTable) -> None:
        if name == "s":
            sequences.verify_s_table(table)
        else:
            fresh, _ = _compute_sequence(name, m, len(table))
            table.check_against(fresh)
    return verify


def cmd_seq(args) -> int:
    key = f"f{args.m}" if args.name == "fm" else args.name
    if args.name == "fm" and (args.m is None or args.m < 2):
        raise UsageError("--name fm needs --m M with M >= 2")
    table, checked = None, []
    if not args.no_cache:
        cached = sequences.load_table(key, verify=_verify_cached(args.name, args.m))
        if cached is not None and len(cached) >= args.max:
            table = sequences.SequenceTable(cached.name, cached.values[:args.max], cached.provenance)
            checked = ["relation (on load)" if args.name == "s" else "recomputed (on load)"]
    if table is None:
        table, checked = _compute_sequence(args.name, args.m, args.max)
        if not args.no_cache:
            sequences.save_table(table)
    if args.format == "json":
        doc = table.to_json()
        doc["cross_checked_with"] = checked
        _emit(doc)
    else:
        print(f"n\t{key}")
        for n, v in table.values:
            print(f"{n}\t{v}")
    return 0


# -- permutations -----------------------------------------------------------------------

def _witness(p: Permutation) -> Block | None:
    for b in blocks(p):
        if 1 < b.length < p.n:
            return b
    return None


def cmd_simple(args) -> int:
    p = _perm_arg(args.perm)
    ok = is_simple(p)
    w = None if ok else _witness(p)
    if args.format == "json":
        _emit({"perm": str(p), "simple": ok,
               "witness": None if w is None else {"start": w.start, "end": w.end, "lo": w.lo, "hi": w.hi}})
    else:
        print("true" if ok else f"false\tblock {w.start}-{w.end} values {w.lo}..{w.hi}")
    return 0


def cmd_decompose(args) -> int:
    p = _perm_arg(args.perm)
    d = decompose(p)
    if args.format == "json":
        _emit({"perm": str(p), "skeleton": str(d.skeleton), "parts": [str(a) for a in d.parts]})
    else:
        print(d)
    return 0


def cmd_enumerate(args) -> int:
    try:
        perms = sequences.enumerate_simple(args.n)
        if args.format == "json":
            _emit({"n": args.n, "perms": [str(p) for p in perms]})
        else:
            for p in perms:
                print(p)
    except TooLarge as exc:
        raise UsageError(str(exc)) from None
    return 0


def cmd_random(args) -> int:
    try:
        p = sequences.random_simple(args.n, seed=args.seed)
    except (NoSimpleOfLength3, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit({"n": args.n, "seed": args.seed, "perm": str(p)})
    else:
        print(p)
    return 0


def _parse_marks(p: Permutation, spec: str) -> list[Block]:
    marks = []
    for chunk in filter(None, (c.strip() for c in spec.split(";"))):
        try:
            start, end = (int(t) for t in chunk.split("-"))
            if not 1 <= start <= end <= p.n:
                raise ValueError
            seg = p.values[start - 1:end]
            marks.append(Block(start, end, min(seg), max(seg)))
        except ValueError:
            raise UsageError(f"mark {chunk!r} is not a block of {p}") from None
    return marks


def cmd_marked(args) -> int:
    p = _perm_arg(args.perm)
    marks = _parse_marks(p, args.marks)
    try:
        image = marked_decompose(p, marks)
    except NotAMinimalBlock as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit({"perm": str(p), "marks": [str(b) for b in sorted(set(marks))],
               "skeleton": str(image.skeleton), "parts": [str(a) for a in image.parts],
               "r": image.r, "s": image.s, "l": image.l, "mark_count": len(set(marks))})
    else:
        print(image)
        print(f"r={image.r}\ts={image.s}\tl={image.l}\t|M|={len(set(marks))}\tr+l-s={image.mark_count}")
    return 0 if image.mark_count == len(set(marks)) else 1


# -- checks -------------------------------------------------------------------------------

def cmd_identities(args) -> int:
    reports = [check_structure_identities(args.order), check_ode_identities(args.order)]
    if args.format == "json":
        _emit({"order": args.order, "passed": [name for r in reports for name in r.passed]})
    else:
        for r in reports:
            for name in r.passed:
                print(f"ok\t{name}\t(order {args.order})")
    return 0


def cmd_congruence(args) -> int:
    if args.scan_prime is not None:
        rows = congruence.scan_ord_p(args.scan_prime, args.max)
        if args.format == "json":
            _emit({"p": args.scan_prime, "rows": [{"n": n, "ord": v} for n, v in rows]})
        else:
            print(f"n\tord_{args.scan_prime}(Com_n)")
            for n, v in rows:
                print(f"{n}\t{v}")
        return 0
    ord2 = congruence.check_ord2_theorem(args.max)
    parity_top = 1000
    for m in range(parity_top + 1):
        congruence.binomial_3m_m_is_odd(m)
    families = [congruence.check_power2_congruence(args.max), *congruence.check_catalan_mod3(args.max)]
    if args.format == "json":
        _emit({"valuations": [r.to_json() for r in ord2],
               "parity_checked_up_to": parity_top,
               "congruences": [f.to_json() for f in families]})
    else:
        print("n\tord2\tlower_bound\tequality_predicted\tequality_observed")
        for r in ord2:
            print(f"{r.n}\t{r.valuation}\t{r.lower_bound}\t{r.equality_predicted}\t{r.equality_observed}")
        print(f"ok\tC(3m,m) parity: carries = digits = direct for m <= {parity_top}")
        for f in families:
            print(f"ok\t{f.name}\tn = {f.n_min}..{f.n_max}")
    return 0


def cmd_asymptotics(args) -> int:
    top = args.max
    tables = {
        "simple": asymptotics.simple_error_rows(range(4, top + 1)),
        "kaplansky_f2": asymptotics.kaplansky_check(range(2, top + 1)),
        "f4": asymptotics.f4_asymptotic_check(range(4, top + 1)),
    }
    head = asymptotics.headline(20)
    if args.format == "json":
        _emit({"headline": head.to_json(),
               "tables": {k: [r.to_json() for r in rows] for k, rows in tables.items()}})
    else:
        for name, rows in tables.items():
            print(f"# {name}")
            print(asymptotics.TSV_HEADER)
            for r in rows:
                print(r.tsv())
        print(f"# headline n=20: relative error {head.relative_error.to_decimal(6)}")
    return 0


def verification_checks(jobs: int = 1) -> list[tuple[str, Callable[[], object]]]:
    """The named checks run by ``verify``; each raises on failure."""

    def lagrange_vs_newton():
        c = comtet_series(40)
        for n in range(1, 41):
            if lagrange_com(n) != c[n]:
                raise VerificationError(f"Com_{n}: Newton {c[n]} != Lagrange {lagrange_com(n)}")

    def p_nk_bounds():
        for n in range(4, 9):
            for k in range(4, n + 1):
                sequences.count_with_min_block(n, k)

    def parity():
        for m in range(1001):
            congruence.binomial_3m_m_is_odd(m)

    def asymptotic_window():
        rows = asymptotics.simple_error_rows(range(15, 41))
        if asymptotics.median_successive_ratio(rows) >= 1:
            raise VerificationError("relative error of the s_n expansion is not shrinking over 15..40")
        rel = asymptotics.headline(20).relative_error
        if not (rel.certainly_above(Fraction(385, 100000))
                and rel.certainly_below(Fraction(394, 100000))):
            raise VerificationError(f"n=20 relative error {rel} outside [3.85e-3, 3.94e-3]")

    return [
        ("cross_validate(N_series=20, n_brute=9)", lambda: sequences.cross_validate(20, 9, jobs=jobs)),
        ("Com_n: Newton = Lagrange for n <= 40", lagrange_vs_newton),
        ("structure identities at order 50", lambda: check_structure_identities(50)),
        ("ODE identities at order 50", lambda: check_ode_identities(50)),
        ("marked-permutation bijection for n <= 6", lambda: sequences.verify_theorem2(6)),
        ("p_{n,k} bound for n <= 8", p_nk_bounds),
        ("ord_2(Com_n) theorem for n <= 60", lambda: congruence.check_ord2_theorem(60)),
        ("C(3m,m) parity three ways for m <= 1000", parity),
        ("s_n = +-2 mod 2^k for 3 <= n <= 200", lambda: congruence.check_power2_congruence(200)),
        ("mod 3 congruences for n <= 200", lambda: congruence.check_catalan_mod3(200)),
        ("block-count claims for n <= 8", lambda: asymptotics.bootstrap_check(8)),
        ("asymptotic error window 15..40 and n=20 headline", asymptotic_window),
    ]


def cmd_verify(args) -> int:
    failures = 0
    results = []
    for name, check in verification_checks(args.jobs):
        try:
            check()
            results.append({"check": name, "ok": True})
        except (VerificationError, AssertionError) as exc:
            failures += 1
            results.append({"check": name, "ok": False, "error": str(exc)})
    if args.format == "json":
        _emit({"ok": failures == 0, "checks": results})
    else:
        for r in results:
            print(("PASS" if r["ok"] else "FAIL") + "\t" + r["check"] + ("" if r["ok"] else "\t" + r["error"]))
    return 1 if failures else 0


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for exhaustive counts")
    common.add_argument("--no-cache", action="store_true", help=f"ignore ${sequences.CACHE_ENV}")

    parser = argparse.ArgumentParser(prog="simpleperms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", parents=[common], help="print s, i, com or f_m with a cross-check")
    p.add_argument("--name", choices=("s", "i", "com", "fm"), required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("simple", parents=[common], help="test simplicity")
    p.add_argument("perm")
    p.set_defaults(func=cmd_simple)

    p = sub.add_parser("decompose", parents=[common], help="substitution decomposition")
    p.add_argument("perm")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("enumerate", parents=[common], help="simple permutations in lexicographic order")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("random", parents=[common], help="uniform random simple permutation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("marked", parents=[common], help="image of a marked permutation")
    p.add_argument("perm")
    p.add_argument("--marks", default="", help="e.g. '1-2;2-3;4-7'")
    p.set_defaults(func=cmd_marked)

    p = sub.add_parser("identities", parents=[common], help="generating-function identities")
    p.add_argument("--order", type=int, default=50)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("congruence", parents=[common], help="valuation and congruence checks")
    p.add_argument("--max", type=int, default=200)
    p.add_argument("--scan-prime", type=int)
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("asymptotics", parents=[common], help="exact counts vs expansions")
    p.add_argument("--max", type=int, default=40)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("verify", parents=[common], help="run every check at default scale")
    p.set_defaults(func=cmd_verify)
    return parser


def _validate(args, parser) -> None:
    for name in ("max", "order", "n"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            parser.error(f"--{name} must be positive")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    if args.command == "congruence" and args.scan_prime is not None and not congruence._is_prime(args.scan_prime):
        parser.error("--scan-prime must be prime")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except VerificationError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
