"""Command-line front end.

Exit codes: 0 success (or "true"), 1 a "no"/"false" answer, 2 usage or input
errors, 3 a failed internal check.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import __version__, bench, fast, nfa
from .formula import random_instance, read_instance, write_instance
from .pattern import (
    Problem, PatternSyntaxError, classify, parse_pattern, render_pattern, simplify_type, size,
)
from .randgen import FAST_TYPES, random_fast_instance

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CHECK = 0, 1, 2, 3
PATTERN_CAP = 10**7
SEED_MAX = 2**64 - 1


class UsageError(Exception):
    pass


def _read_arg(value: str) -> str:
    """``@path`` reads the file (one trailing newline dropped); anything else is literal."""
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as fh:
            data = fh.read()
        return data[:-1] if data.endswith("\n") else data
    return value


def _pattern(value: str):
    src = _read_arg(value)
    p = parse_pattern(src)
    n = size(p)
    if n > PATTERN_CAP:
        raise UsageError(f"pattern has {n} nodes, above the cap of {PATTERN_CAP}")
    return p


def _seed(value: str) -> int:
    try:
        s = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {value!r}") from None
    if not 0 <= s <= SEED_MAX:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return s


def _default_seed() -> int:
    env = os.environ.get("HOMRE_SEED")
    if env is None:
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"HOMRE_SEED: {exc}") from None


def _positive(value: str) -> int:
    k = int(value)
    if k < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return k


def _bool(x: bool) -> str:
    return "true" if x else "false"


# -- commands -----------------------------------------------------------------


def cmd_classify(args, out) -> int:
    p = _pattern(args.pattern)
    c = classify(p)
    if not c.homogeneous:
        print(f"not homogeneous depth={c.depth} size={c.size}", file=out)
        return EXIT_NO
    label = c.type if c.type else "(symbol)"
    print(f"{label} depth={c.depth}", file=out)
    if args.verbose:
        print(f"size={c.size} ascii={c.ascii_type}", file=out)
        for prob in Problem:
            print(f"simplified[{prob.value}]={simplify_type(c.type, prob) or '(empty)'}", file=out)
    return EXIT_OK


def _solve(args, prob: Problem, out) -> int:
    t = _read_arg(args.text)
    p = _pattern(args.pattern)
    try:
        d = fast.decompose(p, prob)
    except fast.UnsupportedType:
        d = None
    if d is None:
        result = nfa.nfa_member(t, p) if prob is Problem.MEMBERSHIP else nfa.nfa_match(t, p)
        engine = "baseline"
    else:
        solver = fast.member_plus if d.kind == "plus" else fast.member_or
        extra = {} if d.kind == "plus" else {"seed": args.seed, "chi_c": args.chi_c}
        result = solver(t, d, prob, f=args.threshold_f, **extra)
        engine = f"fast:{d.type_label(prob)}"
    print(f"{_bool(result)} (engine={engine})", file=out)
    return EXIT_OK if result else EXIT_NO


def cmd_match(args, out) -> int:
    return _solve(args, Problem.MATCHING, out)


def cmd_member(args, out) -> int:
    return _solve(args, Problem.MEMBERSHIP, out)


def cmd_oracle(args, out) -> int:
    t = _read_arg(args.text)
    p = _pattern(args.pattern)
    prob = Problem.parse(args.problem)
    result = nfa.nfa_member(t, p) if prob is Problem.MEMBERSHIP else nfa.nfa_match(t, p)
    print(f"{_bool(result)} (engine=baseline)", file=out)
    return EXIT_OK if result else EXIT_NO


def cmd_gen_fp(args, out) -> int:
    inst = random_instance(args.leaves, args.depth, args.n, args.m, args.seed)
    if args.out:
        write_instance(args.out, inst)
        print(f"wrote {args.out} (s={inst.s} d={inst.d} n={inst.n} m={inst.m})", file=out)
    else:
        from .formula import dump_instance

        out.write(dump_instance(inst))
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    from .reductions import build_reduction, write_bundle

    inst = read_instance(args.input)
    ri = build_reduction(inst, args.type, args.problem, seed=args.seed)
    write_bundle(args.out, ri)
    m = ri.meta
    print(f"wrote {args.out}.text/.pattern/.meta type={m['type']} problem={m['problem']} "
          f"|t|={m['text_len']} size(p)={m['pattern_size']}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .reductions import read_bundle, verify_reduction

    inst = read_instance(args.input)
    ri = read_bundle(args.bundle)
    report = verify_reduction(ri, inst)
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK if report.ok else EXIT_CHECK


def selftest_lines(seed: int, count: int) -> tuple[list[str], bool]:
    """The differential report; deterministic for a given ``(seed, count)``."""
    from .formula import brute_force_pair
    from .reductions import build_reduction

    lines = [f"selftest seed={seed} count={count}"]
    ok = True
    rng = random.Random(seed)
    for (kind, prob), label in FAST_TYPES.items():
        bad = 0
        for _ in range(count):
            t, p = random_fast_instance(kind, prob, rng)
            f = rng.choice([None, 2, 3, 4])
            want = nfa.nfa_member(t, p) if prob is Problem.MEMBERSHIP else nfa.nfa_match(t, p)
            if fast.fast_solve(t, p, prob, f=f, seed=rng.getrandbits(32)) != want:
                bad += 1
                lines.append(f"  mismatch {label}: t={t!r} p={render_pattern(p)} f={f}")
        ok &= bad == 0
        lines.append(f"fast {label} {prob.value}: {count - bad}/{count} agree")
    cases = [(k, "matching") for k in ("cpc", "coc", "cs", "cpo", "cop")] + [("opoc", "membership")]
    per = max(1, count // 10)
    for code, prob in cases:
        bad = 0
        for _ in range(per):
            inst = random_instance(rng.randint(1, 4), 2, rng.randint(1, 2), rng.randint(1, 2), rng.getrandbits(32))
            ri = build_reduction(inst, code, prob)
            got = nfa.nfa_match(ri.text, ri.pattern) if prob == "matching" else nfa.nfa_member(ri.text, ri.pattern)
            bad += got != (brute_force_pair(inst) is not None)
        ok &= bad == 0
        lines.append(f"reduce {code} {prob}: {per - bad}/{per} agree")
    lines.append("PASS" if ok else "FAIL")
    return lines, ok


def cmd_selftest(args, out) -> int:
    lines, ok = selftest_lines(args.seed, args.count)
    for line in lines:
        print(line, file=out)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_bench(args, out) -> int:
    for line in bench.run(quick=args.quick):
        print(line, file=out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    seed_default = None  # resolved lazily so a bad HOMRE_SEED is a usage error
    ap = _Parser(prog="homre", description="Homogeneous regular expressions: engines and reductions.")
    ap.add_argument("--version", action="version", version=f"homre {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, text=True, pattern=True):
        if text:
            p.add_argument("--text", required=True, help="text, or @file")
        if pattern:
            p.add_argument("--pattern", required=True, help="pattern, or @file")
        p.add_argument("--seed", type=_seed, default=seed_default, help="u64 seed (default: $HOMRE_SEED or 0)")

    p = sub.add_parser("classify", help="homogeneity, type and depth of a pattern")
    p.add_argument("--pattern", required=True, help="pattern, or @file")
    p.add_argument("-v", "--verbose", action="store_true", help="also print size and simplified types")
    p.set_defaults(func=cmd_classify)

    for name, func, helptext in (("match", cmd_match, "is some substring of the text in L(p)?"),
                                 ("member", cmd_member, "is the text in L(p)?")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--threshold-f", type=_positive, default=None, help="small/large split for the fast engine")
        p.add_argument("--chi-c", type=_positive, default=8, help="constant c of the χ dimension")
        p.set_defaults(func=func)

    p = sub.add_parser("oracle", help="baseline NFA answer")
    common(p)
    p.add_argument("--problem", choices=[x.value for x in Problem], default="membership")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-fp", help="random Formula-Pair instance")
    p.add_argument("--leaves", "-s", type=_positive, default=4)
    p.add_argument("--depth", type=_positive, default=2)
    p.add_argument("--n", type=_positive, default=2)
    p.add_argument("--m", type=_positive, default=2)
    p.add_argument("--seed", type=_seed, default=seed_default)
    p.add_argument("--out", help="instance file (default: stdout)")
    p.set_defaults(func=cmd_gen_fp)

    p = sub.add_parser("reduce", help="build a reduction bundle from an instance file")
    p.add_argument("--type", required=True, choices=["cpc", "coc", "cs", "cpo", "cop", "opoc"])
    p.add_argument("--problem", choices=[x.value for x in Problem], default="matching")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="bundle prefix")
    p.add_argument("--seed", type=_seed, default=seed_default)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a bundle against its instance")
    p.add_argument("--bundle", required=True, help="bundle prefix")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="deterministic differential suite")
    p.add_argument("--seed", type=_seed, default=seed_default)
    p.add_argument("--count", type=_positive, default=50, help="instances per fast-engine type")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="kernel timings (informational)")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args, out)
    except UsageError as exc:
        print(f"homre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PatternSyntaxError as exc:
        print(f"homre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"homre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"homre: internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
