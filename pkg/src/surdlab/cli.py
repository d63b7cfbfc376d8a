"""Command-line front end.

Subcommands: cf, pell, growth, profile, hypothesis, expand, family,
identities.  Exit codes: 0 success, 1 invariant/identity failure,
2 invalid input, 3 resource cap hit (fatal caps always; soft caps only
under --strict).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .expansion import (
    decide_hypothesis,
    error_table,
    sqrt_approximation,
)
from .forms import FormSyntaxError, eval_int, format_form, parse_form
from .growth import (
    PellQuery,
    bounded_pell_solutions,
    denominator_growth,
    min_solution_growth,
    partial_quotient_profile,
)
from .surd import (
    DEFAULT_DIGIT_BUDGET,
    DEFAULT_WORD_CAP,
    ResourceLimitError,
    SquareInputError,
    cf_sqrt,
    fundamental_pell,
    is_perfect_square,
    period_bound_ratio,
    period_length,
)


def _parse_n_range(text: str) -> range:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if hi < lo:
        raise ValueError(f"empty n range {text!r}")
    return range(lo, hi + 1)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default=None,
                        help="output format (default: text for cf/hypothesis, csv otherwise)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--word-cap", type=int, default=DEFAULT_WORD_CAP,
                        help="longest period word kept in memory")
    common.add_argument("--digit-budget", type=int, default=DEFAULT_DIGIT_BUDGET,
                        help="decimal-digit cap for solution denominators")
    common.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 when any resource cap was hit")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="surdlab",
        description="Exact continued fractions of sqrt(D), Pell equations and "
        "power-sum family experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cf = sub.add_parser("cf", help="continued fraction of sqrt(D)")
    cf_sub = cf.add_subparsers(dest="cf_command", required=True)
    p = cf_sub.add_parser("sqrt", parents=[common], help="a0, period word and r")
    p.add_argument("D", type=int)
    p = cf_sub.add_parser("period", parents=[common], help="period length and bound ratio")
    p.add_argument("D", type=int)
    p = cf_sub.add_parser("pell", parents=[common], help="fundamental Pell solution")
    p.add_argument("D", type=int)

    pell = sub.add_parser("pell", help="bounded Pell-type solution scans")
    pell_sub = pell.add_subparsers(dest="pell_command", required=True)
    p = pell_sub.add_parser("scan", parents=[common],
                            help="solutions of |X^2 - D Y^2| < C")
    p.add_argument("--form", help="family f(n); scans D = f(n) over --n")
    p.add_argument("--D", type=int, help="single D instead of a family")
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--n", help="n range a..b (with --form)")
    p.add_argument("--y-limit", type=int, default=None,
                   help="largest Y searched; collect-all scans default to "
                   "10^12 (an unbounded default would balloon), minimal-Y "
                   "family scans default to the digit budget")
    p.add_argument("--all", action="store_true",
                   help="with --form: list every solution, not just the minimal one")

    growth = sub.add_parser("growth", help="growth statistics along a family")
    growth_sub = growth.add_subparsers(dest="growth_command", required=True)
    p = growth_sub.add_parser("denom", parents=[common],
                              help="exact denominators of f(n)/b^n")
    p.add_argument("--form", required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--n", required=True)

    profile = sub.add_parser("profile", help="partial-quotient profiles")
    profile_sub = profile.add_subparsers(dest="profile_command", required=True)
    p = profile_sub.add_parser("pq", parents=[common],
                               help="max partial quotient while q_j < exp(c*n)")
    p.add_argument("--form", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--c", type=float, required=True)

    hyp = sub.add_parser("hypothesis", help="square-decomposition hypothesis")
    hyp_sub = hyp.add_subparsers(dest="hypothesis_command", required=True)
    p = hyp_sub.add_parser("check", parents=[common], help="decide and show witnesses")
    p.add_argument("--form", required=True)

    exp = sub.add_parser("expand", help="truncated square-root expansions")
    exp_sub = exp.add_subparsers(dest="expand_command", required=True)
    p = exp_sub.add_parser("sqrt", parents=[common], help="certified error table")
    p.add_argument("--form", required=True)
    p.add_argument("--j", type=int, choices=(0, 1), required=True)
    p.add_argument("--n-range", required=True)

    p = sub.add_parser("family", parents=[common],
                       help="period records for D = f(n) over an n range")
    p.add_argument("--preset", choices=sorted(harness.PRESETS))
    p.add_argument("--form")
    p.add_argument("--n", help="n range a..b")
    p.add_argument("--summary", action="store_true",
                   help="print the suffix minimum of r to stderr")

    p = sub.add_parser("identities", parents=[common],
                       help="verify the constant-period identity families")
    p.add_argument("--n-max", type=int, default=10)

    return parser


class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.chunks: list[str] = []

    def write(self, text: str) -> None:
        self.chunks.append(text)

    def line(self, text: str = "") -> None:
        self.chunks.append(text + "\n")

    def flush(self) -> None:
        data = "".join(self.chunks)
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _fmt_float(x: float) -> str:
    return f"{x:.6f}"


def _run_cf(args, out: _Output) -> int:
    fmt = args.format or "text"
    if args.cf_command == "sqrt":
        exp = cf_sqrt(args.D, word_cap=args.word_cap)
        word = " ".join(map(str, exp.period)) if exp.period is not None else ""
        if fmt == "json":
            out.line(json.dumps({
                "D": exp.D, "a0": exp.a0, "r": exp.r,
                "period": list(exp.period) if exp.period is not None else None,
            }))
        elif fmt == "csv":
            out.line("D,a0,r,period")
            out.line(f'{exp.D},{exp.a0},{exp.r},"{word}"')
        else:
            out.line(f"D: {exp.D}")
            out.line(f"a0: {exp.a0}")
            out.line(f"r: {exp.r}")
            out.line(f"period: {word if word else '(elided)'}")
        if args.strict and exp.period is None:
            return 3
        return 0
    if args.cf_command == "period":
        r = period_length(args.D)
        ratio = period_bound_ratio(args.D, r)
        if fmt == "json":
            out.line(json.dumps({"D": args.D, "r": r, "bound_ratio": ratio}))
        elif fmt == "csv":
            out.line("D,r,bound_ratio")
            out.line(f"{args.D},{r},{_fmt_float(ratio)}")
        else:
            out.line(f"D: {args.D}")
            out.line(f"r: {r}")
            out.line(f"r / (sqrt(D) ln D): {_fmt_float(ratio)}")
        return 0
    if args.cf_command == "pell":
        sol = fundamental_pell(args.D)
        if fmt == "json":
            out.line(json.dumps({"D": args.D, "X": sol.X, "Y": sol.Y, "value": sol.value}))
        elif fmt == "csv":
            out.line("D,X,Y,value")
            out.line(f"{args.D},{sol.X},{sol.Y},{sol.value}")
        else:
            out.line(f"X: {sol.X}")
            out.line(f"Y: {sol.Y}")
            out.line(f"value: {sol.value}")
        return 0
    raise AssertionError


def _run_pell_scan(args, out: _Output) -> int:
    if (args.D is None) == (args.form is None):
        raise ValueError("pell scan needs exactly one of --D or --form")
    scan_y_limit = args.y_limit if args.y_limit is not None else 10**12
    if args.D is not None:
        scan = bounded_pell_solutions(
            PellQuery(args.D, args.C, y_limit=scan_y_limit,
                      digit_budget=args.digit_budget)
        )
        if (args.format or "csv") == "json":
            out.line(json.dumps({
                "D": args.D, "C": args.C, "complete": scan.complete,
                "solutions": [{"X": s.X, "Y": s.Y, "value": s.value}
                              for s in scan.solutions],
            }))
        else:
            out.line("X,Y,value")
            for s in scan.solutions:
                out.line(f"{s.X},{s.Y},{s.value}")
        if not scan.complete:
            print(f"# warning: C={args.C} > sqrt({args.D}); scan may be incomplete",
                  file=sys.stderr)
        return 0

    form = parse_form(args.form)
    if args.n is None:
        raise ValueError("pell scan over a family needs --n a..b")
    n_range = _parse_n_range(args.n)
    if args.all:
        out.line("n,D,X,Y,value")
        for n in n_range:
            D = eval_int(form, n)
            if D <= 0 or is_perfect_square(D):
                print(f"# n={n} skipped", file=sys.stderr)
                continue
            scan = bounded_pell_solutions(
                PellQuery(D, args.C, y_limit=scan_y_limit,
                          digit_budget=args.digit_budget)
            )
            for s in scan.solutions:
                out.line(f"{n},{D},{s.X},{s.Y},{s.value}")
        return 0
    result = min_solution_growth(
        form, args.C, n_range,
        y_limit=args.y_limit, digit_budget=args.digit_budget,
    )
    if (args.format or "csv") == "json":
        out.line(json.dumps({
            "slope": result.slope,
            "hypothesis_holds": None if result.hypothesis is None
            else result.hypothesis.holds,
            "records": [
                {"n": rec.n, "D": rec.metadata["D"], "Y_min": rec.metadata["Y"],
                 "value": rec.metadata["value"], "log_Y_min": rec.statistic}
                for rec in result.records
            ],
            "skipped": [{"n": n, "reason": reason} for n, reason in result.skipped],
        }, indent=2))
    else:
        out.line("n,D,Y_min,value,log_Y_min")
        for rec in result.records:
            out.line(
                f"{rec.n},{rec.metadata['D']},{rec.metadata['Y']},"
                f"{rec.metadata['value']},{_fmt_float(rec.statistic)}"
            )
    for n, reason in result.skipped:
        print(f"# n={n} skipped: {reason}", file=sys.stderr)
    if result.slope is not None:
        print(f"# least-squares slope of log Y_min: {result.slope:.6f}",
              file=sys.stderr)
    if result.hypothesis is not None and not result.hypothesis.holds:
        print("# warning: the square-decomposition hypothesis fails for this form",
              file=sys.stderr)
    if args.strict and any(reason == "cap" for _, reason in result.skipped):
        return 3
    return 0


def _run_growth_denom(args, out: _Output) -> int:
    form = parse_form(args.form)
    records = denominator_growth(form, args.b, _parse_n_range(args.n))
    if (args.format or "csv") == "json":
        out.line(json.dumps([
            {"n": r.n, "denominator": r.metadata["denominator"],
             "log_denominator": r.statistic, "flagged": r.flagged}
            for r in records
        ], indent=2))
    else:
        out.line("n,denominator,log_denominator,flagged")
        for r in records:
            out.line(
                f"{r.n},{r.metadata['denominator']},{_fmt_float(r.statistic)},"
                f"{'true' if r.flagged else 'false'}"
            )
    return 0


def _run_profile_pq(args, out: _Output) -> int:
    form = parse_form(args.form)
    profiles = []
    for n in _parse_n_range(args.n):
        prof = partial_quotient_profile(form, n, args.c)
        if prof is None:
            print(f"# n={n} skipped: square", file=sys.stderr)
            continue
        profiles.append(prof)
    if (args.format or "csv") == "json":
        out.line(json.dumps([
            {"n": p.n, "D": p.D, "prefix_len": p.prefix_length,
             "max_partial_quotient": p.max_partial_quotient,
             "effective_exponents": list(p.effective_exponents)}
            for p in profiles
        ], indent=2))
        return 0
    out.line("n,D,prefix_len,max_partial_quotient,min_eff_exponent,max_eff_exponent")
    for p in profiles:
        if p.effective_exponents:
            lo = _fmt_float(min(p.effective_exponents))
            hi = _fmt_float(max(p.effective_exponents))
        else:
            lo = hi = ""
        out.line(f"{p.n},{p.D},{p.prefix_length},{p.max_partial_quotient},{lo},{hi}")
    return 0


def _run_hypothesis(args, out: _Output) -> int:
    form = parse_form(args.form)
    report = decide_hypothesis(form)
    fmt = args.format or "text"
    if fmt == "json":
        out.line(json.dumps({
            "form": format_form(form),
            "verdict": report.verdict,
            "witnesses": [
                {"j": w.parity, "h": format_form(w.root),
                 "g": format_form(w.remainder),
                 "delta": None if w.remainder_exponent == float("-inf")
                 else str(w.remainder_exponent)}
                for w in report.witnesses
            ],
            "warnings": list(report.warnings),
        }))
    else:
        out.line(f"form: {format_form(form)}")
        out.line(f"verdict: {report.verdict}")
        for w in report.witnesses:
            out.line(f"j={w.parity}: h = {format_form(w.root)}, g = {format_form(w.remainder)}")
        for warning in report.warnings:
            out.line(f"warning: {warning}")
    return 0


def _run_expand(args, out: _Output) -> int:
    form = parse_form(args.form)
    approx = sqrt_approximation(form, args.j)
    print(
        f"# f1 = {format_form(approx.series_form)}, k = {approx.depth}, "
        f"lead = {approx.lead_coefficient}, error_base = {approx.error_base}",
        file=sys.stderr,
    )
    rows = error_table(approx, _parse_n_range(args.n_range))
    if (args.format or "csv") == "json":
        out.line(json.dumps({
            "f1": format_form(approx.series_form),
            "k": approx.depth,
            "lead_coefficient": str(approx.lead_coefficient),
            "error_base": None if approx.error_base is None else str(approx.error_base),
            "rows": [
                {"n": n, "error_low": float(err.lo), "error_high": float(err.hi),
                 "decay_low": None if decay is None else float(decay.lo),
                 "decay_high": None if decay is None else float(decay.hi)}
                for n, err, decay in rows
            ],
        }, indent=2))
        return 0
    out.line("n,error_low,error_high,decay_low,decay_high")
    for n, err, decay in rows:
        cells = [str(n), f"{float(err.lo):.6e}", f"{float(err.hi):.6e}"]
        if decay is None:
            cells += ["", ""]
        else:
            cells += [f"{float(decay.lo):.4f}", f"{float(decay.hi):.4f}"]
        out.line(",".join(cells))
    return 0


def _run_family(args, out: _Output) -> int:
    if (args.preset is None) == (args.form is None):
        raise ValueError("family needs exactly one of --preset or --form")
    fmt = args.format or "csv"
    if fmt == "text":
        fmt = "csv"
    kwargs = dict(
        word_cap=args.word_cap,
        digit_budget=args.digit_budget,
        format=fmt,
        jobs=args.jobs,
    )
    if args.preset:
        n_range = _parse_n_range(args.n) if args.n else None
        config = harness.preset_config(
            args.preset,
            n_start=n_range.start if n_range else None,
            n_end=(n_range[-1] if n_range else None),
            **kwargs,
        )
    else:
        if args.n is None:
            raise ValueError("family with --form needs --n a..b")
        n_range = _parse_n_range(args.n)
        config = harness.ExperimentConfig(
            parse_form(args.form), n_range.start, n_range[-1], **kwargs
        )
    records = harness.run_family(config)
    out.write(harness.emit(records, config.format).decode("utf-8"))
    if args.summary:
        for n, rmin in harness.suffix_min_periods(records):
            print(f"# suffix-min r from n={n}: {rmin}", file=sys.stderr)
    if any(rec.palindrome_ok is False for rec in records):
        print("# invariant failure: non-palindromic period word", file=sys.stderr)
        return 1
    if args.strict and any(rec.notes in ("word-cap", "cap") for rec in records):
        return 3
    return 0


def _run_identities(args, out: _Output) -> int:
    report = harness.run_identity_checks(n_max=args.n_max)
    fmt = args.format or "text"
    if fmt == "json":
        out.line(json.dumps({
            "checks": report.checks,
            "failures": list(report.failures),
            "ok": report.ok,
        }))
    else:
        out.line(f"identity checks: {report.checks}")
        out.line(f"failures: {len(report.failures)}")
        for failure in report.failures:
            out.line(f"  {failure}")
    return 0 if report.ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    digit_budget = getattr(args, "digit_budget", DEFAULT_DIGIT_BUDGET)
    sys.set_int_max_str_digits(max(2 * digit_budget + 100, 20000))
    out = _Output(getattr(args, "out", None))
    try:
        if args.command == "cf":
            code = _run_cf(args, out)
        elif args.command == "pell":
            code = _run_pell_scan(args, out)
        elif args.command == "growth":
            code = _run_growth_denom(args, out)
        elif args.command == "profile":
            code = _run_profile_pq(args, out)
        elif args.command == "hypothesis":
            code = _run_hypothesis(args, out)
        elif args.command == "expand":
            code = _run_expand(args, out)
        elif args.command == "family":
            code = _run_family(args, out)
        elif args.command == "identities":
            code = _run_identities(args, out)
        else:
            raise AssertionError(args.command)
    except (FormSyntaxError, SquareInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
