"""Command-line front end.

Every subcommand prints one Report: the command, its parameters, result
tables, named checks (expected vs actual, pass iff equal), and the elapsed
time.  Integers serialize as decimal strings so consumers never truncate;
everything except `elapsed` (and the per-criterion `timings` of verify) is
deterministic for fixed parameters, so reports can be hashed after dropping
those two fields.

Exit codes: 0 all checks pass, 1 at least one check failed (or an internal
consistency assertion fired), 2 usage or parameter error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, replace

from .budget import Budget, default_budget
from .charsums import (
    allowed_values,
    kloosterman_all,
    kloosterman_m,
    moment,
    value_histogram,
)
from .codes import (
    DELSARTE_LENGTH_LIMIT,
    build_code,
    dual_dimension,
    dual_weight,
    expected_dual_dimension,
    verify_delsarte,
    weight_distribution,
)
from .errors import BudgetExceededError, InternalInconsistencyError
from .field import make_field, poly_str
from .moments import brute_moment_table, recursion_input_from_code, recursive_moments
from .symplectic import (
    count_alternating,
    dc_character_sum,
    double_coset_keys,
    double_coset_order,
    enumerate_parabolic,
    predicted_sizes,
    trace_histogram,
    transversal,
)
from .verification import Check, check, run_criteria


@dataclass
class Report:
    command: str
    parameters: dict
    results: dict
    checks: list[Check]
    timings: dict | None = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _encode(value):
    """JSON-ready form: integers as decimal strings, recursively."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _check_entry(c: Check) -> dict:
    return {
        "name": c.name,
        "expected": _encode(c.expected),
        "actual": _encode(c.actual),
        "pass": c.passed,
    }


def render_json(report: Report) -> str:
    doc = {
        "command": report.command,
        "parameters": _encode(report.parameters),
        "results": _encode(report.results),
        "checks": [_check_entry(c) for c in report.checks],
    }
    if report.timings is not None:
        doc["timings"] = _encode(report.timings)
    doc["elapsed"] = f"{report.elapsed:.6f}"
    return json.dumps(doc, indent=2) + "\n"


def _cell(value) -> str:
    enc = _encode(value)
    if enc is None:
        return ""
    if isinstance(enc, (str, bool)):
        return str(enc)
    return json.dumps(enc)


def render_csv(report: Report) -> str:
    """Tables only: parameters, flattened results, and checks; the
    non-deterministic fields are left out entirely."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "name", "expected", "actual", "pass"])
    writer.writerow(["command", "", "", report.command, ""])
    for key, value in report.parameters.items():
        writer.writerow(["parameters", key, "", _cell(value), ""])
    for table, value in report.results.items():
        if isinstance(value, dict):
            for key, cell in value.items():
                writer.writerow([f"results.{table}", str(key), "", _cell(cell), ""])
        elif isinstance(value, (list, tuple)):
            for idx, cell in enumerate(value):
                writer.writerow([f"results.{table}", str(idx), "", _cell(cell), ""])
        else:
            writer.writerow([f"results.{table}", "", "", _cell(value), ""])
    for c in report.checks:
        writer.writerow(
            ["checks", c.name, _cell(c.expected), _cell(c.actual), str(c.passed)]
        )
    return buf.getvalue()


# ----------------------------------------------------------------------
# subcommand handlers; each returns (parameters, results, checks[, timings])


def _cmd_field(args, budget: Budget) -> Report:
    ctx = make_field(args.r, args.modulus)
    q = ctx.q
    inv_bad = sum(1 for a in range(1, q) if ctx.mul(a, ctx.inv(a)) != 1)
    frob_bad = sum(1 for x in range(q) if ctx.trace(ctx.frobenius(x)) != ctx.trace(x))
    kernel = sorted(x for x in range(q) if ctx.trace(x) == 0)
    image = sorted(ctx.artin_schreier_image())
    checks = [
        check("a * inv(a) = 1 violations", 0, inv_bad),
        check("trace(frobenius) = trace violations", 0, frob_bad),
        check("artin-schreier image = trace kernel", kernel, image),
        check("trace kernel size", q // 2, len(kernel)),
    ]
    results = {
        "r": ctx.r,
        "q": q,
        "modulus": ctx.modulus,
        "modulus_poly": poly_str(ctx.modulus),
        "trace": {x: ctx.trace(x) for x in range(q)} if q <= 64 else {},
    }
    params = {"r": args.r, "modulus": args.modulus}
    return Report("field", params, results, checks)


def _cmd_ksum(args, budget: Budget) -> Report:
    ctx = make_field(args.r, args.modulus)
    q = ctx.q
    params = {
        "r": args.r,
        "modulus": args.modulus,
        "m": args.m,
        "a": args.a,
        "c": args.c,
        "all": args.all,
        "h_max": args.h_max,
    }
    results: dict = {}
    checks: list[Check] = []
    if args.all:
        vals = kloosterman_all(ctx, args.m, args.c, budget)
        results["kloosterman"] = {a: vals[a] for a in range(1, q)}
        if args.m == 1:
            weil_bad = sum(1 for a in range(1, q) if vals[a] ** 2 > 4 * q)
            checks.append(check("weil violations", 0, weil_bad))
    else:
        value = kloosterman_m(ctx, args.m, args.a, args.c, budget)
        results["kloosterman"] = value
        if args.m == 1:
            checks.append(check("weil bound holds", True, value**2 <= 4 * q))
    if args.h_max is not None:
        table = brute_moment_table(ctx, args.m, args.h_max, budget=budget)
        results["moments"] = list(table.values)
    return Report("ksum", params, results, checks)


def _cmd_hist(args, budget: Budget) -> Report:
    ctx = make_field(args.r, args.modulus)
    hist = value_histogram(ctx, budget)
    allowed = allowed_values(ctx.q)
    checks = [
        check("value range + attainment", allowed, sorted(hist)),
        check("total mass", ctx.q - 1, sum(hist.values())),
    ]
    results = {
        "histogram": {t: hist[t] for t in sorted(hist)},
        "allowed_values": allowed,
    }
    return Report("hist", {"r": args.r, "modulus": args.modulus}, results, checks)


def _cmd_moments(args, budget: Budget) -> Report:
    ctx = make_field(args.r, args.modulus)
    params = {
        "family": args.family,
        "n": args.n,
        "r": args.r,
        "modulus": args.modulus,
        "h_max": args.h_max,
        "oracle": args.oracle,
        "method": args.method,
        "allow_degenerate": args.allow_degenerate,
    }
    results: dict = {}
    checks: list[Check] = []
    need_recursion = args.oracle in ("recursion", "both")
    need_brute = args.oracle in ("brute", "both")
    inp = None
    if need_recursion:
        code = build_code(ctx, args.family, args.n, "auto", budget=budget)
        inp = recursion_input_from_code(code, args.h_max, args.method, budget)
        results["weights"] = list(inp.weights)
    if args.family == "minus":
        targets = [("mk", "mk_minus", 1, 1)]
    else:
        targets = [("mk2", "mk2_plus", 2, 1), ("mk_even", "mk_even_plus", 1, 2)]
    for label, which, m, step in targets:
        rec_values = brute_values = None
        if need_recursion:
            rec_values = recursive_moments(
                inp, which, allow_degenerate=args.allow_degenerate
            ).values
            results[f"{label}_recursion"] = list(rec_values)
        if need_brute:
            brute_values = brute_moment_table(
                ctx, m, args.h_max, step=step, budget=budget
            ).values
            results[f"{label}_brute"] = list(brute_values)
        if rec_values is not None and brute_values is not None:
            checks.append(check(f"{label} recursion = brute", brute_values, rec_values))
    return Report("moments", params, results, checks)


def _cmd_group(args, budget: Budget) -> Report:
    ctx = make_field(args.r, args.modulus)
    n, q = args.n, ctx.q
    params = {
        "n": args.n,
        "r": args.r,
        "modulus": args.modulus,
        "coset": args.coset,
        "mode": args.mode,
    }
    results: dict = {}
    checks: list[Check] = []
    if args.coset is None:
        rep = predicted_sizes(ctx, n)
        results.update(
            {
                "gl_order": rep.gl_order,
                "sp_order": rep.sp_order,
                "parabolic_order": rep.parabolic_order,
                "q_binomials": list(rep.q_binomials),
                "a_r_orders": list(rep.a_r_orders),
                "transversal_sizes": list(rep.transversal_sizes),
                "coset_orders": list(rep.coset_orders),
                "alternating_counts": list(rep.alternating_counts),
                "alternating_counts_printed": list(rep.alternating_counts_printed),
            }
        )
        checks.append(
            check("cosets partition the group", rep.sp_order, sum(rep.coset_orders))
        )
        if q <= 4:
            for size in range(2, min(n, 4) + 1, 2):
                checks.append(
                    check(
                        f"alternating count r={size}",
                        rep.alternating_counts[size],
                        count_alternating(ctx, size, budget),
                    )
                )
        if args.mode == "enumerated":
            checks.append(
                check(
                    "enumerated |P|",
                    rep.parabolic_order,
                    len(enumerate_parabolic(ctx, n, budget)),
                )
            )
            checks.append(
                check(
                    "enumerated transversal sizes",
                    list(rep.transversal_sizes),
                    [len(transversal(ctx, n, r, budget)) for r in range(n + 1)],
                )
            )
            checks.append(
                check(
                    "enumerated coset orders",
                    list(rep.coset_orders),
                    [len(double_coset_keys(ctx, n, r, budget)) for r in range(n + 1)],
                )
            )
        return Report("group", params, results, checks)

    coset = args.coset
    if not 0 <= coset <= n:
        raise ValueError(f"coset index must lie in 0..{n}")
    order = double_coset_order(n, coset, q)
    results["coset_order"] = order
    hist = trace_histogram(ctx, n, coset, args.mode, budget)
    results["trace_histogram"] = {b: hist[b] for b in range(q)}
    checks.append(check("histogram covers the coset", order, sum(hist)))
    if args.mode == "enumerated" and (
        (n % 2 and coset == n - 1) or (n % 2 == 0 and coset == n - 2)
    ):
        checks.append(
            check(
                "enumerated = predicted histogram",
                trace_histogram(ctx, n, coset, "predicted", budget),
                hist,
            )
        )
    sums = {
        a: dc_character_sum(ctx, n, coset, a, "predicted", budget)
        for a in range(1, q)
    }
    results["character_sums"] = sums
    if args.mode == "enumerated":
        checks.append(
            check(
                "enumerated = predicted character sums",
                list(sums.values()),
                [
                    dc_character_sum(ctx, n, coset, a, "enumerated", budget)
                    for a in range(1, q)
                ],
            )
        )
    return Report("group", params, results, checks)


def _cmd_code(args, budget: Budget) -> Report:
    ctx = make_field(args.r, args.modulus)
    params = {
        "family": args.family,
        "n": args.n,
        "r": args.r,
        "modulus": args.modulus,
        "weights": args.weights,
        "j_max": args.j_max,
        "method": args.method,
        "coordinates": args.coordinates,
    }
    code = build_code(
        ctx, args.family, args.n, "auto", coordinates=args.coordinates, budget=budget
    )
    results: dict = {
        "length": code.length,
        "scale": code.scale,
        "reduced_length": code.reduced_length,
        "histogram_source": code.histogram_source,
        "trace_histogram": {b: code.histogram[b] for b in range(code.q)},
        "dual_dimension": dual_dimension(code),
        "dual_weights": {a: dual_weight(code, a, "measured") for a in range(code.q)},
    }
    checks = [
        check(
            "dual dimension",
            expected_dual_dimension(code.family, code.n, code.q),
            dual_dimension(code),
        ),
        check(
            "dual weights measured = predicted",
            [dual_weight(code, a, "predicted") for a in range(code.q)],
            [dual_weight(code, a, "measured") for a in range(code.q)],
        ),
    ]
    if args.weights:
        j_max = args.j_max
        methods = (
            ("direct", "closed_form", "macwilliams")
            if args.method == "all"
            else (args.method,)
        )
        dists = {
            name: weight_distribution(code, j_max, name, budget) for name in methods
        }
        for name, dist in dists.items():
            results[f"weights_{name}"] = list(dist.counts)
        first = methods[0]
        for other in methods[1:]:
            checks.append(
                check(
                    f"weights {first} = {other}",
                    dists[first].counts,
                    dists[other].counts,
                )
            )
    if args.coordinates and code.length <= DELSARTE_LENGTH_LIMIT:
        checks.append(check("delsarte duality", True, verify_delsarte(code, budget)))
    return Report("code", params, results, checks)


def _cmd_verify(args, budget: Budget) -> Report:
    numbers = None
    if args.criteria:
        numbers = sorted({int(tok) for tok in args.criteria.split(",") if tok})
    results_list = run_criteria(numbers, budget)
    params = {"suite": args.suite, "criteria": args.criteria}
    summary = {}
    checks: list[Check] = []
    timings = {}
    for res in results_list:
        key = f"{res.number:02d}-{res.name}"
        summary[key] = {
            "checks": len(res.checks),
            "failures": len(res.failures),
            "passed": res.passed,
        }
        timings[key] = {"elapsed": f"{res.elapsed:.3f}", "limit": f"{res.limit:.0f}"}
        checks.extend(res.checks)
    return Report("verify", params, {"criteria": summary}, checks, timings=timings)


# ----------------------------------------------------------------------
# parser and entry point


def _add_common(parser: argparse.ArgumentParser, report_alias: bool = False) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    if report_alias:
        parser.add_argument(
            "--report",
            nargs="?",
            const="json",
            choices=("json", "csv"),
            help="alias for --format",
        )
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--budget", type=int, help="loop-iteration budget")
    parser.add_argument("--matrix-budget", type=int, help="stored-matrix budget")


def _add_field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=int, required=True, help="field GF(2^r)")
    parser.add_argument("--modulus", type=int, help="field modulus as a bit mask")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloosterman",
        description="Verification workbench for Kloosterman sums, symplectic "
        "double cosets, trace codes and power-moment recursions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="field tables and arithmetic checks")
    _add_field_args(p)
    _add_common(p)

    p = sub.add_parser("ksum", help="Kloosterman sums and brute moments")
    _add_field_args(p)
    p.add_argument("--m", type=int, default=1, help="number of summed coordinates")
    p.add_argument("--a", type=int, default=1, help="argument a")
    p.add_argument("--c", type=int, default=1, help="character twist")
    p.add_argument("--all", action="store_true", help="tabulate every nonzero a")
    p.add_argument("--h-max", type=int, help="also emit brute moments up to h")
    _add_common(p)

    p = sub.add_parser("hist", help="Kloosterman value histogram")
    _add_field_args(p)
    _add_common(p)

    p = sub.add_parser("moments", help="power-moment recursions vs brute force")
    p.add_argument("--family", choices=("minus", "plus"), required=True)
    p.add_argument("--n", type=int, required=True)
    _add_field_args(p)
    p.add_argument("--h-max", type=int, required=True)
    p.add_argument("--oracle", choices=("brute", "recursion", "both"), default="both")
    p.add_argument(
        "--method",
        choices=("closed_form", "direct", "macwilliams"),
        default="closed_form",
        help="weight-distribution source for the recursion",
    )
    p.add_argument(
        "--allow-degenerate",
        action="store_true",
        help="evaluate the recursion outside its admissible range",
    )
    _add_common(p)

    p = sub.add_parser("group", help="symplectic cardinalities and coset data")
    p.add_argument("--n", type=int, required=True)
    _add_field_args(p)
    p.add_argument("--coset", type=int, help="Weyl index of one double coset")
    p.add_argument("--mode", choices=("enumerated", "predicted"), default="predicted")
    _add_common(p, report_alias=True)

    p = sub.add_parser("code", help="trace codes, duals and weight data")
    p.add_argument("--family", choices=("minus", "plus"), required=True)
    p.add_argument("--n", type=int, required=True)
    _add_field_args(p)
    p.add_argument("--weights", action="store_true", help="emit C_j tables")
    p.add_argument("--j-max", type=int, default=10)
    p.add_argument(
        "--method",
        choices=("all", "direct", "closed_form", "macwilliams"),
        default="all",
    )
    p.add_argument(
        "--coordinates",
        action="store_true",
        help="store per-element traces and run the bit-level duality check",
    )
    _add_common(p)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--suite", choices=("all",), default="all")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    _add_common(p)

    return parser


HANDLERS = {
    "field": _cmd_field,
    "ksum": _cmd_ksum,
    "hist": _cmd_hist,
    "moments": _cmd_moments,
    "group": _cmd_group,
    "code": _cmd_code,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    budget = default_budget()
    if args.budget is not None:
        budget = replace(budget, loop_limit=args.budget)
    if args.matrix_budget is not None:
        budget = replace(budget, matrix_limit=args.matrix_budget)
    fmt = args.format
    if getattr(args, "report", None):
        fmt = args.report

    start = time.perf_counter()
    try:
        report = HANDLERS[args.command](args, budget)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.elapsed = time.perf_counter() - start

    text = render_json(report) if fmt == "json" else render_csv(report)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())
