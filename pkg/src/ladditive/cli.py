"""Command-line surface: eval, table, mangoldt, convolve, verify, series.

Exit codes: 0 on success (for verify: every holds-expected identity
verified; for series: the comparison passed), 1 when a check fails, 2 for
rejected input (unknown names, capacity or abscissa violations, bad flags).

Output is deterministic: fixed field order, floats at 12 significant digits,
CSV with a mandatory header and LF line endings.  JSON output is wrapped in
a {"version": 1, ...} envelope.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .factor_core import (
    DEFAULT_SIEVE_LIMIT,
    SIEVE_LIMIT_ENV,
    default_sieve,
    factorize,
)
from .functions import (
    FunctionHandle,
    LAdditiveFunction,
    builtin,
    handle_of,
    l_additive_source,
    load_spec_file,
    L_ADDITIVE_SOURCES,
    BUILTIN_NAMES,
)
from .mangoldt import lambda_f, lambda_via_mobius, lambda_via_negated, mangoldt_handle
from .dirichlet_identities import (
    REGISTRY,
    SlotError,
    convolve,
    default_bindings,
    resolve_bindings,
    sweep_identity,
)
from .numeric import DEFAULT_REAL_TOL, render
from .series import (
    AbscissaError,
    SERIES_REGISTRY,
    SeriesParams,
    verify_series_identity,
)


class CliError(Exception):
    """Rejected input; rendered to stderr with exit code 2."""


def _round12(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _json_clean(obj):
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_clean(v) for v in obj]
    return _round12(obj)


def _emit_json(payload: dict) -> None:
    print(json.dumps(_json_clean({"version": 1, **payload})))


def _load_user_specs(path: str | None) -> dict[str, LAdditiveFunction]:
    if path is None:
        return {}
    try:
        return load_spec_file(path)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from exc


def _find_source(name: str, user_specs: dict) -> LAdditiveFunction:
    if name in user_specs:
        return user_specs[name]
    if name in L_ADDITIVE_SOURCES:
        return L_ADDITIVE_SOURCES[name]
    known = ", ".join(list(L_ADDITIVE_SOURCES) + sorted(user_specs))
    raise CliError(f"unknown L-additive source {name!r}; known: {known}")


def _resolve_handle(name: str, k: int | None, user_specs: dict) -> FunctionHandle:
    """Resolve a CLI function name, including mangoldt:X and beta_k:K forms."""
    if name.startswith("mangoldt:"):
        return mangoldt_handle(_find_source(name.split(":", 1)[1], user_specs))
    base, _, suffix = name.partition(":")
    if suffix:
        try:
            k = int(suffix)
        except ValueError:
            raise CliError(f"bad k suffix in {name!r}") from None
    if base in user_specs:
        return handle_of(user_specs[base])
    try:
        return builtin(base, k)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise CliError(f"bad range {text!r}; expected LO..HI")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise CliError(f"bad range {text!r}; expected integers") from None
    if lo_i < 1 or hi_i < lo_i:
        raise CliError(f"bad range {text!r}; need 1 <= LO <= HI")
    return lo_i, hi_i


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--sieve-limit",
        type=int,
        default=None,
        help=f"sieve limit (default {DEFAULT_SIEVE_LIMIT}, env {SIEVE_LIMIT_ENV})",
    )
    p.add_argument(
        "--format",
        choices=("plain", "csv", "json"),
        default=None,
        help="output format (default depends on the command)",
    )
    p.add_argument("--spec-file", default=None, help="user-defined function stanzas")
    p.add_argument(
        "--tolerance",
        type=float,
        default=DEFAULT_REAL_TOL,
        help="absolute tolerance for float-mode comparisons",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ladditive",
        description="Generalized von Mangoldt functions: evaluation, exact "
        "identity sweeps, and Dirichlet-series checks.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one function at one point")
    _common_flags(p)
    p.add_argument("--function", required=True, help="catalog name or mangoldt:SRC")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None, help="shift for beta_k / Omega_k")

    p = sub.add_parser("table", help="tabulate functions over a range")
    _common_flags(p)
    p.add_argument("--functions", required=True, help="comma-separated names")
    p.add_argument("--range", required=True, help="LO..HI inclusive")

    p = sub.add_parser("mangoldt", help="evaluate Lambda_f, optionally all three paths")
    _common_flags(p)
    p.add_argument("--function", required=True, help="L-additive source name")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--paths",
        action="store_true",
        help="also print the two Moebius-inversion forms",
    )

    p = sub.add_parser("convolve", help="Dirichlet convolution of two functions at n")
    _common_flags(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("verify", help="sweep identities for exact equality")
    _common_flags(p)
    p.add_argument("--identity", required=True, help="registry id or 'all'")
    p.add_argument("--function", "-f", dest="f", default=None, help="f slot binding")
    p.add_argument("--g", default=None, help="g slot binding")
    p.add_argument("--k", type=int, default=None, help="k slot binding")
    p.add_argument("--max-n", type=int, default=10**4)
    p.add_argument("--report", default=None, help="write the JSON report here")

    p = sub.add_parser("series", help="check a Dirichlet-series closed form")
    _common_flags(p)
    p.add_argument("--identity", required=True)
    p.add_argument("--function", "-f", dest="f", default=None, help="f binding (thm-2-6)")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--N", type=int, default=10**4, help="series truncation")
    p.add_argument("--prime-cutoff", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-3)

    return ap


def _cmd_eval(args) -> int:
    user_specs = _load_user_specs(args.spec_file)
    sieve = default_sieve(args.sieve_limit)
    handle = _resolve_handle(args.function, args.k, user_specs)
    try:
        fact = factorize(args.n, sieve)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    value = handle(fact)
    if args.format == "json":
        _emit_json(
            {
                "command": "eval",
                "function": handle.name,
                "n": args.n,
                "value": render(value),
            }
        )
    else:
        print(render(value))
    return 0


def _cmd_table(args) -> int:
    user_specs = _load_user_specs(args.spec_file)
    sieve = default_sieve(args.sieve_limit)
    names = [s for s in args.functions.split(",") if s]
    if not names:
        raise CliError("empty function list")
    handles = [_resolve_handle(name, None, user_specs) for name in names]
    lo, hi = _parse_range(args.range)
    rows = []
    for n in range(lo, hi + 1):
        fact = factorize(n, sieve)
        rows.append((n, [render(h(fact)) for h in handles]))
    fmt = args.format or "csv"
    if fmt == "json":
        _emit_json(
            {
                "command": "table",
                "rows": [
                    {"n": n, **dict(zip(names, vals))} for n, vals in rows
                ],
            }
        )
    elif fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["n", *names])
        for n, vals in rows:
            writer.writerow([n, *vals])
    else:
        print("n", *names)
        for n, vals in rows:
            print(n, *vals)
    return 0


def _cmd_mangoldt(args) -> int:
    user_specs = _load_user_specs(args.spec_file)
    sieve = default_sieve(args.sieve_limit)
    spec = _find_source(args.function, user_specs)
    fact = factorize(args.n, sieve)
    value = lambda_f(spec, fact)
    if args.paths:
        paths = {
            "definition": render(value),
            "mobius": render(lambda_via_mobius(spec, fact)),
            "negated": render(lambda_via_negated(spec, fact)),
        }
        if args.format == "json":
            _emit_json(
                {"command": "mangoldt", "function": spec.name, "n": args.n, **paths}
            )
        else:
            for key, val in paths.items():
                print(f"{key}: {val}")
    elif args.format == "json":
        _emit_json(
            {
                "command": "mangoldt",
                "function": spec.name,
                "n": args.n,
                "value": render(value),
            }
        )
    else:
        print(render(value))
    return 0


def _cmd_convolve(args) -> int:
    user_specs = _load_user_specs(args.spec_file)
    sieve = default_sieve(args.sieve_limit)
    left = _resolve_handle(args.left, args.k, user_specs)
    right = _resolve_handle(args.right, args.k, user_specs)
    fact = factorize(args.n, sieve)
    value = convolve(left, right, fact)
    if args.format == "json":
        _emit_json(
            {
                "command": "convolve",
                "left": left.name,
                "right": right.name,
                "n": args.n,
                "value": render(value),
            }
        )
    else:
        print(render(value))
    return 0


def _verify_binding_args(args, user_specs) -> dict:
    bindings = {}
    if args.f is not None:
        bindings["f"] = _find_source(args.f, user_specs)
    if args.g is not None:
        bindings["g"] = _find_source(args.g, user_specs)
    if args.k is not None:
        bindings["k"] = args.k
    return bindings


def _cmd_verify(args) -> int:
    user_specs = _load_user_specs(args.spec_file)
    sieve = default_sieve(args.sieve_limit)
    if args.max_n < 1:
        raise CliError(f"--max-n must be >= 1, got {args.max_n}")
    reports = []
    try:
        if args.identity == "all":
            facts = [None] + [factorize(n, sieve) for n in range(1, args.max_n + 1)]
            for desc in REGISTRY.values():
                for bindings in default_bindings(desc):
                    reports.append(
                        sweep_identity(
                            desc,
                            bindings,
                            args.max_n,
                            sieve,
                            facts,
                            jobs=args.jobs,
                            tol=args.tolerance,
                        )
                    )
        else:
            desc = REGISTRY.get(args.identity)
            if desc is None:
                raise CliError(
                    f"unknown identity {args.identity!r}; registry: "
                    + ", ".join(REGISTRY)
                )
            explicit = _verify_binding_args(args, user_specs)
            # default matrix with the CLI-pinned slots substituted, deduplicated
            seen = set()
            bindings_list = []
            for b in default_bindings(desc):
                merged = {**b, **explicit}
                key = tuple(
                    (slot, v.name if isinstance(v, LAdditiveFunction) else v)
                    for slot, v in sorted(merged.items())
                )
                if key not in seen:
                    seen.add(key)
                    bindings_list.append(merged)
            if not bindings_list:
                bindings_list = [explicit]
            for bindings in bindings_list:
                reports.append(
                    sweep_identity(
                        desc,
                        bindings,
                        args.max_n,
                        sieve,
                        jobs=args.jobs,
                        tol=args.tolerance,
                    )
                )
    except SlotError as exc:
        raise CliError(str(exc)) from exc
    payload = {
        "command": "verify",
        "n_max": args.max_n,
        "reports": [r.to_json() for r in reports],
    }
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(_json_clean({"version": 1, **payload}), fh, indent=2)
            fh.write("\n")
    if args.format == "json":
        _emit_json(payload)
    else:
        for r in reports:
            binding = " ".join(f"{k}={v}" for k, v in r.bindings.items())
            line = f"[{r.status}] {r.id} {binding} n<={r.n_max}"
            if r.expected != "holds":
                line += f" (expected: {r.expected})"
            if r.counterexamples:
                first = r.counterexamples[0]
                detail = ", ".join(f"{k}={v}" for k, v in first.items())
                line += f" first counterexample: {detail}"
            print(line)
    failed = [r for r in reports if r.expected == "holds" and r.status != "verified"]
    return 1 if failed else 0


def _cmd_series(args) -> int:
    user_specs = _load_user_specs(args.spec_file)
    sieve = default_sieve(args.sieve_limit)
    if args.identity not in SERIES_REGISTRY:
        raise CliError(
            f"unknown series identity {args.identity!r}; registry: "
            + ", ".join(SERIES_REGISTRY)
        )
    f = _find_source(args.f, user_specs) if args.f else None
    try:
        params = SeriesParams(
            s=args.s, n_cutoff=args.N, prime_cutoff=args.prime_cutoff, k=args.k
        )
        result = verify_series_identity(
            args.identity, params, tolerance=args.tol, sieve=sieve, f=f
        )
    except (AbscissaError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    if args.format == "json" or args.format is None:
        _emit_json({"command": "series", **result.to_json()})
    else:
        status = "pass" if result.passed else "fail"
        print(
            f"[{status}] {result.identity} s={result.s:g} "
            f"lhs={result.lhs_partial:.12g} rhs={result.rhs_value:.12g} "
            f"|diff|={result.abs_difference:.12g} "
            f"tol+tails={result.tolerance + result.lhs_tail_bound + result.rhs_tail_bound:.12g}"
        )
    return 0 if result.passed else 1


_COMMANDS = {
    "eval": _cmd_eval,
    "table": _cmd_table,
    "mangoldt": _cmd_mangoldt,
    "convolve": _cmd_convolve,
    "verify": _cmd_verify,
    "series": _cmd_series,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
