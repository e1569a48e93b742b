"""Command-line surface: analyze functions, generate families, build and
evaluate chains, run verification sweeps, and stream enumerations.

Exit codes: 0 success, 1 verification assertion failure, 2 usage error.
Data goes to stdout only when complete; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from typing import Optional

from . import algebra, chains, families, measures, verify
from .core import (
    BooleanFunction,
    CapExceededError,
    FormatError,
    LazyFunction,
    TruthTable,
    depends_on_all,
    describe,
    materialize,
    parse,
    parse_corpus,
    serialize,
)

_FAMILY_TOKEN = re.compile(
    r"^(?P<name>fk|addr|parity|and|or|maj(?:ority)?)(?P<num>\d+)$"
)


class UsageError(Exception):
    pass


def _resolve_token(token: str) -> BooleanFunction:
    """Resolve a compact function source: table text, family token, or path."""
    if ":" in token:
        return parse(token)
    m = _FAMILY_TOKEN.match(token)
    if m:
        name, num = m.group("name"), int(m.group("num"))
        if name == "fk":
            return families.gap_family(num)[0]
        if name == "addr":
            return families.address(num)
        if name in ("maj", "majority"):
            return families.named_basics("majority", num)
        return families.named_basics(name, num)
    try:
        with open(token) as handle:
            tables = list(parse_corpus(handle))
    except OSError as exc:
        raise UsageError(f"cannot resolve function source {token!r}: {exc}") from None
    if len(tables) != 1:
        raise UsageError(f"file {token!r} must contain exactly one table")
    return tables[0]


def _family_from_flags(args) -> BooleanFunction:
    name = args.family
    if name == "fk":
        if args.k is None:
            raise UsageError("--family fk requires --k")
        return families.gap_family(args.k)[0]
    if name == "addr":
        if args.t is None:
            raise UsageError("--family addr requires --t")
        return families.address(args.t)
    if name == "compose":
        if args.base is None or args.power is None:
            raise UsageError("--family compose requires --base and --power")
        return families.compose_power(_resolve_token(args.base), args.power)
    if name in ("parity", "and", "or", "majority", "threshold"):
        if args.n is None:
            raise UsageError(f"--family {name} requires --n")
        return families.named_basics(name, args.n, threshold=args.threshold)
    raise UsageError(f"unknown family {name!r}")


def _resolve_function(args, parser) -> BooleanFunction:
    sources = [
        args.fn is not None,
        getattr(args, "file", None) is not None,
        getattr(args, "family", None) is not None,
    ]
    if sum(sources) != 1:
        raise UsageError("provide exactly one of --fn, --file, --family")
    if args.fn is not None:
        return parse(args.fn)
    if getattr(args, "file", None) is not None:
        with open(args.file) as handle:
            tables = list(parse_corpus(handle))
        if len(tables) != 1:
            raise UsageError(f"file {args.file!r} must contain exactly one table")
        return tables[0]
    return _family_from_flags(args)


def _function_source_flags(sub) -> None:
    sub.add_argument("--fn", help="inline table text n:HEX")
    sub.add_argument("--file", help="path to a corpus file holding one table")
    sub.add_argument(
        "--family",
        choices=["fk", "addr", "compose", "parity", "and", "or", "majority", "threshold"],
        help="generated family instead of an explicit table",
    )
    sub.add_argument("--k", type=int, help="depth parameter for --family fk")
    sub.add_argument("--t", type=int, help="address-bit count for --family addr")
    sub.add_argument("--n", type=int, help="arity for basic families")
    sub.add_argument("--threshold", type=int, help="threshold parameter")
    sub.add_argument("--base", help="base source token for --family compose")
    sub.add_argument("--power", type=int, help="composition power for --family compose")


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _analyze_payload(table: TruthTable, args) -> dict:
    report = measures.measure_report(
        table,
        bs_cap=args.bs_cap,
        cert_cap=args.cert_cap,
        dt_cap=args.dt_cap,
        per_point=args.per_point,
    )
    out = {"fn": serialize(table)}
    out.update(report.to_json_dict())
    out["deg"] = algebra.degree(table)
    out["deg2"] = algebra.degree(table, 2)
    out["deg_m"] = {str(m): algebra.degree(table, m) for m in (3, 4, 5, 6)}
    out["sparsity"] = algebra.sparsity(table)
    sums = algebra.spectral_sums(table)
    out["spectral"] = {
        "l1": str(sums.l1),
        "weighted": str(sums.weighted),
        "weighted2": str(sums.weighted2),
    }
    out["depends_on_all"] = depends_on_all(table)
    return out


def _cmd_analyze(args, parser) -> int:
    sources = [args.fn is not None, args.file is not None, args.family is not None]
    if sum(sources) != 1:
        raise UsageError("provide exactly one of --fn, --file, --family")
    if args.file is not None:
        # corpus file: one function per line, emitted as one JSON object per line
        with open(args.file) as handle:
            tables = list(parse_corpus(handle))
        if not tables:
            raise UsageError(f"file {args.file!r} holds no tables")
        payloads = [_analyze_payload(t, args) for t in tables]
        _emit("\n".join(json.dumps(p, sort_keys=True) for p in payloads))
        return 0
    fn = parse(args.fn) if args.fn is not None else _family_from_flags(args)
    table = materialize(fn)
    out = _analyze_payload(table, args)
    if args.spectrum_out:
        with open(args.spectrum_out, "w", newline="") as handle:
            writer = csv.writer(handle)
            for row in algebra.fourier_transform(table).csv_rows():
                writer.writerow(row)
    if args.poly_out:
        poly = algebra.multilinear_coefficients(table)
        with open(args.poly_out, "w") as handle:
            json.dump(poly.to_json_dict(), handle, sort_keys=True)
            handle.write("\n")
    if args.format == "json":
        _emit(json.dumps(out, sort_keys=True, indent=2))
    else:
        lines = [f"{k} = {json.dumps(v, sort_keys=True)}" for k, v in sorted(out.items())]
        _emit("\n".join(lines))
    return 0


def _cmd_family(args, parser) -> int:
    if args.generator == "fk":
        fn, _ = families.gap_family(args.k)
    elif args.generator == "addr":
        fn = families.address(args.t)
    elif args.generator == "compose":
        fn = families.compose_power(_resolve_token(args.base), args.power)
    else:
        fn = families.named_basics(args.generator, args.n, threshold=args.threshold)
    if isinstance(fn, LazyFunction) or args.lazy:
        desc = describe(fn)
        desc["arity"] = fn.arity
        _emit(json.dumps(desc, sort_keys=True))
    else:
        _emit(serialize(fn))
    return 0


def _load_chain(args, arity: int) -> chains.Chain:
    raw = args.chain
    if raw is None or raw == "-":
        raw = sys.stdin.read()
    elif raw.strip().startswith("["):
        pass
    else:
        with open(raw) as handle:
            raw = handle.read()
    data = json.loads(raw)
    if not isinstance(data, list):
        raise UsageError("chain JSON must be an array of 1-based variable indices")
    return chains.Chain.from_json(data, arity)


def _cmd_chain(args, parser) -> int:
    if args.chain_cmd == "fk":
        _, tree = families.gap_family(args.k)
        chain = chains.gap_family_chain(tree)
        _emit(json.dumps(chain.to_json()))
        return 0
    if args.chain_cmd == "witness":
        fn = _resolve_function(args, parser)
        result = measures.alternation_decrease(fn)
        _emit(json.dumps(result.witness.to_json()))
        return 0
    if args.chain_cmd == "glue":
        f_fn = _resolve_token(args.f)
        g_fn = _resolve_token(args.g)
        if args.f_chain:
            f_chain = chains.Chain.from_json(json.loads(args.f_chain), f_fn.arity)
        else:
            f_chain = measures.alternation_decrease(f_fn).witness
        if args.g_chain:
            g_chain = chains.Chain.from_json(json.loads(args.g_chain), g_fn.arity)
        else:
            g_chain = measures.alternation_decrease(g_fn).witness
        glued = chains.glued_composition_chain(f_chain, g_chain, g_fn)
        _emit(json.dumps(glued.to_json()))
        return 0
    if args.chain_cmd == "eval":
        fn = _resolve_function(args, parser)
        chain = _load_chain(args, fn.arity)
        alt = chains.alternation_along(fn, chain)
        _emit(json.dumps({"arity": fn.arity, "alternation": alt}, sort_keys=True))
        return 0
    raise UsageError(f"unknown chain subcommand {args.chain_cmd!r}")


def _cmd_verify(args, parser) -> int:
    populations = []
    for n in args.exhaustive or []:
        populations.append(verify.Population.exhaustive(n))
    for spec in args.sample or []:
        n, count, seed = (int(p) for p in spec.split(","))
        populations.append(verify.Population.sample(n, count, seed))
    if args.families:
        populations.append(verify.Population.explicit(verify.standard_family_instances()))
    if not populations:
        raise UsageError("provide at least one population (--exhaustive, --sample, --families)")
    checks = "all" if args.checks == "all" else tuple(args.checks.split(","))
    exit_code = 0
    outputs = []
    for population in populations:
        report = verify.run_check_suite(
            population,
            checks=checks,
            jobs=args.jobs,
            fail_limit=args.fail_limit,
            bs_cap=args.bs_cap,
            cert_cap=args.cert_cap,
            dt_cap=args.dt_cap,
        )
        if report.failed:
            exit_code = 1
        outputs.append(report)
        if args.matrix_out:
            with open(args.matrix_out, "a" if population is not populations[0] else "w", newline="") as handle:
                writer = csv.writer(handle)
                for row in verify.measure_matrix_rows(
                    population, bs_cap=args.bs_cap, cert_cap=args.cert_cap, dt_cap=args.dt_cap
                ):
                    writer.writerow(row)
    if args.format == "json":
        payload = [r.to_json_dict() for r in outputs]
        _emit(json.dumps(payload[0] if len(payload) == 1 else payload, sort_keys=True, indent=2))
    else:
        _emit("\n\n".join(r.to_text() for r in outputs))
    return exit_code


def _cmd_enumerate(args, parser) -> int:
    count = 0
    for table in verify.enumerate_functions(args.n):
        _emit(serialize(table))
        count += 1
        if args.limit is not None and count >= args.limit:
            break
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boolfn",
        description="Exact analysis toolkit for Boolean function complexity measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="measure and algebra report for one function")
    _function_source_flags(p_analyze)
    p_analyze.add_argument("--format", choices=["json", "text"], default="json")
    p_analyze.add_argument("--per-point", action="store_true", help="include per-point tables")
    p_analyze.add_argument("--spectrum-out", help="write the spectrum CSV (subset-mask, scaled) here")
    p_analyze.add_argument("--poly-out", help="write the multilinear coefficient JSON here")
    p_analyze.add_argument("--bs-cap", type=int, default=measures.BS_CAP_DEFAULT)
    p_analyze.add_argument("--cert-cap", type=int, default=measures.CERT_CAP_DEFAULT)
    p_analyze.add_argument("--dt-cap", type=int, default=measures.DT_CAP_DEFAULT)
    p_analyze.set_defaults(handler=_cmd_analyze)

    p_family = sub.add_parser("family", help="emit a generated family member")
    p_family.add_argument(
        "generator", choices=["fk", "addr", "compose", "parity", "and", "or", "majority", "threshold"]
    )
    p_family.add_argument("--k", type=int, help="depth for fk")
    p_family.add_argument("--t", type=int, help="address bits for addr")
    p_family.add_argument("--n", type=int, help="arity for basics")
    p_family.add_argument("--threshold", type=int)
    p_family.add_argument("--base", help="base token for compose (e.g. addr2)")
    p_family.add_argument("--power", type=int, help="composition power")
    p_family.add_argument("--lazy", action="store_true", help="emit descriptor JSON even when dense")
    p_family.set_defaults(handler=_cmd_family)

    p_chain = sub.add_parser("chain", help="build or evaluate chains")
    chain_sub = p_chain.add_subparsers(dest="chain_cmd", required=True)

    c_fk = chain_sub.add_parser("fk", help="recursive witness chain for the full-tree family")
    c_fk.add_argument("--k", type=int, required=True)

    c_witness = chain_sub.add_parser("witness", help="DP-optimal chain for a dense function")
    _function_source_flags(c_witness)

    c_glue = chain_sub.add_parser("glue", help="glued chain for a block composition")
    c_glue.add_argument("--f", required=True, help="outer function source token")
    c_glue.add_argument("--g", required=True, help="inner function source token")
    c_glue.add_argument("--f-chain", help="JSON chain for f (default: DP witness)")
    c_glue.add_argument("--g-chain", help="JSON chain for g (default: DP witness)")

    c_eval = chain_sub.add_parser("eval", help="alternation of a function along a chain")
    _function_source_flags(c_eval)
    c_eval.add_argument("--chain", help="chain JSON, a path, or - for stdin (default stdin)")

    p_chain.set_defaults(handler=_cmd_chain)

    p_verify = sub.add_parser("verify", help="run the check suite over populations")
    p_verify.add_argument("--exhaustive", type=int, action="append", metavar="N")
    p_verify.add_argument(
        "--sample", action="append", metavar="N,COUNT,SEED", help="seeded random population"
    )
    p_verify.add_argument(
        "--families", action="store_true", help="also sweep the standard family instances"
    )
    p_verify.add_argument("--checks", default="all", help="comma-separated check names or 'all'")
    p_verify.add_argument("--jobs", type=int, default=1, help="worker parallelism bound")
    p_verify.add_argument("--fail-limit", type=int, default=verify.DEFAULT_FAIL_LIMIT)
    p_verify.add_argument("--format", choices=["json", "text"], default="json")
    p_verify.add_argument("--matrix-out", help="write the per-function measure matrix CSV here")
    p_verify.add_argument("--bs-cap", type=int, default=measures.BS_CAP_DEFAULT)
    p_verify.add_argument("--cert-cap", type=int, default=measures.CERT_CAP_DEFAULT)
    p_verify.add_argument("--dt-cap", type=int, default=measures.DT_CAP_DEFAULT)
    p_verify.set_defaults(handler=_cmd_verify)

    p_enum = sub.add_parser("enumerate", help="stream all tables of arity n")
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--limit", type=int, help="stop after this many tables")
    p_enum.set_defaults(handler=_cmd_enumerate)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, CapExceededError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
