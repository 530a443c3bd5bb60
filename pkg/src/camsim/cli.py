"""Command-line entry point: search, sweep, compare, verify.

Exit codes: 0 success, 1 for I/O or check failures, 2 for bad flags or
configuration. Reports go to the file named by --out ('-' for stdout);
diagnostics go to stderr. Identical flags and seed produce byte-identical
report files for any --workers value.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .array import (
    Variant,
    new_array,
    run_search_stream,
    sum_event_totals,
)
from .core import CamConfig
from .energy import (
    ENERGY_UNITS_NOTE,
    UPSIZE_NOTE,
    EnergyModel,
    EventClass,
    aggregate,
    energy_metric,
    event_energy,
    search_delay,
    sweep_argmin,
    sweep_mle_bits,
    totals_energy,
)
from .errors import (
    BadDigit,
    CamError,
    EmptyStore,
    InvalidConfig,
    PrefixTooShort,
    UnknownEventClass,
    WidthMismatch,
    ZeroSearches,
)
from .mle import expected_energized_fraction
from .verify import verify_exhaustive, verify_randomized
from .workload import (
    WorkloadKind,
    WorkloadSpec,
    gen_queries,
    gen_words,
    load_words,
    query_summary,
    write_report,
)

DELAY_UNITS_NOTE = "delay is in abstract series-device units"


def _add_geometry_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--num-words", type=int, default=256,
                   help="stored word count N (default 256)")
    p.add_argument("--width", type=int, default=144,
                   help="word width n in bits (default 144)")
    p.add_argument("--mle-bits", type=int, default=3,
                   help="energizer prefix width k (default 3)")
    p.add_argument("--seed", type=int, default=1,
                   help="workload seed (default 1)")


def _add_workload_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--queries", type=int, default=1000,
                   help="number of generated queries (default 1000)")
    p.add_argument("--workload", choices=[k.value for k in WorkloadKind],
                   default="uniform", help="query distribution")
    p.add_argument("--match-rate", type=float, default=0.5,
                   help="planted workload: probability a query copies a stored word")
    p.add_argument("--bias", type=float, default=0.9,
                   help="prefix-skewed workload: per-bit agreement probability")
    p.add_argument("--words", metavar="FILE", default=None,
                   help="load stored words from FILE instead of generating "
                        "(the file's word count overrides --num-words)")
    p.add_argument("--queries-file", metavar="FILE", default=None,
                   help="load queries from FILE instead of generating")
    p.add_argument("--format", choices=["bin", "hex"], default="bin",
                   help="word file text format (default bin)")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model-file", metavar="FILE", default=None,
                   help="energy model parameters, one 'key = value' per line")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="override one energy model parameter (repeatable)")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-",
                   help="report destination file, '-' for stdout (default)")
    p.add_argument("--workers", type=int, default=1,
                   help="shard query evaluation; output is identical for any count")


def _add_check_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--expect-fraction", type=float, default=None,
                   help="fail (exit 1) unless the measured energized fraction "
                        "is within --tolerance of this value")
    p.add_argument("--tolerance", type=float, default=0.005,
                   help="absolute tolerance for --expect-fraction (default 0.005)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camsim",
        description="Behavioral simulator of a prefix-gated match-line CAM "
                    "with switching-activity energy accounting.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("search", help="run a query stream and emit a JSON report")
    _add_geometry_flags(p)
    _add_workload_flags(p)
    _add_model_flags(p)
    _add_run_flags(p)
    _add_check_flags(p)
    p.add_argument("--variant", choices=[v.value for v in Variant],
                   default="selective", help="array organization")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sweep", help="replay one workload across prefix widths, emit CSV")
    _add_geometry_flags(p)
    _add_workload_flags(p)
    _add_model_flags(p)
    _add_run_flags(p)
    p.add_argument("--k-min", type=int, default=2, help="first prefix width (default 2)")
    p.add_argument("--k-max", type=int, default=6, help="last prefix width (default 6)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="gated vs all-NOR baseline on one workload")
    _add_geometry_flags(p)
    _add_workload_flags(p)
    _add_model_flags(p)
    _add_run_flags(p)
    _add_check_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="oracle-equivalence harness")
    _add_geometry_flags(p)
    p.add_argument("--trials", type=int, default=100000,
                   help="randomized trials at the configured geometry (default 100000)")
    p.add_argument("--inject-fault", action="store_true",
                   help="flip every energizer decision to prove the harness "
                        "detects a corrupted build")
    p.set_defaults(func=cmd_verify)

    return parser


def _make_config(args: argparse.Namespace) -> CamConfig:
    return CamConfig(
        num_words=args.num_words,
        word_bits=args.width,
        mle_bits=args.mle_bits,
        seed=args.seed,
    )


def _make_model(args: argparse.Namespace) -> EnergyModel:
    model = EnergyModel.from_file(args.model_file) if args.model_file else EnergyModel()
    overrides = {}
    for item in args.param:
        key, sep, val = item.partition("=")
        if not sep or key.strip() not in EnergyModel.field_names():
            raise InvalidConfig(f"--param expects KEY=VALUE with a known key, got {item!r}")
        try:
            overrides[key.strip()] = float(val.strip())
        except ValueError:
            raise InvalidConfig(f"--param {item!r}: value is not a decimal") from None
    return replace(model, **overrides) if overrides else model


def _make_workload(args: argparse.Namespace) -> WorkloadSpec:
    kind = WorkloadKind(args.workload)
    return WorkloadSpec(
        kind=kind,
        num_queries=args.queries,
        seed=args.seed,
        match_rate=args.match_rate if kind is WorkloadKind.PLANTED else None,
        bias=args.bias if kind is WorkloadKind.PREFIX_SKEWED else None,
    )


def _load_word_file(path: str, width: int, fmt: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_words(fh, width, fmt)


def _materialize(args: argparse.Namespace):
    """Validate flags, then build (config, model, words, queries, workload_meta)."""
    config = _make_config(args)
    model = _make_model(args)
    spec = None if args.queries_file else _make_workload(args)

    if args.words:
        words = _load_word_file(args.words, config.word_bits, args.format)
        if len(words) != config.num_words:
            config = replace(config, num_words=len(words))
    else:
        words = gen_words(config.num_words, config.word_bits, config.seed)

    if args.queries_file:
        queries = _load_word_file(args.queries_file, config.word_bits, args.format)
        if not queries:
            raise InvalidConfig(f"query file {args.queries_file} holds no words")
        workload_meta = {
            "kind": "file",
            "path": args.queries_file,
            "num_queries": len(queries),
        }
    else:
        queries = gen_queries(spec, words)
        workload_meta = spec.to_dict()

    return config, model, words, queries, workload_meta


def _config_dict(config: CamConfig) -> dict:
    return {
        "num_words": config.num_words,
        "word_bits": config.word_bits,
        "mle_bits": config.mle_bits,
        "seed": config.seed,
    }


def _totals_dict(totals) -> dict:
    return {
        "ml_en_transitions": totals.ml_en_transitions,
        "ml_precharges": totals.ml_precharges,
        "ml_discharges": totals.ml_discharges,
        "sl_toggles": totals.sl_toggles,
        "mle_evaluations": totals.mle_evaluations,
    }


def _aggregate_dict(config, model, variant, reports) -> dict:
    totals = sum_event_totals(reports)
    searches = len(reports)
    energy = totals_energy(totals, model, config)
    fraction = totals.ml_precharges / (config.num_words * searches)
    expected = (
        expected_energized_fraction(config.mle_bits)
        if variant is Variant.SELECTIVE
        else 1.0
    )
    return {
        "searches": searches,
        "queries_with_match": sum(1 for r in reports if r.matches),
        "total_matches": sum(len(r.matches) for r in reports),
        "mean_energized_fraction": fraction,
        "expected_energized_fraction": expected,
        "event_totals": _totals_dict(totals),
        "energy_total": energy,
        "energy_metric": energy_metric(energy, config, searches),
        "delay_per_search": search_delay(model, config, variant),
        "mean_power": energy / searches * model.f,
    }


def _emit(document: dict, out: str) -> None:
    if out == "-":
        write_report(document, sys.stdout, "json")
    else:
        write_report(document, out, "json")


def _check_fraction(args, measured: float) -> int:
    if args.expect_fraction is None:
        return 0
    if abs(measured - args.expect_fraction) <= args.tolerance:
        return 0
    print(
        f"check failed: energized fraction {measured:.6g} not within "
        f"{args.tolerance:g} of {args.expect_fraction:g}",
        file=sys.stderr,
    )
    return 1


def cmd_search(args: argparse.Namespace) -> int:
    config, model, words, queries, workload_meta = _materialize(args)
    variant = Variant(args.variant)
    arr = new_array(config, variant, words)
    reports = run_search_stream(arr, queries, workers=args.workers)
    reports = [aggregate(r, model, config) for r in reports]
    agg = _aggregate_dict(config, model, variant, reports)
    document = {
        "report": "search",
        "variant": variant.value,
        "config": _config_dict(config),
        "workload": workload_meta,
        "words_file": args.words,
        "word_format": args.format,
        "model": model.to_dict(),
        "units": {"energy": ENERGY_UNITS_NOTE, "delay": DELAY_UNITS_NOTE},
        "notes": [UPSIZE_NOTE],
        "aggregate": agg,
        "queries": [query_summary(i, r) for i, r in enumerate(reports)],
    }
    _emit(document, args.out)
    return _check_fraction(args, agg["mean_energized_fraction"])


def cmd_compare(args: argparse.Namespace) -> int:
    config, model, words, queries, workload_meta = _materialize(args)
    sides = {}
    per_query_matches = {}
    for variant in (Variant.SELECTIVE, Variant.BASELINE_NOR):
        arr = new_array(config, variant, words)
        reports = run_search_stream(arr, queries, workers=args.workers)
        sides[variant] = _aggregate_dict(config, model, variant, reports)
        per_query_matches[variant] = [r.matches for r in reports]

    sel, base = sides[Variant.SELECTIVE], sides[Variant.BASELINE_NOR]
    event_ratio = (
        sel["event_totals"]["ml_precharges"] / base["event_totals"]["ml_precharges"]
    )

    def ml_energy(side: dict) -> float:
        ev = side["event_totals"]
        return event_energy(
            model, EventClass.ML_PRECHARGE, ev["ml_precharges"], config
        ) + event_energy(model, EventClass.ML_DISCHARGE, ev["ml_discharges"], config)

    document = {
        "report": "compare",
        "config": _config_dict(config),
        "workload": workload_meta,
        "words_file": args.words,
        "word_format": args.format,
        "model": model.to_dict(),
        "units": {"energy": ENERGY_UNITS_NOTE, "delay": DELAY_UNITS_NOTE},
        "notes": [UPSIZE_NOTE],
        "selective": sel,
        "baseline_nor": base,
        "ml_precharge_event_ratio": event_ratio,
        "ml_energy_ratio": ml_energy(sel) / ml_energy(base),
        "total_energy_ratio": sel["energy_total"] / base["energy_total"],
        "match_sets_identical": per_query_matches[Variant.SELECTIVE]
        == per_query_matches[Variant.BASELINE_NOR],
    }
    _emit(document, args.out)
    if not document["match_sets_identical"]:
        print("check failed: variants disagree on some match set", file=sys.stderr)
        return 1
    return _check_fraction(args, event_ratio)


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _make_config(args)
    model = _make_model(args)
    spec = None if args.queries_file else _make_workload(args)
    if args.k_min > args.k_max:
        raise InvalidConfig(f"--k-min {args.k_min} exceeds --k-max {args.k_max}")

    words = (
        _load_word_file(args.words, config.word_bits, args.format)
        if args.words
        else None
    )
    if words is not None and len(words) != config.num_words:
        config = replace(config, num_words=len(words))
    queries = (
        _load_word_file(args.queries_file, config.word_bits, args.format)
        if args.queries_file
        else None
    )

    rows = sweep_mle_bits(
        config, model, spec,
        range(args.k_min, args.k_max + 1),
        words=words, queries=queries, workers=args.workers,
    )
    if args.out == "-":
        write_report(rows, sys.stdout, "csv")
    else:
        write_report(rows, args.out, "csv")
    # the pinned CSV schema has no room for metadata, so echo the effective
    # configuration here
    workload_desc = (
        f"file:{args.queries_file}" if args.queries_file else args.workload
    )
    print(
        f"config: num_words={config.num_words} word_bits={config.word_bits} "
        f"seed={config.seed} k={args.k_min}..{args.k_max} "
        f"workload={workload_desc} queries={len(queries) if queries else args.queries}"
    )
    print("model: " + " ".join(f"{k}={v:g}" for k, v in model.to_dict().items()))
    print(f"argmin k = {sweep_argmin(rows)}")
    print("note: energy metric is in model-calibrated arbitrary units")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config = _make_config(args)
    fault = args.inject_fault
    out = verify_exhaustive(seed=args.seed, fault=fault)
    print(f"exhaustive: {out.cases} cases checked")
    if not out.ok:
        print(f"counterexample: {out.counterexample.describe()}", file=sys.stderr)
        return 1
    if args.trials > 0:
        out = verify_randomized(config, args.trials, seed=args.seed, fault=fault)
        print(
            f"randomized: {out.cases} trials at N={config.num_words} "
            f"n={config.word_bits} k={config.mle_bits}"
        )
        if not out.ok:
            print(f"counterexample: {out.counterexample.describe()}", file=sys.stderr)
            return 1
    print("verify: all searches matched the oracle")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidConfig, PrefixTooShort, ZeroSearches, UnknownEventClass, EmptyStore) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, WidthMismatch, BadDigit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
