"""Benchmark and workload CLI.

Subcommands: generate (write a trace file), store-bench (paged-store
comparison sweep), lsh-bench (hasher accuracy sweep), oracle (enumeration
checks; exit 1 on any failure). Defaults can be loaded from a key=value
config file; explicit flags override it. Report subcommands write CSV and,
unless --no-figure is given, a PNG chart next to it.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .bench import (
    ExperimentConfig,
    HASHER_KINDS,
    LSH_BENCH_HEADER,
    STORE_BENCH_HEADER,
    STORE_KINDS,
    SWEEPABLE_WORKLOAD,
    run_lsh_sensitivity,
    run_oracle_suite,
    run_store_benchmark,
)
from .workload import WorkloadSpec, generate, write_trace


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _name_list(text: str) -> tuple[str, ...]:
    names = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    if not names:
        raise argparse.ArgumentTypeError("expected at least one name")
    return names


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _add_workload_args(p: argparse.ArgumentParser, **defaults) -> None:
    p.add_argument("--record-count", type=int, default=defaults.get("record_count", 10000))
    p.add_argument(
        "--records-per-query", type=int, default=defaults.get("records_per_query", 100)
    )
    p.add_argument("--num-queries", type=int, default=defaults.get("num_queries", 3000))
    p.add_argument("--record-size", type=int, default=defaults.get("record_size", 128))
    p.add_argument(
        "--uniqueness-100", type=int, default=defaults.get("uniqueness_100", 10)
    )
    p.add_argument(
        "--access-mode",
        choices=("random", "sequential"),
        default=defaults.get("access_mode", "random"),
    )
    p.add_argument("--jitter", type=float, default=defaults.get("jitter", 0.05))
    p.add_argument("--seed", type=int, default=0)


def _workload_from(args) -> WorkloadSpec:
    return WorkloadSpec(
        record_count=args.record_count,
        records_per_query=args.records_per_query,
        num_queries=args.num_queries,
        record_size=args.record_size,
        uniqueness_100=args.uniqueness_100,
        access_mode=args.access_mode,
        jitter=args.jitter,
        seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunable-lsh",
        description="Workload-adaptive LSH benchmarks and workload tooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a synthetic workload trace file")
    p_gen.add_argument("--config", type=Path, default=None, help="key=value defaults file")
    _add_workload_args(p_gen)
    p_gen.add_argument("--out", type=Path, required=True, help="trace file path")

    p_store = sub.add_parser("store-bench", help="compare paged-store variants over a sweep")
    p_store.add_argument("--config", type=Path, default=None)
    _add_workload_args(p_store, record_count=100000, records_per_query=2000)
    p_store.add_argument("--sweep", choices=SWEEPABLE_WORKLOAD, default="records_per_query")
    p_store.add_argument("--values", type=_int_list, default=(500, 1000, 2000, 4000))
    p_store.add_argument("--k", type=int, default=192)
    p_store.add_argument("--b", type=int, default=48)
    p_store.add_argument("--page-size", type=int, default=4096)
    p_store.add_argument("--fill", type=float, default=0.67)
    p_store.add_argument("--reps", type=int, default=20)
    p_store.add_argument(
        "--stores",
        type=_name_list,
        default=STORE_KINDS,
        help=f"subset of {','.join(STORE_KINDS)}",
    )
    p_store.add_argument(
        "--clock",
        choices=("wall", "off"),
        default="wall",
        help="off leaves timing cells empty and makes output byte-stable",
    )
    p_store.add_argument("--out", type=Path, required=True, help="CSV path")
    p_store.add_argument(
        "--figure", action=argparse.BooleanOptionalAction, default=True
    )

    p_lsh = sub.add_parser("lsh-bench", help="hasher accuracy sweep")
    p_lsh.add_argument("--config", type=Path, default=None)
    _add_workload_args(p_lsh, record_count=5000, num_queries=320)
    p_lsh.add_argument("--sweep", choices=("uniqueness_100", "b"), default="uniqueness_100")
    p_lsh.add_argument("--values", type=_int_list, default=(1, 10, 25, 50, 100))
    p_lsh.add_argument("--k", type=int, default=192)
    p_lsh.add_argument("--b", type=int, default=48)
    p_lsh.add_argument("--epsilon", type=int, default=4096)
    p_lsh.add_argument("--reps", type=int, default=20)
    p_lsh.add_argument("--theta", type=float, default=0.2)
    p_lsh.add_argument("--x", type=float, default=0.1)
    p_lsh.add_argument("--pairs-per-query", type=int, default=32)
    p_lsh.add_argument("--warmup", type=int, default=None)
    p_lsh.add_argument(
        "--hashers",
        type=_name_list,
        default=HASHER_KINDS,
        help=f"subset of {','.join(HASHER_KINDS)}",
    )
    p_lsh.add_argument("--out", type=Path, required=True, help="CSV path")
    p_lsh.add_argument(
        "--figure", action=argparse.BooleanOptionalAction, default=True
    )

    p_oracle = sub.add_parser("oracle", help="run the enumeration checks")
    p_oracle.add_argument("--config", type=Path, default=None)
    p_oracle.add_argument(
        "--full",
        action="store_true",
        help="acceptance-grade settings (slower)",
    )

    return parser


def _config_path(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 >= len(argv):
                raise SystemExit("--config needs a path")
            return argv[i + 1]
        if token.startswith("--config="):
            return token.partition("=")[2]
    return None


def _load_config_file(path: str) -> dict[str, str]:
    data: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise SystemExit(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SystemExit(f"{path}:{lineno}: expected key=value")
        data[key.strip().replace("-", "_")] = value.strip()
    return data


def _coerce(action: argparse.Action, text: str, path: str) -> object:
    if action.type is not None:
        try:
            return action.type(text)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise SystemExit(f"{path}: bad value for {action.dest}: {exc}")
    if isinstance(action, argparse.BooleanOptionalAction) or action.const is True:
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise SystemExit(f"{path}: bad boolean for {action.dest}: {text!r}")
    return text


def _apply_config(parser: argparse.ArgumentParser, data: dict[str, str], path: str) -> set[str]:
    applied: set[str] = set()
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                applied |= _apply_config(sub, data, path)
        elif action.dest in data and action.dest not in ("help", "command", "config"):
            parser.set_defaults(
                **{action.dest: _coerce(action, data[action.dest], path)}
            )
            applied.add(action.dest)
    return applied


def cmd_generate(args) -> int:
    trace = generate(_workload_from(args))
    write_trace(trace, args.out)
    print(f"wrote {len(trace)} queries to {args.out}")
    return 0


def _figure_path(out: Path) -> Path:
    return out.with_suffix(".png")


def cmd_store_bench(args) -> int:
    config = ExperimentConfig(
        parameter=args.sweep,
        values=args.values,
        workload=_workload_from(args),
        k=args.k,
        b=args.b,
        repetitions=args.reps,
        seed=args.seed,
        page_size=args.page_size,
        fill=args.fill,
        stores=args.stores,
        timed=args.clock == "wall",
    )
    rows = run_store_benchmark(config)
    _write_csv(args.out, STORE_BENCH_HEADER, rows)
    written = [str(args.out)]
    if args.figure:
        from . import figures

        figures.render_store_benchmark(rows, _figure_path(args.out))
        written.append(str(_figure_path(args.out)))
    print(f"wrote {' and '.join(written)}")
    return 0


def cmd_lsh_bench(args) -> int:
    config = ExperimentConfig(
        parameter=args.sweep,
        values=args.values,
        workload=_workload_from(args),
        k=args.k,
        b=args.b,
        repetitions=args.reps,
        seed=args.seed,
        epsilon=args.epsilon,
        hashers=args.hashers,
        theta=args.theta,
        x=args.x,
        pairs_per_query=args.pairs_per_query,
        warmup=args.warmup,
    )
    rows = run_lsh_sensitivity(config)
    _write_csv(args.out, LSH_BENCH_HEADER, rows)
    written = [str(args.out)]
    if args.figure:
        from . import figures

        figures.render_accuracy(rows, _figure_path(args.out))
        written.append(str(_figure_path(args.out)))
    print(f"wrote {' and '.join(written)}")
    return 0


def cmd_oracle(args) -> int:
    checks = run_oracle_suite(full=args.full)
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        line = f"{check.name} cases={check.cases} failures={check.failures} status={status}"
        if check.detail and not check.passed:
            line += f" detail={check.detail}"
        print(line)
    ok = all(c.passed for c in checks)
    print(f"oracle-suite: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


_COMMANDS = {
    "generate": cmd_generate,
    "store-bench": cmd_store_bench,
    "lsh-bench": cmd_lsh_bench,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    config_path = _config_path(argv)
    if config_path is not None:
        data = _load_config_file(config_path)
        applied = _apply_config(parser, data, config_path)
        unknown = set(data) - applied
        if unknown:
            raise SystemExit(
                f"{config_path}: unknown config keys: {', '.join(sorted(unknown))}"
            )
    args = parser.parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
