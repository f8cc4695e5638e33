"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
3 oracle size guard, 4 oracle audit found a violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import SimConfig, parse_config
from .errors import ConfigError, SizeError
from .game import Strategy
from .harness import METHODS, instance_for, oracle_audit, run_batch, run_single, write_csv
from .render import render_svg
from .topology import Instance

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_SIZE, EXIT_AUDIT = 0, 1, 2, 3, 4

_LABELS = {"direct": "direct", "pf": "prop-fair", "md": "min-delay"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--seed", type=int, help="instance seed (master seed for batches)")
    p.add_argument("--epsilon", type=float, help="mutation probability")
    p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   help="override any configuration key (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mmrelay", description="Multihop mmWave relay formation simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="one instance, all three methods")
    _add_common(sim)
    sim.add_argument("--json", type=Path, help="write instance, paths and delays as JSON")
    sim.add_argument("--svg", type=Path, help="render the paths of --strategy as SVG")
    sim.add_argument("--strategy", choices=[s.value for s in Strategy], default="pf")
    sim.add_argument("--trace", type=Path, help="write per-visit dynamics records of both strategies as JSON lines ('-' for stdout)")

    batch = sub.add_parser("batch", help="Monte Carlo batch over fresh instances")
    _add_common(batch)
    batch.add_argument("--runs", type=int)
    batch.add_argument("--jobs", type=int)
    batch.add_argument("--csv", type=Path, help="per-run, per-pair delays")
    batch.add_argument("--json", type=Path, help="batch summary")

    oracle = sub.add_parser("oracle", help="audit equilibria against exhaustive enumeration")
    _add_common(oracle)
    oracle.add_argument("--runs", type=int, help="number of instances (default 50)")

    render = sub.add_parser("render", help="SVG map from a simulate --json output")
    render.add_argument("run_json", type=Path)
    render.add_argument("--svg", type=Path, required=True)
    render.add_argument("--strategy", choices=list(METHODS), default="pf")
    return parser


def _config_from(args, base: SimConfig | None = None) -> SimConfig:
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    for key in ("seed", "epsilon", "runs", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return parse_config(args.config, overrides, base=base)


def format_table(record, m: int) -> str:
    header = f"{'pair':<10}" + "".join(f"{_LABELS[k] + ' [s]':>16}" for k in METHODS)
    lines = [header]
    for i in range(m):
        row = f"{f'(s{i + 1},d{i + 1})':<10}" + "".join(f"{record.delays[k][i]:>16.4f}" for k in METHODS)
        lines.append(row)
    lines.append(f"{'sum':<10}" + "".join(f"{record.total(k):>16.4f}" for k in METHODS))
    lines.append(f"{'variance':<10}" + "".join(f"{record.variance(k):>16.4g}" for k in METHODS))
    return "\n".join(lines)


def cmd_simulate(args) -> int:
    config = _config_from(args)
    traces = []

    def collect(strategy, rec):
        traces.append({"strategy": strategy.value, **rec.to_dict()})

    instance = instance_for(config.seed, config)
    record = run_single(config.seed, config, trace=collect if args.trace else None, instance=instance)
    print(format_table(record, config.m))
    if not all(record.converged.values()):
        print(f"warning: dynamics did not converge within {config.max_rounds} rounds", file=sys.stderr)

    if args.json:
        doc = {"config": config.to_dict(), "instance": instance.to_dict(), "record": record.to_dict()}
        args.json.write_text(json.dumps(doc, indent=2) + "\n")
    if args.trace:
        lines = "".join(json.dumps(t) + "\n" for t in traces)
        if str(args.trace) == "-":
            sys.stdout.write(lines)
        else:
            args.trace.write_text(lines)
    if args.svg:
        title = f"seed {config.seed}: {_LABELS[args.strategy]} paths"
        args.svg.write_text(render_svg(instance, record.paths[args.strategy], title))
    return EXIT_OK


def cmd_batch(args) -> int:
    config = _config_from(args)
    stats, records = run_batch(config)
    if args.csv:
        with args.csv.open("w", newline="") as fh:
            write_csv(records, fh)
    if args.json:
        doc = {"config": config.to_dict(), "stats": stats.to_dict()}
        args.json.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"runs: {stats.runs}  ({stats.seconds_per_run * 1e3:.1f} ms/run)")
    for key in ("pf", "md", "direct"):
        print(f"mean sum of delays, {_LABELS[key]:<9}: {stats.mean_sum[key]:.4f} s")
    for key in ("pf", "md"):
        print(f"median per-pair variance, {_LABELS[key]:<9}: {stats.median_variance[key]:.4g} s^2")
    return EXIT_OK


def cmd_oracle(args) -> int:
    config = _config_from(args, base=SimConfig(m=2, n=3, runs=50, epsilon=0.0))
    cases = oracle_audit(config, config.runs, epsilon=config.epsilon)
    failures = 0
    for case in cases:
        ok = case.below_optimum and case.improving_moves == 0
        failures += not ok
        print(
            f"seed {case.seed}: potential {case.potential:.6f}  optimum {case.optimum:.6f}  "
            f"{'global' if case.global_optimum else 'local'}  {'ok' if ok else 'FAIL'}"
        )
    reached = sum(c.global_optimum for c in cases) / len(cases)
    print(f"{len(cases) - failures}/{len(cases)} audits passed; global optimum reached in {reached:.1%}")
    return EXIT_OK if failures == 0 else EXIT_AUDIT


def cmd_render(args) -> int:
    doc = json.loads(args.run_json.read_text())
    try:
        instance = Instance.from_dict(doc["instance"])
        paths = doc["record"]["paths"][args.strategy]
    except KeyError as exc:
        print(f"mmrelay: {args.run_json} lacks field {exc}", file=sys.stderr)
        return EXIT_USAGE
    args.svg.write_text(render_svg(instance, paths, f"{_LABELS[args.strategy]} paths"))
    return EXIT_OK


_COMMANDS = {"simulate": cmd_simulate, "batch": cmd_batch, "oracle": cmd_oracle, "render": cmd_render}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"mmrelay: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeError as exc:
        print(f"mmrelay: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"mmrelay: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
