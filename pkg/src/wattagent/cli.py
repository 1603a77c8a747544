"""Command-line front end.

Every subcommand reads and writes the JSON/CSV formats of the library and
prints exactly what the corresponding library object serializes to.
Exit codes: 0 success, 1 validation or configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import presets
from .emissions import (
    CAR_G_PER_KM,
    EmissionsResult,
    EnergyMixTable,
    lookup_intensity,
    task_emissions,
)
from .energy_sources import (
    CostProxyInputs,
    ModelEnergyProfile,
    PowerTrace,
    cost_proxy_energy_per_token,
    measured_energy_per_token,
)
from .errors import WattAgentError
from .pipeline import ActionEnergyEstimate, TaskProfile, action_energy
from .quantities import Interval
from .reporting import FORMATS, compare_agents, dedicated_metrics, parse_report, render_report
from .tokenization import (
    POLICIES,
    CorpusStats,
    corpus_paths,
    corpus_stats,
    dom_expansion_factor,
    make_counter,
)
from .tokenization.corpus import read_pages
from .tokenization.counters import KINDS

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _counter(args):
    return make_counter(args.counter, divisor=args.divisor, vocab=args.vocab,
                        merges=args.merges, id=args.counter_id)


def _add_counter_flags(p):
    p.add_argument("--counter", choices=KINDS, default="heuristic-chars")
    p.add_argument("--divisor", type=float, default=4.0,
                   help="characters per token for heuristic-chars")
    p.add_argument("--vocab", help="BPE vocabulary JSON (token -> id)")
    p.add_argument("--merges", help="BPE merges file, one pair per line")
    p.add_argument("--counter-id", help="label recorded in the output")


def cmd_corpus_stats(args):
    pages = read_pages(corpus_paths(args.corpus))
    stats = corpus_stats(pages, _counter(args), include_scripts=not args.exclude_scripts,
                         workers=args.workers)
    _emit(stats.to_json(), args.out)


def cmd_dom_expansion(args):
    paths = list(args.html or [])
    if args.corpus:
        paths += corpus_paths(args.corpus)
    if not paths:
        raise UsageError("dom-expansion: give --html and/or --corpus")
    est = dom_expansion_factor(list(read_pages(paths)), _counter(args), POLICIES[args.policy])
    _emit(json.dumps(est.to_dict(), indent=2) + "\n", args.out)


def _profiles(paths):
    profiles = {}
    for p in paths or []:
        prof = ModelEnergyProfile.load(p)
        profiles[prof.name] = prof
    return profiles


def cmd_estimate(args):
    pipeline = presets.preset_pipeline(args.pipeline)
    stats = CorpusStats.load(presets.resolve_file(args.corpus_stats, "stats"))
    est = action_energy(pipeline, stats, _profiles(args.profile))
    _emit(est.to_json(), args.out)


def cmd_cost_proxy(args):
    share = args.share if args.share_range is None else Interval(*args.share_range)
    if args.energy_price_unit == "kWh":
        inputs = CostProxyInputs.from_kwh_price(args.token_price, args.energy_price, share)
    else:
        inputs = CostProxyInputs(args.token_price, args.energy_price, share)
    _emit(cost_proxy_energy_per_token(inputs, name=args.name).to_json(), args.out)


def cmd_measure(args):
    traces = [PowerTrace.from_csv(presets.resolve_file(t, "traces")) for t in args.trace]
    baseline = None
    if args.baseline:
        baseline = PowerTrace.from_csv(presets.resolve_file(args.baseline, "traces"))
    profile = measured_energy_per_token(traces, args.tokens, baseline, name=args.name)
    _emit(profile.to_json(), args.out)


def _mix_table(args):
    table = presets.preset_mix_table()
    for extra in args.mix_table or []:
        table = table.merged(EnergyMixTable.from_csv(extra))
    return table


def cmd_emissions(args):
    est = ActionEnergyEstimate.load(args.estimate)
    intensity = lookup_intensity(_mix_table(args), args.region)
    result = task_emissions(TaskProfile(args.actions), intensity, est.total, region=args.region)
    _emit(result.to_json(), args.out)


def cmd_compare(args):
    if len(args.estimate) != len(args.emissions):
        raise UsageError("compare: give one --emissions per --estimate")
    entries = []
    for est_path, em_path in zip(args.estimate, args.emissions):
        est = ActionEnergyEstimate.load(est_path)
        entries.append((est.pipeline, est, EmissionsResult.load(em_path)))
    metrics = []
    if len(args.pipeline or []) != len(args.corpus_stats or []):
        raise UsageError("compare: give one --corpus-stats per --pipeline")
    for pipe, stats in zip(args.pipeline or [], args.corpus_stats or []):
        metrics.append(dedicated_metrics(
            presets.preset_pipeline(pipe),
            CorpusStats.load(presets.resolve_file(stats, "stats")),
        ))
    report = compare_agents(entries, metrics, grams_per_km=args.car_g_per_km)
    _emit(render_report(report, "json"), args.out)


def cmd_report(args):
    report = parse_report(Path(args.comparison).read_text(encoding="utf-8"))
    _emit(render_report(report, args.format), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wattagent", description="Energy and CO2 accounting for web agents.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("corpus-stats", help="average tokens per HTML page")
    p.add_argument("--corpus", required=True, help="directory of .html files or a manifest")
    _add_counter_flags(p)
    p.add_argument("--exclude-scripts", action="store_true",
                   help="drop <script>/<style> elements before counting")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_corpus_stats)

    p = sub.add_parser("dom-expansion", help="estimate the DOM expansion factor")
    p.add_argument("--html", action="append", help="HTML file (repeatable)")
    p.add_argument("--corpus", help="directory of .html files or a manifest")
    p.add_argument("--policy", choices=sorted(POLICIES), default="full-context")
    _add_counter_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dom_expansion)

    p = sub.add_parser("estimate", help="energy per action of a pipeline")
    p.add_argument("--pipeline", required=True, help="pipeline JSON or bundled preset name")
    p.add_argument("--corpus-stats", required=True, help="corpus stats JSON or bundled name")
    p.add_argument("--profile", action="append", help="profile JSON for model references")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("cost-proxy", help="energy per token from prices")
    p.add_argument("--name", required=True)
    p.add_argument("--token-price", type=float, required=True, help="$ per token")
    p.add_argument("--energy-price", type=float, required=True)
    p.add_argument("--energy-price-unit", choices=["kWh", "Wh"], default="kWh")
    p.add_argument("--share", type=float, default=0.5, help="energy share of the token price")
    p.add_argument("--share-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_cost_proxy)

    p = sub.add_parser("measure", help="energy per token from power traces")
    p.add_argument("--trace", action="append", required=True, help="CSV trace (repeatable)")
    p.add_argument("--tokens", type=int, required=True, help="tokens processed in all traces")
    p.add_argument("--baseline", help="idle CSV trace")
    p.add_argument("--name", default="measured-model")
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("emissions", help="CO2e per task from an estimate")
    p.add_argument("--estimate", required=True)
    p.add_argument("--region", required=True)
    p.add_argument("--actions", type=float, required=True, help="mean actions per task")
    p.add_argument("--mix-table", action="append", help="extra mix-table CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emissions)

    p = sub.add_parser("compare", help="pairwise energy ratios between agents")
    p.add_argument("--estimate", action="append", required=True)
    p.add_argument("--emissions", action="append", required=True)
    p.add_argument("--pipeline", action="append", help="add a dedicated-metrics block")
    p.add_argument("--corpus-stats", action="append")
    p.add_argument("--car-g-per-km", type=float, default=CAR_G_PER_KM)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="render a comparison")
    p.add_argument("--comparison", required=True)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError(parser.format_usage() + "wattagent: error: a subcommand is required")
        args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"wattagent: {exc}", file=sys.stderr)
        return EXIT_IO
    except (WattAgentError, ValueError, KeyError, TypeError) as exc:
        print(f"wattagent: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
