"""Command-line entry point: run scenarios, report metrics, dump tables."""

import argparse
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .comfort import (ComfortProfile, PmvConvergenceError, PmvInput,
                      comfort_table, pmv)
from .config import (ConfigError, config_to_scenario, load_scenario_file,
                     scenario_to_config)
from .experiments import metrics_rows, run_repetition, scenario, \
    scenario_names, summarize
from .persist import (ArtifactError, read_dict_csv, read_manifest,
                      render_aligned, write_dict_csv, write_episode_summary,
                      write_human_qtable, write_manifest, write_shs_qtable,
                      write_tick_log)
from .thermo import ThermalGrid

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _resolve_scenario(ref: str):
    if os.sep in ref or ref.endswith(".ini") or os.path.isfile(ref):
        return load_scenario_file(ref)
    try:
        return scenario(ref)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc


def _seed_artifacts(spec, seed: int, out: str, record_ticks: bool):
    """Worker for one repetition: runs it and writes per-seed files.

    Takes the scenario as config text when crossing a process boundary;
    returns only plain metric rows so results merge deterministically.
    """
    if isinstance(spec, str):
        spec = config_to_scenario(spec)
    result = run_repetition(spec, seed, record_ticks=record_ticks)
    n = len(spec.humans)
    logdir = os.path.join(out, "episode_logs")
    qdir = os.path.join(out, "qtables")
    write_episode_summary(
        os.path.join(logdir, f"seed{seed}_without.csv"),
        result.logs_without, n)
    for i, h in enumerate(result.humans_without):
        write_human_qtable(
            os.path.join(qdir, f"seed{seed}_h{i}_without.txt"), h)
    if record_ticks:
        write_tick_log(os.path.join(logdir, f"ticks_seed{seed}_without.csv"),
                       result.logs_without, n)
    if result.logs_with is not None:
        write_episode_summary(
            os.path.join(logdir, f"seed{seed}_with.csv"), result.logs_with, n)
        for i, h in enumerate(result.humans_with):
            write_human_qtable(
                os.path.join(qdir, f"seed{seed}_h{i}_with.txt"), h)
        write_shs_qtable(os.path.join(qdir, f"seed{seed}_shs.txt"),
                         result.shs_agent)
        if record_ticks:
            write_tick_log(os.path.join(logdir, f"ticks_seed{seed}_with.csv"),
                           result.logs_with, n)
    return metrics_rows([result])


def cmd_run(args) -> int:
    spec = _resolve_scenario(args.scenario)
    if args.no_shs:
        from dataclasses import replace
        spec = replace(spec, shs_enabled=False)
    n_seeds = args.seeds if args.seeds is not None else spec.repetitions
    if n_seeds < 1:
        raise ConfigError("--seeds must be >= 1")
    seeds = [spec.seed + i for i in range(n_seeds)]
    out = os.environ.get("COHABITAT_OUT", args.out)
    os.makedirs(out, exist_ok=True)
    config_text = scenario_to_config(spec)
    with open(os.path.join(out, "config.ini"), "w", encoding="utf-8",
              newline="\n") as f:
        f.write(config_text)

    t0 = time.time()
    rows = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_seed_artifacts, config_text, s, out,
                                   s == seeds[0]) for s in seeds]
            for fut in futures:
                rows.extend(fut.result())
    else:
        for s in seeds:
            rows.extend(_seed_artifacts(spec, s, out, s == seeds[0]))

    write_dict_csv(os.path.join(out, "metrics.csv"), rows)
    write_dict_csv(os.path.join(out, "summary.csv"), summarize(rows))
    artifacts = sorted(
        os.path.relpath(os.path.join(root, name), out)
        for root, _, files in os.walk(out) for name in files)
    write_manifest(os.path.join(out, "manifest.txt"), {
        "scenario": spec.name,
        "version": __version__,
        "seeds": ",".join(str(s) for s in seeds),
        "shs_enabled": spec.shs_enabled,
        "wall_clock_s": round(time.time() - t0, 3),
        "artifacts": {str(i): p for i, p in enumerate(artifacts)},
    })
    print(render_aligned(summarize(rows)), end="")
    return 0


def _recompute_behavior(out: str, seed: str, arm: str, model_index: int):
    path = os.path.join(out, "episode_logs", f"seed{seed}_{arm}.csv")
    logs = read_dict_csv(path)
    rewards = [float(r[f"h{model_index}_total_reward"]) for r in logs]
    return {
        "mts": statistics.mean(float(r[f"h{model_index}_th_changes"])
                               for r in logs),
        "mr_mean": statistics.mean(rewards),
        "mr_std": statistics.pstdev(rewards),
        "switches": statistics.mean(float(r[f"h{model_index}_switches"])
                                    for r in logs),
        "completion_rate": statistics.mean(
            float(r[f"h{model_index}_completed"]) for r in logs),
    }


def cmd_report(args) -> int:
    out = args.indir
    manifest = read_manifest(os.path.join(out, "manifest.txt"))
    rows = read_dict_csv(os.path.join(out, "metrics.csv"))
    models = []
    for row in rows:
        if row["model"] not in models:
            models.append(row["model"])
    for row in rows:
        arm = "with" if row["with_shs"] == "1" else "without"
        redo = _recompute_behavior(out, row["seed"], arm,
                                   models.index(row["model"]))
        for col, fresh in redo.items():
            stored = float(row[col])
            if abs(stored - fresh) > 1e-9:
                raise ArtifactError(
                    f"metrics.csv disagrees with episode logs: seed "
                    f"{row['seed']} {row['model']} {col} "
                    f"{stored!r} vs {fresh!r}")
    summary = read_dict_csv(os.path.join(out, "summary.csv"))
    print(f"scenario {manifest.get('scenario', '?')} "
          f"({len(rows)} metric rows, verified against episode logs)")
    print(render_aligned(summary), end="")
    return 0


def cmd_comfort_table(args) -> int:
    if args.met <= 0 or args.clo < 0 or args.band <= 0:
        raise ConfigError("met and band must be positive, clo non-negative")
    try:
        profile = ComfortProfile(met_per_activity=(args.met,) * 3,
                                 clo_per_activity=(args.clo,) * 3,
                                 band_halfwidth=args.band)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    grid = ThermalGrid()
    print("temp_c,rh_pct,pmv")
    for t, rh in comfort_table(profile, args.met, args.clo, grid):
        v = pmv(PmvInput(t, profile.radiant(t), profile.air_speed, rh,
                         args.met, args.clo))
        print(f"{t:g},{rh:g},{v!r}")
    return 0


def cmd_list_scenarios(_args) -> int:
    for name in scenario_names():
        spec = scenario(name)
        occupants = " + ".join(h.name for h in spec.humans)
        print(f"{name}: {occupants}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohabitat",
        description="Occupant/controller co-adaptation simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="train and evaluate a scenario")
    p.add_argument("scenario", help="registry name or config file path")
    p.add_argument("--seeds", type=int, default=None,
                   help="number of repetitions (default: scenario setting)")
    p.add_argument("--out", default="out", help="artifact directory")
    p.add_argument("--no-shs", action="store_true",
                   help="skip the controller phase entirely")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel worker processes over seeds")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="re-render metrics from a run directory")
    p.add_argument("--in", dest="indir", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("comfort-table",
                       help="enumerate the comfortable grid cells as CSV")
    p.add_argument("--met", type=float, required=True)
    p.add_argument("--clo", type=float, required=True)
    p.add_argument("--band", type=float, default=0.25)
    p.set_defaults(func=cmd_comfort_table)

    p = sub.add_parser("list-scenarios", help="show the scenario registry")
    p.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad arguments already; pass through
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PmvConvergenceError, ArithmeticError, OverflowError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ArtifactError, OSError) as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
