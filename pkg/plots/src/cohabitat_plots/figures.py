"""The four figure kinds, rendered from a run directory's CSV artifacts.

This package never imports the simulator; everything it needs is in the
run directory: config.ini for comfort bands, manifest.txt for seeds,
metrics.csv for aggregates, and the per-seed tick logs for trajectories.
"""

import configparser
import csv
import os
import statistics

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

FIGURE_KINDS = ("activity_timeline", "pmv_trajectory", "qcqe_curves",
                "mts_bars")

ACTIVITY_LABELS = {-2: "finished", -1: "idle", 0: "rest", 1: "leisure",
                   2: "workout"}
ARM_LABELS = {"without": "without controller", "with": "with controller"}


class PlotInputError(Exception):
    """The run directory is missing something a figure needs."""


def _read_csv(path):
    if not os.path.exists(path):
        raise PlotInputError(f"missing artifact {path}")
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def _run_config(indir):
    parser = configparser.ConfigParser()
    path = os.path.join(indir, "config.ini")
    if not parser.read(path, encoding="utf-8"):
        raise PlotInputError(f"missing artifact {path}")
    return parser


def default_seed(indir):
    """First seed listed in the manifest."""
    path = os.path.join(indir, "manifest.txt")
    if not os.path.exists(path):
        raise PlotInputError(f"missing artifact {path}")
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("seeds = "):
                return int(line.split(" = ", 1)[1].split(",")[0])
    raise PlotInputError(f"{path} lists no seeds")


def _tick_rows(indir, seed, arm, episode):
    path = os.path.join(indir, "episode_logs", f"ticks_seed{seed}_{arm}.csv")
    rows = [r for r in _read_csv(path) if int(r["episode"]) == episode]
    if not rows:
        raise PlotInputError(f"{path} has no episode {episode}")
    return rows


def _human_names(config):
    return config["scenario"]["humans"].split(",")


def _human_bands(config):
    return [float(b) for b in config["scenario"]["bands"].split(",")]


def _save(fig, out):
    os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
    kwargs = {"dpi": 120}
    if out.endswith(".png"):
        kwargs["metadata"] = {"Software": None}
    fig.savefig(out, **kwargs)
    plt.close(fig)


def activity_timeline(indir, out, seed=None, arm="with", episode=0):
    """Step plot of each occupant's activity over one evaluation episode."""
    seed = default_seed(indir) if seed is None else seed
    config = _run_config(indir)
    names = _human_names(config)
    rows = _tick_rows(indir, seed, arm, episode)
    ticks = [int(r["tick"]) for r in rows]
    fig, ax = plt.subplots(figsize=(8, 3))
    for i, name in enumerate(names):
        acts = [int(r[f"h{i}_activity"]) for r in rows]
        ax.step(ticks, acts, where="post", label=name)
    ax.set_yticks(sorted(ACTIVITY_LABELS))
    ax.set_yticklabels([ACTIVITY_LABELS[k] for k in sorted(ACTIVITY_LABELS)])
    ax.set_xlabel("tick")
    ax.set_title(f"activities, seed {seed}, episode {episode}, "
                 f"{ARM_LABELS[arm]}")
    ax.legend(loc="upper right")
    fig.tight_layout()
    _save(fig, out)


def pmv_trajectory(indir, out, seed=None, arm="with", episode=0):
    """Comfort vote over time, green inside each occupant's band, red outside."""
    seed = default_seed(indir) if seed is None else seed
    config = _run_config(indir)
    names = _human_names(config)
    bands = _human_bands(config)
    rows = _tick_rows(indir, seed, arm, episode)
    fig, axes = plt.subplots(len(names), 1, figsize=(8, 2.4 * len(names)),
                             squeeze=False)
    for i, (name, band) in enumerate(zip(names, bands)):
        ax = axes[i][0]
        ticks = [int(r["tick"]) for r in rows]
        pmvs = [float(r[f"h{i}_pmv"]) for r in rows]
        for t0, t1, v0, v1 in zip(ticks, ticks[1:], pmvs, pmvs[1:]):
            inside = abs(v0) <= band and abs(v1) <= band
            ax.plot([t0, t1], [v0, v1],
                    color="green" if inside else "red", linewidth=1.2)
        ax.axhspan(-band, band, color="green", alpha=0.08)
        ax.set_ylabel(f"{name} PMV")
        ax.set_ylim(-3.2, 3.2)
    axes[-1][0].set_xlabel("tick")
    axes[0][0].set_title(f"comfort vote, seed {seed}, episode {episode}, "
                         f"{ARM_LABELS[arm]}")
    fig.tight_layout()
    _save(fig, out)


def qcqe_curves(indir, out, seed=None, arm="with", episode=0):
    """Completion vs exit values of the chosen primitives over one episode."""
    seed = default_seed(indir) if seed is None else seed
    config = _run_config(indir)
    names = _human_names(config)
    rows = _tick_rows(indir, seed, arm, episode)
    fig, axes = plt.subplots(len(names), 1, figsize=(8, 2.4 * len(names)),
                             squeeze=False)
    for i, name in enumerate(names):
        ax = axes[i][0]
        ticks = [int(r["tick"]) for r in rows]
        ax.plot(ticks, [float(r[f"h{i}_qc"]) for r in rows],
                label="Q_c", color="tab:blue")
        ax.plot(ticks, [float(r[f"h{i}_qe"]) for r in rows],
                label="Q_e", color="tab:orange")
        ax.set_ylabel(name)
        ax.legend(loc="upper right")
    axes[-1][0].set_xlabel("tick")
    axes[0][0].set_title(f"decomposed values, seed {seed}, episode "
                         f"{episode}, {ARM_LABELS[arm]}")
    fig.tight_layout()
    _save(fig, out)


def mts_bars(indir, out, **_ignored):
    """Median setpoint-touch counts per model, both arms side by side."""
    rows = _read_csv(os.path.join(indir, "metrics.csv"))
    if not rows:
        raise PlotInputError("metrics.csv is empty")
    groups = {}
    for r in rows:
        key = (r["model"], r["with_shs"])
        groups.setdefault(key, []).append(float(r["mts"]))
    models = []
    for r in rows:
        if r["model"] not in models:
            models.append(r["model"])
    fig, ax = plt.subplots(figsize=(6, 3.5))
    width = 0.35
    xs = range(len(models))
    for offset, arm, label, color in ((-width / 2, "0", "without", "0.6"),
                                      (width / 2, "1", "with", "tab:blue")):
        vals = [statistics.median(groups[(m, arm)])
                if (m, arm) in groups else 0.0 for m in models]
        ax.bar([x + offset for x in xs], vals, width,
               label=f"{label} controller", color=color)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(models)
    ax.set_ylabel("median MTS")
    ax.set_title("setpoint adjustments per evaluation episode")
    ax.legend()
    fig.tight_layout()
    _save(fig, out)


_RENDERERS = {
    "activity_timeline": activity_timeline,
    "pmv_trajectory": pmv_trajectory,
    "qcqe_curves": qcqe_curves,
    "mts_bars": mts_bars,
}


def render(kind, indir, out, **kwargs):
    if kind not in _RENDERERS:
        raise PlotInputError(
            f"unknown figure kind {kind!r}; choose one of "
            f"{', '.join(FIGURE_KINDS)}")
    _RENDERERS[kind](indir, out, **kwargs)
