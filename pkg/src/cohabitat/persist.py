"""Artifact I/O: CSV logs and metrics, Q-table snapshots, manifests.

All text artifacts are UTF-8 with LF line endings and '.' decimals, so a
byte comparison of two runs is a meaningful determinism check.
"""

import csv
import io
import os
from typing import Dict, Iterable, List

from .hrl import snapshot_lines
from .sim import EpisodeLog

TICK_BASE_COLUMNS = ("episode", "tick", "temp", "rh", "temp_setpoint",
                     "rh_setpoint", "shs_action", "shs_reward")
TICK_HUMAN_COLUMNS = ("activity", "progress", "primitive", "reward", "pmv",
                      "qc", "qe")
SUMMARY_COLUMNS = ("episode", "n_ticks", "shs_total")
SUMMARY_HUMAN_COLUMNS = ("total_reward", "th_changes", "switches", "completed")


class ArtifactError(Exception):
    """A persisted artifact is missing or malformed."""


def _open_w(path: str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str, header: Iterable[str], rows: Iterable[Iterable]):
    with _open_w(path) as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def write_dict_csv(path: str, rows: List[dict]):
    if not rows:
        raise ArtifactError(f"refusing to write empty table {path}")
    header = list(rows[0])
    write_csv(path, header, ([row[k] for k in header] for row in rows))


def read_dict_csv(path: str) -> List[dict]:
    if not os.path.exists(path):
        raise ArtifactError(f"missing artifact {path}")
    out = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise ArtifactError(f"{path}: no header row")
        for lineno, row in enumerate(reader, start=2):
            if None in row or any(v is None for v in row.values()):
                raise ArtifactError(f"{path}: malformed row at line {lineno}")
            out.append(dict(row))
    return out


def tick_header(n_humans: int) -> List[str]:
    cols = list(TICK_BASE_COLUMNS)
    for i in range(n_humans):
        cols += [f"h{i}_{c}" for c in TICK_HUMAN_COLUMNS]
    return cols


def write_tick_log(path: str, logs: List[EpisodeLog], n_humans: int):
    write_csv(path, tick_header(n_humans),
              (tick for log in logs for tick in log.ticks))


def write_episode_summary(path: str, logs: List[EpisodeLog], n_humans: int):
    cols = list(SUMMARY_COLUMNS)
    for i in range(n_humans):
        cols += [f"h{i}_{c}" for c in SUMMARY_HUMAN_COLUMNS]

    def rows():
        for log in logs:
            row = [log.episode, log.n_ticks, log.shs_total]
            for i in range(n_humans):
                row += [log.human_totals[i], log.th_changes[i],
                        log.switches[i], int(log.completed[i])]
            yield row

    write_csv(path, cols, rows())


def write_human_qtable(path: str, agent):
    with _open_w(path) as f:
        for line in snapshot_lines(agent.q):
            f.write(line + "\n")


def write_shs_qtable(path: str, agent):
    with _open_w(path) as f:
        for line in agent.q.snapshot_lines():
            f.write(line + "\n")


def write_manifest(path: str, entries: Dict[str, object]):
    """Flat key-value manifest; nested dicts become dotted keys."""
    flat: Dict[str, object] = {}

    def flatten(prefix: str, value):
        if isinstance(value, dict):
            for k, v in value.items():
                flatten(f"{prefix}.{k}" if prefix else str(k), v)
        else:
            flat[prefix] = value

    flatten("", entries)
    with _open_w(path) as f:
        for k in sorted(flat):
            f.write(f"{k} = {_fmt(flat[k])}\n")


def read_manifest(path: str) -> Dict[str, str]:
    if not os.path.exists(path):
        raise ArtifactError(f"missing manifest {path}")
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if " = " not in line:
                raise ArtifactError(f"{path}: bad manifest line {lineno}")
            k, v = line.split(" = ", 1)
            out[k] = v
    return out


def render_aligned(rows: List[dict]) -> str:
    """Fixed-width text table for terminal reports."""
    if not rows:
        raise ArtifactError("nothing to render")
    header = list(rows[0])
    cells = [[_fmt(row[k]) if not isinstance(row[k], float)
              else f"{row[k]:.3f}" for k in header] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells))
              for i, h in enumerate(header)]
    buf = io.StringIO()
    buf.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    buf.write("\n")
    for row in cells:
        buf.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        buf.write("\n")
    return buf.getvalue()
