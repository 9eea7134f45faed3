"""Scenario registry and the metrics layer.

Each experiment trains its occupants alone first, snapshots them, then
continues with the controller; metrics compare the two evaluation arms.
"""

import copy
import random
import statistics
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from .human import (ACTIVITY_NODES, ACTIVITY_NAMES, LEAVE, PROFILES,
                    TH_PRIMITIVES, HumanAgent)
from .sim import EpisodeLog, ScenarioSpec, evaluate, run_episode, train


def scenario(name: str) -> ScenarioSpec:
    """Registry of the studied occupant configurations."""
    p = PROFILES
    table = {
        "exp1": (p["H_A"],),
        "exp2": (p["H_B"],),
        "exp3": (p["H_C"],),
        "exp3_hd": (p["H_D"],),
        "exp4": (p["H_A"], p["H_B"]),
        "exp5": (p["H_A"], p["H_C"]),
        "exp5_tight": (p["H_A"].with_band(0.25), p["H_C"].with_band(0.25)),
        "exp6": (p["H_C"], p["H_C_prime"]),
        "exp7": (p["H_A"], p["H_D"]),
    }
    if name not in table:
        raise KeyError(f"unknown scenario {name!r}; "
                       f"choose one of {', '.join(sorted(table))}")
    return ScenarioSpec(name=name, humans=table[name])


def scenario_names() -> List[str]:
    return ["exp1", "exp2", "exp3", "exp3_hd", "exp4", "exp5",
            "exp5_tight", "exp6", "exp7"]


@dataclass
class ModelMetrics:
    """Evaluation aggregates for one occupant in one arm."""
    model: str
    with_shs: bool
    mts: float
    mr_mean: float
    mr_std: float
    switches: float
    completion_rate: float
    mean_qc: Dict[int, float] = field(default_factory=dict)
    mean_qe: Dict[int, float] = field(default_factory=dict)


def _mean_table_by_activity(table: Dict) -> Dict[int, float]:
    sums, counts = {}, {}
    for (node, _key, _a), v in table.items():
        if node in ACTIVITY_NODES:
            sums[node] = sums.get(node, 0.0) + v
            counts[node] = counts.get(node, 0) + 1
    return {n: sums[n] / counts[n] for n in sums}


def compute_metrics(logs: List[EpisodeLog], humans: List[HumanAgent],
                    with_shs: bool) -> List[ModelMetrics]:
    """Aggregate one evaluation arm. Q means cover visited keys only;
    including never-updated defaults would drown the statistic in zeros."""
    if not logs:
        raise ValueError("no evaluation episodes to aggregate")
    out = []
    n = len(logs)
    for i, h in enumerate(humans):
        rewards = [log.human_totals[i] for log in logs]
        out.append(ModelMetrics(
            model=h.spec.name,
            with_shs=with_shs,
            mts=sum(log.th_changes[i] for log in logs) / n,
            mr_mean=statistics.mean(rewards),
            mr_std=statistics.pstdev(rewards),
            switches=sum(log.switches[i] for log in logs) / n,
            completion_rate=sum(log.completed[i] for log in logs) / n,
            mean_qc=_mean_table_by_activity(h.q.q_c),
            mean_qe=_mean_table_by_activity(h.q.q_e),
        ))
    return out


@dataclass
class RepetitionResult:
    """One seed's full pipeline: both evaluation arms plus trained agents."""
    seed: int
    without_shs: List[ModelMetrics]
    with_shs: Optional[List[ModelMetrics]]
    logs_without: List[EpisodeLog]
    logs_with: Optional[List[EpisodeLog]]
    humans_without: list
    humans_with: Optional[list]
    shs_agent: object = None


def run_repetition(spec: ScenarioSpec, seed: int,
                   record_ticks: bool = False) -> RepetitionResult:
    """Train and evaluate one repetition.

    The occupants are snapshotted after their solo phase so the two arms
    share identical starting tables, then both arms train for the same
    number of further episodes: one branch alone, the other alongside the
    controller. Evaluating arms with unequal experience would credit the
    controller for learning the occupants did on their own.
    """
    spec_no = replace(spec, shs_enabled=False)
    captured = {}

    def snapshot(humans):
        captured["humans"] = [copy.deepcopy(h) for h in humans]

    humans, shs_agent, _ = train(spec, seed=seed, after_phase1=snapshot)
    solo = captured["humans"]
    if spec.continue_human_learning:
        # keep the branches comparable: the solo branch gets the same
        # exploration restart the controller branch gets at the phase break
        if spec.phase2_epsilon_restart > 0:
            for h in solo:
                h.restart_exploration(spec.phase2_epsilon_restart)
        rng = random.Random(seed * 7_654_321 + 5)
        for ep in range(spec.phase2_episodes):
            run_episode(spec_no, solo, None, "learning", rng,
                        episode_idx=spec.phase1_episodes + ep,
                        record_ticks=False)
    logs_wo = evaluate(spec_no, solo, None, seed, record_ticks=record_ticks)
    captured["logs"] = logs_wo
    m_wo = compute_metrics(logs_wo, solo, False)
    if not spec.shs_enabled:
        return RepetitionResult(seed, m_wo, None, captured["logs"], None,
                                captured["humans"], None, None)
    logs_w = evaluate(spec, humans, shs_agent, seed,
                      record_ticks=record_ticks)
    m_w = compute_metrics(logs_w, humans, True)
    return RepetitionResult(seed, m_wo, m_w, captured["logs"], logs_w,
                            captured["humans"], humans, shs_agent)


def metrics_rows(results: List[RepetitionResult]) -> List[dict]:
    """Flatten repetition results to one row per (seed, model, arm)."""
    rows = []
    for res in results:
        arms = [(res.without_shs, False)]
        if res.with_shs is not None:
            arms.append((res.with_shs, True))
        for metrics, with_shs in arms:
            for m in metrics:
                row = {
                    "seed": res.seed,
                    "model": m.model,
                    "with_shs": int(with_shs),
                    "mts": m.mts,
                    "mr_mean": m.mr_mean,
                    "mr_std": m.mr_std,
                    "switches": m.switches,
                    "completion_rate": m.completion_rate,
                }
                for node in ACTIVITY_NODES:
                    name = ACTIVITY_NAMES[node - 1]
                    row[f"qc_{name}"] = m.mean_qc.get(node, 0.0)
                    row[f"qe_{name}"] = m.mean_qe.get(node, 0.0)
                rows.append(row)
    return rows


def summarize(rows: List[dict]) -> List[dict]:
    """Median-over-seeds summary per (model, arm)."""
    groups: Dict[Tuple[str, int], List[dict]] = {}
    for row in rows:
        groups.setdefault((row["model"], row["with_shs"]), []).append(row)
    summary = []
    for (model, with_shs), grp in sorted(groups.items()):
        entry = {"model": model, "with_shs": with_shs, "seeds": len(grp)}
        for col in ("mts", "mr_mean", "mr_std", "switches",
                    "completion_rate"):
            entry[f"median_{col}"] = statistics.median(r[col] for r in grp)
        # spread of per-repetition mean rewards; this is the instability
        # signal a single repetition cannot show
        entry["rep_mr_std"] = (statistics.pstdev(r["mr_mean"] for r in grp)
                               if len(grp) > 1 else 0.0)
        for node in ACTIVITY_NODES:
            name = ACTIVITY_NAMES[node - 1]
            for pre in ("qc", "qe"):
                col = f"{pre}_{name}"
                entry[f"mean_{col}"] = statistics.mean(r[col] for r in grp)
        summary.append(entry)
    return summary
