import os

import pytest

CONFIG_INI = """\
[scenario]
name = exp_demo
humans = H_A,H_C
bands = 0.5,0.25

[human_learner]
gamma = 0.9

[shs_learner]
gamma = 0.9

[grid]
t_min = 15.0

[curves]
n_act = 20
"""

MANIFEST = """\
scenario = exp_demo
seeds = 3,4
version = 0.1.0
"""

TICK_HEADER = ("episode,tick,temp,rh,temp_setpoint,rh_setpoint,shs_action,"
               "shs_reward,h0_activity,h0_progress,h0_primitive,h0_reward,"
               "h0_pmv,h0_qc,h0_qe,h1_activity,h1_progress,h1_primitive,"
               "h1_reward,h1_pmv,h1_qc,h1_qe")

METRICS_HEADER = ("seed,model,with_shs,mts,mr_mean,mr_std,switches,"
                  "completion_rate")


def synth_tick_rows(episode, n):
    rows = []
    for t in range(n):
        act0 = 0 if t < n // 2 else 1
        act1 = (-1 if t < 3 else 2)
        pmv0 = -0.4 + 0.9 * t / n
        pmv1 = 1.4 - 2.0 * t / n
        rows.append(
            f"{episode},{t},22.0,45.0,23.0,45.0,4,0.0,"
            f"{act0},{t % 20},4,1.0,{pmv0!r},{0.1 * t!r},{0.05 * t!r},"
            f"{act1},{t % 20},4,0.5,{pmv1!r},{0.2 * t!r},{0.02 * t!r}")
    return rows


@pytest.fixture(scope="session")
def run_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("run")
    (root / "config.ini").write_text(CONFIG_INI, encoding="utf-8")
    (root / "manifest.txt").write_text(MANIFEST, encoding="utf-8")
    logs = root / "episode_logs"
    logs.mkdir()
    for arm in ("with", "without"):
        lines = [TICK_HEADER]
        for episode in (0, 1):
            lines += synth_tick_rows(episode, 30)
        (logs / f"ticks_seed3_{arm}.csv").write_text(
            "\n".join(lines) + "\n", encoding="utf-8")
    metric_lines = [METRICS_HEADER]
    for seed in (3, 4):
        for model, mts_wo, mts_w in (("H_A", 21.0, 11.0), ("H_C", 26.0, 36.0)):
            metric_lines.append(
                f"{seed},{model},0,{mts_wo!r},50.0,5.0,3.0,1.0")
            metric_lines.append(
                f"{seed},{model},1,{mts_w!r},60.0,6.0,4.0,1.0")
    (root / "metrics.csv").write_text(
        "\n".join(metric_lines) + "\n", encoding="utf-8")
    return str(root)
