"""Episode orchestration: the tick loop, the two-phase training protocol.

Tick order (shared by every scenario): each occupant takes one primitive,
the zone relaxes one step, the controller observes and acts, the zone
relaxes again. The controller's Q backup is delayed one tick because its
reward (did an occupant touch the setpoints?) only materializes then.
"""

import random
import time
from dataclasses import dataclass, field, asdict
from typing import List, Optional, Tuple

from . import __version__
from .hrl import LearnerConfig
from .human import (HumanAgent, HumanModelSpec, ActivityCurves, AT_ROOT,
                    LEAVE, TH_PRIMITIVES, th_action_of)
from .shs import (SHS_LEARNER, ShsAgent, ShsAction, comfort_prior,
                  shs_observation, shs_reward)
from .thermo import ThermalGrid, ThAction, apply_th_action, make_state
from .thermo import tick as thermo_tick


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    humans: Tuple[HumanModelSpec, ...]
    shs_enabled: bool = True
    phase1_episodes: int = 350
    phase2_episodes: int = 150
    repetitions: int = 50
    eval_episodes: int = 50
    max_ticks_per_episode: int = 300
    seed: int = 0
    grid: ThermalGrid = field(default_factory=ThermalGrid)
    curves: ActivityCurves = field(default_factory=ActivityCurves)
    shs_learner: LearnerConfig = field(default_factory=lambda: SHS_LEARNER)
    coupling: bool = True
    continue_human_learning: bool = True
    resume_mode: str = "resume"
    shs_per_action_penalty: bool = True
    shs_comfort_prior: bool = True
    shs_prior_scale: float = 2.0
    # occupants re-explore at this rate when their environment visibly
    # changes between phases; 0 keeps the decayed schedule
    phase2_epsilon_restart: float = 0.3

    def __post_init__(self):
        if not 1 <= len(self.humans) <= 2:
            raise ValueError("scenarios support one or two occupants")
        if self.phase1_episodes < 1 or self.repetitions < 1:
            raise ValueError("episode and repetition counts must be >= 1")


@dataclass
class EpisodeLog:
    episode: int
    ticks: List[tuple]
    human_totals: List[float]
    th_changes: List[int]
    switches: List[int]
    completed: List[bool]
    shs_total: float
    n_ticks: int


def run_episode(scenario: ScenarioSpec, humans: List[HumanAgent],
                shs_agent: Optional[ShsAgent], mode: str, rng: random.Random,
                episode_idx: int = 0, record_ticks: bool = True,
                human_learning: Optional[bool] = None) -> EpisodeLog:
    """Play one episode. Evaluation mode pins epsilon to epsilon_end and
    never mutates a table."""
    if mode not in ("learning", "evaluation"):
        raise ValueError("mode must be 'learning' or 'evaluation'")
    learning = mode == "learning"
    learn_humans = learning if human_learning is None else (learning and human_learning)
    grid = scenario.grid
    ambient = make_state(grid,
                         grid.t_value(rng.randrange(grid.n_t)),
                         grid.rh_value(rng.randrange(grid.n_rh)))
    for h in humans:
        h.begin_episode()
    if shs_agent is not None:
        shs_agent.begin_episode()
    eps_h = [h.epsilon() if learn_humans else h.config.epsilon_end for h in humans]
    eps_s = 0.0
    if shs_agent is not None:
        eps_s = shs_agent.epsilon() if learning else shs_agent.config.epsilon_end

    n = len(humans)
    totals = [0.0] * n
    th_changes = [0] * n
    switches = [0] * n
    shs_total = 0.0
    ticks = []
    t = 0
    while t < scenario.max_ticks_per_episode and not all(h.done for h in humans):
        th_this_tick = []
        row_h = []
        for i, h in enumerate(humans):
            res = h.step(ambient, eps_h[i], rng)
            if res is None:
                row_h.extend((-2, -1, -1, 0.0, 0.0, 0.0, 0.0))  # finished
                continue
            prim, reward, pmv_value, activity, progress = res
            totals[i] += reward
            if prim in TH_PRIMITIVES:
                th_changes[i] += 1
                th_this_tick.append(prim)
                ambient = apply_th_action(ambient, th_action_of(prim), grid,
                                          scenario.coupling)
            elif prim == LEAVE:
                switches[i] += 1
            row_h.extend((activity, progress, prim, reward, pmv_value,
                          h.last_qc, h.last_qe))
        ambient = thermo_tick(ambient, grid)
        shs_action_val = -1
        penalty = 0.0
        if shs_agent is not None and scenario.shs_enabled:
            obs = shs_observation(ambient.t_idx, ambient.rh_idx,
                                  [h.act for h in humans])
            shs_agent.settle(th_this_tick, obs, learning)
            penalty = shs_reward(th_this_tick, scenario.shs_per_action_penalty)
            shs_total += penalty
            action = shs_agent.act(obs, eps_s, rng)
            shs_action_val = int(action)
            if action != ShsAction.HOLD:
                ambient = apply_th_action(ambient, ThAction(int(action)), grid,
                                          scenario.coupling)
            shs_agent.remember(obs, action)
            ambient = thermo_tick(ambient, grid)
        if record_ticks:
            ticks.append((episode_idx, t, ambient.temp, ambient.rh,
                          ambient.temp_setpoint, ambient.rh_setpoint,
                          shs_action_val, penalty, *row_h))
        t += 1

    for h in humans:
        h.end_episode(ambient, learn_humans)
    if shs_agent is not None:
        shs_agent.end_episode(learning)
    return EpisodeLog(episode=episode_idx, ticks=ticks,
                      human_totals=totals, th_changes=th_changes,
                      switches=switches, completed=[h.done for h in humans],
                      shs_total=shs_total, n_ticks=t)


def make_agents(scenario: ScenarioSpec) -> List[HumanAgent]:
    return [HumanAgent(spec, scenario.curves, scenario.resume_mode, scenario.grid)
            for spec in scenario.humans]


def train(scenario: ScenarioSpec, seed: Optional[int] = None,
          after_phase1=None, episode_hook=None):
    """Two-phase protocol: occupants alone, then occupants plus a fresh
    controller. Returns (humans, shs_agent, manifest)."""
    seed = scenario.seed if seed is None else seed
    rng = random.Random(seed)
    humans = make_agents(scenario)
    t0 = time.time()
    for ep in range(scenario.phase1_episodes):
        run_episode(scenario, humans, None, "learning", rng,
                    episode_idx=ep, record_ticks=False)
        if episode_hook is not None:
            episode_hook("phase1", ep, humans, None)
    if after_phase1 is not None:
        after_phase1(humans)
    shs_agent = None
    if scenario.shs_enabled and scenario.phase2_episodes > 0:
        prior = None
        if scenario.shs_comfort_prior:
            prior = comfort_prior(scenario.grid, scenario.shs_prior_scale)
        shs_agent = ShsAgent(scenario.shs_learner,
                             scenario.shs_per_action_penalty, prior)
        if scenario.phase2_epsilon_restart > 0:
            for h in humans:
                h.restart_exploration(scenario.phase2_epsilon_restart)
        for ep in range(scenario.phase2_episodes):
            run_episode(scenario, humans, shs_agent, "learning", rng,
                        episode_idx=scenario.phase1_episodes + ep,
                        record_ticks=False,
                        human_learning=scenario.continue_human_learning)
            if episode_hook is not None:
                episode_hook("phase2", ep, humans, shs_agent)
    manifest = {
        "scenario": scenario.name,
        "seed": seed,
        "version": __version__,
        "wall_clock_s": round(time.time() - t0, 3),
    }
    return humans, shs_agent, manifest


def evaluate(scenario: ScenarioSpec, humans: List[HumanAgent],
             shs_agent: Optional[ShsAgent], seed: int,
             record_ticks: bool = True) -> List[EpisodeLog]:
    """Run the evaluation set with frozen tables and pinned epsilon."""
    rng = random.Random(seed * 1_000_003 + 17)
    return [run_episode(scenario, humans, shs_agent, "evaluation", rng,
                        episode_idx=ep, record_ticks=record_ticks)
            for ep in range(scenario.eval_episodes)]
