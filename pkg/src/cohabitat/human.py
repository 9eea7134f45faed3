"""Occupant models: activity reward/penalty curves, task hierarchy, profiles.

Three activities -- rest (0), leisure (1), physical workout (2) -- hang off
a root chooser. Inside an activity the occupant can continue, leave, or
nudge one of the two climate setpoints.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

from . import hrl
from .comfort import ComfortProfile, PmvInput, discomfort, pmv, CLO_PER_ACTIVITY
from .thermo import AmbientState, ThAction, ThermalGrid

# node ids
ROOT = 0
ACTIVITY_NODES = (1, 2, 3)
CONTINUE, LEAVE, TEMP_UP, TEMP_DOWN, HUM_UP, HUM_DOWN = 4, 5, 6, 7, 8, 9
PRIMITIVES = (CONTINUE, LEAVE, TEMP_UP, TEMP_DOWN, HUM_UP, HUM_DOWN)
TH_PRIMITIVES = (TEMP_UP, TEMP_DOWN, HUM_UP, HUM_DOWN)
AT_ROOT = -1
ALL_DONE_MASK = 0b111
# continues required after (re)entering an activity before leave is offered;
# matches the default subtask length
_LEAVE_COMMIT = 5
ACTIVITY_NAMES = ("rest", "leisure", "workout")


def th_action_of(primitive: int) -> ThAction:
    return ThAction(primitive - TEMP_UP)


@dataclass(frozen=True)
class ActivityCurves:
    n_act: int = 20
    subtask_len: int = 5
    c_max: Tuple[float, float, float] = (1.5, 1.0, 2.0)
    completion_bonus: float = 5.0
    # piecewise-linear reward shape parameters
    rest_start: float = 0.2
    rest_peak: float = 2.0
    rest_end: float = 1.0
    leisure_start: float = 2.0
    leisure_end: float = 0.2
    workout_start: float = 0.2
    workout_peak: float = 2.0
    workout_dip: float = 0.8
    workout_late_bonus: float = 3.0

    def __post_init__(self):
        if self.n_act % self.subtask_len:
            raise ValueError("subtask_len must divide n_act")


def _lerp(a: float, b: float, frac: float) -> float:
    return a + (b - a) * frac


def activity_reward(activity: int, p: int, curves: ActivityCurves) -> float:
    """Reward for being p steps into an activity; completion pays a bonus."""
    n = curves.n_act
    if not 0 <= p <= n:
        raise ValueError(f"progress {p} outside [0, {n}]")
    if activity == 0:  # rest: rise to a mid-way peak, then taper
        half = n / 2
        if p <= half:
            r = _lerp(curves.rest_start, curves.rest_peak, p / half)
        else:
            r = _lerp(curves.rest_peak, curves.rest_end, (p - half) / (n - half))
    elif activity == 1:  # leisure: monotone decline
        r = _lerp(curves.leisure_start, curves.leisure_end, p / n)
    elif activity == 2:  # workout: peak, fatigue dip, late push-through bonus
        peak_at, dip_at = 0.6 * n, 0.9 * n
        if p <= peak_at:
            r = _lerp(curves.workout_start, curves.workout_peak, p / peak_at)
        elif p <= dip_at:
            r = _lerp(curves.workout_peak, curves.workout_dip,
                      (p - peak_at) / (dip_at - peak_at))
        else:
            r = curves.workout_late_bonus
    else:
        raise ValueError(f"unknown activity {activity}")
    if p == n:
        r += curves.completion_bonus
    return r


def leave_penalty(activity: int, p: int, curves: ActivityCurves) -> float:
    """Sawtooth recall cost; zero exactly at subtask boundaries."""
    if not 0 <= p <= curves.n_act:
        raise ValueError(f"progress {p} outside [0, {curves.n_act}]")
    sub = curves.subtask_len
    rem = p % sub
    if rem == 0:
        return 0.0
    return curves.c_max[activity] * (sub - rem) / sub


@dataclass(frozen=True)
class HumanModelSpec:
    name: str
    met_indices: Tuple[float, float, float]
    reward_variant: str  # "R1" or "R2"
    band_halfwidth: float
    learner: hrl.LearnerConfig = field(default_factory=hrl.LearnerConfig)
    clo_indices: Tuple[float, float, float] = CLO_PER_ACTIVITY

    def __post_init__(self):
        if self.reward_variant not in ("R1", "R2"):
            raise ValueError("reward_variant must be R1 or R2")

    def with_band(self, band: float) -> "HumanModelSpec":
        return HumanModelSpec(self.name, self.met_indices, self.reward_variant,
                              band, self.learner, self.clo_indices)

    def comfort_profile(self) -> ComfortProfile:
        return ComfortProfile(met_per_activity=self.met_indices,
                              clo_per_activity=self.clo_indices,
                              band_halfwidth=self.band_halfwidth)


# calibrated on the single-occupant scenarios: the visit schedule gives
# early samples full weight in rarely seen cells, and the near-zero epsilon
# floor keeps evaluation episodes essentially greedy so behavioral metrics
# reflect the learned policy rather than exploration noise
HUMAN_LEARNER = hrl.LearnerConfig(alpha=0.2, gamma=0.95, epsilon_decay=0.99,
                                  epsilon_end=0.05, alpha_schedule="visit")

PROFILES = {
    "H_A": HumanModelSpec("H_A", (1.0, 1.3, 1.8), "R1", 0.5, HUMAN_LEARNER),
    "H_B": HumanModelSpec("H_B", (1.10, 1.35, 1.75), "R1", 0.5, HUMAN_LEARNER),
    "H_C": HumanModelSpec("H_C", (1.80, 1.35, 1.15), "R2", 0.25, HUMAN_LEARNER),
    "H_C_prime": HumanModelSpec("H_C_prime", (1.75, 1.30, 1.15), "R2", 0.25,
                                HUMAN_LEARNER),
    "H_D": HumanModelSpec("H_D", (1.15, 1.25, 1.85), "R2", 0.25, HUMAN_LEARNER),
}


class HumanState(NamedTuple):
    """Snapshot the learner keys on. act == -1 encodes the at-root phase.

    The trailing fields shape the admissible set but are not part of any
    learned state key: blocked marks setpoint nudges that cannot take
    effect because the corresponding setpoint already sits at its clamp,
    advanced counts the progress steps made since (re)entering the current
    activity, last_press remembers the previous tick's setpoint nudge so
    it cannot be reversed immediately, and comfy flags that the occupant
    currently feels no discomfort, in which case nobody reaches for the
    setpoints at all.
    """
    completed: int            # bitmask over activities
    act: int                  # current activity, or -1
    progress: Tuple[int, int, int]
    t_idx: int
    rh_idx: int
    blocked: int = 0          # bit k blocks TH_PRIMITIVES[k]
    advanced: int = 99        # continues since entering the activity
    last_press: int = 0       # setpoint primitive taken last tick, or 0
    comfy: int = 0            # 1 when discomfort is zero in the current cell


def blocked_presses(ambient: AmbientState, grid: ThermalGrid) -> int:
    """Bitmask of setpoint nudges that would leave the state unchanged."""
    mask = 0
    if ambient.temp_setpoint >= grid.t_max:
        mask |= 1 << (TEMP_UP - TEMP_UP)
    if ambient.temp_setpoint <= grid.t_min:
        mask |= 1 << (TEMP_DOWN - TEMP_UP)
    if ambient.rh_setpoint >= grid.rh_max:
        mask |= 1 << (HUM_UP - TEMP_UP)
    if ambient.rh_setpoint <= grid.rh_min:
        mask |= 1 << (HUM_DOWN - TEMP_UP)
    return mask


def _state_key(node: int, s: HumanState):
    if node == ROOT:
        return (ROOT, s.completed, s.t_idx, s.rh_idx)
    act = node - 1
    return (node, s.progress[act], s.t_idx, s.rh_idx)


def _terminated(node: int, s: HumanState) -> bool:
    if node == ROOT:
        return s.completed == ALL_DONE_MASK
    return s.act != node - 1


def _exhausted(node: int, s: HumanState) -> bool:
    if node == ROOT:
        return s.completed == ALL_DONE_MASK
    return bool(s.completed & (1 << (node - 1)))


def _admissible(node: int, s: HumanState):
    if node == ROOT:
        return tuple(n for n in ACTIVITY_NODES
                     if not s.completed & (1 << (n - 1)))
    # setpoint presses are discomfort-driven: inside the comfort band the
    # occupant has no reason to touch the controls. Presses pinned at a
    # clamp do nothing, and a press cannot be undone on the very next tick;
    # offering either would let a frozen greedy policy loop forever
    if s.comfy:
        th = ()
    else:
        undo = s.last_press ^ 1 if s.last_press in TH_PRIMITIVES else 0
        th = tuple(p for p in TH_PRIMITIVES
                   if not s.blocked & (1 << (p - TEMP_UP)) and p != undo)
    # an occupant commits to one subtask unit per visit: leaving is offered
    # only after a full unit of continues since (re)entry, otherwise tight
    # enter/leave cycles farm the discomfort refund under reward variant R2
    if s.progress[node - 1] == 0 or s.advanced < _LEAVE_COMMIT:
        return (CONTINUE,) + th
    return (CONTINUE, LEAVE) + th


def build_hierarchy(spec: HumanModelSpec, curves: ActivityCurves) -> hrl.Hierarchy:
    nodes = [hrl.TaskNode(ROOT, hrl.COMP, ACTIVITY_NODES, None)]
    nodes += [hrl.TaskNode(n, hrl.COMP, PRIMITIVES, ROOT) for n in ACTIVITY_NODES]
    nodes += [hrl.TaskNode(p, hrl.PRIM, (), None) for p in PRIMITIVES]
    return hrl.Hierarchy(nodes, state_key=_state_key, terminated=_terminated,
                         admissible=_admissible, exhausted=_exhausted)


def human_reward(spec: HumanModelSpec, curves: ActivityCurves,
                 state: HumanState, action: int, pmv_value: float) -> float:
    """Primitive reward under the model's R1/R2 variant."""
    d = discomfort(pmv_value, spec.band_halfwidth)
    act = state.act
    if action == CONTINUE:
        return activity_reward(act, state.progress[act] + 1, curves) - d
    if action == LEAVE:
        r = -leave_penalty(act, state.progress[act], curves)
        if spec.reward_variant == "R2":
            r += d
        return r
    if action in TH_PRIMITIVES:
        return -d
    raise ValueError(f"unknown primitive {action}")


class HumanAgent:
    """One occupant: hierarchy, tables, and per-episode execution state."""

    def __init__(self, spec: HumanModelSpec, curves: ActivityCurves,
                 resume_mode: str = "resume", grid: Optional[ThermalGrid] = None):
        if resume_mode not in ("resume", "boundary", "reset"):
            raise ValueError("resume_mode must be 'resume', 'boundary' or 'reset'")
        self.spec = spec
        self.curves = curves
        self.resume_mode = resume_mode
        self.grid = grid or ThermalGrid()
        self.hierarchy = build_hierarchy(spec, curves)
        # an untested primitive is valued at the reward the occupant knows it
        # would yield right now (people can tell how a step would feel before
        # taking it); a constant default in either direction creates absorbing
        # loops under a frozen greedy policy
        self._pmv_cache = {}
        self.q = hrl.DecomposedQ(reward_fn=self._known_reward)
        self.config = spec.learner
        self.episodes_trained = 0
        self.begin_episode()

    def _grid_pmv(self, activity: int, t_idx: int, rh_idx: int) -> float:
        key = (activity, t_idx, rh_idx)
        if key not in self._pmv_cache:
            profile = self.spec.comfort_profile()
            temp = self.grid.t_value(t_idx)
            self._pmv_cache[key] = pmv(PmvInput(
                temp, profile.radiant(temp), profile.air_speed,
                self.grid.rh_value(rh_idx),
                self.spec.met_indices[activity], self.spec.clo_indices[activity]))
        return self._pmv_cache[key]

    def _known_reward(self, action: int, ctx: int, s: HumanState) -> float:
        act = ctx - 1
        pmv_value = self._grid_pmv(act, s.t_idx, s.rh_idx)
        d = discomfort(pmv_value, self.spec.band_halfwidth)
        if action == CONTINUE:
            return activity_reward(act, s.progress[act] + 1, self.curves) - d
        if action == LEAVE:
            r = -leave_penalty(act, s.progress[act], self.curves)
            if self.spec.reward_variant == "R2":
                r += d
            return r
        return -d

    # ---- episode lifecycle -------------------------------------------------
    def begin_episode(self):
        self.completed = 0
        self.act = AT_ROOT
        self.advanced = 99
        self.last_press = 0
        self.progress = [0, 0, 0]
        self.trajectory = []
        self._pending_prim = None   # (node, s, action, reward)
        self._pending_root = None   # (s_root, activity_node, penalty, start_steps)
        self._steps = 0
        self.last_qc = 0.0          # decomposition values of the latest
        self.last_qe = 0.0          # chosen primitive, for tick logs

    @property
    def done(self) -> bool:
        return self.completed == ALL_DONE_MASK

    def observe(self, ambient: AmbientState) -> HumanState:
        return HumanState(self.completed, self.act, tuple(self.progress),
                          ambient.t_idx, ambient.rh_idx,
                          blocked_presses(ambient, self.grid), self.advanced,
                          self.last_press, self._comfy(ambient))

    def _comfy(self, ambient: AmbientState) -> int:
        if self.act == AT_ROOT:
            return 0
        v = self._grid_pmv(self.act, ambient.t_idx, ambient.rh_idx)
        return int(discomfort(v, self.spec.band_halfwidth) == 0.0)

    def pmv_at(self, ambient: AmbientState, activity: int) -> float:
        met = self.spec.met_indices[activity]
        clo = self.spec.clo_indices[activity]
        profile = self.spec.comfort_profile()
        return pmv(PmvInput(ambient.temp, profile.radiant(ambient.temp),
                            profile.air_speed, ambient.rh, met, clo))

    def _flush_pending(self, s: HumanState):
        if self._pending_prim is not None:
            node, ps, action, reward = self._pending_prim
            self.trajectory.append(hrl.PrimitiveStep(action, node, ps, reward))
            self.trajectory.append(
                hrl.CompositeTransition(node, ps, action, s, 1, 0.0))
            self._pending_prim = None
        if self._pending_root is not None and self.act == AT_ROOT:
            rs, anode, penalty, start = self._pending_root
            self.trajectory.append(hrl.CompositeTransition(
                ROOT, rs, anode, s, max(self._steps - start, 1), penalty))
            self._pending_root = None

    def step(self, ambient: AmbientState, epsilon: float, rng):
        """Choose and apply one primitive. Returns (primitive, reward,
        pmv_value, activity, progress_after) or None when the occupant has
        finished everything."""
        s = self.observe(ambient)
        self._flush_pending(s)
        if self.done:
            return None
        if self.act == AT_ROOT:
            node = hrl.select_action(self.q, self.hierarchy, ROOT, s, epsilon, rng)
            self._pending_root = (s, node, 0.0, self._steps)
            self.act = node - 1
            self.advanced = 0
            s = self.observe(ambient)
        act = self.act
        node = act + 1
        prim = hrl.select_action(self.q, self.hierarchy, node, s, epsilon, rng)
        key = _state_key(node, s)
        self.last_qc = self.q.q_c.get((node, key, prim), 0.0)
        self.last_qe = self.q.q_e.get((node, key, prim), 0.0)
        pmv_value = self.pmv_at(ambient, act)
        reward = human_reward(self.spec, self.curves, s, prim, pmv_value)
        # apply the primitive's effect on this occupant
        if prim == CONTINUE:
            self.progress[act] += 1
            self.advanced += 1
            if self.progress[act] >= self.curves.n_act:
                self.completed |= 1 << act
                self.act = AT_ROOT
        elif prim == LEAVE:
            p = self.progress[act]
            penalty = leave_penalty(act, p, self.curves)
            if self.resume_mode == "boundary":
                self.progress[act] = (p // self.curves.subtask_len) * self.curves.subtask_len
            elif self.resume_mode == "reset":
                self.progress[act] = 0
            # default "resume": progress is kept; the recall cost is the
            # penalty itself, so redoing steps never pays the curve twice
            self.act = AT_ROOT
            if self._pending_root is not None:
                rs, anode, _, start = self._pending_root
                self._pending_root = (rs, anode, -penalty, start)
        self.last_press = prim if prim in TH_PRIMITIVES else 0
        self._steps += 1
        self._pending_prim = (node, s, prim, reward)
        return prim, reward, pmv_value, act, self.progress[act]

    def end_episode(self, ambient: AmbientState, learning: bool):
        final = self.observe(ambient)
        self._flush_pending(final)
        if self._pending_root is not None:
            # episode truncated mid-activity
            rs, anode, pen, start = self._pending_root
            self.trajectory.append(hrl.CompositeTransition(
                ROOT, rs, anode, final, max(self._steps - start, 1), pen))
            self._pending_root = None
        if learning:
            hrl.update_from_trajectory(self.q, self.hierarchy,
                                       self.trajectory, self.config)
            self.episodes_trained += 1
        self.trajectory = []

    def epsilon(self) -> float:
        return self.config.epsilon_at(self.episodes_trained)

    def restart_exploration(self, epsilon: float):
        """Rewind the exploration schedule to the given rate.

        A frozen near-greedy policy cannot notice that the world changed;
        rewinding the schedule models an occupant re-exploring after a
        clear change in their environment.
        """
        c = self.config
        if c.epsilon_decay >= 1.0 or epsilon >= c.epsilon_start:
            self.episodes_trained = 0
            return
        n = int(math.log(epsilon / c.epsilon_start) / math.log(c.epsilon_decay))
        self.episodes_trained = min(self.episodes_trained, n)
