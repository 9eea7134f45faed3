"""The smart-home controller: flat Q-learning over (TH bins, activity)."""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Dict, Optional, Tuple

from .comfort import PmvInput, pmv
from .hrl import LearnerConfig
from .thermo import ThAction, ThermalGrid

ROOT_SYMBOL = -1  # occupant currently between activities


class ShsAction(IntEnum):
    TEMP_UP = 0
    TEMP_DOWN = 1
    HUM_UP = 2
    HUM_DOWN = 3
    HOLD = 4


N_ACTIONS = len(ShsAction)

# calibrated controller schedule: a short exploration burst, then near-greedy
# behavior so occupants face a consistent partner while they adapt; the
# constant step size lets the comfort prior fade gradually instead of being
# overwritten by the first sample
SHS_LEARNER = LearnerConfig(alpha=0.15, gamma=0.5, epsilon_start=0.5,
                            epsilon_decay=0.92, epsilon_end=0.05)


def shs_observation(t_idx: int, rh_idx: int, activities) -> Tuple:
    """Observation key; activity signature is a single id or an ordered pair."""
    sig = activities[0] if len(activities) == 1 else tuple(activities)
    return (t_idx, rh_idx, sig)


# the standard reference occupant the controller is designed around: the
# average-model met rates per activity and the standard clothing set
REFERENCE_MET = (1.0, 1.3, 1.8)
REFERENCE_CLO = (0.5, 0.67, 0.36)


HOLD_DEADBAND = 0.1  # reference-PMV gain a press must clear to beat holding


def comfort_prior(grid: ThermalGrid, scale: float = 2.0,
                  floor: float = -2.0) -> Callable:
    """Default action values from the building's built-in comfort model.

    Every value sits near the floor, offset by how much the action is
    expected to reduce discomfort (one grid bin per press, judged by the
    standard comfort model for whatever activity the observation reports).
    Holding carries a deadband credit so the controller only acts on
    improvements that are worth more than chasing the exact optimum across
    neighboring bins forever.
    The model assumes the reference occupant, not whoever actually lives
    here, so it can be systematically wrong for atypical residents.
    The prior only seeds untried entries; once a cell has been visited the
    learned value stands on its own, so sustained occupant pushback can
    overturn the model's advice for that cell.
    """
    cache = {}

    def cell_discomfort(sig, t_idx: int, rh_idx: int) -> Optional[float]:
        acts = (sig,) if isinstance(sig, int) else tuple(sig)
        key = (acts, t_idx, rh_idx)
        if key not in cache:
            temp = grid.t_value(t_idx)
            rh = grid.rh_value(rh_idx)
            vals = [abs(pmv(PmvInput(temp, temp, 0.0, rh,
                                     REFERENCE_MET[a], REFERENCE_CLO[a])))
                    for a in acts if a != ROOT_SYMBOL]
            cache[key] = sum(vals) / len(vals) if vals else None
        return cache[key]

    def prior(obs, action) -> float:
        t_idx, rh_idx, sig = obs
        a = int(action)
        nt, nr = t_idx, rh_idx
        if a == int(ShsAction.TEMP_UP):
            nt = min(t_idx + 1, grid.n_t - 1)
        elif a == int(ShsAction.TEMP_DOWN):
            nt = max(t_idx - 1, 0)
        elif a == int(ShsAction.HUM_UP):
            nr = min(rh_idx + 1, grid.n_rh - 1)
        elif a == int(ShsAction.HUM_DOWN):
            nr = max(rh_idx - 1, 0)
        before = cell_discomfort(sig, t_idx, rh_idx)
        if before is None:
            # nobody is in an activity; prefer standing still
            return floor + (0.1 if a == int(ShsAction.HOLD) else 0.0)
        if a == int(ShsAction.HOLD):
            return floor + scale * HOLD_DEADBAND
        after = cell_discomfort(sig, nt, nr)
        return floor + scale * (before - after)

    return prior


@dataclass
class ShsQTable:
    values: Dict[Tuple, float] = field(default_factory=dict)
    # assumed value of an untried (obs, action); every reward here is <= 0,
    # so a zero default would steer a frozen greedy policy toward exactly
    # the actions it has never tested
    unseen_value: float = 0.0
    # optional comfort-model prior: the assumed value of an untried entry.
    # Experience starts from the prior and may move either way, so repeated
    # occupant pushback can teach the controller to stop correcting a cell
    prior: Optional[Callable] = None
    visits: Dict[Tuple, int] = field(default_factory=dict)

    def get(self, obs, action) -> float:
        key = (obs, action)
        if key in self.values:
            return self.values[key]
        if self.prior is None:
            return self.unseen_value
        return self.prior(obs, action)

    def max_value(self, obs) -> float:
        return max(self.get(obs, a) for a in range(N_ACTIONS))

    def snapshot_lines(self):
        return sorted(f"q({obs!r},{a}) {v!r}"
                      for (obs, a), v in self.values.items() if v != 0.0)


def shs_act(q: ShsQTable, obs, epsilon: float, rng) -> ShsAction:
    """Epsilon-greedy over the five setpoint actions, lowest index on ties."""
    if epsilon > 0.0 and rng.random() < epsilon:
        return ShsAction(rng.randrange(N_ACTIONS))
    best, best_v = 0, None
    for a in range(N_ACTIONS):
        v = q.get(obs, a)
        if best_v is None or v > best_v:
            best, best_v = a, v
    return ShsAction(best)


_TH_TOUCH = frozenset(ThAction) | frozenset(range(6, 10))  # occupant TH primitives


def shs_reward(human_actions_this_tick, per_action: bool = False) -> float:
    """-1 whenever an occupant touched the setpoints this tick.

    Accepts occupant primitive ids or ThAction members. The default clamps
    simultaneous changes by two occupants to a single -1; per_action=True
    counts each change instead.
    """
    n = sum(1 for a in human_actions_this_tick if a in _TH_TOUCH)
    if per_action:
        return -float(n)
    return -1.0 if n else 0.0


def shs_update(q: ShsQTable, obs, action, reward: float, next_obs,
               alpha: float, gamma: float, terminal: bool = False,
               visit_schedule: bool = False) -> ShsQTable:
    """One-step Q backup."""
    bootstrap = 0.0 if terminal else gamma * q.max_value(next_obs)
    key = (obs, int(action))
    if visit_schedule:
        n = q.visits[key] = q.visits.get(key, 0) + 1
        alpha = max(alpha, 1.0 / n)
    old = q.get(obs, action)
    q.values[key] = (1.0 - alpha) * old + alpha * (reward + bootstrap)
    return q


class ShsAgent:
    """Controller state: table, schedule position, and the delayed backup.

    The reward for an action only becomes observable at the next tick
    (did anyone touch the setpoints?), so transitions are held pending for
    one tick before the backup is applied.
    """

    def __init__(self, config: LearnerConfig = LearnerConfig(),
                 per_action_penalty: bool = False,
                 prior: Optional[Callable] = None):
        # reward lower bound: a press every tick forever
        self.q = ShsQTable(unseen_value=-1.0 / (1.0 - config.gamma),
                           prior=prior)
        self.config = config
        self.per_action_penalty = per_action_penalty
        self.episodes_trained = 0
        self._pending = None

    def begin_episode(self):
        self._pending = None

    def epsilon(self) -> float:
        return self.config.epsilon_at(self.episodes_trained)

    def act(self, obs, epsilon: float, rng) -> ShsAction:
        return shs_act(self.q, obs, epsilon, rng)

    def settle(self, human_th_actions, next_obs, learning: bool):
        """Complete the pending transition now that its reward is known."""
        if self._pending is not None and learning:
            obs, action = self._pending
            r = shs_reward(human_th_actions, self.per_action_penalty)
            shs_update(self.q, obs, action, r, next_obs,
                       self.config.alpha, self.config.gamma,
                       visit_schedule=self.config.alpha_schedule == "visit")
        self._pending = None

    def remember(self, obs, action):
        self._pending = (obs, action)

    def end_episode(self, learning: bool):
        if self._pending is not None and learning:
            obs, action = self._pending
            shs_update(self.q, obs, action, 0.0, None,
                       self.config.alpha, self.config.gamma, terminal=True,
                       visit_schedule=self.config.alpha_schedule == "visit")
        self._pending = None
        if learning:
            self.episodes_trained += 1
