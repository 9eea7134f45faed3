"""Discounted hierarchically-optimal MAXQ learning over rooted task trees.

Value decomposition into three tables:
  q_r -- immediate reward of a primitive action, keyed (action, context key)
  q_c -- completion value of a subroutine after an action, keyed (node, key, action)
  q_e -- value available outside the subroutine after an action, same key shape

The root's action value never includes q_e: there is nothing external to
the root. Composite immediate values are not stored; they are evaluated
recursively from the child's tables.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

PRIM = "primitive"
COMP = "composite"


def _zero_reward(node, s, a, s2) -> float:
    return 0.0


@dataclass(frozen=True)
class TaskNode:
    id: int
    kind: str
    children: Tuple[int, ...] = ()
    parent: Optional[int] = None

    def __post_init__(self):
        if self.kind == PRIM and self.children:
            raise ValueError("primitive nodes take no children")
        if self.kind == COMP and not self.children:
            raise ValueError("composite nodes need at least one child")


@dataclass(frozen=True)
class LearnerConfig:
    gamma: float = 0.9
    alpha: float = 0.1
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay: float = 0.99
    # "constant" uses alpha as-is; "visit" uses max(alpha, 1/n) per table
    # entry so the first samples of a rarely seen state take full weight
    alpha_schedule: str = "constant"

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if self.alpha_schedule not in ("constant", "visit"):
            raise ValueError("alpha_schedule must be 'constant' or 'visit'")

    def epsilon_at(self, episode: int) -> float:
        return max(self.epsilon_end,
                   self.epsilon_start * self.epsilon_decay ** episode)


class Hierarchy:
    """Task tree plus the state lens each node sees.

    state_key(node_id, s)   -> hashable abstraction of snapshot s
    admissible(node_id, s)  -> child ids currently selectable (declared order)
    terminated(node_id, s)  -> the running invocation of node ends in s
    exhausted(node_id, s)   -> node can never again produce value from s
                               (defaults to terminated)
    node_reward(node, s, a, s2) -> reward granted at this node's level for
                               the child transition (defaults to 0)
    """

    def __init__(self, nodes: Sequence[TaskNode],
                 state_key: Callable,
                 terminated: Callable,
                 admissible: Optional[Callable] = None,
                 exhausted: Optional[Callable] = None,
                 node_reward: Optional[Callable] = None):
        self.nodes = {n.id: n for n in nodes}
        if 0 not in self.nodes or self.nodes[0].kind != COMP:
            raise ValueError("node 0 must exist and be composite")
        for n in nodes:
            for c in n.children:
                # primitives may be shared between composites; only composite
                # children need an unambiguous parent (q_e looks it up)
                if self.nodes[c].kind == COMP and self.nodes[c].parent != n.id:
                    raise ValueError(f"node {c} parent link broken")
        self.root = self.nodes[0]
        self.state_key = state_key
        self.terminated = terminated
        self._admissible = admissible
        self.exhausted = exhausted or terminated
        self.node_reward = node_reward or _zero_reward

    def admissible(self, node_id: int, s):
        if self._admissible is None:
            return self.nodes[node_id].children
        return self._admissible(node_id, s)

    def is_primitive(self, node_id: int) -> bool:
        return self.nodes[node_id].kind == PRIM


@dataclass
class DecomposedQ:
    q_r: Dict = field(default_factory=dict)
    q_c: Dict = field(default_factory=dict)
    q_e: Dict = field(default_factory=dict)
    # value assumed for a primitive never tried in a state; a pessimistic
    # setting (the reward lower bound) keeps untested actions from looking
    # better than tested ones under a frozen policy
    unseen_value: float = 0.0
    # optional exact fallback (action, ctx, state) -> immediate reward, for
    # domains where the agent can evaluate its own reward function; takes
    # precedence over unseen_value when set
    reward_fn: Optional[Callable] = None
    visits: Dict = field(default_factory=dict)

    def copy(self) -> "DecomposedQ":
        return DecomposedQ(dict(self.q_r), dict(self.q_c), dict(self.q_e),
                           self.unseen_value, self.reward_fn, dict(self.visits))


def evaluate_r(q: DecomposedQ, h: Hierarchy, action: int, s, ctx: int) -> float:
    """Immediate-value term: stored for primitives, recursive for composites."""
    if h.is_primitive(action):
        key = (action, h.state_key(ctx, s))
        if key in q.q_r:
            return q.q_r[key]
        if q.reward_fn is not None:
            return q.reward_fn(action, ctx, s)
        return q.unseen_value
    if h.exhausted(action, s):
        return 0.0
    best = greedy_action(q, h, action, s)
    if best is None:
        return 0.0
    key = h.state_key(action, s)
    return evaluate_r(q, h, best, s, action) + q.q_c.get((action, key, best), 0.0)


def q_value(q: DecomposedQ, h: Hierarchy, node: int, s, action: int) -> float:
    """Action value under the node: q_r + q_c, plus q_e below the root."""
    if action not in h.nodes[node].children:
        raise ValueError(f"action {action} is not a child of node {node}")
    key = h.state_key(node, s)
    v = evaluate_r(q, h, action, s, node) + q.q_c.get((node, key, action), 0.0)
    if node != 0:
        v += q.q_e.get((node, key, action), 0.0)
    return v


def greedy_action(q: DecomposedQ, h: Hierarchy, node: int, s) -> Optional[int]:
    """Argmax child by q_value; ties go to the lowest child index."""
    best, best_v = None, None
    for c in h.admissible(node, s):
        v = q_value(q, h, node, s, c)
        if best_v is None or v > best_v:
            best, best_v = c, v
    return best


def select_action(q: DecomposedQ, h: Hierarchy, node: int, s,
                  epsilon: float, rng) -> Optional[int]:
    """Epsilon-greedy over the node's admissible children."""
    options = list(h.admissible(node, s))
    if not options:
        return None
    if epsilon > 0.0 and rng.random() < epsilon:
        return options[rng.randrange(len(options))]
    return greedy_action(q, h, node, s)


# Trajectory records.
@dataclass(frozen=True)
class PrimitiveStep:
    action: int
    ctx: int          # invoking composite
    state: object     # snapshot at selection time
    reward: float


@dataclass(frozen=True)
class CompositeTransition:
    node: int
    state: object
    action: int
    next_state: object
    duration: int     # primitive steps consumed
    reward: float     # reward granted at this node's level


def run_subroutine(q: DecomposedQ, h: Hierarchy, node: int, env,
                   config: LearnerConfig, rng, epsilon: float = 0.0,
                   depth: int = 0, step_cap: int = 10000):
    """Execute a composite node to termination against an env.

    env protocol: observe() -> hashable snapshot; step(action) -> reward;
    done -> bool. Returns (final snapshot, steps, discounted reward,
    trajectory).
    """
    if depth > 16:
        raise RecursionError("task graph deeper than the supported limit")
    if h.is_primitive(node):
        raise ValueError("run_subroutine needs a composite node")
    steps = 0
    disc = 0.0
    traj = []
    s = env.observe()
    while not h.terminated(node, s) and not env.done and steps < step_cap:
        a = select_action(q, h, node, s, epsilon, rng)
        if a is None:
            break
        if h.is_primitive(a):
            r = env.step(a)
            s2 = env.observe()
            traj.append(PrimitiveStep(a, node, s, r))
            t, sub_disc = 1, r
        else:
            s2, t, sub_disc, sub_traj = run_subroutine(
                q, h, a, env, config, rng, epsilon, depth + 1, step_cap - steps)
            traj.extend(sub_traj)
        node_r = h.node_reward(node, s, a, s2)
        traj.append(CompositeTransition(node, s, a, s2, max(t, 1), node_r))
        disc += config.gamma ** steps * (sub_disc + node_r)
        steps += t
        s = s2
    return s, steps, disc, traj


def update_from_trajectory(q: DecomposedQ, h: Hierarchy, trajectory,
                           config: LearnerConfig) -> DecomposedQ:
    """Sample backups: q_r forward, then q_c/q_e backward along the episode."""
    alpha, gamma = config.alpha, config.gamma
    if alpha == 0.0:
        return q

    def rate(entry) -> float:
        if config.alpha_schedule == "constant":
            return alpha
        n = q.visits[entry] = q.visits.get(entry, 0) + 1
        return max(alpha, 1.0 / n)

    for rec in trajectory:
        if isinstance(rec, PrimitiveStep):
            key = (rec.action, h.state_key(rec.ctx, rec.state))
            a_r = rate(("r",) + key)
            old = q.q_r.get(key, 0.0)
            q.q_r[key] = (1.0 - a_r) * old + a_r * rec.reward
    for rec in reversed(trajectory):
        if not isinstance(rec, CompositeTransition):
            continue
        i, s, a, s2, t = rec.node, rec.state, rec.action, rec.next_state, rec.duration
        key = h.state_key(i, s)
        a_c = rate(("c", i, key, a))
        # completion backup
        if h.terminated(i, s2):
            target_c = 0.0
        else:
            nxt = greedy_action(q, h, i, s2)
            if nxt is None:
                target_c = 0.0
            else:
                target_c = (evaluate_r(q, h, nxt, s2, i)
                            + q.q_c.get((i, h.state_key(i, s2), nxt), 0.0))
        old_c = q.q_c.get((i, key, a), 0.0)
        q.q_c[(i, key, a)] = ((1.0 - a_c) * old_c
                              + a_c * (rec.reward + gamma ** t * target_c))
        # external backup; the root has no exterior. The exterior only
        # becomes visible when the invocation actually ends: a terminating
        # transition bootstraps the parent's value, anything else carries
        # q_e forward inside the subroutine.
        if i != 0:
            if h.terminated(i, s2):
                p = h.nodes[i].parent
                if h.exhausted(p, s2):
                    target_e = 0.0
                else:
                    pa = greedy_action(q, h, p, s2)
                    target_e = 0.0 if pa is None else q_value(q, h, p, s2, pa)
            else:
                nxt_e = greedy_action(q, h, i, s2)
                target_e = (0.0 if nxt_e is None else
                            q.q_e.get((i, h.state_key(i, s2), nxt_e), 0.0))
            a_e = rate(("e", i, key, a))
            old_e = q.q_e.get((i, key, a), 0.0)
            q.q_e[(i, key, a)] = (1.0 - a_e) * old_e + a_e * gamma ** t * target_e
    return q


def snapshot_lines(q: DecomposedQ):
    """Serialize non-zero entries as `table(node,state-key,action) value`."""
    lines = []
    for (a, key), v in q.q_r.items():
        if v != 0.0:
            lines.append(f"q_r({a},{key!r},{a}) {v!r}")
    for name, table in (("q_c", q.q_c), ("q_e", q.q_e)):
        for (i, key, a), v in table.items():
            if v != 0.0:
                lines.append(f"{name}({i},{key!r},{a}) {v!r}")
    return sorted(lines)
