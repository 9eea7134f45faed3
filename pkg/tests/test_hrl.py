import random

import pytest

from cohabitat.hrl import (COMP, PRIM, CompositeTransition, DecomposedQ,
                           Hierarchy, LearnerConfig, PrimitiveStep, TaskNode,
                           greedy_action, q_value, run_subroutine,
                           select_action, update_from_trajectory)

# A three-state deterministic chain. Action 1 advances, action 2 stalls
# with a small bribe in state 0 that a myopic learner would chase.
N_STATES = 3
ADVANCE, STALL = 1, 2
REWARD = {
    (0, ADVANCE): 0.0, (0, STALL): 0.15,
    (1, ADVANCE): 2.0, (1, STALL): -0.5,
}
STEP = {
    (0, ADVANCE): 1, (0, STALL): 0,
    (1, ADVANCE): 2, (1, STALL): 1,
}


def value_iteration(gamma: float):
    v = [0.0] * N_STATES
    for _ in range(500):
        v = [max(REWARD[(s, a)] + gamma * v[STEP[(s, a)]]
                 for a in (ADVANCE, STALL)) if s < 2 else 0.0
             for s in range(N_STATES)]
    policy = {s: max((ADVANCE, STALL),
                     key=lambda a: REWARD[(s, a)] + gamma * v[STEP[(s, a)]])
              for s in range(2)}
    return v, policy


class ChainEnv:
    def __init__(self):
        self.state = 0

    @property
    def done(self):
        return self.state == 2

    def observe(self):
        return self.state

    def step(self, action):
        r = REWARD[(self.state, action)]
        self.state = STEP[(self.state, action)]
        return r


def chain_hierarchy():
    nodes = [TaskNode(0, COMP, (ADVANCE, STALL)),
             TaskNode(ADVANCE, PRIM), TaskNode(STALL, PRIM)]
    return Hierarchy(nodes,
                     state_key=lambda ctx, s: (ctx, s),
                     terminated=lambda node, s: s == 2)


class TestChainOracle:
    @pytest.mark.parametrize("gamma", [0.05, 0.9])
    def test_converges_to_value_iteration_policy_30_seeds(self, gamma):
        _, optimal = value_iteration(gamma)
        h = chain_hierarchy()
        config = LearnerConfig(gamma=gamma, alpha=0.2,
                               epsilon_end=0.05, epsilon_decay=0.99)
        for seed in range(30):
            rng = random.Random(seed)
            q = DecomposedQ()
            for ep in range(400):
                env = ChainEnv()
                _, _, _, traj = run_subroutine(
                    q, h, 0, env, config, rng,
                    epsilon=config.epsilon_at(ep), step_cap=60)
                update_from_trajectory(q, h, traj, config)
            learned = {s: greedy_action(q, h, 0, s) for s in range(2)}
            assert learned == optimal, f"seed {seed}"

    def test_gamma_switches_the_optimal_policy(self):
        # the stall bribe in state 0 only wins when the future is
        # discounted away hard enough
        _, impatient = value_iteration(0.05)
        _, patient = value_iteration(0.9)
        assert impatient[0] == STALL
        assert patient[0] == ADVANCE


class TestDecomposition:
    def test_root_value_excludes_external_table(self):
        h = chain_hierarchy()
        q = DecomposedQ()
        q.q_r[(ADVANCE, (0, 0))] = 1.0
        q.q_c[(0, (0, 0), ADVANCE)] = 0.5
        q.q_e[(0, (0, 0), ADVANCE)] = 99.0
        assert q_value(q, h, 0, 0, ADVANCE) == pytest.approx(1.5)

    def test_rejects_non_child_action(self):
        h = chain_hierarchy()
        with pytest.raises(ValueError):
            q_value(DecomposedQ(), h, 0, 0, 7)

    def test_greedy_breaks_ties_on_lowest_index(self):
        h = chain_hierarchy()
        assert greedy_action(DecomposedQ(), h, 0, 0) == ADVANCE

    def test_select_action_is_greedy_at_zero_epsilon(self):
        h = chain_hierarchy()
        q = DecomposedQ()
        q.q_r[(STALL, (0, 0))] = 5.0
        rng = random.Random(0)
        assert select_action(q, h, 0, 0, 0.0, rng) == STALL

    def test_unseen_primitive_uses_reward_fn_when_set(self):
        h = chain_hierarchy()
        q = DecomposedQ(reward_fn=lambda a, ctx, s: REWARD[(s, a)])
        assert q_value(q, h, 0, 0, STALL) == pytest.approx(0.15)


class TestUpdates:
    def test_primitive_backup_averages_with_visit_alpha(self):
        h = chain_hierarchy()
        q = DecomposedQ()
        config = LearnerConfig(alpha=0.1, alpha_schedule="visit")
        traj = [PrimitiveStep(ADVANCE, 0, 0, 4.0),
                PrimitiveStep(ADVANCE, 0, 0, 2.0)]
        update_from_trajectory(q, h, traj, config)
        # first sample lands with weight 1, second with weight 1/2
        assert q.q_r[(ADVANCE, (0, 0))] == pytest.approx(3.0)

    def test_completion_backup_discounts_by_duration(self):
        h = chain_hierarchy()
        q = DecomposedQ()
        q.q_r[(ADVANCE, (0, 1))] = 2.0
        config = LearnerConfig(alpha=1.0, gamma=0.5)
        traj = [CompositeTransition(0, 0, ADVANCE, 1, 3, 0.0)]
        update_from_trajectory(q, h, traj, config)
        # target is gamma^3 times the best action value in the next state
        assert q.q_c[(0, (0, 0), ADVANCE)] == pytest.approx(0.125 * 2.0)

    def test_terminal_transition_has_zero_completion_target(self):
        h = chain_hierarchy()
        q = DecomposedQ()
        config = LearnerConfig(alpha=1.0, gamma=0.9)
        traj = [CompositeTransition(0, 1, ADVANCE, 2, 1, 0.0)]
        update_from_trajectory(q, h, traj, config)
        assert q.q_c[(0, (0, 1), ADVANCE)] == pytest.approx(0.0)

    def test_node_reward_feeds_completion_backup(self):
        h = chain_hierarchy()
        q = DecomposedQ()
        config = LearnerConfig(alpha=1.0, gamma=0.9)
        traj = [CompositeTransition(0, 1, ADVANCE, 2, 1, -1.5)]
        update_from_trajectory(q, h, traj, config)
        assert q.q_c[(0, (0, 1), ADVANCE)] == pytest.approx(-1.5)


def two_level_hierarchy():
    # root 0 invokes composite 3; composites share primitives 1 and 2
    nodes = [TaskNode(0, COMP, (3,)),
             TaskNode(3, COMP, (ADVANCE, STALL), parent=0),
             TaskNode(ADVANCE, PRIM), TaskNode(STALL, PRIM)]
    return Hierarchy(nodes,
                     state_key=lambda ctx, s: (ctx, s),
                     terminated=lambda node, s: (s == 2 if node == 0
                                                 else s >= 1))


class TestExternalTable:
    def test_exit_bootstraps_parent_value(self):
        h = two_level_hierarchy()
        q = DecomposedQ()
        # the parent values re-invoking the child from the exit state at 7
        q.q_c[(0, (0, 1), 3)] = 7.0
        config = LearnerConfig(alpha=1.0, gamma=0.9)
        traj = [CompositeTransition(3, 0, ADVANCE, 1, 1, 0.0)]
        update_from_trajectory(q, h, traj, config)
        assert q.q_e[(3, (3, 0), ADVANCE)] == pytest.approx(0.9 * 7.0)

    def test_interior_transition_carries_q_e_forward(self):
        h = two_level_hierarchy()
        q = DecomposedQ()
        q.q_e[(3, (3, 0), ADVANCE)] = 4.0
        config = LearnerConfig(alpha=1.0, gamma=0.9)
        # a stall in state 0 stays interior to node 3
        traj = [CompositeTransition(3, 0, STALL, 0, 1, 0.0)]
        update_from_trajectory(q, h, traj, config)
        assert q.q_e[(3, (3, 0), STALL)] == pytest.approx(0.9 * 4.0)


class TestConfig:
    def test_epsilon_schedule_floors(self):
        c = LearnerConfig(epsilon_start=1.0, epsilon_end=0.1,
                          epsilon_decay=0.5)
        assert c.epsilon_at(0) == 1.0
        assert c.epsilon_at(1) == 0.5
        assert c.epsilon_at(50) == 0.1

    def test_validation(self):
        with pytest.raises(ValueError):
            LearnerConfig(gamma=1.0)
        with pytest.raises(ValueError):
            LearnerConfig(alpha=0.0)
        with pytest.raises(ValueError):
            LearnerConfig(alpha_schedule="linear")

    def test_task_node_shape_rules(self):
        with pytest.raises(ValueError):
            TaskNode(1, PRIM, children=(2,))
        with pytest.raises(ValueError):
            TaskNode(1, COMP, children=())
