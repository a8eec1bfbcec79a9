"""Reference learners and the fault-injection registry.

Two deliberately small learners serve as the programs under test: tabular
Q-learning for the grid world and a linear-in-features actor-critic for
the hill car. Both are seeded and fully deterministic given their config.

The bug registry manufactures defective variants on demand. Each bug is a
pure config override, a behavior switch keyed off ``config.bug``, or both,
spanning four fault categories: training, model, updating the network, and
exploring the environment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    AlgorithmEnvMismatchError,
    NumericalDivergenceError,
    UnknownBugError,
)

ALGORITHMS = ("tabular_q", "linear_actor_critic")

BUG_CATEGORIES = ("training", "model", "updating_network", "exploration")


@dataclass(frozen=True)
class AgentConfig:
    """Hyperparameters for a reference learner.

    ``bug`` names a registry entry whose behavior overrides apply; configs
    without a bug must satisfy the sanity bounds below.
    """

    algorithm: str = "tabular_q"
    learning_rate: float = 0.5
    discount: float = 0.95
    epsilon_start: float = 1.0
    epsilon_end: float = 0.01
    init_value: float = 0.0
    critic_learning_rate: float = 0.2
    action_noise: float = 0.3
    feature_grid: int = 5
    seed: int = 0
    bug: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.bug is None:
            if not self.learning_rate > 0:
                raise ValueError("learning_rate must be positive")
            if not 0.0 <= self.discount <= 1.0:
                raise ValueError("discount must lie in [0, 1]")
            if not self.epsilon_start >= self.epsilon_end >= 0.0:
                raise ValueError("need epsilon_start >= epsilon_end >= 0")
            if self.algorithm == "linear_actor_critic" and not self.action_noise > 0:
                raise ValueError("action_noise must be positive")


@dataclass(frozen=True)
class BugDescriptor:
    id: str
    category: str
    description: str
    overrides: tuple = ()

    def __post_init__(self):
        if self.category not in BUG_CATEGORIES:
            raise ValueError(f"unknown bug category {self.category!r}")


BUG_REGISTRY = {
    b.id: b
    for b in (
        BugDescriptor(
            "LR_ZERO", "training",
            "learning rate silently set to zero, no update has any effect",
            (("learning_rate", 0.0),),
        ),
        BugDescriptor(
            "REWARD_NEGATED", "training",
            "the learner observes the negated reward signal",
        ),
        BugDescriptor(
            "DISCOUNT_GT_ONE", "training",
            "discount factor above one, future returns are amplified",
            (("discount", 1.2),),
        ),
        BugDescriptor(
            "Q_INIT_HUGE", "model",
            "value parameters initialized to 1e6 instead of zero",
            (("init_value", 1.0e6),),
        ),
        BugDescriptor(
            "WRONG_FEATURE_MAP", "model",
            "updates write through a permuted feature map while action "
            "selection reads the straight one",
        ),
        BugDescriptor(
            "UPDATE_SKIPPED", "updating_network",
            "every value update is dropped",
        ),
        BugDescriptor(
            "STALE_STATE", "updating_network",
            "bootstrap uses the current state where the successor belongs",
        ),
        BugDescriptor(
            "UPDATE_EVERY_OTHER", "updating_network",
            "alternate value updates are dropped",
        ),
        BugDescriptor(
            "EPSILON_FROZEN_ONE", "exploration",
            "exploration never anneals, behavior stays uniformly random",
            (("epsilon_start", 1.0), ("epsilon_end", 1.0)),
        ),
        BugDescriptor(
            "EPSILON_ZERO_START", "exploration",
            "no exploration from the first step onward",
            (("epsilon_start", 0.0), ("epsilon_end", 0.0)),
        ),
        BugDescriptor(
            "ACTION_CLAMP_WRONG", "exploration",
            "emitted actions are clamped to half the legal range",
        ),
    )
}


def inject_bug(config: AgentConfig, bug_id: str) -> AgentConfig:
    """Config for the buggy variant of ``config``.

    Applies the registry's parameter overrides and records the bug id so
    behavior switches engage inside the learner.
    """
    bug = BUG_REGISTRY.get(bug_id)
    if bug is None:
        raise UnknownBugError(f"no bug named {bug_id!r} in the registry")
    return replace(config, bug=bug_id, **dict(bug.overrides))


def _epsilon(config: AgentConfig, progress: float) -> float:
    return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * progress


class TabularQAgent:
    """Q-learning over a table indexed by grid cell and action id."""

    def __init__(self, config: AgentConfig, env_spec, rng=None):
        if env_spec.kind != "grid":
            raise AlgorithmEnvMismatchError(
                "tabular_q needs a discrete grid environment, "
                f"got {env_spec.kind!r}"
            )
        self.config = config
        self.cols = env_spec.cols
        self.n_states = env_spec.rows * env_spec.cols
        self.n_actions = 4
        init = float(config.init_value)
        self.q = [[init] * self.n_actions for _ in range(self.n_states)]
        self.rng = np.random.default_rng(config.seed if rng is None else rng)
        self._updates_seen = 0
        if config.bug == "WRONG_FEATURE_MAP":
            perm_rng = np.random.default_rng([max(config.seed, 0), 97])
            self._write_index = [int(i) for i in perm_rng.permutation(self.n_states)]
        else:
            self._write_index = None

    def state_index(self, state) -> int:
        return state[0] * self.cols + state[1]

    def act(self, state, progress: float) -> int:
        eps = _epsilon(self.config, progress)
        if eps > 0.0 and self.rng.random() < eps:
            action = int(self.rng.integers(self.n_actions))
        else:
            row = self.q[self.state_index(state)]
            action = 0
            best = row[0]
            for i in range(1, self.n_actions):
                if row[i] > best:
                    action, best = i, row[i]
        if self.config.bug == "ACTION_CLAMP_WRONG":
            action = min(action, self.n_actions // 2 - 1)
        return action

    def update(self, transition) -> None:
        config = self.config
        bug = config.bug
        if bug == "UPDATE_SKIPPED":
            return
        if bug == "UPDATE_EVERY_OTHER":
            self._updates_seen += 1
            if self._updates_seen % 2 == 0:
                return
        reward = transition.reward
        if bug == "REWARD_NEGATED":
            reward = -reward
        s = self.state_index(transition.state)
        s2 = s if bug == "STALE_STATE" else self.state_index(transition.next_state)
        bootstrap = 0.0 if transition.done else config.discount * max(self.q[s2])
        old = self.q[s][transition.action]
        value = old + config.learning_rate * (reward + bootstrap - old)
        if not math.isfinite(value):
            raise NumericalDivergenceError(
                f"Q value diverged at state {transition.state}, action {transition.action}"
            )
        write_s = self._write_index[s] if self._write_index is not None else s
        self.q[write_s][transition.action] = value

    def values(self) -> np.ndarray:
        """Copy of the Q table as an (n_states, n_actions) array."""
        return np.array(self.q, dtype=float)


class LinearActorCriticAgent:
    """Gaussian-policy actor-critic on radial basis features."""

    def __init__(self, config: AgentConfig, env_spec, rng=None):
        if env_spec.kind != "hillcar":
            raise AlgorithmEnvMismatchError(
                "linear_actor_critic needs a continuous environment, "
                f"got {env_spec.kind!r}"
            )
        self.config = config
        self.spec = env_spec
        k = config.feature_grid
        centers = np.linspace(0.0, 1.0, k)
        self._centers = np.array(
            [(cx, cy) for cx in centers for cy in centers], dtype=float
        )
        self._bandwidth = 1.0 / max(k - 1, 1)
        self.n_features = k * k + 1
        init = float(config.init_value)
        self.w_mean = np.full(self.n_features, init)
        self.w_value = np.full(self.n_features, init)
        self.rng = np.random.default_rng(config.seed if rng is None else rng)
        self._updates_seen = 0
        if config.bug == "WRONG_FEATURE_MAP":
            perm_rng = np.random.default_rng([max(config.seed, 0), 97])
            self._write_perm = perm_rng.permutation(self.n_features)
        else:
            self._write_perm = None

    def features(self, state) -> np.ndarray:
        pos = (state[0] - self.spec.min_position) / (
            self.spec.max_position - self.spec.min_position
        )
        vel = (state[1] + self.spec.max_speed) / (2.0 * self.spec.max_speed)
        diff = self._centers - (pos, vel)
        sq = diff[:, 0] ** 2 + diff[:, 1] ** 2
        phi = np.empty(self.n_features)
        phi[:-1] = np.exp(-sq / (2.0 * self._bandwidth**2))
        phi[-1] = 1.0
        return phi

    def act(self, state, progress: float) -> tuple:
        mean = float(self.w_mean @ self.features(state))
        noisy = mean + self.config.action_noise * float(self.rng.standard_normal())
        bound = 0.5 if self.config.bug == "ACTION_CLAMP_WRONG" else 1.0
        return (min(max(noisy, -bound), bound),)

    def update(self, transition) -> None:
        config = self.config
        bug = config.bug
        if bug == "UPDATE_SKIPPED":
            return
        if bug == "UPDATE_EVERY_OTHER":
            self._updates_seen += 1
            if self._updates_seen % 2 == 0:
                return
        reward = transition.reward
        if bug == "REWARD_NEGATED":
            reward = -reward
        phi = self.features(transition.state)
        if transition.done:
            future = 0.0
        else:
            successor = (
                transition.state if bug == "STALE_STATE" else transition.next_state
            )
            future = config.discount * float(self.w_value @ self.features(successor))
        td_error = reward + future - float(self.w_value @ phi)
        mean = float(self.w_mean @ phi)
        act_value = transition.action[0]
        write_phi = phi[self._write_perm] if self._write_perm is not None else phi
        self.w_value = self.w_value + config.critic_learning_rate * td_error * write_phi
        self.w_mean = self.w_mean + (
            config.learning_rate
            * td_error
            * (act_value - mean)
            / (config.action_noise**2)
        ) * write_phi
        if not (
            np.isfinite(self.w_value).all() and np.isfinite(self.w_mean).all()
        ):
            raise NumericalDivergenceError("actor-critic weights diverged")


def make_agent(config: AgentConfig, env_spec, rng=None):
    """Construct the learner named by ``config.algorithm`` for ``env_spec``."""
    if config.algorithm == "tabular_q":
        return TabularQAgent(config, env_spec, rng)
    return LinearActorCriticAgent(config, env_spec, rng)
