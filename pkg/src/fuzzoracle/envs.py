"""Built-in reference environments.

Two deterministic testbeds with pluggable reward functions:

* a frozen-lake style grid world (discrete states and actions), and
* a hill-car control problem (continuous states, scalar force action).

The reward passed to the learner is whatever callable the caller injects,
which is how intended-policy rewards replace the native goal reward during
oracle runs. Native rewards remain available for the additive mode and for
standalone demos.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidActionError, InvalidEnvSpecError
from .spaces import BoxSpace, DiscreteSpace, GridSpace

# Grid action ids follow the classic frozen-lake order.
LEFT, DOWN, RIGHT, UP = 0, 1, 2, 3
GRID_MOVES = {LEFT: (0, -1), DOWN: (1, 0), RIGHT: (0, 1), UP: (-1, 0)}

DEFAULT_HOLES = ((1, 1), (1, 3), (2, 3), (3, 0))


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid with hole and goal cells; episodes start at (0, 0)."""

    rows: int = 4
    cols: int = 4
    holes: tuple = DEFAULT_HOLES
    goal: tuple = (3, 3)
    slip_prob: float = 0.0
    max_steps_per_epoch: int = 200

    kind = "grid"

    def __post_init__(self):
        space = GridSpace(self.rows, self.cols)
        if self.rows < 1 or self.cols < 1:
            raise InvalidEnvSpecError("grid needs at least one row and column")
        if self.max_steps_per_epoch < 1:
            raise InvalidEnvSpecError("max_steps_per_epoch must be >= 1")
        if not 0.0 <= self.slip_prob <= 1.0:
            raise InvalidEnvSpecError("slip_prob must lie in [0, 1]")
        if not space.contains(self.goal):
            raise InvalidEnvSpecError(f"goal {self.goal} outside the grid")
        for hole in self.holes:
            if not space.contains(hole):
                raise InvalidEnvSpecError(f"hole {hole} outside the grid")
        if self.goal in self.holes:
            raise InvalidEnvSpecError("goal cell cannot also be a hole")
        if (0, 0) in self.holes or (0, 0) == self.goal:
            raise InvalidEnvSpecError("start cell (0, 0) must be non-terminal")

    def state_space(self) -> GridSpace:
        return GridSpace(self.rows, self.cols)

    def action_space(self) -> DiscreteSpace:
        return DiscreteSpace(4)

    def is_terminal(self, cell) -> bool:
        return cell == self.goal or cell in self.holes

    def non_terminal_cells(self) -> list:
        return [c for c in self.state_space().all_cells() if not self.is_terminal(c)]


@dataclass(frozen=True)
class HillCarSpec:
    """Under-powered car in a valley; classic control constants."""

    min_position: float = -1.2
    max_position: float = 0.6
    max_speed: float = 0.07
    force: float = 0.0015
    gravity: float = 0.0025
    goal_position: float = 0.45
    max_steps_per_epoch: int = 200

    kind = "hillcar"

    def __post_init__(self):
        if not self.min_position < self.goal_position <= self.max_position:
            raise InvalidEnvSpecError("goal position must sit inside the track")
        if not self.max_speed > 0:
            raise InvalidEnvSpecError("max_speed must be positive")
        if self.max_steps_per_epoch < 1:
            raise InvalidEnvSpecError("max_steps_per_epoch must be >= 1")

    def state_space(self) -> BoxSpace:
        return BoxSpace(
            lows=(self.min_position, -self.max_speed),
            highs=(self.max_position, self.max_speed),
        )

    def action_space(self) -> BoxSpace:
        return BoxSpace(lows=(-1.0,), highs=(1.0,))

    def is_terminal(self, state) -> bool:
        return state[0] >= self.goal_position


EnvSpec = GridSpec | HillCarSpec


@dataclass(frozen=True)
class Transition:
    state: tuple
    action: object
    reward: float
    next_state: tuple
    done: bool
    clamped: bool = False


def env_reset(spec: EnvSpec, rng) -> tuple:
    """Initial state for one epoch.

    The grid always starts at (0, 0). The hill car starts at a position
    drawn uniformly from [-0.6, -0.4] with zero velocity; ``rng`` is a
    numpy Generator or a seed for one.
    """
    if spec.kind == "grid":
        return (0, 0)
    gen = np.random.default_rng(rng)
    return (float(gen.uniform(-0.6, -0.4)), 0.0)


def native_reward(spec: EnvSpec, state, action, next_state, done) -> float:
    """The environment's own goal-seeking reward."""
    if spec.kind == "grid":
        return 1.0 if done and next_state == spec.goal else 0.0
    a = action[0] if isinstance(action, tuple) else action
    bonus = 100.0 if done and next_state[0] >= spec.goal_position else 0.0
    return bonus - 0.1 * a * a


def env_step(spec: EnvSpec, state, action, reward_fn=None, rng=None) -> Transition:
    """Advance one step; the reward is ``reward_fn(state, action)``.

    With ``reward_fn`` None the native reward applies. Out-of-range
    hill-car forces are clamped and flagged on the transition rather than
    rejected, so misbehaving learners stay runnable.
    """
    if spec.kind == "grid":
        return _grid_step(spec, state, action, reward_fn, rng)
    return _hillcar_step(spec, state, action, reward_fn)


def _grid_step(spec: GridSpec, state, action, reward_fn, rng) -> Transition:
    if not isinstance(action, int) or isinstance(action, bool) or action not in GRID_MOVES:
        raise InvalidActionError(f"grid action must be an int in 0..3, got {action!r}")
    effective = action
    if spec.slip_prob > 0.0:
        gen = np.random.default_rng(rng)
        if gen.random() < spec.slip_prob:
            # Slip to one of the two perpendicular directions.
            sideways = (action + 1, action + 3)
            effective = int(sideways[gen.integers(0, 2)]) % 4
    dr, dc = GRID_MOVES[effective]
    nr = min(max(state[0] + dr, 0), spec.rows - 1)
    nc = min(max(state[1] + dc, 0), spec.cols - 1)
    next_state = (nr, nc)
    done = spec.is_terminal(next_state)
    reward = (
        reward_fn(state, action)
        if reward_fn is not None
        else native_reward(spec, state, action, next_state, done)
    )
    return Transition(state, action, reward, next_state, done)


def _hillcar_step(spec: HillCarSpec, state, action, reward_fn) -> Transition:
    if isinstance(action, tuple):
        if len(action) != 1:
            raise InvalidActionError(f"hill-car action must be scalar, got {action!r}")
        force = action[0]
    elif isinstance(action, (int, float)) and not isinstance(action, bool):
        force = float(action)
    else:
        raise InvalidActionError(f"hill-car action must be numeric, got {action!r}")
    if not math.isfinite(force):
        raise InvalidActionError(f"hill-car action must be finite, got {force}")

    clamped = False
    if force < -1.0:
        force, clamped = -1.0, True
    elif force > 1.0:
        force, clamped = 1.0, True

    position, velocity = state
    velocity = velocity + force * spec.force - spec.gravity * math.cos(3.0 * position)
    velocity = min(max(velocity, -spec.max_speed), spec.max_speed)
    position = min(max(position + velocity, spec.min_position), spec.max_position)
    next_state = (position, velocity)
    done = spec.is_terminal(next_state)
    reward = (
        reward_fn(state, action)
        if reward_fn is not None
        else native_reward(spec, state, action, next_state, done)
    )
    return Transition(state, action, reward, next_state, done, clamped)
