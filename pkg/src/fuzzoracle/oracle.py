"""The oracle itself: generate intended policies, train against each, judge.

One oracle run generates a batch of intended policies, trains the program
under test once per policy with the matching compliance-driven reward,
turns every run log into a compliance series, trend-checks each series,
and votes: the program is NonBuggy when the healthy fraction reaches the
oracle threshold.

All randomness flows from one master seed through namespaced child seeds,
so adding policies or reordering work never perturbs existing results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .agents import AgentConfig, make_agent
from .compliance import (
    ComplianceSeries,
    EpochTrace,
    RunLog,
    TraceStep,
    make_reward_fn,
    policy_compliance_series,
)
from .envs import EnvSpec, env_reset, env_step, native_reward
from .errors import (
    NumericalDivergenceError,
    PolicyTooLargeError,
    PolicyTooSmallError,
    SamplingExhaustedError,
)
from .policy import IntendedPolicy
from .trend import TrendParams, TrendReport, trend_analysis

# Child-seed namespaces, so each random stream is independent of the others.
_NS_POLICY = 1
_NS_AGENT = 2
_NS_ENV = 3

_REJECTION_ATTEMPTS = 10_000
_MIN_NORMALIZED_GAP = 0.1

LABEL_BUGGY = "Buggy"
LABEL_NON_BUGGY = "NonBuggy"


def child_rng(*entropy) -> np.random.Generator:
    """Generator seeded by a namespaced entropy path."""
    return np.random.default_rng([int(e) for e in entropy])


@dataclass(frozen=True)
class OracleConfig:
    """Counts, thresholds, and seeds for one oracle run."""

    policies: int = 10
    epochs: int = 300
    theta_oracle: float = 0.7
    trend: TrendParams = field(default_factory=TrendParams)
    theta_step: float = 0.3
    policy_size: int | None = None
    master_seed: int = 0
    reward_scale: float = 1.0
    reward_mode: str = "replace"
    filter_mode: str = "state"

    def __post_init__(self):
        if self.policies < 1:
            raise ValueError("need at least one intended policy")
        if self.epochs < 2:
            raise ValueError("need at least two epochs")
        if not 0.0 <= self.theta_oracle <= 1.0:
            raise ValueError("theta_oracle must lie in [0, 1]")
        if not 0.0 <= self.theta_step <= 1.0:
            raise ValueError("theta_step must lie in [0, 1]")
        if self.policy_size is not None and self.policy_size < 2:
            raise ValueError("policy_size must be at least 2")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if not self.reward_scale > 0:
            raise ValueError("reward_scale must be positive")
        if self.reward_mode not in ("replace", "add"):
            raise ValueError("reward_mode must be 'replace' or 'add'")
        if self.filter_mode not in ("state", "step"):
            raise ValueError("filter_mode must be 'state' or 'step'")
        if not self.trend.window <= self.epochs - 1:
            raise ValueError("trend window must be at most epochs - 1")


@dataclass(frozen=True)
class PolicyOutcome:
    """Everything the oracle learned from one intended policy."""

    policy_id: int
    series: ComplianceSeries
    trend: TrendReport
    healthy: bool
    aborted_epochs: tuple = ()


@dataclass(frozen=True)
class Verdict:
    label: str
    per_policy: tuple
    true_count: int
    ratio: float

    @property
    def buggy(self) -> bool:
        return self.label == LABEL_BUGGY


def default_policy_size(env_spec: EnvSpec) -> int:
    return 4 if env_spec.kind == "grid" else 3


def oracle_policies(env_spec: EnvSpec, config: OracleConfig) -> list[IntendedPolicy]:
    """The intended policies an oracle run with ``config`` will use."""
    size = config.policy_size or default_policy_size(env_spec)
    return generate_policies(
        env_spec, config.policies, size, (config.master_seed, _NS_POLICY)
    )


def generate_policies(
    env_spec: EnvSpec, count: int, policy_size: int, seed
) -> list[IntendedPolicy]:
    """Random intended policies for ``env_spec``.

    Grid reference states are drawn without replacement from non-terminal
    cells; continuous ones are rejection-sampled with a minimum pairwise
    normalized gap. Ideal actions are uniform over the action space. Each
    policy derives its own child seed, so extending ``count`` preserves
    earlier policies.
    """
    if policy_size < 2:
        raise PolicyTooSmallError("policy_size must be at least 2")
    state_space = env_spec.state_space()
    action_space = env_spec.action_space()
    seed_path = seed if isinstance(seed, (list, tuple)) else (seed,)

    policies = []
    for i in range(count):
        rng = child_rng(*seed_path, i)
        if env_spec.kind == "grid":
            cells = env_spec.non_terminal_cells()
            if policy_size > len(cells):
                raise PolicyTooLargeError(
                    f"policy_size {policy_size} exceeds the "
                    f"{len(cells)} non-terminal cells"
                )
            picks = rng.choice(len(cells), size=policy_size, replace=False)
            refs = [cells[int(p)] for p in picks]
            actions = [int(a) for a in rng.integers(0, action_space.n, policy_size)]
        else:
            refs = _sample_separated_points(state_space, policy_size, rng)
            actions = [
                tuple(
                    float(rng.uniform(lo, hi))
                    for lo, hi in zip(action_space.lows, action_space.highs)
                )
                for _ in range(policy_size)
            ]
        policies.append(
            IntendedPolicy.build(list(zip(refs, actions)), state_space, action_space)
        )
    return policies


def _sample_separated_points(space, count: int, rng) -> list:
    points: list = []
    for _ in range(_REJECTION_ATTEMPTS):
        candidate = tuple(
            float(rng.uniform(lo, hi)) for lo, hi in zip(space.lows, space.highs)
        )
        if all(space.distance(candidate, p) >= _MIN_NORMALIZED_GAP for p in points):
            points.append(candidate)
            if len(points) == count:
                return points
    raise SamplingExhaustedError(
        f"could not place {count} reference states after "
        f"{_REJECTION_ATTEMPTS} attempts"
    )


def run_training_phase(
    agent_config: AgentConfig,
    env_spec: EnvSpec,
    policy: IntendedPolicy,
    epochs: int,
    seed,
    reward_scale: float = 1.0,
    reward_mode: str = "replace",
    policy_id: int = 1,
) -> RunLog:
    """Train one agent against one intended policy and log every step.

    Each epoch resets the environment and rolls out until a terminal state
    or the step budget; the budget-truncated final step is marked done so
    the learner treats the epoch as finished. An epoch whose update
    diverges is logged as far as it got and training moves on.
    """
    seed_path = seed if isinstance(seed, (list, tuple)) else (seed,)
    agent = make_agent(
        agent_config, env_spec, child_rng(*seed_path, _NS_AGENT, agent_config.seed)
    )
    env_rng = child_rng(*seed_path, _NS_ENV)
    reward_fn = make_reward_fn(policy, reward_scale)
    max_steps = env_spec.max_steps_per_epoch
    add_native = reward_mode == "add"
    progress_span = max(epochs - 1, 1)

    epoch_traces = []
    aborted = []
    clamped = 0
    for e in range(1, epochs + 1):
        progress = (e - 1) / progress_span
        state = env_reset(env_spec, env_rng)
        steps = []
        for t in range(max_steps):
            action = agent.act(state, progress)
            tr = env_step(env_spec, state, action, reward_fn, env_rng)
            if add_native:
                tr = replace(
                    tr,
                    reward=tr.reward
                    + native_reward(env_spec, state, action, tr.next_state, tr.done),
                )
            if tr.clamped:
                clamped += 1
            if not tr.done and t == max_steps - 1:
                tr = replace(tr, done=True)
            steps.append(TraceStep(state, action, tr.reward))
            try:
                agent.update(tr)
            except NumericalDivergenceError:
                aborted.append(e)
                break
            if tr.done:
                break
            state = tr.next_state
        epoch_traces.append(EpochTrace(tuple(steps), e))
    return RunLog(policy_id, tuple(epoch_traces), tuple(aborted), clamped)


def analyze_log(policy: IntendedPolicy, log: RunLog, config: OracleConfig) -> PolicyOutcome:
    """Series, trend report, and health of one run log.

    A run in which every single epoch aborted is unhealthy outright, on
    top of whatever the trend check says.
    """
    series = policy_compliance_series(
        policy, log, config.theta_step, filter_mode=config.filter_mode
    )
    report = trend_analysis(series, config.trend)
    wholly_failed = len(log.aborted_epochs) == len(log.epochs)
    return PolicyOutcome(
        log.policy_id, series, report, report.verdict and not wholly_failed,
        log.aborted_epochs,
    )


def _judge_one_policy(args):
    agent_config, env_spec, policy, policy_id, config = args
    log = run_training_phase(
        agent_config,
        env_spec,
        policy,
        config.epochs,
        (config.master_seed, policy_id),
        reward_scale=config.reward_scale,
        reward_mode=config.reward_mode,
        policy_id=policy_id,
    )
    return analyze_log(policy, log, config)


def assemble_verdict(outcomes, theta_oracle: float) -> Verdict:
    """Vote over per-policy outcomes: NonBuggy when the healthy fraction
    reaches ``theta_oracle`` (the boundary counts as healthy enough)."""
    outcomes = tuple(outcomes)
    true_count = sum(1 for o in outcomes if o.healthy)
    ratio = true_count / len(outcomes)
    label = LABEL_NON_BUGGY if ratio >= theta_oracle else LABEL_BUGGY
    return Verdict(label, outcomes, true_count, ratio)


def oracle_main(
    program,
    env_spec: EnvSpec,
    config: OracleConfig,
    workers: int | None = None,
) -> Verdict:
    """Judge a program: train it against generated policies and vote.

    ``program`` is an :class:`AgentConfig` for the built-in learners, or a
    callable ``(env_spec, policy, epochs, seed) -> RunLog`` for programs
    that produce their traces elsewhere. ``workers`` > 1 trains policies
    on a process pool; results are identical either way.
    """
    policies = oracle_policies(env_spec, config)

    if isinstance(program, AgentConfig):
        tasks = [
            (program, env_spec, policy, pid, config)
            for pid, policy in enumerate(policies, start=1)
        ]
        if workers and workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_judge_one_policy, tasks))
        else:
            outcomes = [_judge_one_policy(t) for t in tasks]
    else:
        outcomes = []
        for pid, policy in enumerate(policies, start=1):
            log = program(env_spec, policy, config.epochs, (config.master_seed, pid))
            if log.policy_id != pid:
                log = replace(log, policy_id=pid)
            outcomes.append(analyze_log(policy, log, config))

    return assemble_verdict(outcomes, config.theta_oracle)
