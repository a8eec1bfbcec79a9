"""File formats: trace logs, policy files, run configs, and reports.

All files are JSON or line-delimited JSON in a canonical form (sorted
keys, compact separators, one trailing newline per record) so that
parse-then-serialize reproduces a canonical file byte for byte and two
identical runs write identical reports. Numbers keep full round-trip
precision; human-facing report fields add 3-significant-digit views.

Format versions are integers; readers reject versions they do not know.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .agents import AgentConfig
from .compliance import EpochTrace, RunLog, TraceStep
from .envs import GridSpec, HillCarSpec
from .errors import TraceFormatError
from .membership import MembershipShape
from .oracle import OracleConfig, Verdict
from .policy import IntendedPolicy
from .spaces import BoxSpace, DiscreteSpace, GridSpace
from .trend import TrendParams

TRACE_FORMAT = "fuzzoracle-trace"
POLICY_FORMAT = "fuzzoracle-policy"
REPORT_FORMAT = "fuzzoracle-report"
EVALUATION_FORMAT = "fuzzoracle-evaluation"
FORMAT_VERSION = 1


def canonical_json(obj) -> str:
    """One canonical JSON line, newline-terminated."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def display(x: float | None) -> str | None:
    """3-significant-digit view for humans; full precision lives elsewhere."""
    return None if x is None else format(x, ".3g")


# ---------------------------------------------------------------------------
# Environment specs


def env_spec_to_dict(spec) -> dict:
    if spec.kind == "grid":
        return {
            "kind": "grid",
            "rows": spec.rows,
            "cols": spec.cols,
            "holes": [list(h) for h in spec.holes],
            "goal": list(spec.goal),
            "slip_prob": spec.slip_prob,
            "max_steps_per_epoch": spec.max_steps_per_epoch,
        }
    return {
        "kind": "hillcar",
        "min_position": spec.min_position,
        "max_position": spec.max_position,
        "max_speed": spec.max_speed,
        "force": spec.force,
        "gravity": spec.gravity,
        "goal_position": spec.goal_position,
        "max_steps_per_epoch": spec.max_steps_per_epoch,
    }


def env_spec_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "grid":
        fields = _take(
            data, "kind", "rows", "cols", "holes", "goal", "slip_prob",
            "max_steps_per_epoch", where="env",
        )
        defaults = GridSpec()
        return GridSpec(
            rows=fields.get("rows", defaults.rows),
            cols=fields.get("cols", defaults.cols),
            holes=tuple(tuple(h) for h in fields.get("holes", defaults.holes)),
            goal=tuple(fields.get("goal", defaults.goal)),
            slip_prob=fields.get("slip_prob", defaults.slip_prob),
            max_steps_per_epoch=fields.get(
                "max_steps_per_epoch", defaults.max_steps_per_epoch
            ),
        )
    if kind == "hillcar":
        fields = _take(
            data, "kind", "min_position", "max_position", "max_speed", "force",
            "gravity", "goal_position", "max_steps_per_epoch", where="env",
        )
        defaults = HillCarSpec()
        return HillCarSpec(
            min_position=fields.get("min_position", defaults.min_position),
            max_position=fields.get("max_position", defaults.max_position),
            max_speed=fields.get("max_speed", defaults.max_speed),
            force=fields.get("force", defaults.force),
            gravity=fields.get("gravity", defaults.gravity),
            goal_position=fields.get("goal_position", defaults.goal_position),
            max_steps_per_epoch=fields.get("max_steps_per_epoch", defaults.max_steps_per_epoch),
        )
    raise TraceFormatError(f"env kind must be 'grid' or 'hillcar', got {kind!r}")


def _take(data: dict, *allowed, where: str) -> dict:
    unknown = set(data) - set(allowed)
    if unknown:
        raise TraceFormatError(
            f"unknown {where} fields: {', '.join(sorted(unknown))}"
        )
    return data


# ---------------------------------------------------------------------------
# Agent and oracle configs


def agent_config_to_dict(config: AgentConfig) -> dict:
    return asdict(config)


def agent_config_from_dict(data: dict) -> AgentConfig:
    defaults = AgentConfig()
    fields = _take(data, *defaults.__dataclass_fields__, where="agent")
    try:
        return AgentConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise TraceFormatError(f"bad agent config: {exc}") from exc


def oracle_config_to_dict(config: OracleConfig) -> dict:
    return {
        "policies": config.policies,
        "epochs": config.epochs,
        "theta_oracle": config.theta_oracle,
        "window": config.trend.window,
        "epsilon": config.trend.epsilon,
        "delta": config.trend.delta,
        "theta_step": config.theta_step,
        "policy_size": config.policy_size,
        "master_seed": config.master_seed,
        "reward_scale": config.reward_scale,
        "reward_mode": config.reward_mode,
        "filter_mode": config.filter_mode,
    }


def oracle_config_from_dict(data: dict) -> OracleConfig:
    defaults = OracleConfig()
    fields = _take(
        data, "policies", "epochs", "theta_oracle", "window", "epsilon", "delta",
        "theta_step", "policy_size", "master_seed", "reward_scale", "reward_mode",
        "filter_mode", where="oracle",
    )
    trend = TrendParams(
        window=fields.get("window", defaults.trend.window),
        epsilon=fields.get("epsilon", defaults.trend.epsilon),
        delta=fields.get("delta", defaults.trend.delta),
    )
    try:
        return OracleConfig(
            policies=fields.get("policies", defaults.policies),
            epochs=fields.get("epochs", defaults.epochs),
            theta_oracle=fields.get("theta_oracle", defaults.theta_oracle),
            trend=trend,
            theta_step=fields.get("theta_step", defaults.theta_step),
            policy_size=fields.get("policy_size", defaults.policy_size),
            master_seed=fields.get("master_seed", defaults.master_seed),
            reward_scale=fields.get("reward_scale", defaults.reward_scale),
            reward_mode=fields.get("reward_mode", defaults.reward_mode),
            filter_mode=fields.get("filter_mode", defaults.filter_mode),
        )
    except ValueError as exc:
        raise TraceFormatError(f"bad oracle config: {exc}") from exc


# ---------------------------------------------------------------------------
# Intended policies


def _space_to_dict(space) -> dict:
    if isinstance(space, GridSpace):
        return {"kind": "grid", "rows": space.rows, "cols": space.cols}
    if isinstance(space, DiscreteSpace):
        return {"kind": "discrete", "n": space.n}
    return {"kind": "box", "lows": list(space.lows), "highs": list(space.highs)}


def _space_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "grid":
        return GridSpace(data["rows"], data["cols"])
    if kind == "discrete":
        return DiscreteSpace(data["n"])
    if kind == "box":
        return BoxSpace(tuple(data["lows"]), tuple(data["highs"]))
    raise TraceFormatError(f"unknown space kind {kind!r}")


def _shape_to_dict(shape: MembershipShape) -> dict:
    return {"kind": shape.kind, "width": shape.width}


def _point_to_json(point, space):
    if isinstance(space, DiscreteSpace):
        return point
    return list(point)


def _point_from_json(value, space):
    if isinstance(space, DiscreteSpace):
        if not isinstance(value, int) or isinstance(value, bool):
            raise TraceFormatError(f"discrete action must be an int, got {value!r}")
        return value
    if isinstance(space, GridSpace):
        return tuple(int(v) for v in value)
    return tuple(float(v) for v in value)


def policy_to_dict(policy: IntendedPolicy) -> dict:
    return {
        "format": POLICY_FORMAT,
        "version": FORMAT_VERSION,
        "state_space": _space_to_dict(policy.state_space),
        "action_space": _space_to_dict(policy.action_space),
        "entries": [
            {
                "state": _point_to_json(s, policy.state_space),
                "action": _point_to_json(a, policy.action_space),
            }
            for s, a in policy.entries
        ],
        "state_shape": _shape_to_dict(policy.state_shape),
        "action_shape": _shape_to_dict(policy.action_shape),
        "min_ref_distance": policy.min_ref_distance,
    }


def policy_from_dict(data: dict) -> IntendedPolicy:
    if data.get("format") != POLICY_FORMAT:
        raise TraceFormatError(f"not a policy file: format {data.get('format')!r}")
    if data.get("version") != FORMAT_VERSION:
        raise TraceFormatError(f"unsupported policy version {data.get('version')!r}")
    state_space = _space_from_dict(data["state_space"])
    action_space = _space_from_dict(data["action_space"])
    try:
        entries = [
            (
                _point_from_json(e["state"], state_space),
                _point_from_json(e["action"], action_space),
            )
            for e in data["entries"]
        ]
        state_shape = MembershipShape(**data["state_shape"])
        action_shape = MembershipShape(**data["action_shape"])
        policy = IntendedPolicy.build(
            entries, state_space, action_space, state_shape, action_shape
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"bad policy file: {exc}") from exc
    stored = data.get("min_ref_distance")
    if stored is not None and stored != policy.min_ref_distance:
        raise TraceFormatError(
            f"stored min_ref_distance {stored} does not match "
            f"recomputed {policy.min_ref_distance}"
        )
    return policy


def save_policy(path, policy: IntendedPolicy) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(policy_to_dict(policy)))


def load_policy(path) -> IntendedPolicy:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return policy_from_dict(data)


# ---------------------------------------------------------------------------
# Trace logs: one header line, then one line per step


def write_trace(path, log: RunLog, env_spec) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            canonical_json(
                {
                    "format": TRACE_FORMAT,
                    "version": FORMAT_VERSION,
                    "env": env_spec_to_dict(env_spec),
                    "policy_id": log.policy_id,
                    "epochs": len(log.epochs),
                }
            )
        )
        state_space = env_spec.state_space()
        action_space = env_spec.action_space()
        for epoch in log.epochs:
            for j, step in enumerate(epoch.steps, start=1):
                fh.write(
                    canonical_json(
                        {
                            "epoch": epoch.epoch_index,
                            "step": j,
                            "state": _point_to_json(step.state, state_space),
                            "action": _point_to_json(step.action, action_space),
                            "reward": step.reward,
                        }
                    )
                )


def read_trace(path):
    """Parse a trace file into (RunLog, env spec).

    Epochs must be contiguous from 1 and steps contiguous from 1 within
    each epoch; violations report the offending record index.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise TraceFormatError("trace file is empty", record_index=0)

    header = _parse_record(lines[0], 1)
    if header.get("format") != TRACE_FORMAT:
        raise TraceFormatError(
            f"not a trace file: format {header.get('format')!r}", record_index=1
        )
    if header.get("version") != FORMAT_VERSION:
        raise TraceFormatError(
            f"unsupported trace version {header.get('version')!r}", record_index=1
        )
    env_spec = env_spec_from_dict(header["env"])
    declared_epochs = header.get("epochs")
    state_space = env_spec.state_space()
    action_space = env_spec.action_space()

    if len(lines) == 1:
        raise TraceFormatError("trace contains no steps", record_index=1)

    epochs = []
    current: list = []
    current_epoch = 0
    for index, line in enumerate(lines[1:], start=2):
        rec = _parse_record(line, index)
        missing = {"epoch", "step", "state", "action", "reward"} - set(rec)
        if missing:
            raise TraceFormatError(
                f"record {index} missing fields: {', '.join(sorted(missing))}",
                record_index=index,
            )
        e, j = rec["epoch"], rec["step"]
        if e == current_epoch + 1 and j == 1:
            if current:
                epochs.append(EpochTrace(tuple(current), current_epoch))
            current_epoch = e
            current = []
        elif e != current_epoch or j != len(current) + 1:
            raise TraceFormatError(
                f"record {index}: expected epoch {current_epoch} step "
                f"{len(current) + 1} or epoch {current_epoch + 1} step 1, "
                f"got epoch {e} step {j}",
                record_index=index,
            )
        state = _point_from_json(rec["state"], state_space)
        action = _point_from_json(rec["action"], action_space)
        if not state_space.contains(state):
            raise TraceFormatError(
                f"record {index}: state {state!r} outside the environment",
                record_index=index,
            )
        if not action_space.contains(action):
            raise TraceFormatError(
                f"record {index}: action {action!r} outside the action space",
                record_index=index,
            )
        reward = rec["reward"]
        if not isinstance(reward, (int, float)) or isinstance(reward, bool):
            raise TraceFormatError(
                f"record {index}: reward must be a number", record_index=index
            )
        current.append(TraceStep(state, action, float(reward)))
    epochs.append(EpochTrace(tuple(current), current_epoch))

    if declared_epochs is not None and declared_epochs != len(epochs):
        raise TraceFormatError(
            f"header declares {declared_epochs} epochs, file has {len(epochs)}",
            record_index=1,
        )
    return RunLog(header.get("policy_id", 1), tuple(epochs)), env_spec


def _parse_record(line: str, index: int) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(
            f"record {index}: invalid JSON: {exc.msg}", record_index=index
        ) from exc
    if not isinstance(rec, dict):
        raise TraceFormatError(
            f"record {index}: expected an object", record_index=index
        )
    return rec


# ---------------------------------------------------------------------------
# Run configuration files


def load_run_config(path) -> dict:
    """Parse a run config into env spec, agent config, oracle config, bug.

    Returns a dict with keys env, agent, oracle, bug, output_dir. JSON
    syntax errors surface with their line number.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise TraceFormatError("run config must be a JSON object")
    _take(
        data, "env", "agent", "oracle", "bug", "output_dir", "variants",
        where="run config",
    )
    env = env_spec_from_dict(data.get("env", {"kind": "grid"}))
    agent = agent_config_from_dict(data.get("agent", {}))
    oracle = oracle_config_from_dict(data.get("oracle", {}))
    return {
        "env": env,
        "agent": agent,
        "oracle": oracle,
        "bug": data.get("bug"),
        "output_dir": data.get("output_dir"),
        "variants": data.get("variants"),
    }


# ---------------------------------------------------------------------------
# Reports


def verdict_report(
    verdict: Verdict, env_spec, agent_config, oracle_config, bug
) -> dict:
    return {
        "format": REPORT_FORMAT,
        "version": FORMAT_VERSION,
        "config": {
            "env": env_spec_to_dict(env_spec),
            "agent": agent_config_to_dict(agent_config),
            "oracle": oracle_config_to_dict(oracle_config),
            "bug": bug,
        },
        "verdict": {
            "label": verdict.label,
            "true_count": verdict.true_count,
            "policy_count": len(verdict.per_policy),
            "ratio": verdict.ratio,
            "ratio_display": display(verdict.ratio),
        },
        "policies": [
            {
                "policy_id": o.policy_id,
                "healthy": o.healthy,
                "slope": o.trend.slope,
                "slope_display": display(o.trend.slope),
                "convergence_index": o.trend.convergence_index,
                "abnormality_found": o.trend.abnormality_found,
                "aborted_epochs": list(o.aborted_epochs),
            }
            for o in verdict.per_policy
        ],
    }


def series_lines(verdict: Verdict) -> str:
    return "".join(
        canonical_json({"policy_id": o.policy_id, "values": list(o.series.values)})
        for o in verdict.per_policy
    )
