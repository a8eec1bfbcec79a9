"""Command-line front end.

Commands:

* ``test``      judge a program end to end from a run config
* ``analyze``   judge an externally produced trace log against a policy file
* ``evaluate``  run a corpus of program variants and score detection quality
* ``policies``  generate intended-policy files (``policies generate``)
* ``bugs``      inspect the fault registry (``bugs list``)

Exit status is the machine contract: 0 means NonBuggy (or success for
commands without a verdict), 1 means Buggy, 2 means error. Flags override
config-file fields, which override defaults. The FUZZORACLE_WORKERS
environment variable bounds the training worker pool; ``--workers`` wins
when both are given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .agents import BUG_REGISTRY, inject_bug
from .errors import FuzzOracleError, TraceFormatError
from .evaluation import (
    DEFAULT_ROC_THRESHOLDS,
    ProgramRecord,
    confusion_at,
    confusion_metrics,
    roc_sweep,
)
from .compliance import policy_compliance_series
from .logfiles import (
    EVALUATION_FORMAT,
    FORMAT_VERSION,
    agent_config_to_dict,
    canonical_json,
    display,
    env_spec_from_dict,
    env_spec_to_dict,
    load_policy,
    load_run_config,
    oracle_config_to_dict,
    read_trace,
    save_policy,
    series_lines,
    verdict_report,
    write_trace,
)
from .oracle import (
    analyze_log,
    assemble_verdict,
    default_policy_size,
    generate_policies,
    oracle_main,
    oracle_policies,
    run_training_phase,
)
from .trend import TrendParams, trend_analysis

EXIT_NON_BUGGY = 0
EXIT_BUGGY = 1
EXIT_ERROR = 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (FuzzOracleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzoracle",
        description="Judge reinforcement-learning programs Buggy or NonBuggy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run the full oracle on a program")
    p_test.add_argument("--config", required=True, help="run config JSON file")
    _add_override_flags(p_test)
    p_test.add_argument("--output", help="output directory (default from config)")
    p_test.add_argument("--bug", help="inject this bug into the agent")
    p_test.add_argument("--workers", type=int, help="training worker pool size")
    p_test.add_argument(
        "--emit-traces", action="store_true",
        help="also write per-policy trace and policy files",
    )
    p_test.set_defaults(handler=cmd_test)

    p_an = sub.add_parser("analyze", help="judge an external trace log")
    p_an.add_argument("--trace", required=True, help="trace log file")
    p_an.add_argument("--policy", required=True, help="intended policy file")
    p_an.add_argument("--theta-step", type=float, default=None)
    p_an.add_argument("--filter-mode", choices=("state", "step"), default=None)
    p_an.add_argument("--window", type=int, default=None)
    p_an.add_argument("--epsilon", type=float, default=None)
    p_an.add_argument("--delta", type=float, default=None)
    p_an.add_argument("--output", help="write the analysis JSON here instead of stdout")
    p_an.set_defaults(handler=cmd_analyze)

    p_ev = sub.add_parser("evaluate", help="score detection quality over a corpus")
    p_ev.add_argument("--config", required=True, help="corpus config JSON file")
    _add_override_flags(p_ev)
    p_ev.add_argument("--output", help="output directory (default from config)")
    p_ev.add_argument("--workers", type=int, help="training worker pool size")
    p_ev.set_defaults(handler=cmd_evaluate)

    p_pol = sub.add_parser("policies", help="intended-policy utilities")
    pol_sub = p_pol.add_subparsers(dest="subcommand", required=True)
    p_gen = pol_sub.add_parser("generate", help="write intended-policy files")
    p_gen.add_argument("--env", choices=("grid", "hillcar"), default="grid")
    p_gen.add_argument("--count", type=int, default=10)
    p_gen.add_argument("--size", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", required=True, help="directory for policy files")
    p_gen.set_defaults(handler=cmd_policies_generate)

    p_bugs = sub.add_parser("bugs", help="fault registry utilities")
    bugs_sub = p_bugs.add_subparsers(dest="subcommand", required=True)
    p_list = bugs_sub.add_parser("list", help="list injectable bugs")
    p_list.set_defaults(handler=cmd_bugs_list)

    return parser


def _add_override_flags(parser) -> None:
    parser.add_argument("--seed", type=int, help="override oracle.master_seed")
    parser.add_argument("--epochs", type=int, help="override oracle.epochs")
    parser.add_argument("--policies", type=int, help="override oracle.policies")
    parser.add_argument(
        "--theta-oracle", type=float, help="override oracle.theta_oracle"
    )
    parser.add_argument(
        "--set", action="append", default=[], metavar="SECTION.FIELD=VALUE",
        help="override any config field, e.g. --set oracle.epsilon=0.02; "
        "values are parsed as JSON",
    )


def _apply_overrides(config: dict, args) -> dict:
    """Fold CLI flags into the parsed run config (flag > file > default)."""
    sections = {
        "env": dict(env_spec_to_dict(config["env"])),
        "agent": dict(agent_config_to_dict(config["agent"])),
        "oracle": dict(oracle_config_to_dict(config["oracle"])),
    }
    for item in args.set:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise TraceFormatError(
                f"--set expects SECTION.FIELD=VALUE, got {item!r}"
            )
        target, raw = item.split("=", 1)
        section, fieldname = target.split(".", 1)
        if section not in sections:
            raise TraceFormatError(
                f"--set section must be env, agent, or oracle, got {section!r}"
            )
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        sections[section][fieldname] = value
    if args.seed is not None:
        sections["oracle"]["master_seed"] = args.seed
    if args.epochs is not None:
        sections["oracle"]["epochs"] = args.epochs
    if args.policies is not None:
        sections["oracle"]["policies"] = args.policies
    if args.theta_oracle is not None:
        sections["oracle"]["theta_oracle"] = args.theta_oracle

    from .logfiles import agent_config_from_dict, oracle_config_from_dict

    return {
        "env": env_spec_from_dict(sections["env"]),
        "agent": agent_config_from_dict(sections["agent"]),
        "oracle": oracle_config_from_dict(sections["oracle"]),
        "bug": config.get("bug"),
        "output_dir": config.get("output_dir"),
        "variants": config.get("variants"),
    }


def _resolve_workers(args) -> int | None:
    if getattr(args, "workers", None):
        return args.workers
    env_value = os.environ.get("FUZZORACLE_WORKERS")
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            raise TraceFormatError(
                f"FUZZORACLE_WORKERS must be an integer, got {env_value!r}"
            ) from None
    return None


def _write(path, text) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_test(args) -> int:
    config = _apply_overrides(load_run_config(args.config), args)
    env_spec = config["env"]
    oracle_config = config["oracle"]
    bug = args.bug if args.bug is not None else config.get("bug")
    agent_config = config["agent"]
    if bug:
        agent_config = inject_bug(agent_config, bug)

    out_dir = args.output or config.get("output_dir") or "fuzzoracle-out"
    os.makedirs(out_dir, exist_ok=True)
    workers = _resolve_workers(args)

    started = time.monotonic()
    if args.emit_traces:
        policies = oracle_policies(env_spec, oracle_config)
        outcomes = []
        for pid, policy in enumerate(policies, start=1):
            log = run_training_phase(
                agent_config, env_spec, policy, oracle_config.epochs,
                (oracle_config.master_seed, pid),
                reward_scale=oracle_config.reward_scale,
                reward_mode=oracle_config.reward_mode,
                policy_id=pid,
            )
            save_policy(os.path.join(out_dir, f"policy_{pid:03d}.json"), policy)
            write_trace(os.path.join(out_dir, f"policy_{pid:03d}.trace.jsonl"), log, env_spec)
            outcomes.append(analyze_log(policy, log, oracle_config))
        verdict = assemble_verdict(outcomes, oracle_config.theta_oracle)
    else:
        verdict = oracle_main(agent_config, env_spec, oracle_config, workers=workers)
    elapsed = time.monotonic() - started

    report = verdict_report(verdict, env_spec, agent_config, oracle_config, bug)
    _write(os.path.join(out_dir, "report.json"), canonical_json(report))
    _write(os.path.join(out_dir, "series.jsonl"), series_lines(verdict))
    _write(
        os.path.join(out_dir, "meta.json"),
        json.dumps({"elapsed_seconds": elapsed, "workers": workers}, indent=2) + "\n",
    )
    print(
        f"{verdict.label}: {verdict.true_count}/{len(verdict.per_policy)} healthy "
        f"policy trends (threshold {oracle_config.theta_oracle})"
    )
    return EXIT_NON_BUGGY if not verdict.buggy else EXIT_BUGGY


def cmd_analyze(args) -> int:
    log, env_spec = read_trace(args.trace)
    policy = load_policy(args.policy)
    if policy.state_space != env_spec.state_space():
        raise TraceFormatError(
            f"policy state space {policy.state_space} does not match the "
            f"trace environment {env_spec.state_space()}"
        )
    theta_step = 0.3 if args.theta_step is None else args.theta_step
    filter_mode = args.filter_mode or "state"
    defaults = TrendParams()
    params = TrendParams(
        window=defaults.window if args.window is None else args.window,
        epsilon=defaults.epsilon if args.epsilon is None else args.epsilon,
        delta=defaults.delta if args.delta is None else args.delta,
    )
    series = policy_compliance_series(policy, log, theta_step, filter_mode=filter_mode)
    report = trend_analysis(series, params)
    verdict_label = "NonBuggy" if report.verdict else "Buggy"
    analysis = {
        "format": "fuzzoracle-analysis",
        "version": FORMAT_VERSION,
        "trace": os.path.basename(args.trace),
        "policy_id": log.policy_id,
        "env": env_spec_to_dict(env_spec),
        "params": {
            "theta_step": theta_step,
            "filter_mode": filter_mode,
            "window": params.window,
            "epsilon": params.epsilon,
            "delta": params.delta,
        },
        "series": list(series.values),
        "series_display": [display(v) for v in series.values],
        "trend": {
            "slope": report.slope,
            "slope_display": display(report.slope),
            "convergence_index": report.convergence_index,
            "abnormality_found": report.abnormality_found,
            "healthy": report.verdict,
        },
        "verdict": verdict_label,
    }
    text = canonical_json(analysis)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    print(f"{verdict_label}: slope {display(report.slope)}", file=sys.stderr)
    return EXIT_NON_BUGGY if report.verdict else EXIT_BUGGY


def cmd_evaluate(args) -> int:
    config = _apply_overrides(load_run_config(args.config), args)
    variants = config.get("variants")
    if not variants:
        raise TraceFormatError("corpus config needs a non-empty 'variants' list")
    for v in variants:
        if not isinstance(v, dict) or "name" not in v or "buggy" not in v:
            raise TraceFormatError(
                "each variant needs at least 'name' and 'buggy' fields"
            )
        bug = v.get("bug")
        if bug is not None and bug not in BUG_REGISTRY:
            raise TraceFormatError(f"variant {v['name']!r} references unknown bug {bug!r}")

    env_spec = config["env"]
    oracle_config = config["oracle"]
    workers = _resolve_workers(args)
    out_dir = args.output or config.get("output_dir") or "fuzzoracle-out"
    os.makedirs(out_dir, exist_ok=True)

    started = time.monotonic()
    records = []
    programs = []
    for v in variants:
        agent_config = config["agent"]
        if v.get("bug"):
            agent_config = inject_bug(agent_config, v["bug"])
        verdict = oracle_main(agent_config, env_spec, oracle_config, workers=workers)
        records.append(
            ProgramRecord(
                verdict.true_count, len(verdict.per_policy), bool(v["buggy"]),
                name=v["name"],
            )
        )
        programs.append(
            {
                "name": v["name"],
                "bug": v.get("bug"),
                "ground_truth_buggy": bool(v["buggy"]),
                "label": verdict.label,
                "true_count": verdict.true_count,
                "ratio": verdict.ratio,
                "ratio_display": display(verdict.ratio),
            }
        )
        print(f"{v['name']}: {verdict.label} ({verdict.true_count}/{len(verdict.per_policy)})")
    elapsed = time.monotonic() - started

    matrix = confusion_at(records, oracle_config.theta_oracle)
    metrics = confusion_metrics(matrix)
    roc = roc_sweep(records, DEFAULT_ROC_THRESHOLDS)
    report = {
        "format": EVALUATION_FORMAT,
        "version": FORMAT_VERSION,
        "config": {
            "env": env_spec_to_dict(env_spec),
            "agent": agent_config_to_dict(config["agent"]),
            "oracle": oracle_config_to_dict(oracle_config),
        },
        "programs": programs,
        "confusion": {"tp": matrix.tp, "fp": matrix.fp, "tn": matrix.tn, "fn": matrix.fn},
        "metrics": {
            "accuracy": metrics.accuracy,
            "accuracy_display": display(metrics.accuracy),
            "precision": metrics.precision,
            "precision_display": display(metrics.precision),
            "recall": metrics.recall,
            "recall_display": display(metrics.recall),
            "f1": metrics.f1,
            "f1_display": display(metrics.f1),
        },
        "roc": [{"theta": t, "fpr": f, "tpr": p} for t, f, p in roc],
    }
    _write(os.path.join(out_dir, "evaluation.json"), canonical_json(report))
    _write(
        os.path.join(out_dir, "meta.json"),
        json.dumps({"elapsed_seconds": elapsed, "workers": workers}, indent=2) + "\n",
    )
    print(
        f"confusion TP={matrix.tp} FP={matrix.fp} TN={matrix.tn} FN={matrix.fn}; "
        f"report in {out_dir}/evaluation.json"
    )
    return EXIT_NON_BUGGY


def cmd_policies_generate(args) -> int:
    env_spec = env_spec_from_dict({"kind": args.env})
    size = args.size or default_policy_size(env_spec)
    policies = generate_policies(env_spec, args.count, size, (args.seed, 1))
    os.makedirs(args.output, exist_ok=True)
    for i, policy in enumerate(policies, start=1):
        path = os.path.join(args.output, f"policy_{i:03d}.json")
        save_policy(path, policy)
        print(path)
    return EXIT_NON_BUGGY


def cmd_bugs_list(args) -> int:
    width = max(len(b) for b in BUG_REGISTRY)
    for bug in sorted(BUG_REGISTRY.values(), key=lambda b: (b.category, b.id)):
        print(f"{bug.id:<{width}}  {bug.category:<16}  {bug.description}")
    return EXIT_NON_BUGGY


if __name__ == "__main__":
    sys.exit(main())
