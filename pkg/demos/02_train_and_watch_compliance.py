"""Watch the compliance series separate a learner from a non-learner.

The same intended policy drives two training runs: a healthy Q-learner
and one whose learning rate was silently zeroed. Per-epoch compliance is
averaged over the steps that came close to a reference state, so it reads
as "of the chances the agent had to follow the intended policy, how well
did it do". The healthy run trends up; the broken one does not.
"""

from fuzzoracle import (
    AgentConfig,
    GridSpec,
    TrendParams,
    generate_policies,
    inject_bug,
    policy_compliance_series,
    run_training_phase,
    trend_analysis,
)

EPOCHS = 200
spec = GridSpec()
policy = generate_policies(spec, 1, 4, seed=12)[0]
print("intended policy:", ", ".join(f"{s}->{a}" for s, a in policy.entries))

for label, config in (
    ("healthy", AgentConfig()),
    ("LR_ZERO", inject_bug(AgentConfig(), "LR_ZERO")),
):
    log = run_training_phase(config, spec, policy, EPOCHS, seed=1)
    series = policy_compliance_series(policy, log, theta_step=0.3)
    report = trend_analysis(series, TrendParams(window=5, epsilon=0.02, delta=0.1))

    def mean(chunk):
        return sum(chunk) / len(chunk)

    quarters = [mean(series.values[i * 50 : (i + 1) * 50]) for i in range(4)]
    print(f"\n{label}:")
    print("   compliance by quarter:", " -> ".join(f"{q:.2f}" for q in quarters))
    print(f"   slope {report.slope:+.5f}, converged at "
          f"{report.convergence_index}, abnormality {report.abnormality_found}")
    print(f"   trend verdict: {'healthy' if report.verdict else 'unhealthy'}")
