import json
import os

from fuzzoracle.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")
HAND_TRACE = os.path.join(DATA, "hand3epoch.trace.jsonl")
HAND_POLICY = os.path.join(DATA, "hand3epoch.policy.json")


def write_config(path, **overrides):
    config = {
        "env": {"kind": "grid"},
        "agent": {"algorithm": "tabular_q"},
        "oracle": {"policies": 3, "epochs": 30, "master_seed": 5},
    }
    config.update(overrides)
    path.write_text(json.dumps(config))
    return str(path)


class TestBugsAndPolicies:
    def test_bugs_list(self, capsys):
        assert main(["bugs", "list"]) == 0
        out = capsys.readouterr().out
        for bug in ("LR_ZERO", "REWARD_NEGATED", "EPSILON_FROZEN_ONE"):
            assert bug in out

    def test_policies_generate_deterministic(self, tmp_path, capsys):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        assert main(["policies", "generate", "--count", "3", "--seed", "4",
                     "--output", str(out1)]) == 0
        assert main(["policies", "generate", "--count", "3", "--seed", "4",
                     "--output", str(out2)]) == 0
        files1 = sorted(os.listdir(out1))
        assert files1 == ["policy_001.json", "policy_002.json", "policy_003.json"]
        for name in files1:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_policies_generate_hillcar(self, tmp_path):
        out = tmp_path / "hc"
        assert main(["policies", "generate", "--env", "hillcar", "--count", "2",
                     "--output", str(out)]) == 0
        data = json.loads((out / "policy_001.json").read_text())
        assert data["state_space"]["kind"] == "box"


class TestAnalyze:
    def test_hand_worked_fixture(self, tmp_path, capsys):
        out = tmp_path / "analysis.json"
        code = main([
            "analyze", "--trace", HAND_TRACE, "--policy", HAND_POLICY,
            "--theta-step", "0.5", "--window", "2", "--output", str(out),
        ])
        assert code == 1
        analysis = json.loads(out.read_text())
        assert analysis["series"] == [0.75, 0.0, 0.5]
        assert analysis["trend"]["slope"] == -0.125
        assert analysis["verdict"] == "Buggy"

    def test_analysis_to_stdout(self, capsys):
        code = main([
            "analyze", "--trace", HAND_TRACE, "--policy", HAND_POLICY,
            "--theta-step", "0.5", "--window", "2",
        ])
        assert code == 1
        analysis = json.loads(capsys.readouterr().out)
        assert analysis["series"] == [0.75, 0.0, 0.5]

    def test_missing_file_exits_2(self, capsys):
        assert main(["analyze", "--trace", "/nonexistent", "--policy", HAND_POLICY]) == 2

    def test_empty_trace_exits_2(self, tmp_path, capsys):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        assert main(["analyze", "--trace", str(empty), "--policy", HAND_POLICY]) == 2

    def test_policy_env_mismatch_exits_2(self, tmp_path, capsys):
        out = tmp_path / "hc"
        assert main(["policies", "generate", "--env", "hillcar", "--count", "2",
                     "--output", str(out)]) == 0
        code = main(["analyze", "--trace", HAND_TRACE,
                     "--policy", str(out / "policy_001.json")])
        assert code == 2
        assert "state space" in capsys.readouterr().err

    def test_non_contiguous_trace_exits_2(self, tmp_path, capsys):
        lines = open(HAND_TRACE).read().splitlines()
        broken = [lines[0], lines[1], lines[2], lines[3]] + lines[6:]
        path = tmp_path / "gap.jsonl"
        path.write_text("".join(l + "\n" for l in broken))
        assert main(["analyze", "--trace", str(path), "--policy", HAND_POLICY]) == 2
        assert "record" in capsys.readouterr().err


class TestTestCommand:
    def test_clean_agent_small_run(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.json", output_dir=str(tmp_path / "out"))
        code = main(["test", "--config", cfg])
        assert code in (0, 1)
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["verdict"]["policy_count"] == 3
        assert len(report["policies"]) == 3
        series = [
            json.loads(line)
            for line in (tmp_path / "out" / "series.jsonl").read_text().splitlines()
        ]
        assert [s["policy_id"] for s in series] == [1, 2, 3]
        assert all(len(s["values"]) == 30 for s in series)

    def test_reports_byte_identical_across_runs(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["test", "--config", cfg, "--output", str(out1)]) in (0, 1)
        assert main(["test", "--config", cfg, "--output", str(out2)]) in (0, 1)
        for name in ("report.json", "series.jsonl"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_flag_overrides_config(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        out = tmp_path / "out"
        assert main(["test", "--config", cfg, "--policies", "2", "--epochs", "20",
                     "--set", "oracle.theta_step=0.5", "--output", str(out)]) in (0, 1)
        report = json.loads((out / "report.json").read_text())
        assert report["config"]["oracle"]["policies"] == 2
        assert report["config"]["oracle"]["epochs"] == 20
        assert report["config"]["oracle"]["theta_step"] == 0.5

    def test_emit_traces_reproducible_by_analyze(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.json")
        out = tmp_path / "out"
        assert main(["test", "--config", cfg, "--policies", "2", "--emit-traces",
                     "--output", str(out)]) in (0, 1)
        emitted = [
            json.loads(line)
            for line in (out / "series.jsonl").read_text().splitlines()
        ]
        analysis_path = tmp_path / "re.json"
        code = main([
            "analyze",
            "--trace", str(out / "policy_001.trace.jsonl"),
            "--policy", str(out / "policy_001.json"),
            "--output", str(analysis_path),
        ])
        assert code in (0, 1)
        analysis = json.loads(analysis_path.read_text())
        assert analysis["series"] == emitted[0]["values"]

    def test_emit_traces_mode_matches_plain_mode(self, tmp_path):
        # Writing traces must not perturb the verdict: both modes derive
        # the same policies and seeds, so report.json is byte-identical.
        cfg = write_config(tmp_path / "cfg.json")
        plain, emitting = tmp_path / "plain", tmp_path / "emitting"
        assert main(["test", "--config", cfg, "--output", str(plain)]) in (0, 1)
        assert main(["test", "--config", cfg, "--emit-traces",
                     "--output", str(emitting)]) in (0, 1)
        assert (plain / "report.json").read_bytes() == (emitting / "report.json").read_bytes()
        assert (plain / "series.jsonl").read_bytes() == (emitting / "series.jsonl").read_bytes()

    def test_console_script_entry_point(self, tmp_path):
        import subprocess
        import sys

        result = subprocess.run(
            [sys.executable, "-m", "fuzzoracle.cli", "bugs", "list"],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert "LR_ZERO" in result.stdout

    def test_unknown_bug_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.json")
        assert main(["test", "--config", cfg, "--bug", "NOT_A_BUG"]) == 2

    def test_missing_config_exits_2(self, capsys):
        assert main(["test", "--config", "/nonexistent.json"]) == 2

    def test_malformed_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{broken")
        assert main(["test", "--config", str(path)]) == 2
        assert "line" in capsys.readouterr().err


class TestShippedConfigs:
    CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")

    def test_clean_grid_config_is_non_buggy(self, tmp_path):
        code = main([
            "test", "--config", os.path.join(self.CONFIGS, "grid_clean.json"),
            "--output", str(tmp_path / "out"),
        ])
        assert code == 0

    def test_reward_negated_config_is_buggy(self, tmp_path):
        code = main([
            "test", "--config", os.path.join(self.CONFIGS, "grid_reward_negated.json"),
            "--output", str(tmp_path / "out"),
        ])
        assert code == 1


class TestEvaluate:
    def corpus_config(self, tmp_path):
        path = tmp_path / "corpus.json"
        path.write_text(json.dumps({
            "env": {"kind": "grid"},
            "agent": {"algorithm": "tabular_q"},
            "oracle": {"policies": 3, "epochs": 25, "master_seed": 2},
            "variants": [
                {"name": "clean", "bug": None, "buggy": False},
                {"name": "lr_zero", "bug": "LR_ZERO", "buggy": True},
            ],
        }))
        return str(path)

    def test_small_corpus(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["evaluate", "--config", self.corpus_config(tmp_path),
                     "--output", str(out)])
        assert code == 0
        report = json.loads((out / "evaluation.json").read_text())
        confusion = report["confusion"]
        assert sum(confusion.values()) == 2
        assert len(report["roc"]) == 11
        assert len(report["programs"]) == 2

    def test_unknown_bug_rejected_before_training(self, tmp_path, capsys):
        path = tmp_path / "corpus.json"
        path.write_text(json.dumps({
            "oracle": {"policies": 3, "epochs": 25},
            "variants": [{"name": "x", "bug": "BOGUS", "buggy": True}],
        }))
        assert main(["evaluate", "--config", str(path)]) == 2
        assert "BOGUS" in capsys.readouterr().err


class TestWorkersEnvVar:
    def test_bad_value_rejected(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FUZZORACLE_WORKERS", "many")
        cfg = write_config(tmp_path / "cfg.json")
        assert main(["test", "--config", cfg, "--output", str(tmp_path / "o")]) == 2

    def test_env_var_accepted(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FUZZORACLE_WORKERS", "1")
        cfg = write_config(tmp_path / "cfg.json")
        assert main(["test", "--config", cfg, "--output", str(tmp_path / "o")]) in (0, 1)
