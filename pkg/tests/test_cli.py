import json

from presto import cli, corpus


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_well_formed_net(self, capsys):
        code, out, _ = run(capsys, "validate", corpus.corpus_path("guard_split"))
        assert code == 0
        assert "well-formed" in out

    def test_duplicate_guard_key_exits_three(self, capsys):
        code, out, _ = run(capsys, "validate", corpus.corpus_path("dup_guard_key"))
        assert code == 3
        assert "NondeterministicF" in out

    def test_usage_error(self, capsys):
        assert run(capsys, "validate", "/nonexistent.pres")[0] == 3
        assert run(capsys, "frobnicate")[0] == 3


class TestConvert:
    def test_output_parses_and_report_carries_labels(self, capsys, tmp_path):
        out_file = tmp_path / "converted.fsmd"
        report_file = tmp_path / "converted.json"
        code, _, _ = run(capsys, "convert", corpus.corpus_path("guard_split"),
                         "-o", str(out_file), "--json", str(report_file))
        assert code == 0
        machine_text = out_file.read_text()
        assert "q0 -> q1 when g(p3) != 0" in machine_text
        report = json.loads(report_file.read_text())
        assert report["schemaVersion"] == 1
        assert report["states"] == 3
        assert report["state_markings"]["q1"] == ["p4", "p5", "p6"]
        assert report["transitions"][0]["labels"] == [["f_t1"], ["f_t2"]]

    def test_state_bound_flag(self, capsys):
        code, _, err = run(capsys, "convert", corpus.corpus_path("addthree_a"), "--state-bound", "1")
        assert code == 3

    def test_converted_jammer_validates_but_guard_split_does_not(self, capsys, tmp_path):
        # The guard-split machine writes an input variable (the self-loop),
        # so validating the converted file honestly reports IllegalTarget.
        for name, expected in (("jammer_pipelined", 0), ("guard_split", 3)):
            out_file = tmp_path / f"{name}.fsmd"
            assert run(capsys, "convert", corpus.corpus_path(name), "-o", str(out_file))[0] == 0
            assert run(capsys, "validate", str(out_file))[0] == expected


class TestChecks:
    def test_check_fsmd_jammer_equivalent(self, capsys):
        code, out, _ = run(capsys, "check-fsmd", corpus.scenario_path("jammer"))
        assert code == 0
        assert "Equivalent" in out

    def test_check_pres_cardinality_cardinality(self, capsys):
        code, out, _ = run(capsys, "check-pres", corpus.scenario_path("cardinality"))
        assert code == 0

    def test_check_pres_addthree_both_strategies(self, capsys, tmp_path):
        for strategy in ("symbolic", "sampled"):
            report_file = tmp_path / f"addthree-{strategy}.json"
            code, out, _ = run(capsys, "check-pres", corpus.scenario_path("addthree"),
                               "--strategy", strategy, "--json", str(report_file))
            assert code == 0, strategy
            report = json.loads(report_file.read_text())
            assert report["verdict"]["status"] == "Equivalent"
            if strategy == "sampled":
                assert report["verdict"]["witness"]["samples"][0]["out_values"] == [{"Pe": 5}, {"Pee": 5}]

    def test_mutation_scenarios_flip(self, capsys):
        assert run(capsys, "check-pres", corpus.scenario_path("cardinality_dropped_arc"))[0] == 1
        assert run(capsys, "check-pres", corpus.scenario_path("cardinality_unmarked_port"))[0] == 1
        assert run(capsys, "check-pres", corpus.scenario_path("addthree_plus4"))[0] == 1
        assert run(capsys, "check-fsmd", corpus.scenario_path("jammer_swapped"))[0] == 1

    def test_inconclusive_exits_two(self, capsys, tmp_path):
        branched = tmp_path / "branched.pres"
        branched.write_text(
            """
            net branched {
              place Pa marked; place Pe;
              transition pos { pre Pa; post Pe; fn Pa + 3; guard Pa >= 0; }
              transition neg { pre Pa; post Pe; fn Pa - 3; guard Pa < 0; }
            }
            """
        )
        scenario = tmp_path / "branched.scn"
        scenario.write_text(
            f"""
            scenario branched {{
              model left = "branched.pres";
              model right = "{corpus.corpus_path('addthree_a')}";
              check functional;
              inmap {{ Pa -> Pa; }}
              outmap {{ Pe -> Pe; }}
              inputs {{ Pa = 2; }}
            }}
            """
        )
        assert run(capsys, "check-pres", str(scenario))[0] == 2


class TestSimulate:
    def test_guard_split_scenario(self, capsys, tmp_path):
        report_file = tmp_path / "run.json"
        code, out, _ = run(capsys, "simulate", corpus.scenario_path("guard_split"), "--json", str(report_file))
        assert code == 0
        assert "Quiescent" in out
        report = json.loads(report_file.read_text())
        assert report["runs"][0]["out_ports"] == {"p4": 3}
        assert report["runs"][0]["trace"][0]["fired"] == ["t1", "t3"]

    def test_deadlock_exits_two(self, capsys, tmp_path):
        net = tmp_path / "stuck.pres"
        net.write_text(
            """
            net stuck {
              place a marked; place b;
              transition t { pre a; post b; fn a; guard a > 10; }
            }
            """
        )
        scenario = tmp_path / "stuck.scn"
        scenario.write_text('scenario stuck { model left = "stuck.pres"; inputs { a = 0; } }')
        code, out, _ = run(capsys, "simulate", str(scenario))
        assert code == 2
        assert "Deadlock" in out

    def test_schedule_independence_mode(self, capsys):
        code, out, _ = run(capsys, "simulate", corpus.scenario_path("racy"), "--schedules", "10")
        assert code == 1
        assert "NotEquivalent" in out
        code, out, _ = run(capsys, "simulate", corpus.scenario_path("jammer"), "--schedules", "10")
        assert code == 0


class TestExportDot:
    def test_net_rendering_counts(self, capsys, guard_split):
        code, out, _ = run(capsys, "export-dot", corpus.corpus_path("guard_split"))
        assert code == 0
        assert out.count("shape=circle") == 7
        assert out.count("shape=box") == 3
        arc_count = len(guard_split.input_arcs) + len(guard_split.output_arcs)
        assert out.count(" -> ") == arc_count == 10

    def test_single_state_machine(self, capsys, tmp_path):
        f = tmp_path / "tiny.fsmd"
        f.write_text("fsmd tiny { states q0; reset q0; }")
        code, out, _ = run(capsys, "export-dot", str(f))
        assert code == 0
        assert out.count("shape=") == 1
        assert " -> " not in out

    def test_pipelined_machine_has_ten_ellipses(self, capsys, tmp_path):
        converted = tmp_path / "pipe.fsmd"
        code, _, _ = run(capsys, "convert", corpus.corpus_path("jammer_pipelined"), "-o", str(converted))
        assert code == 0
        code, out, _ = run(capsys, "export-dot", str(converted))
        assert code == 0
        assert out.count("shape=ellipse") + out.count("shape=doublecircle") == 10


class TestStyling:
    def test_color_disabled_by_env(self, capsys, monkeypatch):
        monkeypatch.setenv("PRESTO_COLOR", "0")
        _, out, _ = run(capsys, "check-fsmd", corpus.scenario_path("jammer"))
        assert "\x1b[" not in out

    def test_not_a_tty_means_plain(self, capsys):
        _, out, _ = run(capsys, "check-fsmd", corpus.scenario_path("jammer"))
        assert "\x1b[" not in out
