import json
from fractions import Fraction as F
from pathlib import Path

import pytest

import condrsa as cr
from condrsa.results import (
    FigureError,
    applicable_figures,
    emit_plot_data,
    render_scalar,
)
from condrsa.runner import RunConfig, run
from condrsa.scenario_io import (
    ScenarioFormatError,
    parse_scenario_dict,
    parse_scenario_file,
    scenario_to_dict,
    write_scenario_file,
)


@pytest.fixture()
def skiing_dict(skiing):
    return scenario_to_dict(skiing)


class TestScenarioFiles:
    @pytest.mark.parametrize("name", cr.BUILTIN_NAMES)
    def test_round_trip_equals_embedded_constant(self, name, tmp_path):
        original = cr.builtin(name)
        path = tmp_path / f"{name}.json"
        write_scenario_file(original, path)
        assert parse_scenario_file(path) == original

    def test_variant_round_trip(self, tmp_path):
        path = tmp_path / "variant.json"
        write_scenario_file(cr.SKIING_UNCERTAIN_TRIP_VARIANT, path)
        assert parse_scenario_file(path) == cr.SKIING_UNCERTAIN_TRIP_VARIANT

    def test_noisy_or_state_reproduces_dependent_table(self, skiing_dict, skiing):
        skiing_dict["states"][0] = {
            "label": "dep",
            "relation": "AC_pos",
            "weight": "1/2",
            "noisy_or": {"upsilon_p": "1/5", "tau": 1, "beta": 0},
        }
        parsed = parse_scenario_dict(skiing_dict)
        assert parsed.states[0].table == skiing.states[0].table

    def test_marginals_state(self, skiing_dict):
        skiing_dict["states"][1] = {
            "label": "ind",
            "relation": "independent",
            "weight": "1/2",
            "marginals": {"antecedent": "1/5", "consequent": 1},
        }
        parsed = parse_scenario_dict(skiing_dict)
        assert parsed.states[1].table.cells == (F(1, 5), 0, F(4, 5), 0)

    def test_float_numbers_switch_backend(self, skiing_dict):
        skiing_dict["theta"] = 0.9
        parsed = parse_scenario_dict(skiing_dict)
        assert not parsed.to_context().exact

    def test_weights_must_sum_to_one(self, skiing_dict):
        skiing_dict["states"][0]["weight"] = "2/5"
        with pytest.raises(ScenarioFormatError, match="sum to 1"):
            parse_scenario_dict(skiing_dict)

    def test_bad_table_sum_names_field(self, skiing_dict):
        skiing_dict["states"][0]["table"]["both"] = "3/5"
        with pytest.raises(ScenarioFormatError, match=r"states\[0\].table"):
            parse_scenario_dict(skiing_dict)

    def test_missing_field_names_path(self, skiing_dict):
        del skiing_dict["states"][1]["weight"]
        with pytest.raises(ScenarioFormatError, match=r"states\[1\]"):
            parse_scenario_dict(skiing_dict)

    def test_unknown_relation(self, skiing_dict):
        skiing_dict["states"][0]["relation"] = "sideways"
        with pytest.raises(ScenarioFormatError, match="unknown relation"):
            parse_scenario_dict(skiing_dict)

    def test_bad_utterance_names_index(self, skiing_dict):
        skiing_dict["utterances"][2] = "E -> Q"
        with pytest.raises(ScenarioFormatError, match=r"utterances\[2\]"):
            parse_scenario_dict(skiing_dict)

    def test_unknown_mediator(self, skiing_dict):
        skiing_dict["observation"]["mediator"] = "X"
        with pytest.raises(ScenarioFormatError, match="observation.mediator"):
            parse_scenario_dict(skiing_dict)

    def test_theta_range_checked(self, skiing_dict):
        skiing_dict["theta"] = "1/2"
        with pytest.raises(ScenarioFormatError, match="theta"):
            parse_scenario_dict(skiing_dict)

    def test_marginals_with_dependent_relation_rejected(self, skiing_dict):
        skiing_dict["states"][1] = {
            "label": "ind",
            "relation": "AC_pos",
            "weight": "1/2",
            "marginals": {"antecedent": "1/5", "consequent": 1},
        }
        with pytest.raises(ScenarioFormatError, match="independent relation"):
            parse_scenario_dict(skiing_dict)

    def test_exactly_one_table_source(self, skiing_dict):
        skiing_dict["states"][0]["marginals"] = {"antecedent": "1/5", "consequent": 1}
        with pytest.raises(ScenarioFormatError, match="exactly one"):
            parse_scenario_dict(skiing_dict)

    def test_state_without_assertable_utterance_reports_label(self, skiing_dict):
        skiing_dict["states"].append(
            {
                "label": "nothing_to_say",
                "weight": "1/3",
                "marginals": {"antecedent": "1/2", "consequent": "1/2"},
            }
        )
        for state in skiing_dict["states"][:2]:
            state["weight"] = "1/3"
        with pytest.raises(ScenarioFormatError, match="nothing_to_say"):
            parse_scenario_dict(skiing_dict)

    def test_syntax_error_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "name": "x",\n  oops\n}\n')
        with pytest.raises(ScenarioFormatError, match="line 3"):
            parse_scenario_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioFormatError, match="cannot read"):
            parse_scenario_file(tmp_path / "absent.json")


class TestRendering:
    def test_rational_mode(self):
        assert render_scalar(F(5, 6), "rational") == "5/6"
        assert render_scalar(3, "rational") == "3"

    def test_float_mode_twelve_significant_digits(self):
        assert render_scalar(F(5, 6), "float") == "0.833333333333"
        assert render_scalar(0.1234567890123456, "float") == "0.123456789012"

    def test_rational_mode_rejects_floats(self):
        with pytest.raises(cr.ModelError):
            render_scalar(0.5, "rational")


class TestBundles:
    def test_byte_reproducibility_scenario(self, tmp_path):
        def run_once(where: Path) -> dict[str, bytes]:
            run(RunConfig(command="run-scenario", scenario="sundowners",
                          output_dir=where, formats=("csv", "json")))
            return {p.name: p.read_bytes() for p in sorted(where.rglob("*")) if p.is_file()}

        first = run_once(tmp_path / "a")
        second = run_once(tmp_path / "b")
        assert first == second

    def test_byte_reproducibility_sampled(self, tmp_path):
        def run_once(where: Path, threads: int) -> dict[str, bytes]:
            run(RunConfig(command="run-default-context", seed=13, n_states=300,
                          threads=threads, output_dir=where,
                          formats=("csv", "json", "plotdata")))
            return {p.name: p.read_bytes() for p in sorted(where.rglob("*")) if p.is_file()}

        first = run_once(tmp_path / "a", 1)
        second = run_once(tmp_path / "b", 3)
        assert first == second

    def test_csv_and_json_value_equivalence(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="toy",
                               output_dir=tmp_path, formats=("csv", "json")))
        payload = json.loads((tmp_path / "bundle.json").read_text())
        for name, table in payload["tables"].items():
            lines = (tmp_path / f"{name}.csv").read_text().splitlines()
            data = [l for l in lines if not l.startswith("#")]
            assert data[0].split(",") == table["columns"]
            assert [line.split(",") for line in data[1:]] == table["rows"]

    def test_fingerprint_in_every_row(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="toy",
                               output_dir=tmp_path, formats=("csv",)))
        fp = bundle.fingerprint
        for path in tmp_path.glob("*.csv"):
            lines = path.read_text().splitlines()
            assert lines[0].startswith("# config: {")  # full metadata echo
            assert lines[1].split(",")[-1] == "config"
            assert all(line.split(",")[-1] == fp for line in lines[2:])

    def test_table_four_fractions_render_exactly(self, tmp_path):
        run(RunConfig(command="run-scenario", scenario="toy",
                      output_dir=tmp_path, formats=("csv",)))
        pragmatic = (tmp_path / "pragmatic_listener.csv").read_text()
        for fraction in ("5/16", "11/16", "10/87", "22/87", "55/87"):
            assert fraction in pragmatic
        speaker = (tmp_path / "speaker.csv").read_text()
        for fraction in ("2/11", "3/11", "6/11", "2/5", "3/5"):
            assert fraction in speaker


class TestFigures:
    def test_unknown_figure_lists_known_ids(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="toy"))
        with pytest.raises(FigureError, match="fig10c"):
            emit_plot_data(bundle, "fig99", tmp_path)

    def test_missing_table_names_command(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="toy"))
        with pytest.raises(FigureError, match="run-default-context"):
            emit_plot_data(bundle, "fig7", tmp_path)

    def test_wrong_scenario_rejected(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="skiing"))
        with pytest.raises(FigureError, match="sundowners"):
            emit_plot_data(bundle, "fig13d", tmp_path)

    def test_fig7_schema(self, tmp_path):
        bundle = run(RunConfig(command="run-default-context", seed=3, n_states=200))
        path = emit_plot_data(bundle, "fig7", tmp_path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# figure: fig7"
        header = next(l for l in lines if not l.startswith("#"))
        assert header.split(",") == [
            "certainty", "relation_group", "utterance_type", "count",
            "frequency", "config",
        ]

    def test_fig9_has_three_cohorts(self, tmp_path):
        bundle = run(RunConfig(command="run-default-context", seed=3, n_states=200))
        path = emit_plot_data(bundle, "fig9", tmp_path)
        rows = [l.split(",") for l in path.read_text().splitlines()
                if l and not l.startswith("#")][1:]
        cohorts = {r[0] for r in rows}
        assert cohorts == {"prior", "assertable", "best_choice"}

    def test_scenario_figures(self, tmp_path):
        for scenario, figures in (
            ("skiing", {"fig10c"}),
            ("garden_party", {"fig11c", "fig12b"}),
            ("sundowners", {"fig13d"}),
            ("toy", set()),
        ):
            bundle = run(RunConfig(command="run-scenario", scenario=scenario))
            assert set(applicable_figures(bundle)) == figures

    def test_fig11c_excludes_observation_stage(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="garden_party"))
        path_pre = emit_plot_data(bundle, "fig11c", tmp_path / "pre")
        path_post = emit_plot_data(bundle, "fig12b", tmp_path / "post")
        assert "pragmatic_observed" not in path_pre.read_text()
        assert "pragmatic_observed" in path_post.read_text()

    def test_fig13d_covers_three_quantities(self, tmp_path):
        bundle = run(RunConfig(command="run-scenario", scenario="sundowners"))
        path = emit_plot_data(bundle, "fig13d", tmp_path)
        rows = [l.split(",") for l in path.read_text().splitlines()
                if l and not l.startswith("#")][1:]
        assert {r[0] for r in rows} == {
            "antecedent", "joint_antecedent_consequent", "relation_dependent",
        }


class TestRunConfigValidation:
    def test_seed_required_for_sampling(self):
        with pytest.raises(cr.ModelError, match="--seed"):
            RunConfig(command="run-default-context")

    def test_rational_sampling_rejected(self):
        with pytest.raises(cr.ModelError, match="float"):
            RunConfig(command="run-default-context", seed=1, numeric="rational")

    def test_unknown_command(self):
        with pytest.raises(cr.ModelError, match="unknown command"):
            RunConfig(command="transcend")

    def test_unknown_format(self):
        with pytest.raises(cr.ModelError, match="unknown format"):
            RunConfig(command="run-scenario", scenario="toy", formats=("yaml",))

    def test_float_override_on_exact_scenario_switches_backend(self):
        bundle = run(RunConfig(command="run-scenario", scenario="toy",
                               numeric="float"))
        assert bundle.metadata["numeric"] == "float"
        assert bundle.metadata["theta"] == 0.9

    def test_rational_override_with_float_parameter_rejected(self):
        with pytest.raises(cr.ModelError, match="rational"):
            run(RunConfig(command="run-scenario", scenario="toy",
                          numeric="rational", theta=0.925))

    def test_figure_with_sweep_rejected(self):
        with pytest.raises(cr.ModelError, match="sweep"):
            RunConfig(command="sweep", seed=1, figure="fig7")

    def test_duplicate_state_labels_rejected(self, skiing_dict):
        skiing_dict["states"][1]["label"] = "dep"
        with pytest.raises(ScenarioFormatError, match="duplicate state label"):
            parse_scenario_dict(skiing_dict)
