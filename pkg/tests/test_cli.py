"""CLI behaviour: artifacts, exit codes, chaining, determinism."""

import json

import pytest

from epilogistic import series_to_csv
from epilogistic.cli import main

from conftest import synthetic_series


@pytest.fixture
def cases_csv(tmp_path, us_params):
    path = tmp_path / "cases.csv"
    path.write_text(series_to_csv(synthetic_series(us_params)), encoding="utf-8")
    return path


PARAM_FLAGS = ["--r", "0.06", "--gamma", "0.000034", "--h", "5.99"]


class TestFit:
    def test_fit_recovers_parameters(self, cases_csv, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["fit", "--input", str(cases_csv), "--output", str(out)]) == 0
        doc = json.loads((out / "fit.json").read_text())
        assert doc["r"] == pytest.approx(0.06, rel=0.01)
        assert doc["gamma"] == pytest.approx(3.4e-5, rel=0.01)
        assert doc["h"] == pytest.approx(5.99, rel=0.01)
        assert doc["converged"] is True
        assert (out / "residuals.csv").exists()
        assert (out / "series.csv").exists()
        summary = capsys.readouterr().out
        assert "r=" in summary and "rmse=" in summary

    def test_missing_input_exits_1_with_path(self, tmp_path, capsys):
        code = main(["fit", "--input", str(tmp_path / "nope.csv"), "--output", str(tmp_path)])
        assert code == 1
        assert "nope.csv" in capsys.readouterr().err

    def test_negative_count_exits_2_naming_row(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("date,daily\n2022-05-10,5\n2022-05-11,-3\n", encoding="utf-8")
        code = main(["fit", "--input", str(bad), "--output", str(tmp_path / "o")])
        assert code == 2
        err = capsys.readouterr().err
        assert "row 3" in err and "-3" in err

    def test_plot_flag_writes_chart(self, cases_csv, tmp_path):
        out = tmp_path / "out"
        main(["fit", "--input", str(cases_csv), "--output", str(out), "--plot"])
        assert (out / "chart.svg").read_bytes().startswith(b"<?xml")

    def test_nonconvergence_exits_3_with_result_written(
        self, cases_csv, tmp_path, monkeypatch
    ):
        import epilogistic.cli as cli_module
        from epilogistic import OptimizerSettings, fit

        starved = lambda series, **kw: fit(series, settings=OptimizerSettings(max_iterations=2))
        monkeypatch.setattr(cli_module, "fit", starved)
        out = tmp_path / "out"
        code = main(["fit", "--input", str(cases_csv), "--output", str(out)])
        assert code == 3
        assert json.loads((out / "fit.json").read_text())["converged"] is False


class TestScenario:
    def test_strong_control_reduction(self, tmp_path):
        out = tmp_path / "scen"
        code = main(
            ["scenario", *PARAM_FLAGS, "--u", "0.8", "--horizon", "236", "--output", str(out)]
        )
        assert code == 0
        doc = json.loads((out / "scenario.json").read_text())
        assert 0.73 <= doc["final_size_reduction"] <= 0.83
        header = (out / "trajectories.csv").read_text().splitlines()[0]
        assert header == (
            "day,date,baseline_cumulative,scenario_cumulative,baseline_daily,scenario_daily"
        )

    def test_policy_out_of_bounds_exits_2(self, tmp_path, capsys):
        code = main(["scenario", *PARAM_FLAGS, "--u", "1.2", "--output", str(tmp_path)])
        assert code == 2
        assert "[0, 1]" in capsys.readouterr().err

    def test_null_policy_reports_zero(self, tmp_path):
        out = tmp_path / "null"
        main(["scenario", *PARAM_FLAGS, "--u", "0", "--v", "0", "--output", str(out)])
        doc = json.loads((out / "scenario.json").read_text())
        assert doc["avg_cumulative_reduction"] == 0.0
        assert doc["final_size_reduction"] == 0.0

    def test_missing_parameters_exit_2(self, tmp_path, capsys):
        code = main(["scenario", "--u", "0.4", "--output", str(tmp_path)])
        assert code == 2
        assert "--from-fit" in capsys.readouterr().err

    def test_from_fit_chaining(self, cases_csv, tmp_path):
        fit_dir, scen_dir = tmp_path / "fit", tmp_path / "scen"
        assert main(["fit", "--input", str(cases_csv), "--output", str(fit_dir)]) == 0
        code = main(
            [
                "scenario",
                "--from-fit",
                str(fit_dir / "fit.json"),
                "--u",
                "0.8",
                "--output",
                str(scen_dir),
            ]
        )
        assert code == 0
        doc = json.loads((scen_dir / "scenario.json").read_text())
        assert doc["final_size_reduction"] == pytest.approx(0.7746, abs=0.02)


class TestSimulateSweepPlot:
    def test_simulate_artifacts(self, tmp_path):
        out = tmp_path / "sim"
        code = main(["simulate", *PARAM_FLAGS, "--y0", "1", "--output", str(out), "--plot"])
        assert code == 0
        doc = json.loads((out / "simulate.json").read_text())
        assert doc["final_cumulative"] == pytest.approx(29505.66, rel=1e-4)
        assert 85 <= doc["peak_day"] <= 105
        assert (out / "trajectories.csv").exists()
        assert (out / "chart.svg").exists()

    def test_format_json_skips_csv(self, tmp_path):
        out = tmp_path / "sim"
        main(["simulate", *PARAM_FLAGS, "--format", "json", "--output", str(out)])
        assert (out / "simulate.json").exists()
        assert not (out / "trajectories.csv").exists()

    def test_sweep_default_multipliers(self, tmp_path):
        out = tmp_path / "sweep"
        code = main(["sweep", *PARAM_FLAGS, "--output", str(out)])
        assert code == 0
        doc = json.loads((out / "sweep.json").read_text())
        assert doc["multipliers"] == [2.0, 5.0]
        reductions = [r["avg_cumulative_reduction"] for r in doc["reports"]]
        assert reductions[0] == pytest.approx(0.32, abs=0.08)
        assert reductions[1] == pytest.approx(0.55, abs=0.08)

    def test_sweep_rejects_bad_multiplier(self, tmp_path, capsys):
        code = main(["sweep", *PARAM_FLAGS, "--mult", "0.5", "--output", str(tmp_path)])
        assert code == 2
        assert ">= 1" in capsys.readouterr().err

    def test_plot_with_input_exports_series(self, cases_csv, tmp_path):
        out = tmp_path / "plot"
        code = main(["plot", "--input", str(cases_csv), *PARAM_FLAGS, "--output", str(out)])
        assert code == 0
        assert (out / "chart.svg").exists()
        exported = (out / "series.csv").read_text().splitlines()
        assert exported[0] == "date,daily,cumulative"

    def test_plot_without_anything_exits_2(self, tmp_path, capsys):
        assert main(["plot", "--output", str(tmp_path)]) == 2
        assert "nothing to plot" in capsys.readouterr().err


class TestDeterminism:
    def test_scenario_outputs_byte_identical(self, tmp_path):
        args = ["scenario", *PARAM_FLAGS, "--u", "0.4", "--plot"]
        a, b = tmp_path / "a", tmp_path / "b"
        assert main([*args, "--output", str(a)]) == 0
        assert main([*args, "--output", str(b)]) == 0
        for name in ("scenario.json", "trajectories.csv", "chart.svg"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_fit_outputs_byte_identical(self, cases_csv, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["fit", "--input", str(cases_csv), "--output", str(out)]) == 0
        for name in ("fit.json", "residuals.csv", "series.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()
