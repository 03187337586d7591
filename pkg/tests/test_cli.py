import json

import numpy as np
import pytest

from seriesfit import deserialize, serialize, weighted_ss
from seriesfit.cli import main, read_dataset_csv
from seriesfit.dataset import Dataset


def _write_csv(path, rows, header=None):
    lines = ([header] if header else []) + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def noisy_sine_csv(tmp_path):
    rng = np.random.default_rng(12)
    x = np.linspace(0, 12, 40)
    y = 1.5 * np.sin(0.9 * x) + rng.normal(0, 0.1, 40)
    path = tmp_path / "data.csv"
    _write_csv(path, list(zip(x, y)))
    return path


class TestReadDatasetCsv:
    def test_two_and_three_column_rows(self, tmp_path):
        path = tmp_path / "d.csv"
        _write_csv(path, [(1, 2), (3, 4, 0.5)])
        d = read_dataset_csv(str(path))
        assert d.w.tolist() == [1.0, 0.5]

    def test_header_skipped_on_request(self, tmp_path):
        path = tmp_path / "d.csv"
        _write_csv(path, [(1, 2), (3, 4)], header="x,y")
        d = read_dataset_csv(str(path), header=True)
        assert d.n == 2


class TestFitCommand:
    def test_writes_model_and_report(self, tmp_path, noisy_sine_csv, capsys):
        out = tmp_path / "model.json"
        report = tmp_path / "report.json"
        code = main(
            ["fit", "--input", str(noisy_sine_csv), "--beta-min", "0.1", "--beta-max", "3.0",
             "--beta-grid", "256", "--refine", "20", "--max-iters", "4",
             "--out", str(out), "--report", str(report)]
        )
        assert code == 0
        model = deserialize(out.read_text())
        assert len(model.terms) == 4
        doc = json.loads(report.read_text())
        assert doc["stop_reason"] == "max_iterations"
        assert len(doc["records"]) == 4

    def test_printed_trajectory_matches_report_exactly(self, tmp_path, noisy_sine_csv, capsys):
        out = tmp_path / "model.json"
        report = tmp_path / "report.json"
        main(["fit", "--input", str(noisy_sine_csv), "--max-iters", "3", "--beta-grid", "128",
              "--out", str(out), "--report", str(report)])
        lines = capsys.readouterr().out.splitlines()
        doc = json.loads(report.read_text())
        initial_row = lines[1].split()
        assert float(initial_row[-1]) == doc["initial_ss"]
        for rec, line in zip(doc["records"], lines[2:]):
            cells = line.split()
            assert int(cells[0]) == rec["index"]
            assert float(cells[1]) == rec["beta"]
            assert float(cells[2]) == rec["alpha"]
            assert float(cells[3]) == rec["train_ss"]

    def test_data_already_matching_base_writes_zero_terms(self, tmp_path):
        path = tmp_path / "flat.csv"
        _write_csv(path, [(0, 5), (1, 5), (2, 5)])
        out = tmp_path / "m.json"
        code = main(["fit", "--input", str(path), "--out", str(out), "--report", str(tmp_path / "r.json")])
        assert code == 0
        assert deserialize(out.read_text()).terms == ()

    def test_stall_exits_3_but_writes_outputs(self, tmp_path):
        # even residual pattern around x=0 is orthogonal to every sine candidate
        path = tmp_path / "even.csv"
        _write_csv(path, [(-1, 3), (0, 1), (1, 3)])
        out = tmp_path / "m.json"
        report = tmp_path / "r.json"
        code = main(["fit", "--input", str(path), "--out", str(out), "--report", str(report)])
        assert code == 3
        assert deserialize(out.read_text()).terms == ()
        assert json.loads(report.read_text())["stop_reason"] == "no_improving_candidate"

    def test_repeated_runs_are_byte_identical(self, tmp_path, noisy_sine_csv):
        flags = ["--validation", "0.2", "--patience", "3", "--seed", "7",
                 "--beta-grid", "256", "--max-iters", "12"]
        files = []
        for tag in ("a", "b"):
            out = tmp_path / f"model_{tag}.json"
            report = tmp_path / f"report_{tag}.json"
            assert main(["fit", "--input", str(noisy_sine_csv), *flags,
                         "--out", str(out), "--report", str(report)]) == 0
            files.append((out.read_bytes(), report.read_bytes()))
        assert files[0] == files[1]

    def test_collapse_duplicates_flag(self, tmp_path):
        path = tmp_path / "dup.csv"
        _write_csv(path, [(1, 0), (1, 6), (2, 3), (3, 1)])
        out = tmp_path / "m.json"
        code = main(["fit", "--input", str(path), "--collapse-duplicates", "--max-iters", "2",
                     "--out", str(out), "--report", str(tmp_path / "r.json")])
        assert code in (0, 3)

    def test_span2pi_transform_flag(self, tmp_path, noisy_sine_csv):
        out = tmp_path / "m.json"
        code = main(["fit", "--input", str(noisy_sine_csv), "--transform", "span2pi",
                     "--beta-min", "0.2", "--beta-max", "8.0", "--max-iters", "3",
                     "--out", str(out), "--report", str(tmp_path / "r.json")])
        assert code == 0
        assert deserialize(out.read_text()).transform.kind == "affine"

    def test_reference_data_fit_reproduces_ss_envelope(self, tmp_path):
        # the bundled century counts, x pre-shifted to 1..40 so the generic
        # fit with an identity transform sees the demo geometry
        from seriesfit import eclipse

        d = eclipse.training_dataset(eclipse.load_eclipse_data())
        path = tmp_path / "counts.csv"
        _write_csv(path, [(x + 20.0, y) for x, y in zip(d.x, d.y)])
        report = tmp_path / "r.json"
        code = main(["fit", "--input", str(path), "--base", "constant", "--max-iters", "6",
                     "--beta-min", "0.05", "--beta-max", "3.2", "--beta-grid", "4096",
                     "--refine", "60", "--out", str(tmp_path / "m.json"), "--report", str(report)])
        assert code == 0
        doc = json.loads(report.read_text())
        assert doc["initial_ss"] == pytest.approx(4840.44, abs=0.5)
        assert doc["records"][-1]["train_ss"] <= 350.0

    def test_missing_input_file(self, tmp_path):
        assert main(["fit", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "m.json"),
                     "--report", str(tmp_path / "r.json")]) == 2

    def test_malformed_csv(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3,not-a-number\n")
        assert main(["fit", "--input", str(path), "--out", str(tmp_path / "m.json"),
                     "--report", str(tmp_path / "r.json")]) == 2

    def test_nonpositive_weight_is_data_error(self, tmp_path):
        path = tmp_path / "w.csv"
        _write_csv(path, [(1, 2, 1.0), (2, 3, -1.0)])
        assert main(["fit", "--input", str(path), "--out", str(tmp_path / "m.json"),
                     "--report", str(tmp_path / "r.json")]) == 2

    def test_unknown_flag_is_usage_error(self):
        assert main(["fit", "--no-such-flag"]) == 1


class TestPredictCommand:
    @pytest.fixture
    def model_file(self, tmp_path, six_term_model):
        path = tmp_path / "model.json"
        path.write_text(serialize(six_term_model))
        return path

    def test_inline_round_prints_integer_part(self, model_file, capsys):
        assert main(["predict", "--model", str(model_file), "--x", "0", "--round"]) == 0
        assert capsys.readouterr().out == "0.0,237\n"

    def test_empty_input_file_gives_empty_output(self, tmp_path, model_file, capsys):
        empty = tmp_path / "xs.csv"
        empty.write_text("")
        assert main(["predict", "--model", str(model_file), "--input", str(empty)]) == 0
        assert capsys.readouterr().out == ""

    def test_row_count_preserved(self, tmp_path, model_file):
        rng = np.random.default_rng(8)
        xs = rng.uniform(-100, 100, 1000)
        path = tmp_path / "xs.csv"
        path.write_text("\n".join(str(v) for v in xs) + "\n")
        out = tmp_path / "preds.csv"
        assert main(["predict", "--model", str(model_file), "--input", str(path), "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 1000

    def test_predictions_match_library(self, tmp_path, model_file, six_term_model, capsys):
        assert main(["predict", "--model", str(model_file), "--x", "1.5,2.5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        for line, x in zip(lines, (1.5, 2.5)):
            assert float(line.split(",")[1]) == six_term_model.predict(x)

    def test_needs_some_input(self, model_file):
        assert main(["predict", "--model", str(model_file)]) == 1

    def test_corrupt_model_is_data_error(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{}")
        assert main(["predict", "--model", str(path), "--x", "1"]) == 2


class TestPlotdataCommand:
    def test_columns_and_consistency_with_report(self, tmp_path, noisy_sine_csv):
        out = tmp_path / "m.json"
        report = tmp_path / "r.json"
        main(["fit", "--input", str(noisy_sine_csv), "--max-iters", "4", "--beta-grid", "256",
              "--out", str(out), "--report", str(report)])
        plot = tmp_path / "plot.csv"
        assert main(["plotdata", "--model", str(out), "--input", str(noisy_sine_csv), "--out", str(plot)]) == 0
        rows = plot.read_text().splitlines()
        assert rows[0] == "x,actual,fitted,residual"
        d = read_dataset_csv(str(noisy_sine_csv))
        assert len(rows) - 1 == d.n
        resid_ss = 0.0
        for line, w in zip(rows[1:], d.w):
            x, actual, fitted, residual = (float(v) for v in line.split(","))
            assert residual == actual - fitted
            resid_ss += w * residual * residual
        final = json.loads(report.read_text())["records"][-1]["train_ss"]
        assert resid_ss == pytest.approx(final, rel=1e-9)


class TestDemoEclipseCommand:
    def test_demo_outputs_and_group_check(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        assert main(["demo-eclipse"]) == 0
        out = capsys.readouterr().out
        assert "253 250 253 251 251 250 251  range 3" in out
        assert "225 226 225 227 222 222 224  range 5" in out
        plot_rows = (tmp_path / "eclipse_plot.csv").read_text().splitlines()
        assert plot_rows[0] == "n,actual,fitted"
        assert len(plot_rows) - 1 == 40
        model = deserialize((tmp_path / "eclipse_model.json").read_text())
        assert len(model.terms) == 6

    def test_holdout_flag_extends_plot(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["demo-eclipse", "--holdout"]) == 0
        assert len((tmp_path / "eclipse_plot.csv").read_text().splitlines()) - 1 == 50

    def test_missing_bundled_data_is_data_error(self, tmp_path, monkeypatch):
        from seriesfit import eclipse

        def boom():
            raise OSError("gone")

        monkeypatch.setattr(eclipse, "load_eclipse_data", boom)
        monkeypatch.chdir(tmp_path)
        assert main(["demo-eclipse"]) == 2
