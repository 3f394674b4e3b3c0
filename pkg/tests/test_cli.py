import csv
import filecmp
import json

import numpy as np
import pytest

from arcpd.cli import InputError, main, read_series_csv
from arcpd.simulate import builtin_model_names


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in rows:
            w.writerow(row)


@pytest.fixture
def noise_csv(tmp_path):
    rng = np.random.default_rng(0)
    path = tmp_path / "series.csv"
    write_csv(path, [["x"]] + [[repr(v)] for v in rng.standard_normal(1024)])
    return str(path)


class TestReadSeriesCsv:
    def test_headerless_single_column(self, tmp_path):
        path = tmp_path / "plain.csv"
        write_csv(path, [[1.5], [2.5], [-3.0]])
        assert read_series_csv(str(path)) == [1.5, 2.5, -3.0]

    def test_header_detected(self, tmp_path):
        path = tmp_path / "h.csv"
        write_csv(path, [["x"], [1.0], [2.0]])
        assert read_series_csv(str(path)) == [1.0, 2.0]

    def test_column_by_name(self, tmp_path):
        path = tmp_path / "two.csv"
        write_csv(path, [["t", "value"], [0, 1.5], [1, 2.5]])
        assert read_series_csv(str(path), "value") == [1.5, 2.5]

    def test_column_by_index(self, tmp_path):
        path = tmp_path / "two.csv"
        write_csv(path, [[0, 1.5], [1, 2.5]])
        assert read_series_csv(str(path), "1") == [1.5, 2.5]

    def test_multicolumn_needs_column(self, tmp_path):
        path = tmp_path / "two.csv"
        write_csv(path, [[0, 1.5], [1, 2.5]])
        with pytest.raises(InputError, match="--column"):
            read_series_csv(str(path))

    def test_non_numeric_row_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        write_csv(path, [["x"], [1.0], ["oops"], [2.0]])
        with pytest.raises(InputError, match="line 3"):
            read_series_csv(str(path))

    def test_missing_file(self):
        with pytest.raises(InputError):
            read_series_csv("/nonexistent/nope.csv")


class TestDetectCommand:
    def test_detect_json_contract(self, noise_csv, capsys):
        assert main(["detect", noise_csv]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["schema"] == 1
        assert {"candidates", "boundary_tests", "final_cps"} <= set(report)

    def test_detect_out_and_plot(self, noise_csv, tmp_path):
        out = tmp_path / "report.json"
        plot = tmp_path / "series.svg"
        assert main(["detect", noise_csv, "--out", str(out), "--plot", str(plot)]) == 0
        report = json.loads(out.read_text())
        assert report["series_length"] == 1024
        svg = plot.read_text()
        assert svg.startswith("<svg") and "</svg>" in svg

    def test_too_short_is_exit_1(self, tmp_path, capsys):
        path = tmp_path / "short.csv"
        write_csv(path, [["x"]] + [[float(i)] for i in range(20)])
        assert main(["detect", str(path)]) == 1
        assert "series too short" in capsys.readouterr().err

    def test_malformed_is_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        write_csv(path, [["x"], [1.0], ["zzz"]])
        assert main(["detect", str(path)]) == 2
        assert "line 3" in capsys.readouterr().err

    def test_flags_are_wired_through(self, noise_csv, capsys):
        code = main(
            ["detect", noise_csv, "-w", "60", "--order-mode", "bic",
             "--max-order", "4", "--correction", "bonferroni", "--alpha", "0.01"]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["config"]["window_radius"] == 60
        assert report["config"]["order_mode"] == "bic"
        assert report["config"]["correction"] == "bonferroni"
        assert report["config"]["alpha"] == 0.01


class TestSimulateCommand:
    def test_simulate_b(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["simulate", "--model", "B", "--seed", "3", "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x"
        assert len(lines) == 1 + 1024
        sidecar = json.loads((tmp_path / "b.csv.json").read_text())
        assert sidecar["true_cps"] == [512, 768]

    def test_simulate_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--model", "G", "--seed", "9", "-o", str(a)])
        main(["simulate", "--model", "G", "--seed", "9", "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_model_is_exit_2(self, tmp_path, capsys):
        code = main(["simulate", "--model", "Z", "-o", str(tmp_path / "z.csv")])
        assert code == 2
        assert "unknown model" in capsys.readouterr().err

    def test_round_trip_every_model(self, tmp_path):
        for i, name in enumerate(builtin_model_names()):
            out = tmp_path / f"m{i}.csv"
            assert main(["simulate", "--model", name, "--seed", "1", "-o", str(out)]) == 0
            assert main(["detect", str(out), "--out", str(tmp_path / f"m{i}.json")]) == 0


class TestBenchCommand:
    def test_bench_smoke(self, tmp_path, capsys):
        out = tmp_path / "bench"
        code = main(
            ["bench", "--model", "I", "--replicates", "5", "--seed", "1",
             "--out", str(out)]
        )
        assert code == 0
        rates = (out / "rates.csv").read_text().splitlines()
        assert rates[0] == "model,method,replicates,exact_detection_rate"
        assert len(rates) == 3  # header + BH + BONF
        assert (out / "locations.csv").exists()
        assert (out / "locations_I.svg").exists()

    def test_bench_locations_bookkeeping(self, tmp_path):
        out = tmp_path / "bench"
        main(["bench", "--model", "D", "--replicates", "4", "--seed", "2",
              "--out", str(out)])
        with open(out / "locations.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        # one row per estimated change point per (method, replicate)
        for method in ("MCP2-BH", "MCP2-BONF"):
            per_rep = {}
            for row in rows:
                if row["method"] == method:
                    per_rep.setdefault(int(row["replicate"]), []).append(row["position"])
            assert set(per_rep) <= set(range(4))

    def test_bench_unknown_model_is_exit_2(self, tmp_path, capsys):
        code = main(["bench", "--model", "Q", "--replicates", "2",
                     "--out", str(tmp_path / "x")])
        assert code == 2

    def test_bench_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        args = ["bench", "--model", "I", "--replicates", "8", "--seed", "4"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        for name in ("rates.csv", "locations.csv", "locations_I.svg"):
            assert filecmp.cmp(out1 / name, out2 / name, shallow=False)

    def test_model_a_comma_list(self, tmp_path):
        out = tmp_path / "bench"
        code = main(["bench", "--model", "A:0.4,A:0.7", "--replicates", "2",
                     "--seed", "3", "--out", str(out)])
        assert code == 0
        text = (out / "rates.csv").read_text()
        assert "A:0.4" in text and "A:0.7" in text
