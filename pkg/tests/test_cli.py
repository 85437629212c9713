import json

import pytest

from batchcut import generate_planted, write_dataset
from batchcut.cli import main


@pytest.fixture
def fixture_path(tmp_path):
    path = tmp_path / "fixture.jsonl"
    rows = [
        {"id": 0, "descriptions": [0, 1]},
        {"id": 1, "descriptions": [0, 1]},
        {"id": 2, "descriptions": [2, 3]},
        {"id": 3, "descriptions": [2]},
    ]
    with open(path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return str(path)


@pytest.fixture
def planted_path(tmp_path):
    ds, _ = generate_planted(60, 4, 6, 1, 0.15, seed=2)
    path = tmp_path / "planted.jsonl"
    write_dataset(ds, path)
    return str(path)


class TestPartitionCommand:
    def test_writes_partition_and_report(self, fixture_path, tmp_path, capsys):
        out = str(tmp_path / "part.json")
        report = str(tmp_path / "report.json")
        code = main(["partition", fixture_path, "--batch-size", "2", "--seed", "0",
                     "--out", out, "--report-out", report])
        assert code == 0
        payload = json.loads(open(out).read())
        assert payload["k"] == 2
        assert sorted(map(sorted, payload["batches"])) == [[0, 1], [2, 3]]
        rep = json.loads(open(report).read())
        assert rep["objective"] == 4
        assert "objective=4" in capsys.readouterr().out

    def test_usage_error_exit_2(self, fixture_path):
        with pytest.raises(SystemExit) as err:
            main(["partition", fixture_path, "--k", "0", "--out", "x.json"])
        assert err.value.code == 2

    def test_missing_shape_flag_exit_2(self, fixture_path):
        with pytest.raises(SystemExit) as err:
            main(["partition", fixture_path])
        assert err.value.code == 2

    def test_runtime_error_exit_1(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.jsonl")
        code = main(["partition", missing, "--k", "2", "--out", str(tmp_path / "p.json")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_k_prime_clamped_with_warning(self, fixture_path, tmp_path, capsys):
        out = str(tmp_path / "p.json")
        code = main(["partition", fixture_path, "--k", "2", "--k-prime", "9",
                     "--out", out])
        assert code == 0
        assert "clamped" in capsys.readouterr().err

    def test_byte_identical_reruns(self, planted_path, tmp_path):
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"part_{tag}.json"
            report = tmp_path / f"report_{tag}.json"
            code = main(["partition", planted_path, "--batch-size", "15",
                         "--seed", "7", "--out", str(out), "--report-out", str(report)])
            assert code == 0
            outs.append((out.read_bytes(), report.read_bytes()))
        assert outs[0] == outs[1]

    def test_embedding_dump(self, fixture_path, tmp_path):
        emb = tmp_path / "emb.csv"
        code = main(["partition", fixture_path, "--k", "2",
                     "--out", str(tmp_path / "p.json"), "--embedding-out", str(emb)])
        assert code == 0
        assert len(emb.read_text().strip().splitlines()) == 4


class TestCompareCommand:
    def test_all_methods_on_fixture(self, fixture_path, tmp_path, capsys):
        out = tmp_path / "cmp.csv"
        code = main(["compare", fixture_path, "--batch-size", "2", "--seeds", "200",
                     "--seed", "0", "--out", str(out)])
        assert code == 0
        rows = {r["method"]: r for r in _read_csv(out)}
        assert float(rows["spectral"]["objective_mean"]) == 4
        assert float(rows["greedy"]["objective_mean"]) == 4
        assert float(rows["brute"]["objective_mean"]) == 4
        assert float(rows["random"]["objective_mean"]) == pytest.approx(6.0, abs=0.45)
        assert float(rows["spectral"]["speedup_vs_random"]) > 1.3
        table = capsys.readouterr().out
        assert "spectral" in table and "brute" in table

    def test_single_method(self, fixture_path, tmp_path):
        out = tmp_path / "cmp.csv"
        code = main(["compare", fixture_path, "--k", "2", "--methods", "greedy",
                     "--out", str(out)])
        assert code == 0
        rows = _read_csv(out)
        assert len(rows) == 1 and rows[0]["method"] == "greedy"

    def test_brute_skipped_when_too_large(self, planted_path, tmp_path):
        out = tmp_path / "cmp.csv"
        code = main(["compare", planted_path, "--k", "4", "--methods", "brute",
                     "--seeds", "2", "--out", str(out)])
        assert code == 0
        rows = _read_csv(out)
        assert rows[0]["status"] == "skipped"

    def test_random_row_reports_std(self, fixture_path, tmp_path):
        out = tmp_path / "cmp.csv"
        main(["compare", fixture_path, "--k", "2", "--methods", "random",
              "--seeds", "50", "--out", str(out)])
        rows = _read_csv(out)
        assert float(rows[0]["objective_std"]) > 0


class TestTraceCommand:
    def test_trace_csv_and_correlation(self, planted_path, tmp_path, capsys):
        trace = tmp_path / "trace.csv"
        code = main(["trace", planted_path, "--k", "4", "--seed", "1",
                     "--trace-out", str(trace)])
        assert code == 0
        lines = trace.read_text().strip().splitlines()
        assert lines[0] == "iteration,mean_centroid_distance,distinct_descriptions_total"
        assert len(lines) >= 2
        out = capsys.readouterr().out
        assert "pearson_r=" in out

    def test_trace_to_stdout(self, fixture_path, capsys):
        code = main(["trace", fixture_path, "--batch-size", "2", "--seed", "0"])
        assert code == 0
        out = capsys.readouterr().out
        assert "iteration,mean_centroid_distance" in out
        # the fixture converges immediately, so the correlation is undefined
        assert "pearson_r=undefined" in out


class TestSweepCommand:
    def test_batch_size_axis(self, planted_path, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", planted_path, "--axis", "batch-size",
                     "--values", "5,10,15", "--seeds", "5", "--out", str(out)])
        assert code == 0
        rows = _read_csv(out)
        assert [r["value"] for r in rows] == ["5", "10", "15"]
        assert all(float(r["speedup"]) > 0 for r in rows)

    def test_cap_axis(self, planted_path, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", planted_path, "--axis", "cap", "--values", "2,4,100",
                     "--batch-size", "15", "--seeds", "3", "--out", str(out)])
        assert code == 0
        rows = _read_csv(out)
        assert len(rows) == 3

    def test_cap_above_max_set_size_matches_uncapped(self, planted_path, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        main(["sweep", planted_path, "--axis", "cap", "--values", "100",
              "--batch-size", "15", "--seeds", "3", "--out", str(out_a)])
        main(["sweep", planted_path, "--axis", "batch-size", "--values", "15",
              "--seeds", "3", "--out", str(out_b)])
        a = _read_csv(out_a)[0]
        b = _read_csv(out_b)[0]
        assert a["spectral_objective"] == b["spectral_objective"]

    def test_empty_values_exit_2(self, fixture_path):
        with pytest.raises(SystemExit) as err:
            main(["sweep", fixture_path, "--axis", "batch-size", "--values", ""])
        assert err.value.code == 2

    def test_cap_axis_requires_shape(self, fixture_path, capsys):
        code = main(["sweep", fixture_path, "--axis", "cap", "--values", "4"])
        assert code == 1
        assert "needs --k or --batch-size" in capsys.readouterr().err


def _read_csv(path):
    import csv

    with open(path) as fh:
        return list(csv.DictReader(fh))
