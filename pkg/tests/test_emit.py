import csv
import io
import json
import math

import pytest

from dqmem.emit import (
    emit,
    render,
    render_results_json,
    render_timeseries_csv,
)
from dqmem.engine import (
    LifetimeRow,
    LogEntry,
    MemorySampleRow,
    Sample,
    ScenarioResults,
    run_scenario,
)
from dqmem.dynamics import regime_report
from dqmem.scenario import parse_scenario
from dqmem.spectrum import Damping, build_mode_grid, exp_decay_schedule

TWO_PI = 2.0 * math.pi

SCENARIO = """
grid.volume_L = 6.283185307179586
grid.mode_count_M = 2
damping.gamma = 2.0
schedule.kind = exp_decay
schedule.T = 1.0
horizon = 2.0
sample_dt = 0.5
event 0 record alpha 2.0 3.0
event 0.5 perturb 0.2 7
event 1 stimulus 1.0 2.0 3.0
"""


def tiny_results(samples=()):
    grid = build_mode_grid(TWO_PI, 2)
    return ScenarioResults(
        mode_count=2,
        samples=tuple(samples),
        lifetimes=(
            LifetimeRow(1.0, 1.0, 0.0),
            LifetimeRow(2.0, 0.5, math.log(2.0)),
        ),
        regime=regime_report(grid, Damping(2.0), exp_decay_schedule(1.0), 2.0),
        events=(LogEntry(0, 0.0, "record", "alpha"),),
    )


class TestTimeseriesCsv:
    def test_empty_series_is_header_only(self):
        content = render_timeseries_csv(tiny_results())
        assert content == "t,code_id,status,entropy,N_1,N_2\n"

    def test_one_sample_one_memory_shape(self):
        sample = Sample(
            t=0.5,
            memories=(MemorySampleRow("alpha", "alive", 1.25, (2.0, 3.0)),),
            alive_count=1,
            overdamped_mode_count=1,
        )
        content = render_timeseries_csv(tiny_results([sample]))
        lines = content.strip().split("\n")
        assert len(lines) == 2  # header + one data row
        assert len(lines[1].split(",")) == 4 + 2  # t, code_id, status, entropy, N_1..N_M
        assert lines[1] == "0.5,alpha,alive,1.25,2,3"

    def test_nine_significant_digits(self):
        sample = Sample(
            t=1.0 / 3.0,
            memories=(MemorySampleRow("a", "alive", math.pi, (1.0 / 7.0,)),),
            alive_count=1,
            overdamped_mode_count=0,
        )
        results = ScenarioResults(
            mode_count=1,
            samples=(sample,),
            lifetimes=(LifetimeRow(1.0, 1.0, 1.0),),
            regime=regime_report(
                build_mode_grid(TWO_PI, 1), Damping(0.0), exp_decay_schedule(1.0), 1.0
            ),
            events=(),
        )
        row = render_timeseries_csv(results).strip().split("\n")[1]
        assert row.split(",")[0] == "0.333333333"
        assert row.split(",")[3] == "3.14159265"


class TestRoundTrip:
    def test_csv_reproduces_series_to_nine_digits(self):
        results = run_scenario(parse_scenario(SCENARIO))
        content = render(results, "csv")["timeseries.csv"]
        rows = list(csv.DictReader(io.StringIO(content)))
        flat = [
            (sample.t, mem.entropy, *mem.occupations)
            for sample in results.samples
            for mem in sample.memories
        ]
        assert len(rows) == len(flat)
        for row, (t, s, n1, n2) in zip(rows, flat):
            for key, value in (("t", t), ("entropy", s), ("N_1", n1), ("N_2", n2)):
                parsed = float(row[key])
                assert parsed == pytest.approx(value, rel=1e-8, abs=1e-12)


class TestJson:
    def test_document_mirrors_results(self):
        results = run_scenario(parse_scenario(SCENARIO))
        doc = json.loads(render_results_json(results))
        assert doc["mode_count"] == 2
        assert len(doc["samples"]) == len(results.samples)
        assert doc["samples"][0]["memories"][0]["code_id"] == "alpha"
        assert doc["lifetimes"][0]["lifetime"] == 0.0
        assert {e["kind"] for e in doc["events"]} >= {"record", "perturb", "recall"}

    def test_infinite_lifetime_serialized_as_null(self):
        scenario = SCENARIO.replace("damping.gamma = 2.0", "damping.gamma = 0.0")
        results = run_scenario(parse_scenario(scenario))
        doc = json.loads(render_results_json(results))
        assert all(row["lifetime"] is None for row in doc["lifetimes"])


class TestEmit:
    def test_writes_all_csv_files(self, tmp_path):
        results = run_scenario(parse_scenario(SCENARIO))
        paths = emit(results, "csv", tmp_path)
        assert [p.name for p in paths] == [
            "timeseries.csv",
            "lifetimes.csv",
            "events.csv",
            "regime.csv",
        ]
        assert all(p.exists() for p in paths)

    def test_reemission_byte_identical(self, tmp_path):
        results = run_scenario(parse_scenario(SCENARIO))
        first = emit(results, "csv", tmp_path / "a")
        second = emit(results, "csv", tmp_path / "b")
        for p1, p2 in zip(first, second):
            assert p1.read_bytes() == p2.read_bytes()
        j1 = emit(results, "json", tmp_path / "a")[0]
        j2 = emit(results, "json", tmp_path / "b")[0]
        assert j1.read_bytes() == j2.read_bytes()

    def test_unwritable_target_raises_oserror(self, tmp_path):
        blocker = tmp_path / "not-a-dir"
        blocker.write_text("occupied")
        results = tiny_results()
        with pytest.raises(OSError):
            emit(results, "csv", blocker)

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit(tiny_results(), "yaml", tmp_path)

    def test_events_csv_quoting_stable(self):
        results = run_scenario(parse_scenario(SCENARIO))
        content = render(results, "csv")["events.csv"]
        rows = list(csv.reader(io.StringIO(content)))
        assert rows[0] == ["event_index", "t", "kind", "detail"]
        assert all(len(r) == 4 for r in rows)
