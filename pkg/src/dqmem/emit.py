"""Rendering and emission of scenario results.

CSV columns carry decimal values with 9 significant digits and newline
terminated rows; JSON is a single document mirroring the in-memory
results. Rendering is a pure function of the results, so re-emitting the
same results is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .engine import ScenarioResults

CSV_FILES = ("timeseries.csv", "lifetimes.csv", "events.csv", "regime.csv")
JSON_FILE = "results.json"


def _fmt(x: float) -> str:
    return format(x, ".9g")


def render_timeseries_csv(results: ScenarioResults) -> str:
    header = "t,code_id,status,entropy," + ",".join(
        f"N_{i + 1}" for i in range(results.mode_count)
    )
    lines = [header]
    for sample in results.samples:
        for mem in sample.memories:
            lines.append(
                ",".join(
                    [
                        _fmt(sample.t),
                        mem.code_id,
                        mem.status,
                        _fmt(mem.entropy),
                        *(_fmt(n) for n in mem.occupations),
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def render_lifetimes_csv(results: ScenarioResults) -> str:
    lines = ["k,domain_size,lifetime"]
    for row in results.lifetimes:
        lines.append(f"{_fmt(row.k)},{_fmt(row.domain_size)},{_fmt(row.lifetime)}")
    return "\n".join(lines) + "\n"


def render_events_csv(results: ScenarioResults) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["event_index", "t", "kind", "detail"])
    for entry in results.events:
        index = "" if entry.event_index is None else str(entry.event_index)
        writer.writerow([index, _fmt(entry.t), entry.kind, entry.detail])
    return buffer.getvalue()


def render_regime_csv(results: ScenarioResults) -> str:
    regime = results.regime
    lines = ["k,domain_size,competition_ratio,surviving"]
    for row, ratio, surviving in zip(
        results.lifetimes, regime.ratios, regime.surviving
    ):
        lines.append(
            f"{_fmt(row.k)},{_fmt(row.domain_size)},{_fmt(float(ratio))},"
            f"{'true' if surviving else 'false'}"
        )
    return "\n".join(lines) + "\n"


def _json_lifetime(value: float):
    # strict JSON has no Infinity token; never-overdamped modes serialize as null
    return None if math.isinf(value) else value


def results_document(results: ScenarioResults) -> dict:
    """Plain-dict mirror of the results, ready for JSON serialization."""
    regime = results.regime
    return {
        "mode_count": results.mode_count,
        "samples": [
            {
                "t": sample.t,
                "alive_count": sample.alive_count,
                "overdamped_mode_count": sample.overdamped_mode_count,
                "memories": [
                    {
                        "code_id": mem.code_id,
                        "status": mem.status,
                        "entropy": mem.entropy,
                        "occupations": list(mem.occupations),
                    }
                    for mem in sample.memories
                ],
            }
            for sample in results.samples
        ],
        "lifetimes": [
            {
                "k": row.k,
                "domain_size": row.domain_size,
                "lifetime": _json_lifetime(row.lifetime),
            }
            for row in results.lifetimes
        ],
        "regime": {
            "t": regime.t,
            "overdamped_count": regime.overdamped_count,
            "underdamped_count": regime.underdamped_count,
            "competition_ratios": [float(r) for r in regime.ratios],
            "surviving_fraction_small_domains": regime.surviving_fraction_small_domains,
            "surviving_fraction_large_domains": regime.surviving_fraction_large_domains,
        },
        "events": [
            {
                "event_index": entry.event_index,
                "t": entry.t,
                "kind": entry.kind,
                "detail": entry.detail,
            }
            for entry in results.events
        ],
    }


def render_results_json(results: ScenarioResults) -> str:
    return json.dumps(results_document(results), indent=2, allow_nan=False) + "\n"


def render(results: ScenarioResults, format: str) -> dict[str, str]:
    """Rendered output documents keyed by file name."""
    if format == "csv":
        return {
            "timeseries.csv": render_timeseries_csv(results),
            "lifetimes.csv": render_lifetimes_csv(results),
            "events.csv": render_events_csv(results),
            "regime.csv": render_regime_csv(results),
        }
    if format == "json":
        return {JSON_FILE: render_results_json(results)}
    raise ValueError(f"format must be 'csv' or 'json', got '{format}'")


def emit(results: ScenarioResults, format: str, out_dir: str | Path) -> list[Path]:
    """Write the rendered documents into out_dir; returns the file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, content in render(results, format).items():
        path = out / name
        path.write_bytes(content.encode("utf-8"))
        paths.append(path)
    return paths
