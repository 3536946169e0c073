"""Report rendering: text summaries, CSV/JSON tables, and PNG figures."""
import csv
import json
import os

import pytest

from tiltlane.evaluate import EvalMetrics, SweepRow, UatRow
from tiltlane.report import (format_eval_summary, format_sweep_summary,
                             format_uat_summary, write_eval_report,
                             write_sweep_report, write_uat_report)

METRICS = EvalMetrics(
    per_frame_accuracy=31 / 35,
    confusion=((8, 0, 2, 0), (0, 0, 0, 0), (2, 0, 18, 0), (0, 0, 0, 5)),
    onset_latency_frames=(3, 3),
    unmatched_transitions=0,
    event_edit_distance=0,
    frame_count=35,
    label_count=35,
    event_count=2,
)

NO_TRANSITIONS = EvalMetrics(
    per_frame_accuracy=1.0,
    confusion=((0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 4, 0), (0, 0, 0, 0)),
    onset_latency_frames=(),
    unmatched_transitions=0,
    event_edit_distance=0,
    frame_count=4,
    label_count=4,
    event_count=0,
)


def png_header(path):
    with open(path, "rb") as fh:
        return fh.read(8)


def test_eval_summary_text_carries_the_numbers():
    text = format_eval_summary(METRICS)
    assert "accuracy        0.8857" in text
    assert "mean 3.00 frames" in text
    assert "2 matched, 0 unmatched" in text
    rows = [line for line in text.splitlines() if line.strip().startswith("left")]
    assert rows and rows[0].split()[1:] == ["8", "0", "2", "0"]


def test_write_eval_report_produces_all_files(tmp_path):
    out = str(tmp_path / "report")
    written = write_eval_report(METRICS, out)
    names = [os.path.basename(p) for p in written]
    assert names == ["metrics.json", "summary.csv", "confusion.csv",
                     "confusion.png", "latency.png"]
    for p in written:
        assert os.path.getsize(p) > 0
    assert png_header(os.path.join(out, "confusion.png")).startswith(b"\x89PNG")
    assert png_header(os.path.join(out, "latency.png")).startswith(b"\x89PNG")

    with open(os.path.join(out, "metrics.json")) as fh:
        payload = json.load(fh)
    assert payload["per_frame_accuracy"] == pytest.approx(31 / 35)

    with open(os.path.join(out, "summary.csv"), newline="") as fh:
        table = {row[0]: row[1] for row in csv.reader(fh)}
    assert table["frames"] == "35"
    assert table["per_frame_accuracy"] == "0.885714"
    assert table["mean_onset_latency_frames"] == "3.0000"

    with open(os.path.join(out, "confusion.csv"), newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["truth\\predicted", "left", "right", "neutral", "none"]
    assert rows[1] == ["left", "8", "0", "2", "0"]


def test_eval_report_skips_latency_figure_without_transitions(tmp_path):
    written = write_eval_report(NO_TRANSITIONS, str(tmp_path))
    names = [os.path.basename(p) for p in written]
    assert "latency.png" not in names
    assert "confusion.png" in names


def test_sweep_report_files(tmp_path):
    rows = [SweepRow(15.0, 8.0, 1, METRICS), SweepRow(20.0, 8.0, 1, METRICS),
            SweepRow(20.0, 12.0, 3, NO_TRANSITIONS)]
    text = format_sweep_summary(rows)
    assert "15.0" in text and "0.8857" in text and text.count("\n") == 4

    written = write_sweep_report(rows, str(tmp_path))
    names = [os.path.basename(p) for p in written]
    assert names == ["sweep.json", "sweep.csv", "sweep.png"]
    assert png_header(written[-1]).startswith(b"\x89PNG")

    with open(written[0]) as fh:
        payload = json.load(fh)
    assert len(payload) == 3
    assert payload[0]["enter_deg"] == 15.0
    assert payload[2]["metrics"]["per_frame_accuracy"] == 1.0

    with open(written[1], newline="") as fh:
        table = list(csv.reader(fh))
    assert len(table) == 4
    assert table[1][:3] == ["15.0", "8.0", "1"]
    assert table[3][4] == ""        # no latency mean without transitions


def test_empty_sweep_writes_tables_but_no_figure(tmp_path):
    written = write_sweep_report([], str(tmp_path))
    names = [os.path.basename(p) for p in written]
    assert names == ["sweep.json", "sweep.csv"]


def test_uat_summary_and_files(tmp_path):
    rows = [UatRow("gesture detection", True, "ok"),
            UatRow("game mechanics", False, "no crash seen")]
    text = format_uat_summary(rows)
    assert "[PASS] gesture detection" in text
    assert "[FAIL] game mechanics" in text
    assert text.rstrip().endswith("FAILURES PRESENT")

    all_green = format_uat_summary([rows[0]])
    assert all_green.rstrip().endswith("all passed")

    written = write_uat_report(rows, str(tmp_path))
    names = [os.path.basename(p) for p in written]
    assert names == ["uat.json", "uat.csv"]
    with open(written[0]) as fh:
        payload = json.load(fh)
    assert payload[1] == {"name": "game mechanics", "passed": False,
                          "detail": "no crash seen"}
    with open(written[1], newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["name", "passed", "detail"]
    assert table[2][1] == "False"


def test_report_directory_is_created_recursively(tmp_path):
    nested = tmp_path / "a" / "b" / "c"
    write_eval_report(NO_TRANSITIONS, str(nested))
    assert (nested / "metrics.json").exists()
