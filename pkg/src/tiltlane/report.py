"""Evaluation reports: human-readable summaries on stdout, and a report
directory holding machine-readable JSON, delimited CSV tables, and rendered
figures side by side.

Files written into the report directory:

  eval        metrics.json, summary.csv, confusion.csv, confusion.png,
              latency.png (when any transition was matched)
  sweep       sweep.json, sweep.csv, sweep.png
  scenarios   uat.json, uat.csv
"""
from __future__ import annotations

import csv
import json
import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .evaluate import CLASSES, EvalMetrics, SweepRow, UatRow  # noqa: E402


def _ensure_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- single-trace evaluation ---------------------------------------------------

def format_eval_summary(m: EvalMetrics) -> str:
    lines = [
        "evaluation summary",
        f"  frames          {m.frame_count}",
        f"  labels          {m.label_count}",
        f"  accuracy        {m.per_frame_accuracy:.4f}",
        f"  events          {m.event_count}",
        f"  edit distance   {m.event_edit_distance}",
        f"  transitions     {len(m.onset_latency_frames)} matched, "
        f"{m.unmatched_transitions} unmatched",
    ]
    mean = m.mean_onset_latency()
    if mean is not None:
        lines.append(f"  onset latency   mean {mean:.2f} frames, "
                     f"max {max(m.onset_latency_frames)}")
    header = "  confusion       " + " ".join(f"{c:>8}" for c in CLASSES)
    lines.append(header + "   (rows: truth, cols: predicted)")
    for cls, row in zip(CLASSES, m.confusion):
        lines.append(f"  {cls:>14}  " + " ".join(f"{n:>8}" for n in row))
    return "\n".join(lines)


def _confusion_figure(m: EvalMetrics, path: str) -> None:
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    im = ax.imshow(m.confusion, cmap="Blues")
    ax.set_xticks(range(len(CLASSES)), CLASSES)
    ax.set_yticks(range(len(CLASSES)), CLASSES)
    ax.set_xlabel("predicted")
    ax.set_ylabel("truth")
    ax.set_title("per-frame confusion")
    peak = max(max(row) for row in m.confusion) or 1
    for i, row in enumerate(m.confusion):
        for j, n in enumerate(row):
            color = "white" if n > peak / 2 else "black"
            ax.text(j, i, str(n), ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _latency_figure(m: EvalMetrics, path: str) -> None:
    fig, ax = plt.subplots(figsize=(4.2, 3.0))
    top = max(m.onset_latency_frames)
    ax.hist(m.onset_latency_frames, bins=range(1, top + 2), align="left",
            rwidth=0.8, color="#4878a8")
    ax.set_xlabel("onset latency (frames)")
    ax.set_ylabel("transitions")
    ax.set_title("latency from label change to event")
    ax.set_xticks(range(1, top + 1))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_eval_report(m: EvalMetrics, out_dir: str) -> list[str]:
    _ensure_dir(out_dir)
    written = []

    path = os.path.join(out_dir, "metrics.json")
    _write_json(path, m.to_dict())
    written.append(path)

    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["metric", "value"])
        w.writerow(["frames", m.frame_count])
        w.writerow(["labels", m.label_count])
        w.writerow(["per_frame_accuracy", f"{m.per_frame_accuracy:.6f}"])
        w.writerow(["events", m.event_count])
        w.writerow(["event_edit_distance", m.event_edit_distance])
        w.writerow(["matched_transitions", len(m.onset_latency_frames)])
        w.writerow(["unmatched_transitions", m.unmatched_transitions])
        mean = m.mean_onset_latency()
        w.writerow(["mean_onset_latency_frames", "" if mean is None else f"{mean:.4f}"])
    written.append(path)

    path = os.path.join(out_dir, "confusion.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["truth\\predicted", *CLASSES])
        for cls, row in zip(CLASSES, m.confusion):
            w.writerow([cls, *row])
    written.append(path)

    path = os.path.join(out_dir, "confusion.png")
    _confusion_figure(m, path)
    written.append(path)

    if m.onset_latency_frames:
        path = os.path.join(out_dir, "latency.png")
        _latency_figure(m, path)
        written.append(path)
    return written


# --- threshold sweep -----------------------------------------------------------

def format_sweep_summary(rows: Sequence[SweepRow]) -> str:
    lines = [
        "threshold sweep",
        f"  {'enter':>6} {'exit':>6} {'debounce':>8} {'accuracy':>9} "
        f"{'latency':>8} {'editdist':>8} {'events':>7}",
    ]
    for r in rows:
        mean = r.metrics.mean_onset_latency()
        lines.append(
            f"  {r.enter_deg:>6.1f} {r.exit_deg:>6.1f} {r.debounce_frames:>8d} "
            f"{r.metrics.per_frame_accuracy:>9.4f} "
            f"{'-' if mean is None else f'{mean:.2f}':>8} "
            f"{r.metrics.event_edit_distance:>8d} {r.metrics.event_count:>7d}")
    return "\n".join(lines)


def _sweep_figure(rows: Sequence[SweepRow], path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    series: dict[tuple[float, int], list[tuple[float, float]]] = {}
    for r in rows:
        series.setdefault((r.exit_deg, r.debounce_frames), []).append(
            (r.enter_deg, r.metrics.per_frame_accuracy))
    for (exit_deg, debounce), pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=f"exit {exit_deg:g}, debounce {debounce}")
    ax.set_xlabel("enter threshold (deg)")
    ax.set_ylabel("per-frame accuracy")
    ax.set_title("threshold sweep")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_sweep_report(rows: Sequence[SweepRow], out_dir: str) -> list[str]:
    _ensure_dir(out_dir)
    written = []

    path = os.path.join(out_dir, "sweep.json")
    _write_json(path, [
        {"enter_deg": r.enter_deg, "exit_deg": r.exit_deg,
         "debounce_frames": r.debounce_frames, "metrics": r.metrics.to_dict()}
        for r in rows
    ])
    written.append(path)

    path = os.path.join(out_dir, "sweep.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["enter_deg", "exit_deg", "debounce_frames", "accuracy",
                    "mean_onset_latency_frames", "event_edit_distance",
                    "events", "unmatched_transitions"])
        for r in rows:
            mean = r.metrics.mean_onset_latency()
            w.writerow([r.enter_deg, r.exit_deg, r.debounce_frames,
                        f"{r.metrics.per_frame_accuracy:.6f}",
                        "" if mean is None else f"{mean:.4f}",
                        r.metrics.event_edit_distance,
                        r.metrics.event_count,
                        r.metrics.unmatched_transitions])
    written.append(path)

    if rows:
        path = os.path.join(out_dir, "sweep.png")
        _sweep_figure(rows, path)
        written.append(path)
    return written


# --- scripted scenario suite ----------------------------------------------------

def format_uat_summary(rows: Sequence[UatRow]) -> str:
    lines = ["scripted scenario suite"]
    for r in rows:
        lines.append(f"  [{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    verdict = "all passed" if all(r.passed for r in rows) else "FAILURES PRESENT"
    lines.append(f"  -> {verdict}")
    return "\n".join(lines)


def write_uat_report(rows: Sequence[UatRow], out_dir: str) -> list[str]:
    _ensure_dir(out_dir)
    written = []

    path = os.path.join(out_dir, "uat.json")
    _write_json(path, [{"name": r.name, "passed": r.passed, "detail": r.detail}
                       for r in rows])
    written.append(path)

    path = os.path.join(out_dir, "uat.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "passed", "detail"])
        for r in rows:
            w.writerow([r.name, r.passed, r.detail])
    written.append(path)
    return written
