"""Offline evaluation: frame accuracy, latency, edit distance, sweep, UAT."""
import json

import pytest

from tiltlane.config import config_from_dict
from tiltlane.engine import read_trace, timestamp_for_tick
from tiltlane.evaluate import (NoLabels, evaluate_lines, evaluate_trace,
                               load_grid, sweep_thresholds, synthetic_hand,
                               tilt_frame, uat_suite)
from tiltlane.landmarks import LandmarkFrame, encode_frame


def cfg_with(**over):
    return config_from_dict(over)


def labeled_trace(tmp_path, cfg, segments, name="labeled.jsonl"):
    """One frame and one label per tick. Segment tilt None means hand lost
    (frames still arrive, with hand null)."""
    hz = cfg.game.tick_hz
    rows = []
    k = 0
    for tilt, count, label in segments:
        for _ in range(count):
            k += 1
            t = timestamp_for_tick(k, hz)
            if tilt is None:
                rows.append(encode_frame(LandmarkFrame(t, None)))
            else:
                rows.append(encode_frame(
                    tilt_frame(t, tilt, premirror=cfg.mirror_input)))
            rows.append(json.dumps({"t": t, "label": label},
                                   separators=(",", ":")))
    path = tmp_path / name
    path.write_text("\n".join(rows) + "\n")
    return str(path)


INTENT_SEGMENTS = [
    (0.0, 10, "neutral"),
    (-30.0, 10, "left"),
    (0.0, 10, "neutral"),
    (None, 5, "none"),
]


def test_intent_labels_default_config(tmp_path):
    """Labels mark intent at the tilt change, so each transition costs
    exactly debounce_frames of disagreement and of latency."""
    cfg = cfg_with()
    m = evaluate_trace(labeled_trace(tmp_path, cfg, INTENT_SEGMENTS), cfg)
    assert m.frame_count == 35 and m.label_count == 35
    assert m.per_frame_accuracy == pytest.approx(31 / 35)
    assert m.onset_latency_frames == (3, 3)          # press, then release
    assert m.mean_onset_latency() == pytest.approx(3.0)
    assert m.unmatched_transitions == 0
    assert m.event_edit_distance == 0
    assert m.event_count == 2


def test_intent_labels_confusion_cells(tmp_path):
    cfg = cfg_with()
    m = evaluate_trace(labeled_trace(tmp_path, cfg, INTENT_SEGMENTS), cfg)
    rows = {c: dict(zip(("left", "right", "neutral", "none"), r))
            for c, r in zip(("left", "right", "neutral", "none"), m.confusion)}
    assert rows["left"]["left"] == 8
    assert rows["left"]["neutral"] == 2     # debounce lag on entering
    assert rows["neutral"]["neutral"] == 18
    assert rows["neutral"]["left"] == 2     # debounce lag on leaving
    assert rows["none"]["none"] == 5
    assert rows["right"] == {"left": 0, "right": 0, "neutral": 0, "none": 0}


def test_output_aligned_labels_score_perfectly(tmp_path):
    """Labels shifted to where the filter commits give accuracy 1.0 and
    latency 1 (the event lands on the transition frame itself)."""
    cfg = cfg_with()
    segments = [
        (0.0, 10, "neutral"),
        (-30.0, 2, "neutral"),   # debounce window, still neutral
        (-30.0, 8, "left"),
        (0.0, 2, "left"),        # release debounce window
        (0.0, 8, "neutral"),
    ]
    m = evaluate_trace(labeled_trace(tmp_path, cfg, segments), cfg)
    assert m.per_frame_accuracy == 1.0
    assert m.onset_latency_frames == (1, 1)
    assert m.event_edit_distance == 0


def test_opposite_labels_score_zero_and_miss_transitions(tmp_path):
    cfg = cfg_with()
    segments = [(-30.0, 12, "right")]   # every label contradicts the stream
    m = evaluate_trace(labeled_trace(tmp_path, cfg, segments), cfg)
    assert m.per_frame_accuracy == 0.0
    assert m.unmatched_transitions == 1      # press(right) never happens
    assert m.event_edit_distance == 1        # press(left) vs press(right)


def test_higher_debounce_rides_out_dropout_noise(tmp_path):
    """A 1-frame neutral dip every 5 frames: debounce 3 holds steady,
    debounce 1 chatters."""
    cfg3 = cfg_with(filter={"debounce_frames": 3})
    cfg1 = cfg_with(filter={"debounce_frames": 1})
    segments = []
    for _ in range(8):
        segments.append((-30.0, 4, "left"))
        segments.append((0.0, 1, "left"))    # dropout, intent stays left
    steady = evaluate_trace(labeled_trace(tmp_path, cfg3, segments), cfg3)
    chatter = evaluate_trace(labeled_trace(tmp_path, cfg1, segments, "b.jsonl"),
                             cfg1)
    assert steady.event_count == 1                     # one press, held
    assert chatter.event_count > 10
    assert steady.event_edit_distance < chatter.event_edit_distance
    assert steady.per_frame_accuracy > chatter.per_frame_accuracy


def test_labels_between_frames_attach_to_the_latest_frame(tmp_path):
    """30 fps camera against a 60 Hz engine: labels carry camera timestamps."""
    cfg = cfg_with()
    rows = []
    for i in range(12):
        t = i * 33
        rows.append(encode_frame(tilt_frame(t, 30.0, premirror=cfg.mirror_input)))
        rows.append(json.dumps({"t": t + 5, "label": "right"}))
    path = tmp_path / "cam30.jsonl"
    path.write_text("\n".join(rows) + "\n")
    m = evaluate_trace(str(path), cfg)
    assert m.frame_count == 12 and m.label_count == 12
    # the engine interleaves frameless ticks between 30 fps camera frames;
    # those must not stall the debounce, which still costs exactly 3 frames
    assert m.per_frame_accuracy == pytest.approx(10 / 12)
    assert m.onset_latency_frames == (3,)


def test_label_before_any_frame_predicts_none(tmp_path):
    cfg = cfg_with()
    rows = [json.dumps({"t": 0, "label": "none"}),
            encode_frame(tilt_frame(100, 0.0, premirror=cfg.mirror_input)),
            json.dumps({"t": 100, "label": "neutral"})]
    path = tmp_path / "early.jsonl"
    path.write_text("\n".join(rows) + "\n")
    m = evaluate_trace(str(path), cfg)
    assert m.per_frame_accuracy == 1.0


def test_trace_without_labels_raises(tmp_path):
    cfg = cfg_with()
    path = tmp_path / "nolabels.jsonl"
    path.write_text(encode_frame(tilt_frame(0, 0.0)) + "\n")
    with pytest.raises(NoLabels):
        evaluate_trace(str(path), cfg)


def test_evaluation_never_writes_a_trace(tmp_path):
    out = tmp_path / "side-effect.jsonl"
    cfg = cfg_with(trace_out=str(out))
    evaluate_trace(labeled_trace(tmp_path, cfg, INTENT_SEGMENTS), cfg)
    assert not out.exists()


def test_metrics_to_dict_is_json_ready(tmp_path):
    cfg = cfg_with()
    m = evaluate_trace(labeled_trace(tmp_path, cfg, INTENT_SEGMENTS), cfg)
    payload = json.loads(json.dumps(m.to_dict()))
    assert payload["per_frame_accuracy"] == pytest.approx(31 / 35)
    assert payload["mean_onset_latency"] == pytest.approx(3.0)
    assert payload["event_edit_distance"] == 0


# --- sweep ------------------------------------------------------------------------

def test_sweep_single_point_matches_direct_evaluation(tmp_path):
    cfg = cfg_with()
    trace = labeled_trace(tmp_path, cfg, INTENT_SEGMENTS)
    grid = [{"enter_deg": 20.0, "exit_deg": 12.0, "debounce_frames": 3}]
    rows = sweep_thresholds(trace, cfg, grid)
    assert len(rows) == 1
    assert rows[0].enter_deg == 20.0 and rows[0].debounce_frames == 3
    assert rows[0].metrics == evaluate_trace(trace, cfg)


def test_sweep_points_actually_change_the_filter(tmp_path):
    cfg = cfg_with()
    trace = labeled_trace(tmp_path, cfg, INTENT_SEGMENTS)
    rows = sweep_thresholds(trace, cfg, [
        {"debounce_frames": 1}, {"debounce_frames": 5}])
    assert rows[0].metrics.mean_onset_latency() == pytest.approx(1.0)
    assert rows[1].metrics.mean_onset_latency() == pytest.approx(5.0)


def test_sweep_rejects_invalid_combinations(tmp_path):
    cfg = cfg_with()
    trace = labeled_trace(tmp_path, cfg, INTENT_SEGMENTS)
    with pytest.raises(ValueError):
        sweep_thresholds(trace, cfg, [{"enter_deg": 10.0, "exit_deg": 15.0}])


def test_load_grid_list_shape(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps([{"enter_deg": 15, "debounce_frames": 2}]))
    assert load_grid(str(path)) == [{"enter_deg": 15, "debounce_frames": 2}]


def test_load_grid_axes_shape(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"enter_deg": [15, 20], "exit_deg": [8],
                                "debounce_frames": [1, 3]}))
    points = load_grid(str(path))
    assert len(points) == 4
    assert {"enter_deg": 20, "exit_deg": 8, "debounce_frames": 3} in points


@pytest.mark.parametrize("payload", [
    '"just a string"',
    '{"enter_deg": [15]}',
    '[{"enter_deg": 15, "bogus": 1}]',
])
def test_load_grid_rejects_bad_shapes(tmp_path, payload):
    path = tmp_path / "grid.json"
    path.write_text(payload)
    with pytest.raises(ValueError):
        load_grid(str(path))


# --- synthetic hands ----------------------------------------------------------------

def test_synthetic_hand_measures_as_requested():
    from tiltlane.classifier import ClassifierConfig, measure
    cfg = ClassifierConfig()
    for want in (-60.0, -20.0, 0.0, 15.0, 45.0):
        m = measure(LandmarkFrame(0, tuple(synthetic_hand(want))), cfg)
        assert m.valid
        assert m.tilt_deg == pytest.approx(want, abs=1e-9)
        assert m.extension_deg == pytest.approx(180.0, abs=1e-9)


def test_tilt_frame_premirror_cancels_engine_mirroring(tmp_path):
    cfg = cfg_with()        # mirror_input True
    trace = labeled_trace(tmp_path, cfg, [(-30.0, 6, "left")])
    _, lines = read_trace(trace)
    m = evaluate_lines(lines, cfg)
    assert m.confusion[0][0] > 0    # measured as left, not right


# --- scripted scenario suite ----------------------------------------------------------

def test_uat_suite_passes_on_defaults():
    rows = uat_suite(cfg_with())
    assert [r.name for r in rows] == ["gesture detection", "car movement",
                                      "game mechanics"]
    assert all(r.passed for r in rows), [r.detail for r in rows]


def test_uat_suite_passes_without_mirroring():
    rows = uat_suite(cfg_with(mirror_input=False))
    assert all(r.passed for r in rows), [r.detail for r in rows]


def test_uat_suite_passes_with_zero_restart_delay():
    rows = uat_suite(cfg_with(game={"auto_restart_delay_ticks": 0}))
    assert all(r.passed for r in rows), [r.detail for r in rows]


def test_uat_suite_passes_on_a_two_lane_track():
    rows = uat_suite(cfg_with(game={"lanes": 2}))
    assert all(r.passed for r in rows), [r.detail for r in rows]


def test_uat_suite_passes_with_strict_filter():
    rows = uat_suite(cfg_with(filter={"enter_deg": 30.0, "exit_deg": 8.0,
                                      "debounce_frames": 6}))
    assert all(r.passed for r in rows), [r.detail for r in rows]
