"""Command-line entry points: serve, replay, eval.

Exit codes: 0 ok, 1 config or bind error, 2 malformed trace (argparse usage
errors also exit 2, per its convention). A failing scenario row or a low
accuracy score still exits 0: the evaluation itself succeeded, and the
numbers are the product.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from typing import Optional, Sequence

from .config import ConfigError, SessionConfig, load_config
from .engine import MalformedTrace, replay_trace
from .evaluate import NoLabels, evaluate_trace, load_grid, sweep_thresholds, uat_suite
from .server import run_session

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BAD_TRACE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltlane",
        description="Gesture-steered lane game engine: serve a live session, "
                    "replay recorded traces, or evaluate gesture recognition.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the live session server")
    p.add_argument("--listen", required=True, metavar="ADDR:PORT")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--trace-out", metavar="PATH",
                   help="record all frames, events and snapshots to this file")
    p.add_argument("--no-mirror", action="store_true",
                   help="disable the selfie-view horizontal flip")

    p = sub.add_parser("replay", help="replay a recorded trace, no network")
    p.add_argument("--trace", required=True, metavar="PATH")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH",
                   help="write the regenerated trace here instead of stdout")

    p = sub.add_parser("eval", help="score gesture recognition against labels")
    p.add_argument("--trace", metavar="PATH",
                   help="labeled trace to evaluate (required unless --uat)")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--sweep", metavar="GRIDFILE",
                   help="JSON grid of (enter_deg, exit_deg, debounce_frames)")
    p.add_argument("--report", metavar="DIR",
                   help="write JSON + CSV + figures into this directory")
    p.add_argument("--uat", action="store_true",
                   help="run the scripted end-to-end scenario suite instead")
    return parser


def _load(path: str) -> SessionConfig:
    cfg = load_config(path)
    logger.info("config loaded from %s", path)
    return cfg


def _cmd_serve(args: argparse.Namespace) -> int:
    cfg = _load(args.config)
    overrides = {"listen_address": args.listen}
    if args.trace_out:
        overrides["trace_out"] = args.trace_out
    if args.no_mirror:
        overrides["mirror_input"] = False
    cfg = dataclasses.replace(cfg, **overrides)
    cfg.validate()
    return run_session(cfg)


def _cmd_replay(args: argparse.Namespace) -> int:
    cfg = _load(args.config)
    log = replay_trace(args.trace, cfg, out_path=args.out)
    if args.out:
        logger.info("regenerated trace written to %s", args.out)
    else:
        out = sys.stdout
        for record in log:
            out.write(json.dumps(record, separators=(",", ":")) + "\n")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    # imported lazily: pulls in matplotlib, which serve/replay never need
    from . import report

    cfg = _load(args.config)
    if args.uat:
        rows = uat_suite(cfg)
        print(report.format_uat_summary(rows))
        if args.report:
            for path in report.write_uat_report(rows, args.report):
                logger.info("wrote %s", path)
        return EXIT_OK
    if not args.trace:
        print("eval needs --trace (or --uat)", file=sys.stderr)
        return EXIT_BAD_TRACE
    if args.sweep:
        grid = load_grid(args.sweep)
        rows = sweep_thresholds(args.trace, cfg, grid)
        print(report.format_sweep_summary(rows))
        if args.report:
            for path in report.write_sweep_report(rows, args.report):
                logger.info("wrote %s", path)
        return EXIT_OK
    metrics = evaluate_trace(args.trace, cfg)
    print(report.format_eval_summary(metrics))
    if args.report:
        for path in report.write_eval_report(metrics, args.report):
            logger.info("wrote %s", path)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "replay":
            return _cmd_replay(args)
        return _cmd_eval(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (MalformedTrace, NoLabels) as e:
        print(f"trace error: {e}", file=sys.stderr)
        return EXIT_BAD_TRACE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


def entrypoint() -> None:
    sys.exit(main())
