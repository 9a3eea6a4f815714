"""Single command-line entry point: serve the session server, run headless
simulations, aggregate ratings into plot segments, or query recommendations.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from meetmotion.catalog import (
    MeetingContext,
    aggregate_ratings,
    default_catalog,
    iqr_plot_data,
    parse_ratings_csv,
    recommend,
)
from meetmotion.sim.runner import run_scenario, write_report, write_snapshots
from meetmotion.sim.traces import Scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meetmotion",
        description="Anti-sedentary meeting games: server, simulator, analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the WebSocket session server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--data-dir", default="data", help="results/leaderboard directory")
    serve.add_argument("--break-interval", type=float, default=1200.0, metavar="S")
    serve.add_argument("--break-length", type=float, default=300.0, metavar="S")
    serve.add_argument("--seed", type=int, default=0)

    simulate = sub.add_parser("simulate", help="run a scenario headlessly")
    simulate.add_argument("scenario", help="scenario JSON file")
    simulate.add_argument("--seed", type=int, default=None, help="override the file's seed")
    simulate.add_argument("--out", default=None, help="write the metrics report here")
    simulate.add_argument("--snapshots", default=None, help="write the snapshot log (JSONL) here")

    report = sub.add_parser("report", help="aggregate a ratings CSV into IQR plot segments")
    report.add_argument("ratings", help="ratings CSV file")
    report.add_argument("--out", default=None, help="write the segments JSON here")

    rec = sub.add_parser("recommend", help="rank games for a meeting context")
    rec.add_argument("--phase", choices=("break", "mid_meeting"), required=True)
    rec.add_argument("--layout", choices=("symmetric", "asymmetric"), required=True)
    rec.add_argument("--privacy", type=float, default=0.5)
    rec.add_argument("--attention", type=float, default=0.5)
    rec.add_argument("--exertion", type=float, default=None)
    rec.add_argument("--minutes", type=float, default=5.0)
    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from meetmotion.server import build_server
    from meetmotion.session import SessionConfig

    config = SessionConfig(
        break_interval_s=args.break_interval,
        break_length_s=args.break_length,
    )
    app = build_server(data_dir=args.data_dir, session_config=config, seed=args.seed)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    path = Path(args.scenario)
    scenario = Scenario.from_dict(json.loads(path.read_text(encoding="utf-8")))
    if args.seed is not None:
        scenario = Scenario(
            seed=args.seed,
            game=scenario.game,
            duration_s=scenario.duration_s,
            participants=scenario.participants,
        )
    result = run_scenario(scenario, record_snapshots=args.snapshots is not None)
    if args.out:
        write_report(result.report, args.out)
    if args.snapshots:
        write_snapshots(result.snapshot_lines, args.snapshots)
    summary = {
        "game": result.report["game"],
        "seed": result.report["seed"],
        "duration_ticks": result.report["duration_ticks"],
        "outcome": result.report["results"]["outcome"],
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    text = Path(args.ratings).read_text(encoding="utf-8")
    records, bad_rows = parse_ratings_csv(text)
    if bad_rows:
        for row in bad_rows:
            print(f"line {row.line}: {row.reason}", file=sys.stderr)
        print(f"{len(bad_rows)} bad row(s) rejected", file=sys.stderr)
        return 1
    stats = aggregate_ratings(records)
    segments = iqr_plot_data(stats)
    text_out = json.dumps(segments, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text_out, encoding="utf-8")
    else:
        sys.stdout.write(text_out)
    return 0


def _cmd_recommend(args: argparse.Namespace) -> int:
    context = MeetingContext(
        phase=args.phase,
        layout=args.layout,
        privacy=args.privacy,
        attention_budget=args.attention,
        desired_exertion=args.exertion,
        minutes_available=args.minutes,
    )
    ranked = recommend(context, default_catalog())
    print(json.dumps(ranked, indent=2, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "serve": _cmd_serve,
        "simulate": _cmd_simulate,
        "report": _cmd_report,
        "recommend": _cmd_recommend,
    }
    try:
        return handlers[args.command](args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # surfaced as exit 1 with a message, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
