"""Command-line entry point: frontier filtering, simulations, elicitation, serving.

Exit codes: 0 on success, 2 on usage errors (reported by argparse), 1 on
runtime or data errors.  All artifacts are JSON or CSV; simulate runs are
reproducible given --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import elicitation, io, simulate
from .errors import DecisionSupportError
from .frontier import PlanMatrix, efficient_frontier


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lazyelicit",
        description="Prune plans with partial utility models and elicit tradeoffs lazily.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    frontier_cmd = commands.add_parser("frontier", help="filter a plan matrix to its frontier")
    frontier_cmd.add_argument("--plans", required=True, help="plan matrix CSV")
    frontier_cmd.add_argument("--epsilon", type=float, default=0.0)
    frontier_cmd.add_argument("--out", help="write the JSON report here instead of stdout")

    simulate_cmd = commands.add_parser("simulate", help="strategy comparison experiments")
    sims = simulate_cmd.add_subparsers(dest="experiment", required=True)

    first_merge = sims.add_parser(
        "first-merge", help="eliminations after one merge: RCC vs RAND vs OPT"
    )
    first_merge.add_argument("--m", type=int, help="plan count; omit with --n for a pooled run")
    first_merge.add_argument("--n", type=int, help="attribute count")
    first_merge.add_argument("--trials", type=int, required=True)
    first_merge.add_argument("--seed", type=lambda s: int(s, 10), default=0)
    first_merge.add_argument("--epsilon", type=float, default=0.0)
    first_merge.add_argument("--out")

    anytime = sims.add_parser("anytime", help="frontier size against number of merges")
    anytime.add_argument("--m", type=int, required=True)
    anytime.add_argument("--n", type=int, required=True)
    anytime.add_argument("--trials", type=int, required=True)
    anytime.add_argument("--seed", type=lambda s: int(s, 10), default=0)
    anytime.add_argument("--epsilon", type=float, default=0.0)
    anytime.add_argument("--out", help="write the curve CSV here instead of stdout")

    elicit = commands.add_parser("elicit", help="run an elicitation session")
    elicit.add_argument("--plans", required=True, help="plan matrix CSV")
    elicit.add_argument("--attrs", required=True, help="attribute schema JSON")
    elicit.add_argument("--script", help="scripted answers JSON; interactive prompt if omitted")
    elicit.add_argument("--epsilon", type=float, default=0.0)
    elicit.add_argument("--out", help="write the final report here instead of stdout")

    serve = commands.add_parser("serve", help="serve the elicitation HTTP API")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--plans", help="default plan CSV for sessions created without plans")
    serve.add_argument("--attrs", help="default attribute schema JSON")
    serve.add_argument("--snapshot-dir", help="persist session snapshots to this directory")

    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_frontier(args: argparse.Namespace) -> int:
    plans, columns = io.load_plans(args.plans)
    matrix = PlanMatrix.from_rows(
        [p.label for p in plans], [p.w for p in plans], columns
    )
    result = efficient_frontier(matrix, args.epsilon)
    report = {
        "surviving": list(result.surviving),
        "surviving_labels": [matrix.by_id(i).label for i in result.surviving],
        "eliminated": [[loser, winner] for loser, winner in result.eliminated],
    }
    _emit(io.dump_json(report), args.out)
    return 0


def _cmd_first_merge(args: argparse.Namespace) -> int:
    config = simulate.TrialConfig(
        trials=args.trials, seed=args.seed, m=args.m, n=args.n, epsilon=args.epsilon
    )
    report = simulate.run_first_merge_comparison(config)
    _emit(io.dump_json(report.to_dict()), args.out)
    return 0


def _cmd_anytime(args: argparse.Namespace) -> int:
    config = simulate.TrialConfig(
        trials=args.trials,
        seed=args.seed,
        m=args.m,
        n=args.n,
        strategies=(simulate.RCC, simulate.RAND),
        epsilon=args.epsilon,
    )
    report = simulate.run_anytime_experiment(config)
    _emit(io.anytime_rows_to_csv(report.rows()), args.out)
    return 0


def _cmd_elicit(args: argparse.Namespace) -> int:
    attributes, subutilities = io.load_attributes(args.attrs)
    plans, _ = io.load_plans(args.plans, [a.name for a in attributes])
    if args.script:
        answers = io.load_answers(args.script)
        session = elicitation.replay_answers(
            plans, attributes, subutilities, answers, args.epsilon
        )
    else:
        session = _interactive_loop(plans, attributes, subutilities, args.epsilon)
    report = elicitation.accept(session)
    _emit(io.dump_json(io.final_report_to_dict(report)), args.out)
    return 0


def _interactive_loop(plans, attributes, subutilities, epsilon):
    session = elicitation.start_session(plans, attributes, subutilities, epsilon)
    while True:
        surviving = session.frontier.surviving
        print(f"{len(surviving)} plan(s) on the frontier: {list(surviving)}", file=sys.stderr)
        if session.decided or len(session.matrix.columns) < 2 or session.status == "done":
            return session
        session, question = elicitation.next_question(session)
        print(elicitation.render_question(question), file=sys.stderr)
        while True:
            line = input("> ").strip()
            if line in ("", "q", "quit", "accept"):
                return elicitation.finish(session)
            try:
                if question.kind == "standard_gamble":
                    answer = elicitation.ProbabilityAnswer(p=float(line))
                else:
                    answer = elicitation.MatchingValueAnswer(value=float(line))
                session = elicitation.apply_answer(session, answer)
                break
            except (ValueError, DecisionSupportError) as exc:
                print(f"rejected: {exc}", file=sys.stderr)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    defaults = {}
    if args.attrs:
        defaults["attributes"] = io.load_attributes(args.attrs)
    if args.plans:
        defaults["plans"] = io.load_plans(args.plans)[0]
    app = create_app(defaults=defaults or None, snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "frontier":
            return _cmd_frontier(args)
        if args.command == "simulate":
            if args.experiment == "first-merge":
                return _cmd_first_merge(args)
            return _cmd_anytime(args)
        if args.command == "elicit":
            return _cmd_elicit(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except (DecisionSupportError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
