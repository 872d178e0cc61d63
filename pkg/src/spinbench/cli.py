"""Command line entry points: ingest, split, eval, match, serve."""

from __future__ import annotations

import argparse
import csv
import sys

from . import arena, history, metrics
from .agents import resolve_agent
from .engine import TournamentConfig


def _cmd_ingest(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as fh:
        text = fh.read()
    records, issues = history.ingest_text(text, hero=args.hero, source=args.source)
    n = history.write_records(records, args.out)
    for issue in issues:
        print(f"skipped: {issue.message}", file=sys.stderr)
    print(f"{n} records from {args.input} -> {args.out} ({len(issues)} blocks/hands skipped)")
    return 0


def _cmd_split(args: argparse.Namespace) -> int:
    ratios = [float(x) for x in args.ratios.split(",")]
    records = history.read_records(args.input)
    parts = history.split(records, ratios, seed=args.seed)
    base = args.input[:-6] if args.input.endswith(".jsonl") else args.input
    for i, part in enumerate(parts):
        path = f"{base}.part{i}.jsonl"
        history.write_records(part, path)
        print(f"part {i}: {len(part)} records -> {path}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    records = history.read_records(args.input)
    agent = resolve_agent(args.agent)
    classes = metrics.CLASSES_FIVE if args.classes == 5 else metrics.CLASSES_SIX
    report = metrics.evaluate_dataset(agent, records, classes=classes, workers=args.workers)
    print(report.render_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
        print(f"report -> {args.out}")
    if args.confusion_csv:
        with open(args.confusion_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["truth\\pred", *report.confusion.classes])
            for cls, row in zip(report.confusion.classes, report.confusion.counts):
                writer.writerow([cls, *row])
        print(f"confusion -> {args.confusion_csv}")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    agent_a = resolve_agent(args.agent_a)
    agent_b = resolve_agent(args.agent_b)
    audit_fh = open(args.audit, "w", encoding="utf-8") if args.audit else None
    audit = (lambda line: audit_fh.write(line + "\n")) if audit_fh else None
    try:
        if args.mode == "cash-hu":
            result = arena.run_cash_match(
                agent_a,
                agent_b,
                n_deals=args.hands,
                stack_bb=args.stack,
                blinds=(args.sb, args.bb),
                seed=args.seed,
                duplicate=args.duplicate,
                audit=audit,
            )
            for side in ("a", "b"):
                name = result.agent_names[side]
                hw = result.ci95_halfwidth.get(side)
                ci = f" +/- {hw:.1f}" if hw is not None else ""
                print(f"{side} ({name}): {result.bb_per_100[side]:.1f}{ci} BB/100 over {result.n_hands} hands")
        else:
            if not args.agent_c:
                print("spin mode needs --agent-c", file=sys.stderr)
                return 2
            agent_c = resolve_agent(args.agent_c)
            cfg = TournamentConfig(starting_stack_bb=args.stack if args.stack != 200.0 else 25.0)
            result = arena.run_spin_and_go(
                [agent_a, agent_b, agent_c],
                n_tournaments=args.hands,
                config=cfg,
                seed=args.seed,
                rotate_seats=not args.no_rotate,
                audit=audit,
            )
            for side in ("a", "b", "c"):
                name = result.agent_names[side]
                print(
                    f"{side} ({name}): {result.wins[side]}/{result.n_tournaments} tournaments, "
                    f"{result.chip_bb_per_100[side]:.1f} BB/100 in chips"
                )
    finally:
        if audit_fh:
            audit_fh.close()
    if args.audit:
        print(f"audit -> {args.audit}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(result.to_json() + "\n")
        print(f"result -> {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(auth_token=args.token), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="hand-history file -> decision-record JSONL")
    p.add_argument("input")
    p.add_argument("--format", choices=["canonical"], default="canonical")
    p.add_argument("--hero", required=True, help="seat name or role label")
    p.add_argument("--source", choices=list(history.SOURCES), default="professional")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("split", help="partition a record JSONL by hand")
    p.add_argument("input")
    p.add_argument("--ratios", default="0.9,0.1")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("eval", help="score an agent against a record JSONL")
    p.add_argument("input")
    p.add_argument("--agent", required=True)
    p.add_argument("--classes", type=int, choices=[5, 6], default=6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--confusion-csv")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("match", help="run a head-to-head match or tournaments")
    p.add_argument("--mode", choices=["cash-hu", "spin"], default="cash-hu")
    p.add_argument("--agent-a", required=True)
    p.add_argument("--agent-b", required=True)
    p.add_argument("--agent-c")
    p.add_argument("--hands", type=int, default=1000, help="deals (cash) or tournaments (spin)")
    p.add_argument("--stack", type=float, default=200.0)
    p.add_argument("--sb", type=float, default=0.5)
    p.add_argument("--bb", type=float, default=1.0)
    p.add_argument("--duplicate", action="store_true")
    p.add_argument("--no-rotate", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--audit", help="write every decision as a prompt-grammar line")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("serve", help="run the HTTP table service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--token", default=None)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
