"""The ``choosy`` command line.

Exit codes: 0 pass or solved, 1 usage or input error, 2 definitive negative,
3 inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certificates import ReductionGap, check_f_conditions, colour_via_lemma
from .heuristic import run_pipeline
from .model import MalformedInput, PartStructure
from .search import (
    PRUNINGS,
    BudgetExhausted,
    SearchConfig,
    Status,
    choice_number,
    is_k_choosable,
    verify_theorem,
)
from .solver import find_colouring, matching_or_violator, singleton_quotient
from .textio import (
    Report,
    ReportRow,
    emit_report,
    format_colouring,
    format_instance,
    parse_classes,
    parse_instance,
    read_text,
)

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parts(text: str) -> PartStructure:
    try:
        return PartStructure.of(int(s) for s in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad part sizes {text!r}: {exc}") from None


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="choosy", description="List colouring and choosability of complete multipartite graphs.")
    parser.add_argument("--seed", type=int, default=0, help="seed recorded in reports (default 0)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def search_flags(p):
        p.add_argument("--no-prune", action="append", default=[], choices=PRUNINGS, metavar="NAME",
                       help=f"disable a pruning; one of {', '.join(PRUNINGS)}")
        p.add_argument("--budget-nodes", type=_positive(int))
        p.add_argument("--budget-secs", type=_positive(float))
        p.add_argument("--jobs", type=_positive(int), default=1)
        p.add_argument("--format", choices=("text", "tsv"), default="text")
        p.add_argument("--witness-dir", type=Path, help="directory for witness instance files")

    p = sub.add_parser("solve", help="find a proper list colouring of an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", type=Path, help="write the colouring here")

    p = sub.add_parser("choosable", help="decide k-choosability of a shape")
    p.add_argument("--parts", type=_parts, required=True)
    p.add_argument("--k", type=_positive(int), required=True)
    search_flags(p)

    p = sub.add_parser("chnum", help="choice number of a shape")
    p.add_argument("--parts", type=_parts, required=True)
    search_flags(p)

    p = sub.add_parser("verify", help="sweep all k-partite shapes on at most 2k+2 vertices")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--deep", action="store_true", help="allow the long k >= 3 sweeps")
    search_flags(p)

    p = sub.add_parser("certify", help="check the f-choosability inequalities and colour")
    p.add_argument("--instance", required=True)
    p.add_argument("--classes", required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("heuristic", help="run the frequent-colour construction on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--budget-nodes", type=_positive(int))
    return parser


def _config(args, k: int | None) -> SearchConfig:
    base = SearchConfig(k or 1)
    return SearchConfig(
        k or 1,
        prune=frozenset(PRUNINGS) - set(args.no_prune),
        budget_nodes=args.budget_nodes,
        budget_secs=args.budget_secs if args.budget_secs is not None else base.budget_secs,
        jobs=args.jobs,
    )


def _config_echo(args, cfg: SearchConfig) -> list[tuple[str, str]]:
    return [
        ("k", str(cfg.k)),
        ("prunings", ",".join(p for p in PRUNINGS if p in cfg.prune) or "none"),
        ("budget-nodes", str(cfg.budget_nodes or "none")),
        ("budget-secs", str(cfg.budget_secs or "none")),
        ("jobs", str(cfg.jobs)),
        ("seed", str(args.seed)),
    ]


def _write_witness(args, verdict) -> str | None:
    if verdict.witness is None:
        return None
    directory = args.witness_dir or Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    name = "witness-" + "-".join(map(str, verdict.shape.sizes)) + f"-k{verdict.k}.txt"
    path = directory / name
    path.write_text(format_instance(verdict.shape, verdict.witness.representative))
    return str(path)


def _row(args, verdict, write_witness: bool) -> ReportRow:
    path = _write_witness(args, verdict) if write_witness else None
    return ReportRow(verdict.shape, verdict.status.value, verdict.nodes_explored, verdict.wall_time, path)


def _print_report(args, report: Report) -> None:
    sys.stdout.write(emit_report(report, args.format).decode())


def cmd_solve(args) -> int:
    g, L = parse_instance(read_text(args.instance))
    colouring = find_colouring(g, L)
    if colouring is None:
        print("uncolourable")
        outcome = matching_or_violator(singleton_quotient(g, L).incidence())
        print("singleton quotient: " + outcome.format())
        return EXIT_NEGATIVE
    text = format_colouring(colouring)
    if args.out:
        args.out.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_choosable(args) -> int:
    cfg = _config(args, args.k)
    verdict = is_k_choosable(args.parts, args.k, cfg)
    status = verdict.status
    outcome = {Status.CHOOSABLE: "PASS", Status.NOT_CHOOSABLE: "FAIL", Status.INCONCLUSIVE: "INCONCLUSIVE"}[status]
    report = Report("choosable", _config_echo(args, cfg), [_row(args, verdict, True)], outcome)
    _print_report(args, report)
    return {Status.CHOOSABLE: EXIT_OK, Status.NOT_CHOOSABLE: EXIT_NEGATIVE}.get(status, EXIT_INCONCLUSIVE)


def cmd_chnum(args) -> int:
    cfg = _config(args, args.parts.k)
    ch = choice_number(args.parts, cfg)
    if ch is None:
        print(f"{args.parts}: inconclusive")
        return EXIT_INCONCLUSIVE
    print(f"{args.parts}: ch = {ch}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    if args.k >= 3 and not args.deep:
        raise UsageError("k >= 3 sweeps take hours; pass --deep to run them")
    cfg = _config(args, args.k)
    sweep = verify_theorem(args.k, cfg, deep=args.deep)
    rows = [_row(args, r.verdict, args.witness_dir is not None) for r in sweep.rows]
    expected = ";".join(",".join(map(str, s.sizes)) for s in sorted(sweep.expected, key=lambda s: s.sizes))
    notes = [f"expected non-choosable: {expected or 'none'}"]
    if sweep.inconclusive:
        notes.append("inconclusive: " + ";".join(",".join(map(str, s.sizes)) for s in sweep.inconclusive))
    report = Report("verify", _config_echo(args, cfg), rows, sweep.outcome, notes)
    _print_report(args, report)
    return {"PASS": EXIT_OK, "FAIL": EXIT_NEGATIVE}.get(sweep.outcome, EXIT_INCONCLUSIVE)


def cmd_certify(args) -> int:
    g, L = parse_instance(read_text(args.instance))
    ci = parse_classes(read_text(args.classes), g, L)
    result = check_f_conditions(ci)
    if not result:
        print(f"conditions fail at ({result.family}): {result.detail}")
        return EXIT_NEGATIVE
    lists = {v: L[v] for v in range(g.n)}
    trace: list[str] = []
    try:
        colouring = colour_via_lemma(ci, lists, trace)
    except ValueError as exc:
        print(f"error: {exc}")
        return EXIT_USAGE
    except ReductionGap as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print("conditions hold")
    for step in trace:
        print(f"# {step}")
    text = format_colouring(colouring)
    if args.out:
        args.out.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_heuristic(args) -> int:
    g, L = parse_instance(read_text(args.instance))
    try:
        result = run_pipeline(g, L, budget_nodes=args.budget_nodes)
    except BudgetExhausted as exc:
        print(f"step 1 inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    report = result.report
    print(f"surplus {report.surplus}, singletons {sorted(report.singletons)}")
    for c, tag in sorted(report.tags.items()):
        print(f"colour {c} {tag.value}")
    if report.warning:
        print(f"warning: {report.warning}")
    print(f"frequent colours used: {sorted(result.frequent_used)}")
    print(f"step 1: {result.step1.trace()}")
    print(f"step 2: {result.step2.trace()} F1={list(result.step2.F1)} F2={list(result.step2.F2)}")
    if result.failed:
        print("step 3: FAIL (more leftover vertices than unused frequent colours)")
        return EXIT_NEGATIVE
    print("step 3: near-acceptable colouring")
    completion = result.completion
    if not completion.solved:
        print("completion: " + completion.outcome.format())
        return EXIT_NEGATIVE
    print("completion: proper colouring")
    sys.stdout.write(format_colouring(completion.colouring))
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "choosable": cmd_choosable,
    "chnum": cmd_chnum,
    "verify": cmd_verify,
    "certify": cmd_certify,
    "heuristic": cmd_heuristic,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedInput as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
