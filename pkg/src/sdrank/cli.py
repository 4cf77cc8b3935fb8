"""Command-line interface to the ranking analyses.

Every subcommand loads a problem document (a file path, or the name of a
bundled dataset), runs one analysis, and prints a report.  Reports render as
readable text or as structured JSON with exact rationals; exit status is 0
when the question was answered (even "the judgments are contradictory"),
1 when the analysis is undefined for the problem state, and 2 for usage or
parse errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .analysis import AnalysisPreconditionError, Problem, relation_matrices
from .documents import (
    ProblemFormatError,
    ReportDocument,
    ReportFormat,
    export_hasse,
    parse_problem,
    relation_selection,
    relations_document,
    render_report,
    run_analysis,
)
from .numbers import as_rational

__all__ = ["main", "FORMAT_ENV"]

FORMAT_ENV = "SDRANK_FORMAT"

_POLICY_CHOICES = ("none", "dup", "bounds")
_FORMATS = {"text": ReportFormat.TEXT, "json": ReportFormat.STRUCTURED}


class UsageError(Exception):
    """Bad invocation discovered after argument parsing (exit status 2)."""


def epsilon(text: str) -> Fraction:
    value = as_rational(text)
    if value <= 0:
        raise ValueError("epsilon must be positive")
    return value


def pair(text: str) -> tuple[str, str]:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ValueError("expected two comma-separated alternative names")
    return parts[0], parts[1]


def _read_dataset(name: str) -> bytes:
    path = Path(name)
    if path.exists():
        return path.read_bytes()
    filename = name if name.endswith(".json") else f"{name}.json"
    bundled = resources.files(__package__) / "datasets" / filename
    if bundled.is_file():
        return bundled.read_bytes()
    raise UsageError(f"no such file or bundled dataset: {name!r}")


def _load_problem(args: argparse.Namespace) -> Problem:
    data = _read_dataset(args.dataset)
    sidecar = None
    if getattr(args, "preferences", None):
        sidecar_path = Path(args.preferences)
        if not sidecar_path.exists():
            raise UsageError(f"no such preference file: {args.preferences!r}")
        sidecar = sidecar_path.read_bytes()
    problem = parse_problem(data, sidecar)
    if args.epsilon is not None:
        problem = replace(problem, config=replace(problem.config, epsilon=args.epsilon))
    return problem


def _report_format(args: argparse.Namespace) -> ReportFormat:
    name = args.format or os.environ.get(FORMAT_ENV) or "text"
    try:
        return _FORMATS[name]
    except KeyError:
        raise UsageError(
            f"unknown report format {name!r} (choose from {sorted(_FORMATS)})"
        ) from None


def _emit(args: argparse.Namespace, document: ReportDocument) -> None:
    payload = render_report(document, _report_format(args))
    if args.output:
        Path(args.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def _elimination_params(args: argparse.Namespace) -> dict[str, object]:
    params: dict[str, object] = {"explain_all": args.explain_all}
    if args.redundancy:
        params["redundancy"] = args.redundancy
    return params


def _cmd_check(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    _emit(args, run_analysis(problem, "check", _elimination_params(args)))
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    _emit(args, run_analysis(problem, "trace", _elimination_params(args)))
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    _emit(args, run_analysis(problem, "bounds"))
    return 0


def _cmd_relations(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    params: dict[str, object] = {}
    if args.necessary:
        params["necessary"] = True
    if args.possible:
        params["possible"] = True
    if args.pair is not None:
        if args.hasse:
            raise UsageError("--hasse exports the full graph; it cannot join --pair")
        params["pair"] = list(args.pair)
        _emit(args, run_analysis(problem, "relations", params))
        return 0
    if args.hasse:
        # One matrix computation serves both the report and the DOT export.
        matrices = relation_matrices(problem)
        Path(args.hasse).write_text(export_hasse(matrices), encoding="utf-8")
        want_necessary, want_possible = relation_selection(
            args.necessary, args.possible
        )
        _emit(args, relations_document(problem, matrices, want_necessary, want_possible))
        return 0
    _emit(args, run_analysis(problem, "relations", params))
    return 0


def _cmd_reduct(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    _emit(args, run_analysis(problem, "reduct", {"pair": list(args.pair)}))
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    _emit(args, run_analysis(problem, "construct", {"pair": list(args.pair)}))
    return 0


def _cmd_criteria_reducts(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    _emit(args, run_analysis(problem, "criteria-reducts"))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import build_app

    uvicorn.run(build_app(), host=args.host, port=args.port)
    return 0


def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--epsilon",
        type=epsilon,
        default=argparse.SUPPRESS,
        help="override the strict-preference margin (exact rational, e.g. 0.01)",
    )
    shared.add_argument(
        "--redundancy",
        choices=_POLICY_CHOICES,
        default=argparse.SUPPRESS,
        help="redundancy policy during elimination (check/trace): "
        "none keeps everything, dup drops duplicates, bounds drops rows "
        "implied by the surviving box",
    )
    shared.add_argument(
        "--format",
        choices=sorted(_FORMATS),
        default=argparse.SUPPRESS,
        help=f"report format (default from ${FORMAT_ENV}, else text)",
    )
    shared.add_argument(
        "--output",
        default=argparse.SUPPRESS,
        metavar="PATH",
        help="write the report to PATH instead of stdout",
    )
    return shared


def _dataset_arg() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "dataset",
        help="problem document path (JSON, or CSV with --preferences), or a "
        "bundled dataset name (sales-manager-iter1, sales-manager-iter2)",
    )
    parent.add_argument(
        "--preferences",
        default=argparse.SUPPRESS,
        metavar="PATH",
        help="preference sidecar (JSON) accompanying a CSV performance table",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdrank",
        description="Exact robust-ranking analyses over pairwise reference judgments.",
    )
    parser.set_defaults(
        epsilon=None, redundancy=None, format=None, output=None, preferences=None
    )
    shared, dataset = _shared_flags(), _dataset_arg()
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser(
        "check",
        parents=[dataset, shared],
        help="is the judgment set consistent? if not, which judgments clash?",
    )
    check.add_argument(
        "--explain-all",
        action="store_true",
        help="enumerate every contradiction instead of stopping at the first",
    )
    check.set_defaults(handler=_cmd_check)

    bounds = commands.add_parser(
        "bounds", parents=[dataset, shared], help="tight value ranges of the model weights"
    )
    bounds.set_defaults(handler=_cmd_bounds)

    relations = commands.add_parser(
        "relations",
        parents=[dataset, shared],
        help="necessary/possible preference matrices, or one pair's verdicts",
    )
    relations.add_argument(
        "--necessary", action="store_true", help="report the necessary relation only"
    )
    relations.add_argument(
        "--possible", action="store_true", help="report the possible relation only"
    )
    relations.add_argument(
        "--pair",
        type=pair,
        default=None,
        metavar="FIRST,SECOND",
        help="decide a single ordered pair instead of the full matrices",
    )
    relations.add_argument(
        "--hasse",
        default=None,
        metavar="PATH",
        help="also export the necessary relation's cover graph as DOT to PATH",
    )
    relations.set_defaults(handler=_cmd_relations)

    reduct = commands.add_parser(
        "reduct",
        parents=[dataset, shared],
        help="smallest judgment subsets that alone force FIRST over SECOND",
    )
    reduct.add_argument("--pair", type=pair, required=True, metavar="FIRST,SECOND")
    reduct.set_defaults(handler=_cmd_reduct)

    construct = commands.add_parser(
        "construct",
        parents=[dataset, shared],
        help="largest judgment subsets under which FIRST over SECOND stays attainable",
    )
    construct.add_argument("--pair", type=pair, required=True, metavar="FIRST,SECOND")
    construct.set_defaults(handler=_cmd_construct)

    criteria = commands.add_parser(
        "criteria-reducts",
        parents=[dataset, shared],
        help="minimal criteria subsets that keep the judgments consistent",
    )
    criteria.set_defaults(handler=_cmd_criteria_reducts)

    trace = commands.add_parser(
        "trace",
        parents=[dataset, shared],
        help="dump the full labeled system: inputs, derived bounds, derivations",
    )
    trace.add_argument(
        "--explain-all",
        action="store_true",
        help="enumerate every contradiction instead of stopping at the first",
    )
    trace.set_defaults(handler=_cmd_trace)

    serve = commands.add_parser(
        "serve", parents=[_shared_flags()], help="start the HTTP analysis service"
    )
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except AnalysisPreconditionError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except KeyError as error:
        print(f"error: {error.args[0]}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
