#!/usr/bin/env python3
"""Walk the bundled sales-manager case study end to end.

Loads the first-iteration judgments, shows why they are contradictory and
which judgments to blame, applies the revision (drop the two judgments
involving a14, rank a8 directly over a7), and then runs every analysis on
the consistent second iteration: the labelled elimination table, weight
ranges, the necessary/possible matrices with the Hasse cover graph, one
preference reduct, one preference construct, and the criteria reducts.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from sdrank import (
    Comparison,
    ComparisonKind,
    ReferenceComparisons,
    ReportFormat,
    export_hasse,
    parse_problem,
    relation_matrices,
    render_report,
    run_analysis,
)


def _bundled(name: str) -> bytes:
    return (resources.files("sdrank") / "datasets" / f"{name}.json").read_bytes()


def _show(title: str, payload: bytes) -> None:
    print(f"\n== {title} " + "=" * max(0, 66 - len(title)))
    sys.stdout.write(payload.decode("utf-8"))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="report rendering for all sections",
    )
    parser.add_argument(
        "--hasse-out",
        metavar="PATH",
        default=None,
        help="also write the necessary relation's cover graph as DOT",
    )
    args = parser.parse_args()
    fmt = ReportFormat.TEXT if args.format == "text" else ReportFormat.STRUCTURED

    iteration1 = parse_problem(_bundled("sales-manager-iter1"))
    _show(
        "iteration 1: consistency check with full explanations",
        render_report(run_analysis(iteration1, "check", {"explain_all": True}), fmt),
    )

    revised = ReferenceComparisons(
        tuple(
            c
            for c in iteration1.comparisons.pairs
            if c.ref not in {"a8>a14", "a14>a7"}
        )
        + (Comparison("a8", ComparisonKind.STRICT, "a7"),)
    )
    iteration2 = iteration1.with_comparisons(revised)
    assert iteration2 == parse_problem(_bundled("sales-manager-iter2"))

    for title, kind, params in [
        ("iteration 2: consistency", "check", {}),
        ("iteration 2: labelled elimination table", "trace", {}),
        ("iteration 2: weight ranges", "bounds", {}),
        ("iteration 2: necessary and possible relations", "relations", {}),
        ("iteration 2: why a14 over a1 is necessary", "reduct", {"pair": ["a14", "a1"]}),
        (
            "iteration 2: how a1 over a2 could become possible",
            "construct",
            {"pair": ["a1", "a2"]},
        ),
        ("iteration 2: criteria reducts", "criteria-reducts", {}),
    ]:
        _show(title, render_report(run_analysis(iteration2, kind, params), fmt))

    if args.hasse_out:
        dot = export_hasse(relation_matrices(iteration2))
        Path(args.hasse_out).write_text(dot, encoding="utf-8")
        print(f"\nwrote Hasse cover graph to {args.hasse_out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
