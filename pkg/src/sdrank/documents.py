"""Problem and report documents.

The interchange surface of the package: an exact-rational JSON problem
format (with a CSV convenience for performance tables), report documents
for every analysis, text rendering in the labelled-table style, and a DOT
export of the preference Hasse graph.  Structured output keeps every value
exact (decimal string when terminating, ``p/q`` otherwise); text output
rounds to two decimals, half away from zero, purely for display.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .analysis import (
    ConsistencyReport,
    ConstructReport,
    CriteriaReductReport,
    Problem,
    ReductReport,
    RelationKind,
    RelationMatrices,
    base_system,
    check_consistency,
    criteria_reducts,
    preference_construct,
    preference_reduct,
    relation_matrices,
    robust_relation,
    segment_problem,
    weight_ranges,
)
from .engine import BoundKind, Mode, Policy, SDSystem, iso
from .expressions import LinearExpr
from .inequalities import LabeledInequality, OriginKind, RawRelation, RelOp
from .model import (
    Comparison,
    ComparisonKind,
    Criterion,
    Marginals,
    ModelConfig,
    PerformanceTable,
    ReferenceComparisons,
)
from .numbers import as_rational, format_decimal, rational_text

__all__ = [
    "ProblemFormatError",
    "ReportDocument",
    "ReportFormat",
    "parse_problem",
    "serialize_problem",
    "render_report",
    "export_hasse",
    "format_expr",
    "run_analysis",
    "relation_selection",
    "ANALYSIS_KINDS",
    "check_document",
    "bounds_document",
    "relations_document",
    "pair_relations_document",
    "reduct_document",
    "construct_document",
    "criteria_reducts_document",
    "trace_document",
]


class ProblemFormatError(ValueError):
    """A problem document failed to parse; the message names the location."""

    def __init__(self, location: str, message: str) -> None:
        super().__init__(f"{location}: {message}")
        self.location = location


class ReportFormat(Enum):
    TEXT = "text"
    STRUCTURED = "structured"


@dataclass(frozen=True)
class ReportDocument:
    """One analysis result as a renderable tree (exact rationals as strings)."""

    kind: str
    body: Mapping[str, Any]


# ---------------------------------------------------------------------------
# number and expression display
# ---------------------------------------------------------------------------


def _magnitude_text(value: Fraction) -> str:
    """Display magnitude: integers plain, anything else at two decimals."""
    value = abs(value)
    return str(value) if value.denominator == 1 else format_decimal(value)


def format_expr(expr: LinearExpr, descending: bool = False) -> str:
    """Two-decimal display of a linear expression.

    Constraint rows list variables by ascending index; bound expressions by
    descending index (the still-uneliminated variables first).  Unit
    coefficients print as the bare variable; the constant, when nonzero,
    comes last.
    """
    terms = list(expr.terms)
    if descending:
        terms.reverse()
    pieces: list[tuple[bool, str]] = []  # (negative, magnitude text)
    for var, coeff in terms:
        magnitude = var.name if abs(coeff) == 1 else _magnitude_text(coeff) + var.name
        pieces.append((coeff < 0, magnitude))
    if expr.constant != 0 or not pieces:
        pieces.append((expr.constant < 0, _magnitude_text(expr.constant)))
    first_negative, first_text = pieces[0]
    out = ("-" if first_negative else "") + first_text
    for negative, text in pieces[1:]:
        out += (" - " if negative else " + ") + text
    return out


def _expr_tree(expr: LinearExpr) -> dict[str, Any]:
    return {
        "terms": {var.name: rational_text(coeff) for var, coeff in expr.terms},
        "constant": rational_text(expr.constant),
    }


def _relation_text(raw: RawRelation, epsilon: Fraction) -> list[str]:
    """Display rows for one input relation, one per canonical inequality.

    Equalities split into their two halves (>= first); strict relations show
    the epsilon margin folded into the right-hand side.
    """
    lhs = format_expr(raw.lhs)
    if raw.op is RelOp.EQ:
        rhs = format_expr(raw.rhs)
        return [f"{lhs} >= {rhs}", f"{lhs} <= {rhs}"]
    if raw.op is RelOp.GE:
        return [f"{lhs} >= {format_expr(raw.rhs)}"]
    if raw.op is RelOp.LE:
        return [f"{lhs} <= {format_expr(raw.rhs)}"]
    if raw.op is RelOp.GT:
        return [f"{lhs} >= {format_expr(raw.rhs.shift(epsilon))}"]
    return [f"{lhs} <= {format_expr(raw.rhs.shift(-epsilon))}"]


def _origin_note(kind: OriginKind, comparison: str | None) -> str:
    if kind is OriginKind.COMPARISON:
        assert comparison is not None
        return comparison
    return kind.value


def _row_display(ineq: LabeledInequality, system: SDSystem) -> tuple[str | None, str]:
    """(isolated variable, display text) of a registered inequality row."""
    if ineq.body.is_constant:
        constant = ineq.body.constant
        sign = "-" if constant < 0 else ""
        return None, f"{sign}{_magnitude_text(constant)} <= 0"
    outcome = iso(ineq, system.ordering)
    bound = outcome.bound
    assert bound is not None
    op = ">=" if bound.kind is BoundKind.LOWER else "<="
    return bound.variable.name, f"{bound.variable.name} {op} {format_expr(bound.expr, descending=True)}"


# ---------------------------------------------------------------------------
# problem documents
# ---------------------------------------------------------------------------

_KIND_NAMES = {ComparisonKind.STRICT: "strict", ComparisonKind.INDIFFERENT: "indifferent"}
_NAMES_KIND = {name: kind for kind, name in _KIND_NAMES.items()}
_TOP_LEVEL_FIELDS = {
    "epsilon",
    "marginals",
    "criteria",
    "alternatives",
    "comparisons",
    "criteria_subset",
}


def _load_json(text: str, location: str) -> Any:
    try:
        # parse_float receives the raw lexeme, so decimal literals stay exact.
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as error:
        raise ProblemFormatError(
            f"{location} line {error.lineno} column {error.colno}", error.msg
        ) from error


def _rational(value: Any, location: str) -> Fraction:
    if isinstance(value, bool):
        raise ProblemFormatError(location, "expected a number, got a boolean")
    if isinstance(value, Fraction):
        return value
    try:
        return as_rational(value)
    except (ValueError, TypeError) as error:
        raise ProblemFormatError(location, str(error)) from error


def _expect(value: Any, kinds: type | tuple[type, ...], location: str, what: str) -> Any:
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise ProblemFormatError(location, f"expected {what}")
    return value


def _parse_criterion(tree: Any, location: str) -> Criterion:
    _expect(tree, dict, location, "an object")
    unknown = set(tree) - {"name", "domain", "gamma"}
    if unknown:
        raise ProblemFormatError(location, f"unknown fields {sorted(unknown)}")
    name = _expect(tree.get("name"), str, f"{location}.name", "a string")
    gamma = tree.get("gamma", 2)
    _expect(gamma, int, f"{location}.gamma", "an integer")
    low = high = None
    if "domain" in tree:
        domain = _expect(tree["domain"], list, f"{location}.domain", "a [low, high] array")
        if len(domain) != 2:
            raise ProblemFormatError(f"{location}.domain", "expected exactly two endpoints")
        low = _rational(domain[0], f"{location}.domain[0]")
        high = _rational(domain[1], f"{location}.domain[1]")
    try:
        return Criterion(name, gamma=gamma, domain_low=low, domain_high=high)
    except ValueError as error:
        raise ProblemFormatError(location, str(error)) from error


def _parse_alternatives(
    tree: Any, location: str
) -> tuple[dict[str, dict[str, Fraction]], list[str]]:
    _expect(tree, list, location, "an array")
    if not tree:
        raise ProblemFormatError(location, "at least one alternative required")
    performances: dict[str, dict[str, Fraction]] = {}
    columns: list[str] | None = None
    for position, entry in enumerate(tree):
        where = f"{location}[{position}]"
        _expect(entry, dict, where, "an object")
        unknown = set(entry) - {"name", "performances"}
        if unknown:
            raise ProblemFormatError(where, f"unknown fields {sorted(unknown)}")
        name = _expect(entry.get("name"), str, f"{where}.name", "a string")
        if name in performances:
            raise ProblemFormatError(f"{where}.name", f"duplicate alternative {name!r}")
        values = _expect(
            entry.get("performances"), dict, f"{where}.performances", "an object"
        )
        row = {
            str(criterion): _rational(value, f"{where}.performances.{criterion}")
            for criterion, value in values.items()
        }
        if columns is None:
            columns = list(row)
        elif set(row) != set(columns):
            raise ProblemFormatError(
                f"{where}.performances",
                f"columns {sorted(row)} do not match the first row's {sorted(columns)}",
            )
        performances[name] = row
    assert columns is not None
    return performances, columns


def _parse_comparisons(tree: Any, location: str) -> ReferenceComparisons:
    if isinstance(tree, str):
        if not tree.strip():
            return ReferenceComparisons()
        try:
            return ReferenceComparisons.from_chain(tree)
        except ValueError as error:
            raise ProblemFormatError(location, str(error)) from error
    _expect(tree, list, location, "a ranking chain string or an array of pairs")
    pairs = []
    for position, entry in enumerate(tree):
        where = f"{location}[{position}]"
        _expect(entry, dict, where, "an object")
        unknown = set(entry) - {"first", "kind", "second"}
        if unknown:
            raise ProblemFormatError(where, f"unknown fields {sorted(unknown)}")
        first = _expect(entry.get("first"), str, f"{where}.first", "a string")
        second = _expect(entry.get("second"), str, f"{where}.second", "a string")
        kind_name = _expect(entry.get("kind"), str, f"{where}.kind", "a string")
        kind = _NAMES_KIND.get(kind_name)
        if kind is None:
            raise ProblemFormatError(
                f"{where}.kind", f"expected 'strict' or 'indifferent', got {kind_name!r}"
            )
        try:
            pairs.append(Comparison(first, kind, second))
        except ValueError as error:
            raise ProblemFormatError(where, str(error)) from error
    try:
        return ReferenceComparisons(tuple(pairs))
    except ValueError as error:
        raise ProblemFormatError(location, str(error)) from error


def _problem_from_tree(tree: Any, location: str = "problem") -> Problem:
    _expect(tree, dict, location, "an object")
    unknown = set(tree) - _TOP_LEVEL_FIELDS
    if unknown:
        raise ProblemFormatError(location, f"unknown fields {sorted(unknown)}")
    epsilon = _rational(tree.get("epsilon", "1/100"), f"{location}.epsilon")
    marginal_name = tree.get("marginals", "linear")
    _expect(marginal_name, str, f"{location}.marginals", "a string")
    try:
        marginals = Marginals(marginal_name)
    except ValueError as error:
        raise ProblemFormatError(
            f"{location}.marginals", f"expected 'linear' or 'piecewise', got {marginal_name!r}"
        ) from error

    criteria_tree = _expect(
        tree.get("criteria"), list, f"{location}.criteria", "an array"
    )
    criteria = tuple(
        _parse_criterion(entry, f"{location}.criteria[{i}]")
        for i, entry in enumerate(criteria_tree)
    )
    performances, columns = _parse_alternatives(
        tree.get("alternatives"), f"{location}.alternatives"
    )
    comparisons = _parse_comparisons(
        tree.get("comparisons", ""), f"{location}.comparisons"
    )
    subset = None
    if "criteria_subset" in tree:
        subset_tree = _expect(
            tree["criteria_subset"], list, f"{location}.criteria_subset", "an array"
        )
        subset = tuple(
            _expect(name, str, f"{location}.criteria_subset[{i}]", "a string")
            for i, name in enumerate(subset_tree)
        )
    try:
        table = PerformanceTable.from_mapping(performances, criteria_names=columns)
        config = ModelConfig(epsilon=epsilon, marginals=marginals, criteria_subset=subset)
        return Problem(table, criteria, comparisons, config)
    except (ValueError, KeyError) as error:
        raise ProblemFormatError(location, str(error)) from error


def _problem_from_csv(text: str, sidecar: str | None) -> Problem:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if any(cell.strip() for cell in row)]
    if not rows:
        raise ProblemFormatError("table line 1", "empty performance table")
    header = [cell.strip() for cell in rows[0]]
    if len(header) < 2:
        raise ProblemFormatError("table line 1", "need a name column plus criteria columns")
    criteria_names = header[1:]
    alternatives = []
    for line, row in enumerate(rows[1:], start=2):
        cells = [cell.strip() for cell in row]
        if len(cells) != len(header):
            raise ProblemFormatError(
                f"table line {line}", f"expected {len(header)} cells, got {len(cells)}"
            )
        alternatives.append(
            {
                "name": cells[0],
                "performances": dict(zip(criteria_names, cells[1:])),
            }
        )
    tree: dict[str, Any] = {}
    if sidecar is not None:
        tree = _expect(_load_json(sidecar, "preferences"), dict, "preferences", "an object")
    tree.setdefault("criteria", [{"name": name} for name in criteria_names])
    tree["alternatives"] = alternatives
    return _problem_from_tree(tree)


def parse_problem(data: bytes | str, sidecar: bytes | str | None = None) -> Problem:
    """Parse a problem document: JSON, or a CSV table with a preference sidecar.

    All numerics convert exactly (JSON number literals keep their decimal
    text); ranking chains expand into consecutive pairs.  Errors carry the
    offending line or field location.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    side = sidecar.decode("utf-8") if isinstance(sidecar, bytes) else sidecar
    if text.lstrip().startswith("{"):
        if side is not None:
            raise ProblemFormatError(
                "preferences", "a sidecar only accompanies a CSV table"
            )
        return _problem_from_tree(_load_json(text, "problem"))
    return _problem_from_csv(text, side)


def serialize_problem(problem: Problem) -> bytes:
    """Canonical JSON for a problem; parse(serialize(p)) == p."""
    criteria = []
    for criterion in problem.criteria:
        entry: dict[str, Any] = {"name": criterion.name}
        if criterion.gamma != 2:
            entry["gamma"] = criterion.gamma
        if criterion.domain_low is not None or criterion.domain_high is not None:
            assert criterion.domain_low is not None and criterion.domain_high is not None
            entry["domain"] = [
                rational_text(criterion.domain_low),
                rational_text(criterion.domain_high),
            ]
        criteria.append(entry)
    alternatives = [
        {
            "name": name,
            "performances": {
                criterion: rational_text(problem.table.value(name, criterion))
                for criterion in problem.table.criteria_names
            },
        }
        for name in problem.table.alternatives
    ]
    comparisons = [
        {"first": c.first, "kind": _KIND_NAMES[c.kind], "second": c.second}
        for c in problem.comparisons.pairs
    ]
    tree: dict[str, Any] = {
        "epsilon": rational_text(problem.config.epsilon),
        "marginals": problem.config.marginals.value,
        "criteria": criteria,
        "alternatives": alternatives,
        "comparisons": comparisons,
    }
    if problem.config.criteria_subset is not None:
        tree["criteria_subset"] = list(problem.config.criteria_subset)
    return (json.dumps(tree, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# report construction
# ---------------------------------------------------------------------------


def _ref_list(refs: Iterable[str], problem: Problem) -> list[str]:
    rank = {ref: i for i, ref in enumerate(problem.comparisons.refs)}
    return sorted(refs, key=lambda ref: rank.get(ref, len(rank)))


def _original_rows(
    problem: Problem, system: SDSystem, raws: Sequence[RawRelation]
) -> list[dict[str, Any]]:
    rows = []
    ident = 1
    for raw in raws:
        for text in _relation_text(raw, problem.config.epsilon):
            ineq = system.registry[ident]
            rows.append(
                {
                    "id": ident,
                    "label": list(ineq.label),
                    "origin": ineq.origin.kind.value,
                    "comparison": ineq.origin.comparison_ref,
                    "text": text,
                    "body": _expr_tree(ineq.body),
                }
            )
            ident += 1
    return rows


def _derived_rows(system: SDSystem, first_derived: int) -> list[dict[str, Any]]:
    rows = []
    for ident in sorted(system.registry):
        if ident < first_derived:
            continue
        ineq = system.registry[ident]
        variable, text = _row_display(ineq, system)
        rows.append(
            {
                "id": ident,
                "label": list(ineq.label),
                "origin": ineq.origin.kind.value,
                "comparison": ineq.origin.comparison_ref,
                "variable": variable,
                "text": text,
                "body": _expr_tree(ineq.body),
            }
        )
    return rows


def _contradiction_entries(problem: Problem, system: SDSystem) -> list[dict[str, Any]]:
    from .engine import backtrack

    entries = []
    for record in system.contradictions:
        roots = backtrack(system, record)
        refs = [
            system.registry[ident].origin.comparison_ref
            for ident in roots
            if system.registry[ident].origin.kind is OriginKind.COMPARISON
        ]
        entries.append(
            {
                "lower": record.lower_id,
                "upper": record.upper_id,
                "roots": sorted(roots),
                "comparisons": _ref_list([r for r in refs if r is not None], problem),
            }
        )
    return entries


def _system_tree(
    problem: Problem, system: SDSystem, raws: Sequence[RawRelation]
) -> dict[str, Any]:
    originals = _original_rows(problem, system, raws)
    first_derived = len(originals) + 1
    return {
        "variables": [var.name for var in system.ordering],
        "epsilon": rational_text(system.epsilon),
        "mode": system.mode.value,
        "policy": system.policy.value,
        "feasible": system.feasible,
        "truncated": system.truncated,
        "originals": originals,
        "derived": _derived_rows(system, first_derived),
        "contradictions": _contradiction_entries(problem, system),
    }


def check_document(problem: Problem, report: ConsistencyReport) -> ReportDocument:
    body = {
        "feasible": report.feasible,
        "system": _system_tree(problem, report.system, problem.relations()),
        "minimal_comparison_subsets": [
            _ref_list(subset, problem) for subset in report.minimal_comparison_subsets
        ],
    }
    return ReportDocument("check", body)


def bounds_document(
    problem: Problem, ranges: Mapping[str, tuple[Fraction, Fraction]]
) -> ReportDocument:
    body = {
        "feasible": True,
        "ranges": {
            name: {
                "exact": [rational_text(low), rational_text(high)],
                "display": [format_decimal(low), format_decimal(high)],
            }
            for name, (low, high) in ranges.items()
        },
    }
    return ReportDocument("bounds", body)


def _grid(matrix: Sequence[Sequence[bool]]) -> list[str]:
    return ["".join("T" if cell else "F" for cell in row) for row in matrix]


def relations_document(
    problem: Problem,
    matrices: RelationMatrices,
    include_necessary: bool = True,
    include_possible: bool = True,
) -> ReportDocument:
    body: dict[str, Any] = {"alternatives": list(matrices.alternatives)}
    if include_necessary:
        body["necessary"] = _grid(matrices.necessary)
    if include_possible:
        body["possible"] = _grid(matrices.possible)
    if include_necessary:
        body["hasse_edges"] = [list(edge) for edge in matrices.hasse_edges]
    return ReportDocument("relations", body)


def pair_relations_document(
    problem: Problem,
    pair: tuple[str, str],
    necessary: bool | None,
    possible: bool | None,
) -> ReportDocument:
    body: dict[str, Any] = {"pair": list(pair)}
    if necessary is not None:
        body["necessary"] = necessary
    if possible is not None:
        body["possible"] = possible
    return ReportDocument("relations", body)


def reduct_document(problem: Problem, report: ReductReport) -> ReportDocument:
    body = {
        "pair": [report.first, report.second],
        "relation": "necessary",
        "holds": True,
        "hypothesis_id": report.hypothesis_id,
        "contradictions": len(report.system.contradictions),
        "candidate_row_subsets": [sorted(s) for s in report.candidate_id_subsets],
        "candidate_comparison_subsets": [
            _ref_list(s, problem) for s in report.candidate_ref_subsets
        ],
        "reducts": [_ref_list(s, problem) for s in report.reducts],
    }
    return ReportDocument("reduct", body)


def construct_document(problem: Problem, report: ConstructReport) -> ReportDocument:
    body = {
        "pair": [report.first, report.second],
        "relation": "possible",
        "holds": False,
        "unsalvageable": report.unsalvageable,
        "hypothesis_id": report.hypothesis_id,
        "contradictions": len(report.system.contradictions),
        "candidate_row_subsets": [sorted(s) for s in report.candidate_id_subsets],
        "candidate_comparison_subsets": [
            _ref_list(s, problem) for s in report.candidate_ref_subsets
        ],
        "removal_sets": [_ref_list(s, problem) for s in report.hitting_sets],
        "constructs": [_ref_list(s, problem) for s in report.constructs],
    }
    return ReportDocument("construct", body)


def criteria_reducts_document(
    problem: Problem, report: CriteriaReductReport
) -> ReportDocument:
    order = {criterion.name: i for i, criterion in enumerate(problem.criteria)}

    def names(subset: frozenset[str]) -> list[str]:
        return sorted(subset, key=lambda name: order[name])

    body = {
        "examined": [
            {"criteria": names(subset), "consistent": consistent}
            for subset, consistent in report.examined
        ],
        "reducts": [names(subset) for subset in report.reducts],
    }
    return ReportDocument("criteria-reducts", body)


def _genealogy_node(system: SDSystem, ident: int) -> dict[str, Any]:
    ineq = system.registry[ident]
    _, text = _row_display(ineq, system)
    node: dict[str, Any] = {"id": ident, "label": list(ineq.label), "text": text}
    if not ineq.is_original:
        node["parents"] = [
            _genealogy_node(system, ineq.parent_lower),
            _genealogy_node(system, ineq.parent_upper),
        ]
    return node


def _genealogies(system: SDSystem) -> list[dict[str, Any]]:
    trees = []
    for record in system.contradictions:
        lower = system.registry[record.lower_id]
        upper = system.registry[record.upper_id]
        if record.lower_id == record.upper_id:
            gap = lower.body.constant
            trees.append(
                {
                    "gap": rational_text(gap),
                    "rows": [_genealogy_node(system, record.lower_id)],
                }
            )
            continue
        low_bound = iso(lower, system.ordering).bound
        high_bound = iso(upper, system.ordering).bound
        assert low_bound is not None and high_bound is not None
        gap = (low_bound.expr - high_bound.expr).constant
        trees.append(
            {
                "gap": rational_text(gap),
                "rows": [
                    _genealogy_node(system, record.lower_id),
                    _genealogy_node(system, record.upper_id),
                ],
            }
        )
    return trees


def trace_document(
    problem: Problem,
    system: SDSystem,
    raws: Sequence[RawRelation] | None = None,
) -> ReportDocument:
    raws = problem.relations() if raws is None else raws
    body = {
        "feasible": system.feasible,
        "system": _system_tree(problem, system, raws),
        "genealogies": _genealogies(system),
    }
    return ReportDocument("trace", body)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def render_report(document: ReportDocument, fmt: ReportFormat) -> bytes:
    """Deterministic bytes for a report document in the requested format."""
    if fmt is ReportFormat.STRUCTURED:
        tree = {"kind": document.kind, **document.body}
        return (json.dumps(tree, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    renderer = _TEXT_RENDERERS[document.kind]
    return (renderer(document.body) + "\n").encode("utf-8")


def _format_rows(rows: Sequence[Mapping[str, Any]]) -> list[str]:
    lines = []
    width = max((len(_label_text(row["label"])) for row in rows), default=0)
    for row in rows:
        note = _origin_note_from_row(row)
        label = _label_text(row["label"]).ljust(width)
        lines.append(f"  {row['id']:>4}  {label}  {row['text']}  [{note}]")
    return lines


def _label_text(label: Sequence[int]) -> str:
    return "{" + ",".join(str(part) for part in label) + "}"


def _origin_note_from_row(row: Mapping[str, Any]) -> str:
    if row.get("comparison"):
        return str(row["comparison"])
    return str(row["origin"])


def _text_verdict(feasible: bool) -> str:
    return "compatible" if feasible else "contradictory"


def _text_subsets(subsets: Sequence[Sequence[str]]) -> list[str]:
    if not subsets:
        return ["  (none)"]
    return ["  - " + (", ".join(subset) or "(empty)") for subset in subsets]


def _text_contradiction_lines(entries: Sequence[Mapping[str, Any]]) -> list[str]:
    lines = []
    for entry in entries:
        roots = "{" + ", ".join(str(i) for i in entry["roots"]) + "}"
        comparisons = ", ".join(entry["comparisons"]) if entry["comparisons"] else "(none)"
        lines.append(
            f"  lower {entry['lower']} x upper {entry['upper']}: "
            f"roots {roots}; comparisons: {comparisons}"
        )
    return lines


def _text_check(body: Mapping[str, Any]) -> str:
    system = body["system"]
    count = len(system["contradictions"])
    headline = _text_verdict(body["feasible"])
    if not body["feasible"]:
        noun = "contradiction" if count == 1 else "contradictions"
        headline += f" ({count} {noun} recorded)"
    lines = [
        f"consistency: {headline}",
        f"epsilon: {system['epsilon']}",
        f"variables: {', '.join(system['variables'])}",
        "",
        "constraints:",
        *_format_rows(system["originals"]),
    ]
    if not body["feasible"]:
        lines += [
            "",
            "minimal comparison subsets causing the contradiction:",
            *_text_subsets(body["minimal_comparison_subsets"]),
            "",
            "contradictions:",
            *_text_contradiction_lines(system["contradictions"]),
        ]
    return "\n".join(lines)


def _text_bounds(body: Mapping[str, Any]) -> str:
    lines = ["weight ranges:"]
    for name, entry in body["ranges"].items():
        low, high = entry["display"]
        lines.append(f"  {name}: [{low}, {high}]")
    return "\n".join(lines)


def _text_matrix(alternatives: Sequence[str], grid: Sequence[str], title: str) -> list[str]:
    width = max(len(name) for name in alternatives)
    header = " " * (width + 2) + " ".join(name.rjust(width) for name in alternatives)
    lines = [f"{title}:", header]
    for name, row in zip(alternatives, grid):
        cells = " ".join(cell.rjust(width) for cell in row)
        lines.append(f"  {name.rjust(width)} {cells}")
    return lines


def _text_relations(body: Mapping[str, Any]) -> str:
    if "pair" in body:
        first, second = body["pair"]
        lines = []
        for key in ("necessary", "possible"):
            if key in body:
                value = "T" if body[key] else "F"
                lines.append(f"{key}({first}, {second}): {value}")
        return "\n".join(lines)
    alternatives = body["alternatives"]
    lines: list[str] = []
    if "necessary" in body:
        lines += _text_matrix(alternatives, body["necessary"], "necessary relation")
        lines.append("")
    if "possible" in body:
        lines += _text_matrix(alternatives, body["possible"], "possible relation")
        lines.append("")
    if "hasse_edges" in body:
        lines.append("hasse edges (cover arcs of the strict necessary relation):")
        if body["hasse_edges"]:
            lines += [f"  {a} -> {b}" for a, b in body["hasse_edges"]]
        else:
            lines.append("  (none)")
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def _text_id_subsets(subsets: Sequence[Sequence[int]]) -> str:
    if not subsets:
        return "(none)"
    return " ".join("{" + ",".join(str(i) for i in subset) + "}" for subset in subsets)


def _text_reduct(body: Mapping[str, Any]) -> str:
    first, second = body["pair"]
    lines = [
        f"reduct for {first} over {second} (necessary relation holds)",
        f"hypothesis row: {body['hypothesis_id']}; contradictions: {body['contradictions']}",
        f"candidate constraint-row subsets: {_text_id_subsets(body['candidate_row_subsets'])}",
        "candidate comparison subsets:",
        *_text_subsets(body["candidate_comparison_subsets"]),
        "minimal reducts:",
        *_text_subsets(body["reducts"]),
    ]
    return "\n".join(lines)


def _text_construct(body: Mapping[str, Any]) -> str:
    first, second = body["pair"]
    lines = [
        f"construct for {first} over {second} (possible relation does not hold)",
        f"hypothesis row: {body['hypothesis_id']}; contradictions: {body['contradictions']}",
        f"candidate constraint-row subsets: {_text_id_subsets(body['candidate_row_subsets'])}",
        "candidate comparison subsets:",
        *_text_subsets(body["candidate_comparison_subsets"]),
    ]
    if body["unsalvageable"]:
        lines.append(
            "unsalvageable: a contradiction involves no comparison, "
            "so no removal can make the relation possible"
        )
        return "\n".join(lines)
    lines += [
        "minimal removal sets:",
        *_text_subsets(body["removal_sets"]),
        "constructs (comparisons to retain):",
        *_text_subsets(body["constructs"]),
    ]
    return "\n".join(lines)


def _text_criteria(body: Mapping[str, Any]) -> str:
    lines = ["criteria subsets examined (ascending size):"]
    for entry in body["examined"]:
        names = "{" + ", ".join(entry["criteria"]) + "}"
        verdict = "compatible" if entry["consistent"] else "contradictory"
        lines.append(f"  {names}: {verdict}")
    lines.append("criteria reducts:")
    if body["reducts"]:
        lines += ["  - " + ", ".join(names) for names in body["reducts"]]
    else:
        lines.append("  (none)")
    return "\n".join(lines)


def _text_genealogy(tree: Mapping[str, Any]) -> list[str]:
    gap = Fraction(tree["gap"])
    lines = [f"contradiction (gap {format_decimal(gap)}, exactly {tree['gap']} > 0):"]

    def walk(node: Mapping[str, Any], depth: int) -> None:
        label = _label_text(node["label"])
        lines.append("  " * depth + f"  {label}  {node['text']}")
        for parent in node.get("parents", ()):
            walk(parent, depth + 1)

    for row in tree["rows"]:
        walk(row, 0)
    return lines


def _text_trace(body: Mapping[str, Any]) -> str:
    system = body["system"]
    lines = [
        f"variables (elimination order): {', '.join(system['variables'])}",
        f"epsilon: {system['epsilon']}; mode: {system['mode']}; policy: {system['policy']}",
        f"verdict: {_text_verdict(system['feasible'])}"
        + (" (record limit reached)" if system["truncated"] else ""),
        "",
        "constraints:",
        *_format_rows(system["originals"]),
    ]
    derived = system["derived"]
    if derived:
        lines += ["", "derived bounds:"]
        for variable in reversed(system["variables"]):
            rows = [row for row in derived if row["variable"] == variable]
            if rows:
                lines.append(f" level {variable}:")
                lines += _format_rows(rows)
        loose = [row for row in derived if row["variable"] is None]
        if loose:
            lines.append(" constant rows:")
            lines += _format_rows(loose)
    for tree in body["genealogies"]:
        lines.append("")
        lines += _text_genealogy(tree)
    return "\n".join(lines)


_TEXT_RENDERERS = {
    "check": _text_check,
    "bounds": _text_bounds,
    "relations": _text_relations,
    "reduct": _text_reduct,
    "construct": _text_construct,
    "criteria-reducts": _text_criteria,
    "trace": _text_trace,
}


# ---------------------------------------------------------------------------
# analysis dispatch
# ---------------------------------------------------------------------------

_POLICY_NAMES = {
    "none": Policy.KEEP_ALL,
    "dup": Policy.DROP_DUPLICATES,
    "bounds": Policy.BOUNDS_METHOD,
}


def relation_selection(necessary: bool, possible: bool) -> tuple[bool, bool]:
    """Which relations to report: explicit flags, or both when none chosen."""
    if necessary or possible:
        return necessary, possible
    return True, True


def _no_extras(params: dict[str, Any], kind: str) -> None:
    if params:
        raise ValueError(f"unknown parameters for {kind!r}: {sorted(params)}")


def _pair_param(params: dict[str, Any]) -> tuple[str, str]:
    pair = params.pop("pair", None)
    if (
        not isinstance(pair, Sequence)
        or isinstance(pair, str)
        or len(pair) != 2
        or not all(isinstance(name, str) for name in pair)
    ):
        raise ValueError("parameter 'pair' must name exactly two alternatives")
    return pair[0], pair[1]


def _elimination_choice(
    params: dict[str, Any], kind: str, stop_policy: Policy
) -> tuple[Mode, Policy]:
    explain = bool(params.pop("explain_all", False))
    name = params.pop("redundancy", None)
    _no_extras(params, kind)
    if name is None:
        policy = Policy.KEEP_ALL if explain else stop_policy
    else:
        try:
            policy = _POLICY_NAMES[name]
        except (KeyError, TypeError):
            raise ValueError(
                f"unknown redundancy policy {name!r} (choose from {sorted(_POLICY_NAMES)})"
            ) from None
    if explain and policy is Policy.BOUNDS_METHOD:
        raise ValueError(
            "the bounds redundancy policy cannot be combined with full "
            "enumeration: it discards the derivations enumeration reports"
        )
    return Mode.ENUMERATE_ALL if explain else Mode.STOP_AT_FIRST, policy


def _analysis_check(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    mode, policy = _elimination_choice(params, "check", Policy.KEEP_ALL)
    return check_document(problem, check_consistency(problem, mode=mode, policy=policy))


def _analysis_trace(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    mode, policy = _elimination_choice(params, "trace", Policy.BOUNDS_METHOD)
    return trace_document(problem, segment_problem(problem, mode, policy))


def _analysis_bounds(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    _no_extras(params, "bounds")
    return bounds_document(problem, weight_ranges(problem))


def _analysis_relations(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    want_necessary, want_possible = relation_selection(
        bool(params.pop("necessary", False)), bool(params.pop("possible", False))
    )
    if "pair" in params:
        first, second = _pair_param(params)
        _no_extras(params, "relations")
        if base is None:
            base = base_system(problem)
        necessary = (
            robust_relation(problem, RelationKind.NECESSARY, first, second, base=base)
            if want_necessary
            else None
        )
        possible = (
            robust_relation(problem, RelationKind.POSSIBLE, first, second, base=base)
            if want_possible
            else None
        )
        return pair_relations_document(problem, (first, second), necessary, possible)
    _no_extras(params, "relations")
    matrices = relation_matrices(problem, base=base)
    return relations_document(problem, matrices, want_necessary, want_possible)


def _analysis_reduct(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    first, second = _pair_param(params)
    _no_extras(params, "reduct")
    return reduct_document(problem, preference_reduct(problem, first, second))


def _analysis_construct(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    first, second = _pair_param(params)
    _no_extras(params, "construct")
    return construct_document(problem, preference_construct(problem, first, second))


def _analysis_criteria_reducts(
    problem: Problem, params: dict[str, Any], base: SDSystem | None
) -> ReportDocument:
    _no_extras(params, "criteria-reducts")
    return criteria_reducts_document(problem, criteria_reducts(problem))


_ANALYSES = {
    "check": _analysis_check,
    "bounds": _analysis_bounds,
    "relations": _analysis_relations,
    "reduct": _analysis_reduct,
    "construct": _analysis_construct,
    "criteria-reducts": _analysis_criteria_reducts,
    "trace": _analysis_trace,
}

ANALYSIS_KINDS = tuple(_ANALYSES)


def run_analysis(
    problem: Problem,
    kind: str,
    params: Mapping[str, Any] | None = None,
    base: SDSystem | None = None,
) -> ReportDocument:
    """One entry point for every analysis; CLI and service both route here.

    ``base`` optionally reuses an elimination pass already built for this
    problem (only pair and matrix relation queries consult it).  Bad kinds or
    parameters raise ``ValueError``; analysis preconditions surface as
    ``AnalysisPreconditionError``.
    """
    try:
        handler = _ANALYSES[kind]
    except KeyError:
        raise ValueError(
            f"unknown analysis kind {kind!r} (choose from {sorted(_ANALYSES)})"
        ) from None
    return handler(problem, dict(params or {}), base)


# ---------------------------------------------------------------------------
# graph export
# ---------------------------------------------------------------------------


def export_hasse(matrices: RelationMatrices) -> str:
    """DOT digraph of the necessary relation's cover arcs.

    Node order follows the alternative order; edge order is row-major, so
    the output is deterministic byte-for-byte.
    """
    lines = ["digraph necessary {"]
    for name in matrices.alternatives:
        lines.append(f'  "{name}";')
    for source, target in matrices.hasse_edges:
        lines.append(f'  "{source}" -> "{target}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
