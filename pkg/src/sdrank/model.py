"""Additive-value ranking model: performance tables, reference comparisons,
and their translation into labelled raw constraint systems.

With linear marginals each criterion contributes ``w_j * rescaled
performance`` to an alternative's comprehensive value; the constraint system
consists of weight non-negativity, normalization of the weights to 1, and one
relation per pairwise judgment (two for an indifference, split by
canonicalization).  Piecewise-linear marginals generalize this with one
variable per characteristic point above the zero anchor.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .expressions import LinearExpr, VarId, term
from .inequalities import (
    MODEL_TAG,
    OriginKind,
    OriginTag,
    RawRelation,
    RelOp,
    relation,
)
from .numbers import as_rational


@dataclass(frozen=True)
class Criterion:
    """A gain-type criterion; cost-type data is negated at ingestion.

    ``gamma`` is the number of characteristic points of the marginal function
    (2 = linear).  Domain endpoints default to the observed min/max of the
    performance table when left unset.
    """

    name: str
    gamma: int = 2
    domain_low: Fraction | None = None
    domain_high: Fraction | None = None
    direction: str = "gain"

    def __post_init__(self) -> None:
        if self.gamma < 2:
            raise ValueError(f"criterion {self.name!r} needs gamma >= 2")
        if self.direction != "gain":
            raise ValueError("criteria are gain-type; negate cost data at ingestion")
        if (
            self.domain_low is not None
            and self.domain_high is not None
            and self.domain_low >= self.domain_high
        ):
            raise ValueError(f"criterion {self.name!r} has an empty domain")


@dataclass(frozen=True)
class PerformanceTable:
    alternatives: tuple[str, ...]
    criteria_names: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.alternatives)) != len(self.alternatives):
            raise ValueError("duplicate alternative names")
        if len(set(self.criteria_names)) != len(self.criteria_names):
            raise ValueError("duplicate criterion names")
        if len(self.rows) != len(self.alternatives):
            raise ValueError("one performance row per alternative required")
        for alt, row in zip(self.alternatives, self.rows):
            if len(row) != len(self.criteria_names):
                raise ValueError(f"incomplete performance row for {alt!r}")

    @classmethod
    def from_mapping(
        cls,
        performances: Mapping[str, Mapping[str, Fraction | int | str]],
        criteria_names: Sequence[str] | None = None,
    ) -> "PerformanceTable":
        alternatives = tuple(performances)
        if criteria_names is None:
            first = next(iter(performances.values()))
            criteria_names = tuple(first)
        rows = tuple(
            tuple(as_rational(performances[alt][crit]) for crit in criteria_names)
            for alt in alternatives
        )
        return cls(alternatives, tuple(criteria_names), rows)

    def value(self, alternative: str, criterion: str) -> Fraction:
        try:
            i = self.alternatives.index(alternative)
        except ValueError:
            raise KeyError(f"unknown alternative {alternative!r}") from None
        try:
            j = self.criteria_names.index(criterion)
        except ValueError:
            raise KeyError(f"unknown criterion {criterion!r}") from None
        return self.rows[i][j]

    def column(self, criterion: str) -> tuple[Fraction, ...]:
        j = self.criteria_names.index(criterion)
        return tuple(row[j] for row in self.rows)


class ComparisonKind(Enum):
    STRICT = "strict"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class Comparison:
    first: str
    kind: ComparisonKind
    second: str

    def __post_init__(self) -> None:
        if self.first == self.second:
            raise ValueError(f"{self.first!r} cannot be compared with itself")

    @property
    def ref(self) -> str:
        symbol = ">" if self.kind is ComparisonKind.STRICT else "~"
        return f"{self.first}{symbol}{self.second}"


@dataclass(frozen=True)
class ReferenceComparisons:
    pairs: tuple[Comparison, ...] = ()

    def __post_init__(self) -> None:
        refs = [c.ref for c in self.pairs]
        if len(set(refs)) != len(refs):
            raise ValueError("duplicate pairwise comparison")

    @classmethod
    def from_chain(cls, chain: str) -> "ReferenceComparisons":
        """Expand ``a6 ~ a9 > a8 > a7`` into consecutive pairwise judgments."""
        tokens = chain.replace(">", " > ").replace("~", " ~ ").split()
        if len(tokens) % 2 == 0 or (tokens and len(tokens) < 3):
            raise ValueError(f"malformed ranking chain: {chain!r}")
        pairs = []
        for i in range(1, len(tokens), 2):
            op, left, right = tokens[i], tokens[i - 1], tokens[i + 1]
            if op == ">":
                pairs.append(Comparison(left, ComparisonKind.STRICT, right))
            elif op == "~":
                pairs.append(Comparison(left, ComparisonKind.INDIFFERENT, right))
            else:
                raise ValueError(f"unknown relation {op!r} in chain")
        return cls(tuple(pairs))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str, str]]) -> "ReferenceComparisons":
        out = []
        for first, op, second in pairs:
            if op == ">":
                out.append(Comparison(first, ComparisonKind.STRICT, second))
            elif op == "~":
                out.append(Comparison(first, ComparisonKind.INDIFFERENT, second))
            else:
                raise ValueError(f"unknown relation {op!r}")
        return cls(tuple(out))

    @property
    def refs(self) -> tuple[str, ...]:
        return tuple(c.ref for c in self.pairs)


class Marginals(Enum):
    LINEAR = "linear"
    PIECEWISE = "piecewise"


@dataclass(frozen=True)
class ModelConfig:
    epsilon: Fraction = Fraction(1, 100)
    marginals: Marginals = Marginals.LINEAR
    criteria_subset: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.criteria_subset is not None and not self.criteria_subset:
            raise ValueError("criteria subset must be non-empty when given")


def resolve_domain(criterion: Criterion, table: PerformanceTable) -> Criterion:
    """Fill unset domain endpoints with the observed min/max performance."""
    column = table.column(criterion.name)
    low = criterion.domain_low if criterion.domain_low is not None else min(column)
    high = criterion.domain_high if criterion.domain_high is not None else max(column)
    if low >= high:
        raise ValueError(
            f"criterion {criterion.name!r} is degenerate: every alternative scores {low}"
        )
    for alt, value in zip(table.alternatives, column):
        if not low <= value <= high:
            raise ValueError(
                f"performance of {alt!r} on {criterion.name!r} lies outside "
                f"[{low}, {high}]"
            )
    return replace(criterion, domain_low=low, domain_high=high)


def rescale(table: PerformanceTable, criterion: Criterion) -> dict[str, Fraction]:
    """Map each alternative to (value - low) / (high - low) in [0, 1]."""
    resolved = resolve_domain(criterion, table)
    low, high = resolved.domain_low, resolved.domain_high
    assert low is not None and high is not None
    span = high - low
    return {
        alt: (table.value(alt, criterion.name) - low) / span for alt in table.alternatives
    }


def characteristic_points(criterion: Criterion) -> tuple[Fraction, ...]:
    """gamma points equally spaced across the (resolved) domain."""
    low, high = criterion.domain_low, criterion.domain_high
    if low is None or high is None:
        raise ValueError(f"criterion {criterion.name!r} has an unresolved domain")
    step = (high - low) / (criterion.gamma - 1)
    return tuple(low + step * s for s in range(criterion.gamma))


def marginal_value_expr(
    criterion: Criterion,
    perf: Fraction,
    point_vars: Sequence[VarId],
) -> LinearExpr:
    """Linear interpolation of the marginal value at *perf*.

    ``point_vars`` are the variables for characteristic points 2..gamma; the
    first point is anchored at zero and owns no variable.  A performance
    sitting exactly on a characteristic point returns that point's variable
    (or the zero expression for the anchor).
    """
    points = characteristic_points(criterion)
    if len(point_vars) != criterion.gamma - 1:
        raise ValueError(
            f"criterion {criterion.name!r} needs {criterion.gamma - 1} point variables"
        )
    if not points[0] <= perf <= points[-1]:
        raise ValueError(
            f"performance {perf} outside the domain [{points[0]}, {points[-1]}]"
        )

    def point_expr(index: int) -> LinearExpr:
        # index into points; 0 is the anchored zero.
        if index == 0:
            return LinearExpr()
        return term(point_vars[index - 1])

    for s in range(1, criterion.gamma):
        left, right = points[s - 1], points[s]
        if perf <= right:
            if perf == left:
                return point_expr(s - 1)
            if perf == right:
                return point_expr(s)
            weight = (perf - left) / (right - left)
            return point_expr(s - 1).scale(1 - weight) + point_expr(s).scale(weight)
    raise AssertionError("unreachable: perf inside the domain")


@dataclass(frozen=True)
class ModelVariables:
    """The constraint-system variables of a model, per selected criterion.

    ``tops[j]`` is the variable carrying criterion j's maximal share (its
    weight under linear marginals); ``points[j]`` lists the characteristic
    point variables 2..gamma.
    """

    criteria: tuple[Criterion, ...]
    points: tuple[tuple[VarId, ...], ...]

    @property
    def tops(self) -> tuple[VarId, ...]:
        return tuple(pts[-1] for pts in self.points)

    def all_vars(self) -> tuple[VarId, ...]:
        return tuple(v for pts in self.points for v in pts)


def _selected_criteria(
    criteria: Sequence[Criterion], config: ModelConfig
) -> tuple[tuple[int, Criterion], ...]:
    if config.criteria_subset is None:
        return tuple(enumerate(criteria, start=1))
    by_name = {c.name: (i, c) for i, c in enumerate(criteria, start=1)}
    unknown = [name for name in config.criteria_subset if name not in by_name]
    if unknown:
        raise KeyError(f"unknown criteria in subset: {unknown}")
    return tuple(by_name[name] for name in sorted(config.criteria_subset, key=lambda n: by_name[n][0]))


def model_variables(
    table: PerformanceTable, criteria: Sequence[Criterion], config: ModelConfig
) -> ModelVariables:
    """Declare the system variables for the selected criteria.

    Linear marginals use one weight ``w<j>`` per criterion (j numbered by the
    criterion's position in the full list, so a {g2, g3} subset still speaks
    of w2 and w3); piecewise marginals use ``u<j>@s<t>`` for characteristic
    points t = 2..gamma.
    """
    selected = _selected_criteria(criteria, config)
    resolved = tuple(resolve_domain(c, table) for _, c in selected)
    names: list[str] = []
    grouped: list[list[str]] = []
    for (j, _), criterion in zip(selected, resolved):
        if config.marginals is Marginals.LINEAR:
            group = [f"w{j}"]
        else:
            group = [f"u{j}@s{t}" for t in range(2, criterion.gamma + 1)]
        grouped.append(group)
        names.extend(group)
    index = {name: i for i, name in enumerate(names, start=1)}
    points = tuple(
        tuple(VarId(index[name], name) for name in group) for group in grouped
    )
    return ModelVariables(resolved, points)


def value_expr(
    table: PerformanceTable,
    variables: ModelVariables,
    config: ModelConfig,
    alternative: str,
) -> LinearExpr:
    """Comprehensive-value expression of an alternative over the model vars."""
    if alternative not in table.alternatives:
        raise KeyError(f"unknown alternative {alternative!r}")
    total = LinearExpr()
    for criterion, point_vars in zip(variables.criteria, variables.points):
        perf = table.value(alternative, criterion.name)
        if config.marginals is Marginals.LINEAR:
            scaled = rescale(table, criterion)[alternative]
            total = total + term(point_vars[0], scaled)
        else:
            total = total + marginal_value_expr(criterion, perf, point_vars)
    return total


def build_system(
    table: PerformanceTable,
    criteria: Sequence[Criterion],
    comparisons: ReferenceComparisons,
    config: ModelConfig,
) -> tuple[RawRelation, ...]:
    """Emit the labelled raw constraint system of the ranking model.

    Order: per-criterion non-negativity / monotonicity, the normalization
    equality (its >= half canonicalizes first), then one relation per
    judgment in input order.  All structural constraints are MODEL-tagged;
    judgments carry COMPARISON tags with their pair reference.
    """
    variables = model_variables(table, criteria, config)
    out: list[RawRelation] = []
    zero = LinearExpr()
    for point_vars in variables.points:
        previous = zero
        for var in point_vars:
            out.append(relation(term(var), RelOp.GE, previous, MODEL_TAG))
            previous = term(var)
    normalization = LinearExpr()
    for var in variables.tops:
        normalization = normalization + term(var)
    out.append(relation(normalization, RelOp.EQ, LinearExpr.constant_expr(1), MODEL_TAG))
    for comparison in comparisons.pairs:
        first = value_expr(table, variables, config, comparison.first)
        second = value_expr(table, variables, config, comparison.second)
        tag = OriginTag(OriginKind.COMPARISON, comparison.ref)
        op = RelOp.GT if comparison.kind is ComparisonKind.STRICT else RelOp.EQ
        out.append(relation(first, op, second, tag))
    return tuple(out)
