"""Decision analyses layered on the elimination engine.

Everything a ranking session needs once the constraint system exists:
consistency checking with culprit judgments, tight weight ranges,
necessary/possible preference relations with their Hasse structure,
judgment reducts (smallest justifications) and constructs (largest
repairs), and criteria reducts.  All verdicts use exact arithmetic; the
brute-force vertex-enumeration oracle is re-exported here so tests can
cross-check any of them independently.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .engine import (
    ContradictionRecord,
    Mode,
    Policy,
    SDSystem,
    backtrack,
    extend,
    project_bounds,
    segment,
)
from .inequalities import (
    HYPOTHESIS_TAG,
    OriginKind,
    OrderingStrategy,
    RawRelation,
    RelOp,
    canonicalize,
    order_variables,
    relation,
)
from .model import (
    Criterion,
    ModelConfig,
    ModelVariables,
    PerformanceTable,
    ReferenceComparisons,
    build_system,
    model_variables,
    value_expr,
)
from .oracle import MAX_ORACLE_VARIABLES, OracleReport, oracle_feasible, oracle_report

__all__ = [
    "AnalysisPreconditionError",
    "InconsistentProblemError",
    "Problem",
    "ConsistencyReport",
    "ContradictionSet",
    "RelationKind",
    "RelationMatrices",
    "ReductReport",
    "ConstructReport",
    "CriteriaReductReport",
    "base_system",
    "segment_problem",
    "check_consistency",
    "weight_ranges",
    "robust_relation",
    "relation_matrices",
    "preference_reduct",
    "preference_construct",
    "criteria_reducts",
    "MAX_ORACLE_VARIABLES",
    "OracleReport",
    "oracle_feasible",
    "oracle_report",
]


class AnalysisPreconditionError(ValueError):
    """The requested analysis is undefined for this problem state."""


class InconsistentProblemError(AnalysisPreconditionError):
    """The judgments contradict the model, so no compatible instance exists."""


@dataclass(frozen=True)
class Problem:
    """A complete ranking problem: performances, criteria, judgments, settings."""

    table: PerformanceTable
    criteria: tuple[Criterion, ...]
    comparisons: ReferenceComparisons
    config: ModelConfig = ModelConfig()

    def __post_init__(self) -> None:
        object.__setattr__(self, "criteria", tuple(self.criteria))
        if not self.criteria:
            raise ValueError("a problem needs at least one criterion")
        missing = [c.name for c in self.criteria if c.name not in self.table.criteria_names]
        if missing:
            raise ValueError(f"criteria absent from the performance table: {missing}")
        known = set(self.table.alternatives)
        for comparison in self.comparisons.pairs:
            for alternative in (comparison.first, comparison.second):
                if alternative not in known:
                    raise ValueError(
                        f"judgment {comparison.ref!r} mentions unknown alternative {alternative!r}"
                    )

    def variables(self) -> ModelVariables:
        return model_variables(self.table, self.criteria, self.config)

    def relations(self) -> tuple[RawRelation, ...]:
        return build_system(self.table, self.criteria, self.comparisons, self.config)

    def with_comparisons(self, comparisons: ReferenceComparisons) -> "Problem":
        return replace(self, comparisons=comparisons)


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------


def segment_problem(problem: Problem, mode: Mode, policy: Policy) -> SDSystem:
    """Run one elimination pass over the problem's constraint system."""
    ineqs = canonicalize(problem.relations(), problem.config.epsilon)
    ordering = order_variables(ineqs)
    return segment(ineqs, ordering, mode, policy, problem.config.epsilon)


def base_system(problem: Problem) -> SDSystem:
    """One elimination pass shared by every pair analysis.

    Bounds-filtered and stop-early: cheap to build, cheap to extend with a
    single hypothesis per pair.  Callers must treat the result as immutable
    (``extend`` copies, so any number of pair analyses can share it, even
    concurrently).
    """
    system = segment_problem(problem, Mode.STOP_AT_FIRST, Policy.BOUNDS_METHOD)
    if not system.feasible:
        raise InconsistentProblemError(
            "the judgments admit no compatible value function; "
            "run check_consistency for an explanation"
        )
    return system


def _require_alternatives(problem: Problem, *alternatives: str) -> None:
    known = set(problem.table.alternatives)
    for alternative in alternatives:
        if alternative not in known:
            raise KeyError(
                f"unknown alternative {alternative!r}; known: "
                + ", ".join(problem.table.alternatives)
            )


def _ref_rank(problem: Problem) -> dict[str, int]:
    return {ref: position for position, ref in enumerate(problem.comparisons.refs)}


def _sorted_ref_sets(
    subsets: Iterable[frozenset[str]], rank: Mapping[str, int]
) -> tuple[frozenset[str], ...]:
    unique = list(dict.fromkeys(subsets))
    return tuple(sorted(unique, key=lambda s: (len(s), sorted(rank[r] for r in s))))


def _sorted_id_sets(subsets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    unique = list(dict.fromkeys(subsets))
    return tuple(sorted(unique, key=lambda s: (len(s), sorted(s))))


def _inclusion_minimal(
    subsets: Iterable[frozenset[str]], rank: Mapping[str, int]
) -> tuple[frozenset[str], ...]:
    unique = list(dict.fromkeys(subsets))
    minimal = [s for s in unique if not any(other < s for other in unique)]
    return _sorted_ref_sets(minimal, rank)


def _comparison_members(
    system: SDSystem, roots: frozenset[int]
) -> tuple[frozenset[int], frozenset[str]]:
    """Split a root set into its judgment-row ids and their pair references."""
    ids = []
    refs = []
    for ident in roots:
        origin = system.registry[ident].origin
        if origin.kind is OriginKind.COMPARISON:
            ids.append(ident)
            assert origin.comparison_ref is not None
            refs.append(origin.comparison_ref)
    return frozenset(ids), frozenset(refs)


# ---------------------------------------------------------------------------
# consistency
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContradictionSet:
    """One recorded contradiction traced back to the inputs that caused it."""

    record: ContradictionRecord
    original_ids: frozenset[int]
    comparison_refs: frozenset[str]


@dataclass(frozen=True)
class ConsistencyReport:
    feasible: bool
    system: SDSystem
    contradiction_sets: tuple[ContradictionSet, ...]
    minimal_comparison_subsets: tuple[frozenset[str], ...]


def check_consistency(
    problem: Problem,
    mode: Mode = Mode.ENUMERATE_ALL,
    policy: Policy = Policy.KEEP_ALL,
) -> ConsistencyReport:
    """Can any value function reproduce the judgments?  If not, name culprits.

    Every recorded contradiction is traced to the original inequalities that
    bred it; the judgment members of those root sets (structural rows carry no
    blame the decision maker could act on) are collected and the
    inclusion-minimal subsets reported.  Under ``STOP_AT_FIRST`` only the
    first contradiction is available, so the minimal subsets are relative to
    that single trace.
    """
    system = segment_problem(problem, mode, policy)
    rank = _ref_rank(problem)
    sets = []
    for record in system.contradictions:
        roots = backtrack(system, record)
        _, refs = _comparison_members(system, roots)
        sets.append(ContradictionSet(record, roots, refs))
    minimal = _inclusion_minimal((s.comparison_refs for s in sets), rank)
    return ConsistencyReport(system.feasible, system, tuple(sets), minimal)


# ---------------------------------------------------------------------------
# weight ranges
# ---------------------------------------------------------------------------


def weight_ranges(problem: Problem) -> dict[str, tuple[Fraction, Fraction]]:
    """Tight [min, max] of every model variable over the compatible set.

    Each variable takes its turn at elimination index 1, where the surviving
    constant bounds are exactly its extremal values; the other variables keep
    their default order.  Raises :class:`InconsistentProblemError` when no
    compatible value function exists.
    """
    ineqs = canonicalize(problem.relations(), problem.config.epsilon)
    default = order_variables(ineqs)
    gate = segment(
        ineqs, default, Mode.STOP_AT_FIRST, Policy.BOUNDS_METHOD, problem.config.epsilon
    )
    if not gate.feasible:
        raise InconsistentProblemError(
            "weight ranges are undefined for contradictory judgments; "
            "run check_consistency for an explanation"
        )
    default_names = [var.name for var in default]
    ranges: dict[str, tuple[Fraction, Fraction]] = {}
    for var in problem.variables().all_vars():
        names = [var.name] + [name for name in default_names if name != var.name]
        ordering = order_variables(ineqs, OrderingStrategy.EXPLICIT, names)
        system = segment(
            ineqs, ordering, Mode.STOP_AT_FIRST, Policy.BOUNDS_METHOD, problem.config.epsilon
        )
        projected = project_bounds(system, var.name)
        assert projected.lower is not None and projected.upper is not None
        ranges[var.name] = (projected.lower, projected.upper)
    return ranges


# ---------------------------------------------------------------------------
# necessary / possible relations
# ---------------------------------------------------------------------------


class RelationKind(Enum):
    NECESSARY = "necessary"
    POSSIBLE = "possible"


@dataclass(frozen=True)
class RelationMatrices:
    alternatives: tuple[str, ...]
    necessary: tuple[tuple[bool, ...], ...]
    possible: tuple[tuple[bool, ...], ...]
    hasse_edges: tuple[tuple[str, str], ...]


def _hypothesis(
    problem: Problem,
    variables: ModelVariables,
    kind: RelationKind,
    first: str,
    second: str,
) -> RawRelation:
    value_first = value_expr(problem.table, variables, problem.config, first)
    value_second = value_expr(problem.table, variables, problem.config, second)
    if kind is RelationKind.NECESSARY:
        # Refutation attempt: some compatible instance strictly prefers `second`.
        return relation(value_second, RelOp.GT, value_first, HYPOTHESIS_TAG)
    # Witness attempt: some compatible instance weakly prefers `first`.
    return relation(value_first, RelOp.GE, value_second, HYPOTHESIS_TAG)


def _decide(base: SDSystem, hypothesis: RawRelation, kind: RelationKind) -> bool:
    extended = extend(base, [hypothesis])
    if kind is RelationKind.NECESSARY:
        return not extended.feasible
    return extended.feasible


def robust_relation(
    problem: Problem,
    kind: RelationKind,
    first: str,
    second: str,
    base: SDSystem | None = None,
) -> bool:
    """Is `first` at least as good as `second` — always, or at least once?

    NECESSARY holds when every compatible value function weakly prefers
    `first`; POSSIBLE when at least one does.  Both are decided by extending
    the shared base system with a single hypothesis inequality; pass ``base``
    to reuse one already built for this problem.
    """
    _require_alternatives(problem, first, second)
    if base is None:
        base = base_system(problem)
    variables = problem.variables()
    return _decide(base, _hypothesis(problem, variables, kind, first, second), kind)


def relation_matrices(problem: Problem, base: SDSystem | None = None) -> RelationMatrices:
    """Full necessary and possible matrices plus the Hasse cover edges.

    Every ordered pair is decided independently against the same immutable
    base system (``base`` reuses one already built).  The Hasse edges are the
    transitive reduction of the strict part of the necessary relation: an arc
    survives only when no third alternative sits strictly between its
    endpoints.
    """
    if base is None:
        base = base_system(problem)
    variables = problem.variables()
    alternatives = problem.table.alternatives

    def cell(kind: RelationKind, first: str, second: str) -> bool:
        return _decide(base, _hypothesis(problem, variables, kind, first, second), kind)

    necessary = tuple(
        tuple(cell(RelationKind.NECESSARY, a, b) for b in alternatives)
        for a in alternatives
    )
    possible = tuple(
        tuple(cell(RelationKind.POSSIBLE, a, b) for b in alternatives)
        for a in alternatives
    )
    return RelationMatrices(
        tuple(alternatives), necessary, possible, _hasse_edges(alternatives, necessary)
    )


def _hasse_edges(
    alternatives: Sequence[str], necessary: Sequence[Sequence[bool]]
) -> tuple[tuple[str, str], ...]:
    count = len(alternatives)

    def strict(i: int, k: int) -> bool:
        return necessary[i][k] and not necessary[k][i]

    edges = []
    for i in range(count):
        for k in range(count):
            if i == k or not strict(i, k):
                continue
            if any(strict(i, j) and strict(j, k) for j in range(count)):
                continue
            edges.append((alternatives[i], alternatives[k]))
    return tuple(edges)


# ---------------------------------------------------------------------------
# judgment reducts and constructs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductReport:
    """Smallest judgment subsets that alone force `first` over `second`."""

    first: str
    second: str
    system: SDSystem
    hypothesis_id: int
    candidate_id_subsets: tuple[frozenset[int], ...]
    candidate_ref_subsets: tuple[frozenset[str], ...]
    reducts: tuple[frozenset[str], ...]


@dataclass(frozen=True)
class ConstructReport:
    """Largest judgment subsets that leave `first` over `second` attainable."""

    first: str
    second: str
    system: SDSystem
    hypothesis_id: int
    unsalvageable: bool
    candidate_id_subsets: tuple[frozenset[int], ...]
    candidate_ref_subsets: tuple[frozenset[str], ...]
    hitting_sets: tuple[frozenset[str], ...]
    constructs: tuple[frozenset[str], ...]


def _enumerate_with_hypothesis(
    problem: Problem, hypothesis: RawRelation
) -> tuple[SDSystem, int, tuple[frozenset[int], ...], tuple[frozenset[str], ...]]:
    """Re-run the whole system plus hypothesis, recording every contradiction.

    A fresh full-enumeration run (rather than an extension of the reduced
    base) is required here: explanations need every contradiction, including
    those the bounds filter would have pruned away.
    """
    raw = problem.relations() + (hypothesis,)
    ineqs = canonicalize(raw, problem.config.epsilon)
    system = segment(
        ineqs,
        order_variables(ineqs),
        Mode.ENUMERATE_ALL,
        Policy.KEEP_ALL,
        problem.config.epsilon,
    )
    hypothesis_id = ineqs[-1].ident
    id_subsets = []
    ref_subsets = []
    for record in system.contradictions:
        roots = backtrack(system, record)
        ids, refs = _comparison_members(system, roots)
        id_subsets.append(ids)
        ref_subsets.append(refs)
    return system, hypothesis_id, _sorted_id_sets(id_subsets), tuple(dict.fromkeys(ref_subsets))


def _restrict(problem: Problem, refs: frozenset[str]) -> Problem:
    retained = tuple(c for c in problem.comparisons.pairs if c.ref in refs)
    return problem.with_comparisons(ReferenceComparisons(retained))


def preference_reduct(problem: Problem, first: str, second: str) -> ReductReport:
    """Explain a necessary relation by its minimal supporting judgment sets.

    Requires the relation to actually be necessary.  The refuting hypothesis
    is added to the full system, every contradiction is enumerated and traced,
    and the judgment members of the root sets are minimized by inclusion.
    Each reported reduct is re-verified: restricted to it alone, the relation
    still holds.
    """
    _require_alternatives(problem, first, second)
    if not robust_relation(problem, RelationKind.NECESSARY, first, second):
        raise AnalysisPreconditionError(
            f"{first} is not necessarily at least as good as {second}; "
            "a reduct would explain nothing"
        )
    variables = problem.variables()
    hypothesis = _hypothesis(problem, variables, RelationKind.NECESSARY, first, second)
    system, hypothesis_id, id_subsets, ref_subsets = _enumerate_with_hypothesis(
        problem, hypothesis
    )
    rank = _ref_rank(problem)
    reducts = _inclusion_minimal(ref_subsets, rank)
    for reduct in reducts:
        held = robust_relation(_restrict(problem, reduct), RelationKind.NECESSARY, first, second)
        if not held:
            raise RuntimeError(
                f"reduct verification failed for {sorted(reduct)}; "
                "contradiction enumeration must be incomplete"
            )
    return ReductReport(
        first,
        second,
        system,
        hypothesis_id,
        id_subsets,
        _sorted_ref_sets(ref_subsets, rank),
        reducts,
    )


def _minimal_hitting_sets(
    families: Sequence[frozenset[str]], universe: Sequence[str]
) -> tuple[frozenset[str], ...]:
    """All inclusion-minimal sets intersecting every family (exact search)."""
    found: list[frozenset[str]] = []
    members = [name for name in universe if any(name in family for family in families)]
    for size in range(1, len(members) + 1):
        for combo in itertools.combinations(members, size):
            candidate = frozenset(combo)
            if any(existing <= candidate for existing in found):
                continue
            if all(candidate & family for family in families):
                found.append(candidate)
    return tuple(found)


def preference_construct(problem: Problem, first: str, second: str) -> ConstructReport:
    """Largest judgment subsets under which `first` over `second` is possible.

    Requires the relation to be impossible as stated.  Every contradiction of
    the witness hypothesis is enumerated; a minimal hitting set over the
    culprit judgment sets is removed to form each construct (so constructs
    are maximal by inclusion).  When some contradiction involves no judgment
    at all, removal cannot help and the report is flagged unsalvageable.
    """
    _require_alternatives(problem, first, second)
    if robust_relation(problem, RelationKind.POSSIBLE, first, second):
        raise AnalysisPreconditionError(
            f"{first} over {second} is already possible; there is nothing to relax"
        )
    variables = problem.variables()
    hypothesis = _hypothesis(problem, variables, RelationKind.POSSIBLE, first, second)
    system, hypothesis_id, id_subsets, ref_subsets = _enumerate_with_hypothesis(
        problem, hypothesis
    )
    rank = _ref_rank(problem)
    sorted_refs = _sorted_ref_sets(ref_subsets, rank)
    if any(not refs for refs in ref_subsets):
        return ConstructReport(
            first, second, system, hypothesis_id, True, id_subsets, sorted_refs, (), ()
        )
    all_refs = tuple(problem.comparisons.refs)
    hitting = _minimal_hitting_sets(list(ref_subsets), all_refs)
    hitting = _sorted_ref_sets(hitting, rank)
    constructs = tuple(frozenset(all_refs) - h for h in hitting)
    for construct in constructs:
        possible = robust_relation(
            _restrict(problem, construct), RelationKind.POSSIBLE, first, second
        )
        if not possible:
            raise RuntimeError(
                f"construct verification failed for {sorted(construct)}; "
                "contradiction enumeration must be incomplete"
            )
    return ConstructReport(
        first,
        second,
        system,
        hypothesis_id,
        False,
        id_subsets,
        sorted_refs,
        hitting,
        constructs,
    )


# ---------------------------------------------------------------------------
# criteria reducts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriteriaReductReport:
    examined: tuple[tuple[frozenset[str], bool], ...]
    reducts: tuple[frozenset[str], ...]


def _subset_consistent(problem: Problem, names: Sequence[str]) -> bool:
    config = replace(problem.config, criteria_subset=tuple(names))
    restricted = replace(problem, config=config)
    system = segment_problem(restricted, Mode.STOP_AT_FIRST, Policy.KEEP_ALL)
    return system.feasible


def criteria_reducts(problem: Problem) -> CriteriaReductReport:
    """Minimal criterion subsets whose restricted model accepts every judgment.

    Subsets are examined in ascending cardinality; supersets of an already
    found reduct are skipped unexamined.  When even the full criterion set is
    inconsistent with the judgments, no subset qualifies and the report is
    empty.
    """
    names = [criterion.name for criterion in problem.criteria]
    if not _subset_consistent(problem, names):
        return CriteriaReductReport(((frozenset(names), False),), ())
    examined: list[tuple[frozenset[str], bool]] = []
    reducts: list[frozenset[str]] = []
    for size in range(1, len(names)):
        for combo in itertools.combinations(names, size):
            subset = frozenset(combo)
            if any(reduct <= subset for reduct in reducts):
                continue
            consistent = _subset_consistent(problem, combo)
            examined.append((subset, consistent))
            if consistent:
                reducts.append(subset)
    if not reducts:
        # Nothing smaller works, so the full (consistent) set is the reduct.
        examined.append((frozenset(names), True))
        reducts.append(frozenset(names))
    return CriteriaReductReport(tuple(examined), tuple(reducts))
