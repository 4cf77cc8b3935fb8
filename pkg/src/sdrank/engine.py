"""Segmenting elimination engine for canonical linear inequality systems.

The system is described per variable as stores of lower and upper bounds
(``x_k >= l(x_1..x_{k-1})`` / ``x_k <= u(...)``).  Processing runs from the
highest elimination index down to 1: each inequality is isolated into a bound
(ISO), every lower/upper pair of the current variable is crossed over (CRO)
into a product that no longer contains it, and surviving products are
adjoined (ADJ) under the active redundancy policy.  Every registered
inequality keeps a genealogy label {l, h, k}, so any contradiction can be
traced back to the exact subset of input inequalities that produced it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .expressions import LinearExpr, VarId
from .inequalities import (
    DERIVED_TAG,
    LabeledInequality,
    RawRelation,
    canonicalize,
    reorder,
)


class BoundKind(Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class Bound:
    """``variable >= expr`` (LOWER) or ``variable <= expr`` (UPPER).

    ``expr`` only involves variables with strictly smaller elimination index;
    ``source`` is the id of the registered inequality the bound came from
    (0 marks an unregistered probe candidate).
    """

    variable: VarId
    kind: BoundKind
    expr: LinearExpr
    source: int = 0

    def __post_init__(self) -> None:
        top = self.expr.highest_variable()
        if top is not None and top.index >= self.variable.index:
            raise ValueError(
                f"bound for {self.variable.name} references {top.name} "
                f"(index {top.index} >= {self.variable.index})"
            )

    @property
    def is_constant(self) -> bool:
        return self.expr.is_constant


class IsoKind(Enum):
    BOUND = "bound"
    TAUTOLOGY = "tautology"
    CONTRADICTION = "contradiction"


@dataclass(frozen=True)
class IsoOutcome:
    kind: IsoKind
    bound: Bound | None = None


TAUTOLOGY = IsoOutcome(IsoKind.TAUTOLOGY)
IMMEDIATE_CONTRADICTION = IsoOutcome(IsoKind.CONTRADICTION)


@dataclass(frozen=True)
class Pending:
    """A crossover product that has not been assigned an id yet."""

    body: LinearExpr
    parent_lower: int
    parent_upper: int


@dataclass(frozen=True)
class ContradictionRecord:
    """A crossover whose product had all-zero coefficients and a positive
    constant; ``lower_id == upper_id`` marks an input inequality that is
    contradictory on its own."""

    lower_id: int
    upper_id: int


class Mode(Enum):
    STOP_AT_FIRST = "stop_at_first"
    ENUMERATE_ALL = "enumerate_all"


class Policy(Enum):
    KEEP_ALL = "keep_all"
    DROP_DUPLICATES = "drop_duplicates"
    BOUNDS_METHOD = "bounds_method"


@dataclass(frozen=True)
class AdjoinResult:
    added: bool
    ident: int | None = None


@dataclass
class ProjectedBounds:
    lower: Fraction | None
    upper: Fraction | None
    lowers: tuple[Bound, ...]
    uppers: tuple[Bound, ...]


class SDSystem:
    """Per-variable bound stores plus the genealogy registry and contradiction
    log.  Built by :func:`segment`/:func:`extend`; treat as immutable after
    construction (extension copies, it never mutates its base)."""

    def __init__(
        self,
        ordering: tuple[VarId, ...],
        epsilon: Fraction,
        mode: Mode,
        policy: Policy,
    ) -> None:
        self.ordering = ordering
        self.epsilon = epsilon
        self.mode = mode
        self.policy = policy
        self.registry: dict[int, LabeledInequality] = {}
        self.store: dict[VarId, dict[BoundKind, list[Bound]]] = {
            var: {BoundKind.LOWER: [], BoundKind.UPPER: []} for var in ordering
        }
        self.contradictions: list[ContradictionRecord] = []
        self.truncated = False
        self._root_cache: dict[int, frozenset[int]] = {}
        self._record_index: set[ContradictionRecord] = set()

    # -- inspection ----------------------------------------------------------

    @property
    def feasible(self) -> bool:
        return not self.contradictions

    @property
    def max_id(self) -> int:
        return max(self.registry, default=0)

    def lowers(self, var: VarId) -> tuple[Bound, ...]:
        return tuple(self.store[var][BoundKind.LOWER])

    def uppers(self, var: VarId) -> tuple[Bound, ...]:
        return tuple(self.store[var][BoundKind.UPPER])

    def originals(self) -> tuple[LabeledInequality, ...]:
        return tuple(q for q in self.registry.values() if q.is_original)

    def variable(self, name: str) -> VarId:
        for var in self.ordering:
            if var.name == name:
                return var
        raise KeyError(f"unknown variable {name!r}")

    def constant_range(self, var: VarId) -> tuple[Fraction | None, Fraction | None]:
        """Tightest constant bounds currently stored for *var*."""
        lows = [b.expr.constant for b in self.store[var][BoundKind.LOWER] if b.is_constant]
        highs = [b.expr.constant for b in self.store[var][BoundKind.UPPER] if b.is_constant]
        return (max(lows) if lows else None, min(highs) if highs else None)

    def copy(self) -> "SDSystem":
        clone = SDSystem(self.ordering, self.epsilon, self.mode, self.policy)
        clone.registry = dict(self.registry)
        clone.store = {
            var: {kind: list(bounds) for kind, bounds in kinds.items()}
            for var, kinds in self.store.items()
        }
        clone.contradictions = list(self.contradictions)
        clone.truncated = self.truncated
        clone._root_cache = dict(self._root_cache)
        clone._record_index = set(self._record_index)
        return clone


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------


def detect_contradiction(body: LinearExpr | LabeledInequality) -> bool:
    """True iff all coefficients are zero and the constant is positive."""
    expr = body.body if isinstance(body, LabeledInequality) else body
    return expr.is_constant and expr.constant > 0


def is_tautology(body: LinearExpr) -> bool:
    return body.is_constant and body.constant <= 0


def iso(ineq: LabeledInequality, ordering: Sequence[VarId]) -> IsoOutcome:
    """Isolate the highest-indexed variable of a canonical inequality.

    ``c*x_k + rest <= 0`` becomes ``x_k <= -rest/c`` (c > 0, an upper bound)
    or ``x_k >= -rest/c`` (c < 0, a lower bound).  All-zero coefficient
    bodies classify as TAUTOLOGY (constant <= 0) or IMMEDIATE_CONTRADICTION
    (constant > 0).
    """
    known = set(ordering)
    for var in ineq.body.variables():
        if var not in known:
            raise ValueError(f"variable {var.name!r} not covered by the ordering")
    top = ineq.body.highest_variable()
    if top is None:
        if ineq.body.constant > 0:
            return IMMEDIATE_CONTRADICTION
        return TAUTOLOGY
    coeff = ineq.body.coeff(top)
    rest = ineq.body - LinearExpr(((top, coeff),))
    expr = rest.scale(Fraction(-1) / coeff)
    kind = BoundKind.UPPER if coeff > 0 else BoundKind.LOWER
    return IsoOutcome(IsoKind.BOUND, Bound(top, kind, expr, ineq.ident))


def cro(lower: Bound, upper: Bound) -> Pending:
    """Cross over a lower and an upper bound of the same variable:
    ``l(x) <= x_k <= u(x)`` yields ``l(x) - u(x) <= 0``."""
    if lower.kind is not BoundKind.LOWER or upper.kind is not BoundKind.UPPER:
        raise ValueError("cro needs a LOWER and an UPPER bound, in that order")
    if lower.variable != upper.variable:
        raise ValueError(
            f"cro across different variables ({lower.variable.name}, {upper.variable.name})"
        )
    return Pending(lower.expr - upper.expr, lower.source, upper.source)


def _box(system: SDSystem) -> dict[VarId, tuple[Fraction | None, Fraction | None]]:
    return {var: system.constant_range(var) for var in system.ordering}


def _implied_over_box(
    tighter: LinearExpr,
    candidate: LinearExpr,
    kind: BoundKind,
    box: dict[VarId, tuple[Fraction | None, Fraction | None]],
) -> bool:
    """Is *candidate* implied by *tighter* everywhere on the constant box?

    For an upper bound that means ``tighter <= candidate`` on the box; for a
    lower bound ``tighter >= candidate``.  Returns False (conservatively)
    whenever the relevant extreme is unbounded.
    """
    diff = candidate - tighter if kind is BoundKind.UPPER else tighter - candidate
    total = diff.constant
    for var, coeff in diff.terms:
        low, high = box.get(var, (None, None))
        corner = low if coeff > 0 else high
        if corner is None:
            return False
        total += coeff * corner
    return total >= 0


def is_redundant_bounds_method(system: SDSystem, candidate: Bound) -> bool:
    """Sound, incomplete redundancy test against the current system.

    Constant candidates are redundant when an existing constant bound of the
    same kind is at least as tight.  Expression candidates are redundant when
    they duplicate an existing bound syntactically, or when a single existing
    bound of the same kind implies them over the box of constant variable
    ranges (requires those ranges to be finite on the relevant side).
    """
    existing = system.store[candidate.variable][candidate.kind]
    if candidate.is_constant:
        value = candidate.expr.constant
        for bound in existing:
            if not bound.is_constant:
                continue
            held = bound.expr.constant
            if candidate.kind is BoundKind.LOWER and held >= value:
                return True
            if candidate.kind is BoundKind.UPPER and held <= value:
                return True
        return False
    box = _box(system)
    for bound in existing:
        if bound.expr == candidate.expr:
            return True
        if _implied_over_box(bound.expr, candidate.expr, candidate.kind, box):
            return True
    return False


def _register(system: SDSystem, pending: Pending, bound_template: Bound) -> int:
    ident = system.max_id + 1
    ineq = LabeledInequality(
        ident,
        pending.parent_lower,
        pending.parent_upper,
        pending.body,
        DERIVED_TAG,
        frozenset(pending.body.variables()),
    )
    system.registry[ident] = ineq
    bound = Bound(bound_template.variable, bound_template.kind, bound_template.expr, ident)
    system.store[bound.variable][bound.kind].append(bound)
    return ident


def adjoin(system: SDSystem, candidate: Pending, policy: Policy | None = None) -> AdjoinResult:
    """Adjoin one crossover product under the given redundancy policy.

    The candidate must not be contradictory; tautologies are silently
    suppressed and consume no id.
    """
    if detect_contradiction(candidate.body):
        raise ValueError("cannot adjoin a contradictory inequality")
    if policy is None:
        policy = system.policy
    if is_tautology(candidate.body):
        return AdjoinResult(False)
    probe = LabeledInequality(0, candidate.parent_lower, candidate.parent_upper, candidate.body, DERIVED_TAG)
    outcome = iso(probe, system.ordering)
    assert outcome.bound is not None
    bound = outcome.bound
    if policy is Policy.DROP_DUPLICATES:
        for held in system.store[bound.variable][bound.kind]:
            if held.expr == bound.expr:
                return AdjoinResult(False)
    elif policy is Policy.BOUNDS_METHOD:
        if is_redundant_bounds_method(system, bound):
            return AdjoinResult(False)
    ident = _register(system, candidate, bound)
    return AdjoinResult(True, ident)


# ---------------------------------------------------------------------------
# the main loop
# ---------------------------------------------------------------------------


class _Halt(Exception):
    """Raised internally to unwind once STOP_AT_FIRST has its contradiction."""


def _append_record(system: SDSystem, record: ContradictionRecord, max_contradictions: int) -> None:
    if system.truncated:
        return
    system.contradictions.append(record)
    system._record_index.add(record)
    if system.mode is Mode.ENUMERATE_ALL and len(system.contradictions) >= max_contradictions:
        system.truncated = True


def _install_original(
    system: SDSystem, ineq: LabeledInequality, max_contradictions: int
) -> None:
    system.registry[ineq.ident] = ineq
    outcome = iso(ineq, system.ordering)
    if outcome.kind is IsoKind.TAUTOLOGY:
        return
    if outcome.kind is IsoKind.CONTRADICTION:
        _append_record(system, ContradictionRecord(ineq.ident, ineq.ident), max_contradictions)
        return
    assert outcome.bound is not None
    system.store[outcome.bound.variable][outcome.bound.kind].append(outcome.bound)


def _flush_batch(
    system: SDSystem,
    batch: list[tuple[Pending, Bound]],
) -> None:
    """Per-level candidate filtering for the bounds-method policy.

    Among constant candidates for a (variable, kind) slot only the strictly
    tightest one survives, and only when it also beats every constant bound
    already stored.  Expression candidates fall back to the one-at-a-time
    redundancy test against existing plus already-accepted bounds.  Survivors
    are registered in crossover order so labelling stays deterministic.
    """
    best_constant: dict[tuple[VarId, BoundKind], tuple[Fraction, int]] = {}
    for position, (pending, bound) in enumerate(batch):
        if not bound.is_constant:
            continue
        slot = (bound.variable, bound.kind)
        value = bound.expr.constant
        held = best_constant.get(slot)
        if held is None:
            best_constant[slot] = (value, position)
        elif bound.kind is BoundKind.LOWER and value > held[0]:
            best_constant[slot] = (value, position)
        elif bound.kind is BoundKind.UPPER and value < held[0]:
            best_constant[slot] = (value, position)

    for position, (pending, bound) in enumerate(batch):
        if bound.is_constant:
            slot = (bound.variable, bound.kind)
            if best_constant[slot][1] != position:
                continue
            low, high = system.constant_range(bound.variable)
            value = bound.expr.constant
            if bound.kind is BoundKind.LOWER and low is not None and value <= low:
                continue
            if bound.kind is BoundKind.UPPER and high is not None and value >= high:
                continue
            _register(system, pending, bound)
        else:
            if is_redundant_bounds_method(system, bound):
                continue
            _register(system, pending, bound)


def _run_levels(
    system: SDSystem,
    start_index: int,
    max_contradictions: int,
    new_ids: set[int] | None = None,
) -> None:
    """Process levels ``start_index`` down to 1.

    When *new_ids* is given (incremental extension), only crossover pairs
    touching at least one new bound are formed; ids of freshly adjoined
    products join the set so cascaded combinations are still explored.
    """
    for var in reversed(system.ordering[:start_index]):
        lows = list(system.store[var][BoundKind.LOWER])
        highs = list(system.store[var][BoundKind.UPPER])
        batch: list[tuple[Pending, Bound]] = []
        for low, high in itertools.product(lows, highs):
            if new_ids is not None and low.source not in new_ids and high.source not in new_ids:
                continue
            pending = cro(low, high)
            if is_tautology(pending.body):
                continue
            if detect_contradiction(pending.body):
                _append_record(
                    system,
                    ContradictionRecord(pending.parent_lower, pending.parent_upper),
                    max_contradictions,
                )
                if system.mode is Mode.STOP_AT_FIRST or system.truncated:
                    raise _Halt
                continue
            probe = LabeledInequality(0, pending.parent_lower, pending.parent_upper, pending.body, DERIVED_TAG)
            outcome = iso(probe, system.ordering)
            assert outcome.bound is not None
            if system.policy is Policy.BOUNDS_METHOD:
                batch.append((pending, outcome.bound))
            else:
                result = adjoin(system, pending, system.policy)
                if result.added and new_ids is not None:
                    new_ids.add(result.ident)  # type: ignore[arg-type]
        if batch:
            before = system.max_id
            _flush_batch(system, batch)
            if new_ids is not None:
                new_ids.update(range(before + 1, system.max_id + 1))


def segment(
    ineqs: Sequence[LabeledInequality],
    ordering: Sequence[VarId],
    mode: Mode = Mode.STOP_AT_FIRST,
    policy: Policy = Policy.KEEP_ALL,
    epsilon: Fraction = Fraction(1, 100),
    max_contradictions: int = 10_000,
) -> SDSystem:
    """Run the full elimination over canonicalized inequalities.

    STOP_AT_FIRST halts at the first contradiction in processing order (for a
    level, that is (lower id, upper id) lexicographic order).  ENUMERATE_ALL
    completes every crossover at every level and records every contradiction;
    it refuses the bounds-method policy, whose suppressions could hide some
    of them.
    """
    if mode is Mode.ENUMERATE_ALL and policy is Policy.BOUNDS_METHOD:
        raise ValueError("full contradiction enumeration cannot suppress bounds")
    ordering = tuple(ordering)
    system = SDSystem(ordering, epsilon, mode, policy)
    for ineq in reorder(ineqs, ordering):
        _install_original(system, ineq, max_contradictions)
    if system.contradictions and (mode is Mode.STOP_AT_FIRST or system.truncated):
        return system
    try:
        _run_levels(system, len(ordering), max_contradictions)
    except _Halt:
        pass
    return system


def extend(
    base: SDSystem,
    new_constraints: Sequence[RawRelation],
    mode: Mode | None = None,
    policy: Policy | None = None,
    max_contradictions: int = 10_000,
) -> SDSystem:
    """Add constraints to a contradiction-free system without restarting.

    New inequalities get ids continuing the base numbering; elimination
    resumes from the highest variable they touch, crossing only pairs that
    involve a new bound.  The verdict matches a from-scratch run on the
    union.  The base system is never mutated.
    """
    if base.contradictions:
        raise ValueError("cannot extend a contradictory system")
    system = base.copy()
    system.mode = base.mode if mode is None else mode
    system.policy = base.policy if policy is None else policy
    if system.mode is Mode.ENUMERATE_ALL and system.policy is Policy.BOUNDS_METHOD:
        raise ValueError("full contradiction enumeration cannot suppress bounds")
    fresh = canonicalize(new_constraints, base.epsilon, first_id=base.max_id + 1)
    known = {var.name for var in base.ordering}
    for ineq in fresh:
        for var in ineq.mentions:
            if var.name not in known:
                raise ValueError(f"unknown variable {var.name!r} in extension")
    fresh = reorder(fresh, base.ordering)
    new_ids = {ineq.ident for ineq in fresh}
    top_index = 0
    for ineq in fresh:
        _install_original(system, ineq, max_contradictions)
        top = ineq.body.highest_variable()
        if top is not None:
            top_index = max(top_index, top.index)
    if system.contradictions and (system.mode is Mode.STOP_AT_FIRST or system.truncated):
        return system
    try:
        _run_levels(system, top_index, max_contradictions, new_ids)
    except _Halt:
        pass
    return system


# ---------------------------------------------------------------------------
# backtracking and projection
# ---------------------------------------------------------------------------


def _roots_of(system: SDSystem, ident: int) -> frozenset[int]:
    cached = system._root_cache.get(ident)
    if cached is not None:
        return cached
    ineq = system.registry[ident]
    if ineq.is_original:
        roots = frozenset((ident,))
    else:
        roots = _roots_of(system, ineq.parent_lower) | _roots_of(system, ineq.parent_upper)
    system._root_cache[ident] = roots
    return roots


def backtrack(system: SDSystem, record: ContradictionRecord) -> frozenset[int]:
    """Recursively expand parents of the conflicting pair down to the input
    inequalities that caused the contradiction."""
    if record not in system._record_index:
        raise ValueError("record does not belong to this system")
    return _roots_of(system, record.lower_id) | _roots_of(system, record.upper_id)


def root_sets(system: SDSystem) -> tuple[frozenset[int], ...]:
    """Root sets of all recorded contradictions, in record order."""
    return tuple(backtrack(system, record) for record in system.contradictions)


def project_bounds(system: SDSystem, var: VarId | str) -> ProjectedBounds:
    """Constant range (tightest stored constants) and symbolic bound lists.

    Only the variable with elimination index 1 is guaranteed a tight constant
    range by a completed run; for other variables use a re-run that places
    them first.
    """
    if system.contradictions:
        raise ValueError("system is contradictory; bounds are meaningless")
    if isinstance(var, str):
        var = system.variable(var)
    low, high = system.constant_range(var)
    return ProjectedBounds(low, high, system.lowers(var), system.uppers(var))
