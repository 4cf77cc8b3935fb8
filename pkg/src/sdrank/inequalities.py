"""Raw relations, provenance tags, and canonicalization into labelled form.

Canonical form is ``body <= 0`` with an exact-rational body.  Equalities split
into a >=/<= pair (>= half first); strict relations gain an exact epsilon
slack.  Every canonical inequality carries a genealogy label {l, h, k}: for
inputs all three components equal the inequality's own id, for derived
products h and k reference the parent bounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .expressions import LinearExpr, VarId
from .numbers import as_rational


class RelOp(Enum):
    LE = "<="
    GE = ">="
    EQ = "="
    LT = "<"
    GT = ">"


class OriginKind(Enum):
    """Where an inequality came from.

    MODEL covers structural constraints (non-negativity, normalization,
    monotonicity); COMPARISON marks a decision maker's pairwise judgment;
    HYPOTHESIS marks a relation being tested; DERIVED marks crossover
    products.
    """

    MODEL = "model"
    COMPARISON = "comparison"
    HYPOTHESIS = "hypothesis"
    DERIVED = "derived"


@dataclass(frozen=True)
class OriginTag:
    kind: OriginKind
    comparison_ref: str | None = None

    def __post_init__(self) -> None:
        if self.kind is OriginKind.COMPARISON and not self.comparison_ref:
            raise ValueError("comparison-tagged inequalities need a pair reference")


MODEL_TAG = OriginTag(OriginKind.MODEL)
HYPOTHESIS_TAG = OriginTag(OriginKind.HYPOTHESIS)
DERIVED_TAG = OriginTag(OriginKind.DERIVED)


@dataclass(frozen=True)
class RawRelation:
    """An inequality or equality exactly as written, before canonicalization."""

    lhs: LinearExpr
    rhs: LinearExpr
    op: RelOp
    origin: OriginTag = MODEL_TAG

    def mentioned(self) -> frozenset[VarId]:
        """Variables written with a nonzero coefficient on either side.

        Recorded before any cancellation: a variable present on both sides
        with equal coefficients still counts as mentioned, which is what
        frequency-based ordering counts.
        """
        return frozenset(self.lhs.variables()) | frozenset(self.rhs.variables())


def relation(
    lhs: LinearExpr,
    op: str | RelOp,
    rhs: LinearExpr,
    origin: OriginTag = MODEL_TAG,
) -> RawRelation:
    if not isinstance(op, RelOp):
        op = RelOp(op)
    return RawRelation(lhs, rhs, op, origin)


@dataclass(frozen=True)
class LabeledInequality:
    """Canonical inequality ``body <= 0`` with genealogy label {l, h, k}.

    ``mentions`` records the variables written in the source relation before
    cancellation (with their declaration indices); frequency ordering counts
    those, not the surviving canonical coefficients.
    """

    ident: int
    parent_lower: int
    parent_upper: int
    body: LinearExpr
    origin: OriginTag
    mentions: frozenset[VarId] = frozenset()

    @property
    def mentioned_names(self) -> frozenset[str]:
        return frozenset(v.name for v in self.mentions)

    @property
    def is_original(self) -> bool:
        return self.parent_lower == self.ident and self.parent_upper == self.ident

    @property
    def label(self) -> tuple[int, int, int]:
        return (self.ident, self.parent_lower, self.parent_upper)

    @property
    def label_text(self) -> str:
        return "{%d,%d,%d}" % self.label


def _check_variable_consistency(relations: Sequence[RawRelation]) -> None:
    seen: dict[str, int] = {}
    for rel in relations:
        for var in rel.mentioned():
            previous = seen.setdefault(var.name, var.index)
            if previous != var.index:
                raise ValueError(
                    f"variable {var.name!r} declared with indices {previous} and {var.index}"
                )


def canonicalize(
    relations: Sequence[RawRelation],
    epsilon: Fraction | int | str = Fraction(1, 100),
    first_id: int = 1,
) -> tuple[LabeledInequality, ...]:
    """Rewrite raw relations into labelled canonical inequalities.

    Ids are assigned consecutively from *first_id*; an equality consumes two
    ids (its >= half first).  Strict relations become non-strict with an
    *epsilon* slack.
    """
    epsilon = as_rational(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    _check_variable_consistency(relations)
    out: list[LabeledInequality] = []
    next_id = first_id

    def emit(body: LinearExpr, origin: OriginTag, mentions: frozenset[VarId]) -> None:
        nonlocal next_id
        out.append(LabeledInequality(next_id, next_id, next_id, body, origin, mentions))
        next_id += 1

    for rel in relations:
        mentions = rel.mentioned()
        if rel.op is RelOp.LE:
            bodies = [rel.lhs - rel.rhs]
        elif rel.op is RelOp.GE:
            bodies = [rel.rhs - rel.lhs]
        elif rel.op is RelOp.EQ:
            bodies = [rel.rhs - rel.lhs, rel.lhs - rel.rhs]
        elif rel.op is RelOp.LT:
            bodies = [(rel.lhs - rel.rhs).shift(epsilon)]
        elif rel.op is RelOp.GT:
            bodies = [(rel.rhs - rel.lhs).shift(epsilon)]
        else:  # pragma: no cover - enum is exhaustive
            raise ValueError(f"unsupported relation {rel.op}")
        for body in bodies:
            emit(body, rel.origin, mentions)
    return tuple(out)


class OrderingStrategy(Enum):
    FREQUENCY = "frequency"
    EXPLICIT = "explicit"


def order_variables(
    ineqs: Sequence[LabeledInequality],
    strategy: OrderingStrategy = OrderingStrategy.FREQUENCY,
    explicit: Sequence[str] | None = None,
) -> tuple[VarId, ...]:
    """Assign elimination indices: position p in the result is index p+1.

    FREQUENCY gives lower indices (eliminated later) to variables mentioned in
    more inequalities, breaking ties by declaration order.  EXPLICIT takes a
    name permutation which must cover exactly the mentioned variables.
    """
    declared: dict[str, int] = {}
    counts: dict[str, int] = {}
    for ineq in ineqs:
        for var in ineq.mentions:
            counts[var.name] = counts.get(var.name, 0) + 1
            declared.setdefault(var.name, var.index)

    if strategy is OrderingStrategy.EXPLICIT:
        if explicit is None:
            raise ValueError("EXPLICIT ordering requires a permutation")
        if len(set(explicit)) != len(explicit):
            raise ValueError("explicit ordering contains duplicates")
        if set(explicit) != set(counts):
            missing = sorted(set(counts) - set(explicit))
            extra = sorted(set(explicit) - set(counts))
            raise ValueError(
                f"explicit ordering mismatch (missing {missing}, unknown {extra})"
            )
        names = list(explicit)
    else:
        names = sorted(counts, key=lambda name: (-counts[name], declared[name]))
    return tuple(VarId(i, name) for i, name in enumerate(names, start=1))


def reorder(
    ineqs: Iterable[LabeledInequality], ordering: Sequence[VarId]
) -> tuple[LabeledInequality, ...]:
    """Rewrite inequality bodies over the re-indexed ordering variables."""
    mapping = {var.name: var for var in ordering}
    out = []
    for ineq in ineqs:
        body = ineq.body.rename(mapping)
        out.append(
            LabeledInequality(
                ineq.ident, ineq.parent_lower, ineq.parent_upper, body, ineq.origin, ineq.mentions
            )
        )
    return tuple(out)
