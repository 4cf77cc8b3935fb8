"""Randomized invariants for the elimination rewrites and the I/O layer.

Each property states an algebraic fact the implementation must honor for
every input, not just the curated cases: the single-variable isolation step
is an equivalence rewrite, the crossover product is satisfiable exactly when
the bounds overlap, display rounding stays within half a unit in the last
place, documents round-trip, and elimination agrees with the geometric
oracle on small systems.
"""
import json
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from sdrank.engine import (
    Bound,
    BoundKind,
    IsoKind,
    Mode,
    Policy,
    cro,
    iso,
    segment,
)
from sdrank.expressions import LinearExpr, combination, variables
from sdrank.inequalities import RelOp, canonicalize, relation
from sdrank.numbers import format_decimal, round_half_away
from sdrank.oracle import oracle_feasible
from sdrank.documents import parse_problem, serialize_problem

W1, W2, W3 = variables("w1", "w2", "w3")
ORDERING = (W1, W2, W3)

coefficients = st.fractions(min_value=-6, max_value=6, max_denominator=8)
points = st.tuples(
    st.fractions(min_value=-8, max_value=8, max_denominator=16),
    st.fractions(min_value=-8, max_value=8, max_denominator=16),
    st.fractions(min_value=-8, max_value=8, max_denominator=16),
)


@st.composite
def expressions(draw, max_var=3):
    pairs = [
        (draw(coefficients), var)
        for var in (W1, W2, W3)[:max_var]
        if draw(st.booleans())
    ]
    return combination(pairs, draw(coefficients))


def assignment(point):
    return {"w1": point[0], "w2": point[1], "w3": point[2]}


class TestIsoEquivalence:
    @given(expr=expressions(), point=points)
    def test_bound_preserves_the_solution_set(self, expr, point):
        row = canonicalize([relation(expr, RelOp.LE, LinearExpr.constant_expr(0))])[0]
        outcome = iso(row, ORDERING)
        values = assignment(point)
        holds = row.body.evaluate(values) <= 0
        if outcome.kind is IsoKind.TAUTOLOGY:
            assert holds
        elif outcome.kind is IsoKind.CONTRADICTION:
            assert not holds
        else:
            bound = outcome.bound
            edge = bound.expr.evaluate(values)
            at_var = values[bound.variable.name]
            if bound.kind is BoundKind.UPPER:
                assert holds == (at_var <= edge)
            else:
                assert holds == (at_var >= edge)

    @given(expr=expressions())
    def test_bound_never_mentions_the_isolated_variable(self, expr):
        row = canonicalize([relation(expr, RelOp.LE, LinearExpr.constant_expr(0))])[0]
        outcome = iso(row, ORDERING)
        if outcome.kind is IsoKind.BOUND:
            top = outcome.bound.expr.highest_variable()
            assert top is None or top.index < outcome.bound.variable.index


class TestCroSoundness:
    @given(low=expressions(max_var=2), high=expressions(max_var=2), point=points)
    def test_product_is_satisfiable_exactly_when_bounds_overlap(
        self, low, high, point
    ):
        lower = Bound(W3, BoundKind.LOWER, low, 1)
        upper = Bound(W3, BoundKind.UPPER, high, 2)
        pending = cro(lower, upper)
        values = assignment(point)
        floor = low.evaluate(values)
        ceiling = high.evaluate(values)
        overlap = pending.body.evaluate(values) <= 0
        assert overlap == (floor <= ceiling)
        if overlap:
            # the floor itself witnesses a value satisfying both parents
            witness = dict(values, w3=floor)
            assert floor <= ceiling
            assert low.evaluate(witness) <= witness["w3"] <= high.evaluate(witness)

    @given(low=expressions(max_var=2), high=expressions(max_var=2))
    def test_product_eliminates_the_crossed_variable(self, low, high):
        pending = cro(Bound(W3, BoundKind.LOWER, low, 1), Bound(W3, BoundKind.UPPER, high, 2))
        assert W3 not in pending.body.variables()
        assert (pending.parent_lower, pending.parent_upper) == (1, 2)


class TestCanonicalization:
    @given(lhs=expressions(), rhs=expressions(), point=points)
    def test_weak_relations_keep_their_solution_sets(self, lhs, rhs, point):
        values = assignment(point)
        for op, holds in (
            (RelOp.LE, lhs.evaluate(values) <= rhs.evaluate(values)),
            (RelOp.GE, lhs.evaluate(values) >= rhs.evaluate(values)),
        ):
            row = canonicalize([relation(lhs, op, rhs)])[0]
            assert (row.body.evaluate(values) <= 0) == holds

    @given(lhs=expressions(), rhs=expressions(), point=points)
    def test_strict_relations_demand_the_epsilon_margin(self, lhs, rhs, point):
        values = assignment(point)
        epsilon = Fraction(1, 100)
        row = canonicalize([relation(lhs, RelOp.GT, rhs)], epsilon)[0]
        assert (row.body.evaluate(values) <= 0) == (
            lhs.evaluate(values) >= rhs.evaluate(values) + epsilon
        )

    @given(lhs=expressions(), rhs=expressions(), point=points)
    def test_equalities_split_into_a_two_sided_sandwich(self, lhs, rhs, point):
        values = assignment(point)
        ge_half, le_half = canonicalize([relation(lhs, RelOp.EQ, rhs)])
        assert (ge_half.ident, le_half.ident) == (1, 2)
        both = ge_half.body.evaluate(values) <= 0 and le_half.body.evaluate(values) <= 0
        assert both == (lhs.evaluate(values) == rhs.evaluate(values))

    @given(
        ops=st.lists(st.sampled_from([RelOp.LE, RelOp.GE, RelOp.EQ, RelOp.LT]), max_size=5),
        start=st.integers(min_value=1, max_value=50),
    )
    def test_ids_run_consecutively_from_first_id(self, ops, start):
        rows = canonicalize(
            [relation(combination([(1, W1)]), op, LinearExpr.constant_expr(0)) for op in ops],
            first_id=start,
        )
        expected = sum(2 if op is RelOp.EQ else 1 for op in ops)
        assert [row.ident for row in rows] == list(range(start, start + expected))
        assert all(row.label == (row.ident, row.ident, row.ident) for row in rows)


class TestDisplayRounding:
    @given(value=st.fractions(min_value=-1000, max_value=1000, max_denominator=997))
    def test_display_error_is_at_most_half_a_cent(self, value):
        shown = Fraction(format_decimal(value))
        assert abs(shown - value) <= Fraction(1, 200)

    @given(value=st.fractions(min_value=-1000, max_value=1000, max_denominator=997))
    def test_rounding_is_idempotent(self, value):
        once = round_half_away(value, 2)
        assert round_half_away(once, 2) == once
        assert format_decimal(once) == format_decimal(value)

    @given(k=st.integers(min_value=-10000, max_value=10000))
    def test_ties_round_away_from_zero(self, k):
        tie = Fraction(2 * k + 1, 200)  # exactly halfway between two cents
        expected = Fraction(k + 1, 100) if k >= 0 else Fraction(k, 100)
        assert round_half_away(tie, 2) == expected


names = st.sampled_from(["g1", "g2", "g3"])
performances = st.fractions(min_value=0, max_value=100, max_denominator=30)


@st.composite
def problem_documents(draw):
    n_criteria = draw(st.integers(min_value=1, max_value=3))
    criteria = [f"g{i}" for i in range(1, n_criteria + 1)]
    n_alternatives = draw(st.integers(min_value=2, max_value=4))
    alternatives = []
    for i in range(n_alternatives):
        alternatives.append(
            {
                "name": f"a{i + 1}",
                "performances": {
                    name: str(draw(performances)) for name in criteria
                },
            }
        )
    chain_length = draw(st.integers(min_value=0, max_value=n_alternatives))
    chosen = [alt["name"] for alt in alternatives[:chain_length]]
    symbols = draw(
        st.lists(
            st.sampled_from([" > ", " ~ "]),
            min_size=max(0, chain_length - 1),
            max_size=max(0, chain_length - 1),
        )
    )
    chain = "".join(
        part
        for name, symbol in zip(chosen, symbols + [""])
        for part in (name, symbol)
    )
    return json.dumps(
        {
            "criteria": [{"name": name} for name in criteria],
            "alternatives": alternatives,
            "comparisons": chain if len(chosen) > 1 else "",
        }
    )


class TestDocumentRoundTrip:
    @given(document=problem_documents())
    def test_parse_serialize_parse_is_stable(self, document):
        problem = parse_problem(document)
        data = serialize_problem(problem)
        assert parse_problem(data) == problem
        assert serialize_problem(parse_problem(data)) == data


small_coeff = st.integers(min_value=-4, max_value=4)


@st.composite
def small_systems(draw):
    n_vars = draw(st.integers(min_value=1, max_value=2))
    vs = variables(*(f"w{i}" for i in range(1, n_vars + 1)))
    n_rows = draw(st.integers(min_value=1, max_value=5))
    rows = []
    for _ in range(n_rows):
        lhs = combination(
            [(draw(small_coeff), var) for var in vs], draw(small_coeff)
        )
        op = draw(st.sampled_from([RelOp.LE, RelOp.GE, RelOp.LT, RelOp.GT]))
        rows.append(relation(lhs, op, LinearExpr.constant_expr(draw(small_coeff))))
    return rows


class TestSegmentMatchesOracle:
    @settings(max_examples=60, deadline=None)
    @given(rows=small_systems())
    def test_verdicts_agree_across_modes_and_policies(self, rows):
        truth = oracle_feasible(rows)
        labelled = canonicalize(rows)
        ordering = sorted(
            {var for row in labelled for var in row.body.variables()},
            key=lambda var: var.index,
        )
        for mode, policy in (
            (Mode.STOP_AT_FIRST, Policy.KEEP_ALL),
            (Mode.STOP_AT_FIRST, Policy.DROP_DUPLICATES),
            (Mode.STOP_AT_FIRST, Policy.BOUNDS_METHOD),
            (Mode.ENUMERATE_ALL, Policy.KEEP_ALL),
        ):
            system = segment(labelled, ordering, mode, policy)
            assert system.feasible == truth
