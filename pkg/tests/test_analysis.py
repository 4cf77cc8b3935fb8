"""Ranking analyses over the bundled sales-manager case study.

The numeric goldens (bound constants, row labels, relation matrices, and the
contradiction inventories) were cross-checked against the independent
vertex-enumeration oracle before being frozen here.
"""
from fractions import Fraction

import pytest

from sdrank import (
    AnalysisPreconditionError,
    InconsistentProblemError,
    Mode,
    Policy,
    RelationKind,
    backtrack,
    check_consistency,
    criteria_reducts,
    parse_problem,
    preference_construct,
    preference_reduct,
    relation_matrices,
    robust_relation,
    segment_problem,
    weight_ranges,
)
from sdrank.analysis import base_system
from sdrank.engine import project_bounds
from sdrank.model import ReferenceComparisons
from sdrank.numbers import format_decimal

W1_LOW = Fraction(249984, 576725)   # 0.43
W1_HIGH = Fraction(1953, 3253)      # 0.60
W2_HIGH = Fraction(160341, 576725)  # 0.28
W3_LOW = Fraction(6656, 23069)      # 0.29
W3_HIGH = Fraction(1300, 3253)      # 0.40

POSSIBLE_ROWS = [
    "TFFTTFTTFFFTFFT",
    "TTFTTFTTFTFTTFT",
    "TTTTTFTTFTTTTFT",
    "TFFTTFTTFFFTFFT",
    "FFFTTFTFFFFTFFF",
    "TTTTTTTTTTTTTFT",
    "TFFTTFTFFTFTTFF",
    "TFFTTFTTFTFTTFT",
    "TTTTTTTTTTTTTFT",
    "TFFTTFTTFTFTTFT",
    "TTTTTTTTTTTTTFT",
    "FFFFFFTFFFFTFFF",
    "TFFTTFTTFTFTTFT",
    "TTTTTTTTTTTTTTT",
    "TFFTTFTFFTFTTFT",
]

REDUCT_CONTRADICTIONS = [
    (1, 24, {1, 2, 6, 10}), (1, 35, {1, 6, 8, 10}), (12, 24, {2, 3, 6, 10}),
    (12, 35, {3, 6, 8, 10}), (19, 24, {2, 6, 9, 10}), (19, 35, {2, 6, 8, 9, 10}),
    (25, 23, {2, 4, 5, 6, 9, 10}), (25, 24, {2, 4, 6, 9, 10}),
    (25, 35, {4, 6, 8, 9, 10}), (26, 24, {2, 3, 4, 5, 6, 10}),
    (26, 35, {3, 4, 5, 6, 8, 10}), (28, 20, {2, 3, 4, 5, 6, 10}),
    (28, 21, {2, 4, 5, 6, 7, 10}), (28, 22, {2, 4, 5, 6, 8, 10}),
    (28, 23, {2, 4, 5, 6, 10}), (28, 24, {2, 4, 5, 6, 10}),
    (28, 27, {4, 5, 6, 8, 10}), (28, 31, {3, 4, 5, 6, 8, 10}),
    (28, 32, {4, 5, 6, 7, 8, 10}), (28, 33, {4, 5, 6, 8, 10}),
    (28, 34, {4, 5, 6, 8, 10}), (28, 35, {4, 5, 6, 8, 10}),
    (29, 20, {2, 3, 4, 5, 6, 10}), (29, 21, {2, 4, 5, 6, 7, 10}),
    (29, 22, {2, 4, 5, 6, 8, 10}), (29, 23, {2, 4, 5, 6, 10}),
    (29, 24, {2, 4, 6, 10}), (29, 27, {4, 5, 6, 8, 10}),
    (29, 31, {3, 4, 5, 6, 8, 10}), (29, 32, {4, 5, 6, 7, 8, 10}),
    (29, 33, {4, 5, 6, 8, 10}), (29, 34, {4, 5, 6, 8, 10}),
    (29, 35, {4, 6, 8, 10}), (30, 24, {2, 6, 8, 9, 10}), (30, 35, {6, 8, 9, 10}),
]

CONSTRUCT_CONTRADICTIONS = [
    (1, 28, {1, 4, 5, 6, 10}), (1, 29, {1, 4, 6, 10}), (1, 35, {1, 6, 8, 10}),
    (12, 28, {3, 4, 5, 6, 10}), (12, 29, {3, 4, 6, 10}), (12, 35, {3, 6, 8, 10}),
    (19, 24, {2, 6, 9, 10}), (19, 28, {2, 4, 5, 6, 9, 10}),
    (19, 29, {2, 4, 6, 9, 10}), (19, 35, {2, 6, 8, 9, 10}),
    (25, 24, {2, 4, 6, 9, 10}), (25, 28, {4, 5, 6, 9, 10}),
    (25, 29, {4, 6, 9, 10}), (25, 35, {4, 6, 8, 9, 10}),
    (26, 28, {3, 4, 5, 6, 10}), (26, 29, {3, 4, 5, 6, 10}),
    (26, 35, {3, 4, 5, 6, 8, 10}), (30, 24, {2, 6, 8, 9, 10}),
    (30, 28, {4, 5, 6, 8, 9, 10}), (30, 29, {4, 6, 8, 9, 10}),
    (30, 35, {6, 8, 9, 10}),
]


class TestBaseSystem:
    def test_second_iteration_is_compatible(self, iter2_problem):
        base = base_system(iter2_problem)
        assert base.feasible
        assert base.mode is Mode.STOP_AT_FIRST
        assert base.policy is Policy.BOUNDS_METHOD

    def test_derived_rows_carry_expected_genealogy(self, iter2_problem):
        base = base_system(iter2_problem)
        derived = [q.label for q in base.registry.values() if not q.is_original]
        assert derived == [
            (10, 3, 5), (11, 4, 6), (12, 7, 5), (13, 8, 5),
            (14, 8, 6), (15, 2, 12), (16, 11, 9),
        ]

    def test_constant_weight_bounds_are_exact(self, iter2_problem):
        base = base_system(iter2_problem)
        ranges = project_bounds(base, "w1")
        assert (ranges.lower, ranges.upper) == (W1_LOW, W1_HIGH)
        assert format_decimal(ranges.lower) == "0.43"
        assert format_decimal(ranges.upper) == "0.60"
        # the single-variable rows themselves pin the bounds: {15,2,12} is
        # tight exactly at the upper value, {16,11,9} at the lower one
        assert base.registry[15].body.evaluate({"w1": W1_HIGH}) == 0
        assert base.registry[16].body.evaluate({"w1": W1_LOW}) == 0


class TestCheckConsistency:
    def test_first_iteration_is_contradictory(self, iter1_problem):
        report = check_consistency(iter1_problem)
        assert not report.feasible
        assert len(report.contradiction_sets) == 77
        assert report.minimal_comparison_subsets == (
            frozenset({"a6~a9", "a8>a14"}),
        )

    def test_first_contradiction_roots(self, iter1_problem):
        report = check_consistency(iter1_problem)
        first = report.contradiction_sets[0]
        assert (first.record.lower_id, first.record.upper_id) == (1, 32)
        assert first.original_ids == frozenset({1, 2, 6, 9})
        assert first.comparison_refs == frozenset({"a6~a9", "a8>a14"})

    def test_stop_mode_reports_single_witness(self, iter1_problem):
        report = check_consistency(iter1_problem, mode=Mode.STOP_AT_FIRST)
        assert not report.feasible
        assert len(report.contradiction_sets) == 1

    def test_second_iteration_is_clean(self, iter2_problem):
        report = check_consistency(iter2_problem)
        assert report.feasible
        assert report.contradiction_sets == ()
        assert report.minimal_comparison_subsets == ()

    def test_verdict_stable_under_redundancy_policy(self, iter1_problem):
        stop = check_consistency(
            iter1_problem, mode=Mode.STOP_AT_FIRST, policy=Policy.BOUNDS_METHOD
        )
        assert not stop.feasible


class TestWeightRanges:
    def test_exact_ranges(self, iter2_problem):
        assert weight_ranges(iter2_problem) == {
            "w1": (W1_LOW, W1_HIGH),
            "w2": (Fraction(0), W2_HIGH),
            "w3": (W3_LOW, W3_HIGH),
        }

    def test_displayed_ranges(self, iter2_problem):
        shown = {
            name: (format_decimal(low), format_decimal(high))
            for name, (low, high) in weight_ranges(iter2_problem).items()
        }
        assert shown == {
            "w1": ("0.43", "0.60"),
            "w2": ("0.00", "0.28"),
            "w3": ("0.29", "0.40"),
        }

    def test_contradictory_problem_rejected(self, iter1_problem):
        with pytest.raises(InconsistentProblemError):
            weight_ranges(iter1_problem)


class TestRobustRelation:
    def test_necessary_spot_checks(self, iter2_problem):
        assert robust_relation(iter2_problem, RelationKind.NECESSARY, "a14", "a1")
        assert not robust_relation(iter2_problem, RelationKind.NECESSARY, "a1", "a14")

    def test_possible_spot_checks(self, iter2_problem):
        assert robust_relation(iter2_problem, RelationKind.POSSIBLE, "a2", "a1")
        assert not robust_relation(iter2_problem, RelationKind.POSSIBLE, "a1", "a2")

    def test_exact_arithmetic_refutes_one_overclaimed_pair(self, iter2_problem):
        # a12 loses to every alternative except a7: the margin at one extreme
        # weight vector exceeds epsilon, so a7's advantage is not universal
        assert not robust_relation(iter2_problem, RelationKind.NECESSARY, "a7", "a12")

    def test_shared_base_system_changes_nothing(self, iter2_problem):
        base = base_system(iter2_problem)
        for kind, first, second in (
            (RelationKind.NECESSARY, "a14", "a1"),
            (RelationKind.POSSIBLE, "a1", "a2"),
        ):
            assert robust_relation(iter2_problem, kind, first, second, base=base) == \
                robust_relation(iter2_problem, kind, first, second)

    def test_unknown_alternative_rejected(self, iter2_problem):
        with pytest.raises(KeyError):
            robust_relation(iter2_problem, RelationKind.NECESSARY, "ghost", "a1")


class TestRelationMatrices:
    def test_possible_matrix_golden(self, iter2_problem):
        mats = relation_matrices(iter2_problem)
        rows = ["".join("T" if cell else "F" for cell in row) for row in mats.possible]
        assert rows == POSSIBLE_ROWS

    def test_necessary_matrix_properties(self, iter2_problem):
        mats = relation_matrices(iter2_problem)
        n = len(mats.alternatives)
        index = {name: i for i, name in enumerate(mats.alternatives)}
        nec = mats.necessary
        assert all(nec[i][i] for i in range(n))
        assert all(
            nec[i][k]
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if nec[i][j] and nec[j][k]
        )
        assert all(nec[index["a14"]])
        losers = [
            mats.alternatives[i] for i in range(n) if not nec[i][index["a12"]]
        ]
        assert losers == ["a7"]

    def test_hasse_edges_are_cover_arcs(self, iter2_problem):
        mats = relation_matrices(iter2_problem)
        assert len(mats.hasse_edges) == 19
        assert ("a14", "a6") in mats.hasse_edges
        # transitively implied arcs are excluded
        assert ("a14", "a12") not in mats.hasse_edges

    def test_alternative_order_follows_the_table(self, iter2_problem):
        mats = relation_matrices(iter2_problem)
        assert mats.alternatives == tuple(f"a{i}" for i in range(1, 16))

    def test_matrices_agree_with_pairwise_queries(self, iter2_problem):
        mats = relation_matrices(iter2_problem)
        index = {name: i for i, name in enumerate(mats.alternatives)}
        for first, second in (("a14", "a1"), ("a1", "a2"), ("a7", "a12")):
            assert mats.necessary[index[first]][index[second]] == robust_relation(
                iter2_problem, RelationKind.NECESSARY, first, second
            )
            assert mats.possible[index[first]][index[second]] == robust_relation(
                iter2_problem, RelationKind.POSSIBLE, first, second
            )


class TestPreferenceReduct:
    def test_single_judgment_suffices(self, iter2_problem):
        report = preference_reduct(iter2_problem, "a14", "a1")
        assert report.reducts == (frozenset({"a6~a9"}),)
        assert report.hypothesis_id == 10

    def test_candidate_subsets_before_filtering(self, iter2_problem):
        report = preference_reduct(iter2_problem, "a14", "a1")
        assert set(report.candidate_id_subsets) == {
            frozenset({6}), frozenset({6, 7}), frozenset({6, 8}),
            frozenset({6, 9}), frozenset({6, 7, 8}), frozenset({6, 8, 9}),
        }
        assert set(report.candidate_ref_subsets) == {
            frozenset({"a6~a9"}),
            frozenset({"a6~a9", "a9>a8"}),
            frozenset({"a6~a9", "a8>a7"}),
            frozenset({"a6~a9", "a9>a8", "a8>a7"}),
        }

    def test_full_contradiction_inventory(self, iter2_problem):
        report = preference_reduct(iter2_problem, "a14", "a1")
        triples = sorted(
            (r.lower_id, r.upper_id, set(backtrack(report.system, r)))
            for r in report.system.contradictions
        )
        assert triples == sorted(REDUCT_CONTRADICTIONS)

    def test_requires_the_relation_to_hold(self, iter2_problem):
        with pytest.raises(AnalysisPreconditionError):
            preference_reduct(iter2_problem, "a1", "a14")


class TestPreferenceConstruct:
    def test_removing_the_indifference_rescues_the_pair(self, iter2_problem):
        report = preference_construct(iter2_problem, "a1", "a2")
        assert not report.unsalvageable
        assert report.hitting_sets == (frozenset({"a6~a9"}),)
        assert report.constructs == (frozenset({"a9>a8", "a8>a7"}),)

    def test_candidate_subsets(self, iter2_problem):
        report = preference_construct(iter2_problem, "a1", "a2")
        assert set(report.candidate_id_subsets) == {
            frozenset({6}), frozenset({6, 8}),
            frozenset({6, 9}), frozenset({6, 8, 9}),
        }

    def test_full_contradiction_inventory(self, iter2_problem):
        report = preference_construct(iter2_problem, "a1", "a2")
        triples = sorted(
            (r.lower_id, r.upper_id, set(backtrack(report.system, r)))
            for r in report.system.contradictions
        )
        assert triples == sorted(CONSTRUCT_CONTRADICTIONS)

    def test_requires_the_relation_to_fail(self, iter2_problem):
        with pytest.raises(AnalysisPreconditionError):
            preference_construct(iter2_problem, "a2", "a1")

    def test_model_level_impossibility_is_unsalvageable(self):
        # y is dominated outright, so no comparison removal can ever make
        # "y possibly at least as good as x" true
        problem = parse_problem(
            """{
              "criteria": [{"name": "g1"}, {"name": "g2"}],
              "alternatives": [
                {"name": "x", "performances": {"g1": "1", "g2": "1"}},
                {"name": "y", "performances": {"g1": "0", "g2": "0"}},
                {"name": "z", "performances": {"g1": "1", "g2": "0"}}
              ],
              "comparisons": "x > z"
            }"""
        )
        report = preference_construct(problem, "y", "x")
        assert report.unsalvageable
        assert report.hitting_sets == ()
        assert report.constructs == ()


class TestCriteriaReducts:
    def test_exactly_one_reduct(self, iter2_problem):
        report = criteria_reducts(iter2_problem)
        assert report.reducts == (frozenset({"g1", "g3"}),)

    def test_examined_subsets_ascending_with_verdicts(self, iter2_problem):
        report = criteria_reducts(iter2_problem)
        assert report.examined == (
            (frozenset({"g1"}), False),
            (frozenset({"g2"}), False),
            (frozenset({"g3"}), False),
            (frozenset({"g1", "g2"}), False),
            (frozenset({"g1", "g3"}), True),
            (frozenset({"g2", "g3"}), False),
        )

    def test_supersets_of_reducts_are_skipped(self, iter2_problem):
        report = criteria_reducts(iter2_problem)
        examined = [subset for subset, _ in report.examined]
        assert frozenset({"g1", "g2", "g3"}) not in examined

    def test_inconsistent_full_problem_yields_no_reducts(self, iter1_problem):
        report = criteria_reducts(iter1_problem)
        assert report.reducts == ()
        assert report.examined == ((frozenset({"g1", "g2", "g3"}), False),)


class TestSegmentProblem:
    def test_mode_and_policy_pass_through(self, iter2_problem):
        enumerated = segment_problem(iter2_problem, Mode.ENUMERATE_ALL, Policy.KEEP_ALL)
        trimmed = segment_problem(iter2_problem, Mode.STOP_AT_FIRST, Policy.BOUNDS_METHOD)
        assert enumerated.feasible and trimmed.feasible
        assert enumerated.max_id > trimmed.max_id

    def test_enumeration_with_bounds_policy_rejected(self, iter2_problem):
        with pytest.raises(ValueError, match="enumeration"):
            segment_problem(iter2_problem, Mode.ENUMERATE_ALL, Policy.BOUNDS_METHOD)


class TestProblemEditing:
    def test_revising_comparisons_reproduces_second_iteration(
        self, iter1_problem, iter2_problem
    ):
        revised = ReferenceComparisons.from_chain("a6 ~ a9 > a8 > a7")
        edited = iter1_problem.with_comparisons(revised)
        assert edited.comparisons.refs == iter2_problem.comparisons.refs
        assert check_consistency(edited).feasible
        assert weight_ranges(edited) == weight_ranges(iter2_problem)
