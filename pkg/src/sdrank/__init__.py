"""Exact elimination over linear inequality systems, and the robust-ranking
analyses built on it.

The package splits into an engine and an application layer.  The engine
(`expressions`, `inequalities`, `engine`) eliminates variables from a system
of rational linear inequalities one at a time, labelling every derived row
with the pair that produced it so a contradiction can be traced back to the
inputs that bred it.  The application layer (`model`, `analysis`) encodes
additive-value ranking problems as such systems and answers robustness
questions about them: consistency with explanations, weight ranges,
necessary/possible preference, and minimal explaining or repairing judgment
subsets.  `documents`, `cli`, and `service` expose all of it as file formats,
a command line, and an HTTP API.
"""
from .analysis import (
    AnalysisPreconditionError,
    ConsistencyReport,
    ConstructReport,
    CriteriaReductReport,
    InconsistentProblemError,
    Problem,
    RelationKind,
    RelationMatrices,
    ReductReport,
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
from .documents import (
    ProblemFormatError,
    ReportDocument,
    ReportFormat,
    export_hasse,
    parse_problem,
    render_report,
    run_analysis,
    serialize_problem,
)
from .engine import (
    ContradictionRecord,
    Mode,
    Policy,
    SDSystem,
    backtrack,
    extend,
    project_bounds,
    root_sets,
    segment,
)
from .expressions import LinearExpr, VarId, combination, term, variables
from .inequalities import (
    LabeledInequality,
    OrderingStrategy,
    OriginKind,
    OriginTag,
    RawRelation,
    RelOp,
    canonicalize,
    order_variables,
    relation,
)
from .model import (
    Comparison,
    ComparisonKind,
    Criterion,
    Marginals,
    ModelConfig,
    PerformanceTable,
    ReferenceComparisons,
    build_system,
)
from .oracle import MAX_ORACLE_VARIABLES, OracleReport, oracle_feasible, oracle_report

__version__ = "0.1.0"

__all__ = [
    "AnalysisPreconditionError",
    "ConsistencyReport",
    "ConstructReport",
    "ContradictionRecord",
    "Comparison",
    "ComparisonKind",
    "CriteriaReductReport",
    "Criterion",
    "InconsistentProblemError",
    "LabeledInequality",
    "LinearExpr",
    "MAX_ORACLE_VARIABLES",
    "Marginals",
    "Mode",
    "ModelConfig",
    "OracleReport",
    "OrderingStrategy",
    "OriginKind",
    "OriginTag",
    "PerformanceTable",
    "Policy",
    "Problem",
    "ProblemFormatError",
    "RawRelation",
    "ReductReport",
    "ReferenceComparisons",
    "RelOp",
    "RelationKind",
    "RelationMatrices",
    "ReportDocument",
    "ReportFormat",
    "SDSystem",
    "VarId",
    "backtrack",
    "base_system",
    "build_system",
    "canonicalize",
    "check_consistency",
    "combination",
    "criteria_reducts",
    "export_hasse",
    "extend",
    "oracle_feasible",
    "oracle_report",
    "order_variables",
    "parse_problem",
    "preference_construct",
    "preference_reduct",
    "project_bounds",
    "relation",
    "relation_matrices",
    "render_report",
    "robust_relation",
    "root_sets",
    "run_analysis",
    "segment",
    "segment_problem",
    "serialize_problem",
    "term",
    "variables",
    "weight_ranges",
    "__version__",
]
