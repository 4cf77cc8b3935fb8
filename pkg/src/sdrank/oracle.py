"""Independent brute-force feasibility oracle (exact vertex enumeration).

Deliberately shares no code with the elimination engine: raw relations are
canonicalized, clipped to a box large enough to contain a witness point
whenever one exists, and every s-subset of constraints is solved exactly as
an equality system.  The clipped region is a polytope, so it is nonempty iff
some such basic solution satisfies every constraint.  Desk-scale only (at
most 6 variables), used to cross-check every feasibility verdict the engine
issues.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expressions import VarId
from .inequalities import RawRelation, canonicalize

MAX_ORACLE_VARIABLES = 6


@dataclass(frozen=True)
class OracleReport:
    feasible: bool
    variables: tuple[str, ...]
    vertices: tuple[tuple[Fraction, ...], ...]


def _integer_rows(
    ineqs, names: Sequence[str]
) -> list[tuple[tuple[int, ...], int]] | None:
    """Canonical bodies as integer rows ``a . x <= b``.

    Returns None when a constant row is violated outright (trivially
    infeasible input).
    """
    position = {name: i for i, name in enumerate(names)}
    rows: list[tuple[tuple[int, ...], int]] = []
    for ineq in ineqs:
        coeffs = [Fraction(0)] * len(names)
        for var, coeff in ineq.body.terms:
            coeffs[position[var.name]] = coeff
        rhs = -ineq.body.constant
        denominators = [c.denominator for c in coeffs] + [rhs.denominator]
        scale = math.lcm(*denominators)
        vector = tuple(int(c * scale) for c in coeffs)
        bound = int(rhs * scale)
        if not any(vector):
            if bound < 0:
                return None
            continue
        shrink = math.gcd(*(abs(v) for v in vector), abs(bound))
        if shrink > 1:
            vector = tuple(v // shrink for v in vector)
            bound //= shrink
        rows.append((vector, bound))
    return rows


def _determinant(matrix: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    size = len(matrix)
    work = [row[:] for row in matrix]
    sign = 1
    previous = 1
    for k in range(size - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if work[i][k]), None)
            if swap is None:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, size):
            row = work[i]
            head = row[k]
            for j in range(k + 1, size):
                row[j] = (row[j] * pivot - head * work[k][j]) // previous
            row[k] = 0
        previous = pivot
    return sign * work[size - 1][size - 1]


def _solve_square(
    rows: Sequence[tuple[tuple[int, ...], int]]
) -> tuple[tuple[int, ...], int] | None:
    """Cramer solution of the equality system as (numerators, denominator).

    All-integer so the caller can test candidate points without building
    Fractions; None when the system is singular.  The denominator is
    normalized positive.
    """
    matrix = [list(vector) for vector, _ in rows]
    rhs = [bound for _, bound in rows]
    den = _determinant(matrix)
    if den == 0:
        return None
    nums = []
    for col in range(len(rows)):
        patched = [row[:col] + [rhs[i]] + row[col + 1 :] for i, row in enumerate(matrix)]
        nums.append(_determinant(patched))
    if den < 0:
        den = -den
        nums = [-value for value in nums]
    return tuple(nums), den


def oracle_report(
    constraints: Sequence[RawRelation],
    epsilon: Fraction = Fraction(1, 100),
    variables: Sequence[str] | None = None,
    collect_vertices: bool = False,
) -> OracleReport:
    """Feasibility (and optionally the vertex list) of a raw constraint set.

    Vertices are reported for the constraint polyhedron itself: basic points
    where no clipping-box row is active.  For a bounded system that is the
    complete vertex set, which lets callers cross-check tight ranges
    coordinate by coordinate.
    """
    ineqs = canonicalize(constraints, epsilon)
    if variables is None:
        mentioned = {}
        for ineq in ineqs:
            for var in sorted(ineq.mentions, key=lambda v: (v.index, v.name)):
                mentioned.setdefault(var.name, None)
        names = tuple(mentioned)
    else:
        names = tuple(variables)
    if len(names) > MAX_ORACLE_VARIABLES:
        raise ValueError(
            f"oracle is desk-scale only ({len(names)} variables > {MAX_ORACLE_VARIABLES})"
        )
    rows = _integer_rows(ineqs, names)
    if rows is None:
        return OracleReport(False, names, ())
    size = len(names)
    if size == 0:
        return OracleReport(True, names, ())

    magnitude = 1
    for vector, bound in rows:
        magnitude = max(magnitude, abs(bound), *(abs(v) for v in vector))
    box = math.factorial(size) * magnitude**size + 1
    clipped = list(dict.fromkeys(rows))
    plain_count = len(clipped)
    for axis in range(size):
        unit = tuple(1 if i == axis else 0 for i in range(size))
        negated = tuple(-v for v in unit)
        clipped.append((unit, box))
        clipped.append((negated, box))

    if not collect_vertices and all(bound >= 0 for _, bound in clipped):
        return OracleReport(True, names, ())  # the origin satisfies everything

    feasible = False
    vertices: list[tuple[Fraction, ...]] = []
    for subset in itertools.combinations(range(len(clipped)), size):
        solved = _solve_square([clipped[i] for i in subset])
        if solved is None:
            continue
        nums, den = solved
        if all(
            sum(c * n for c, n in zip(vector, nums)) <= bound * den
            for vector, bound in clipped
        ):
            feasible = True
            if not collect_vertices:
                return OracleReport(True, names, ())
            if all(i < plain_count for i in subset):
                point = tuple(Fraction(n, den) for n in nums)
                if point not in vertices:
                    vertices.append(point)
    return OracleReport(feasible, names, tuple(vertices))


def oracle_feasible(
    constraints: Sequence[RawRelation],
    epsilon: Fraction = Fraction(1, 100),
    variables: Sequence[str] | None = None,
) -> bool:
    """Exhaustive exact feasibility check; see :func:`oracle_report`."""
    return oracle_report(constraints, epsilon, variables).feasible
