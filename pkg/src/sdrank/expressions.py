"""Variables and exact linear expressions.

A :class:`VarId` pairs a display name with an elimination index; expressions
store their terms sorted by that index so equal expressions compare and hash
identically (suppression by syntactic identity relies on this).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .numbers import as_rational


@dataclass(frozen=True)
class VarId:
    """A variable: ``index`` drives elimination order, ``name`` is for display.

    Lower index means eliminated later; after ordering, indices form a
    contiguous 1..s permutation.
    """

    index: int
    name: str

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")
        if not self.name:
            raise ValueError("variable name must be non-empty")


def variables(*names: str) -> tuple[VarId, ...]:
    """Declare variables in order; declaration position becomes the index."""
    return tuple(VarId(i, name) for i, name in enumerate(names, start=1))


@dataclass(frozen=True)
class LinearExpr:
    """Sum of rational-coefficient terms plus a constant.

    Zero coefficients are never stored; terms are kept sorted by variable
    index, making equality purely syntactic.
    """

    terms: tuple[tuple[VarId, Fraction], ...] = ()
    constant: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        merged: dict[VarId, Fraction] = {}
        for var, coeff in self.terms:
            coeff = as_rational(coeff)
            merged[var] = merged.get(var, Fraction(0)) + coeff
        cleaned = tuple(
            (var, coeff)
            for var, coeff in sorted(merged.items(), key=lambda t: (t[0].index, t[0].name))
            if coeff != 0
        )
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "constant", as_rational(self.constant))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_mapping(
        cls, coefficients: Mapping[VarId, Fraction | int | str], constant: Fraction | int | str = 0
    ) -> "LinearExpr":
        return cls(tuple((v, as_rational(c)) for v, c in coefficients.items()), as_rational(constant))

    @classmethod
    def constant_expr(cls, value: Fraction | int | str) -> "LinearExpr":
        return cls((), as_rational(value))

    # -- inspection ----------------------------------------------------------

    @property
    def coefficients(self) -> dict[VarId, Fraction]:
        return dict(self.terms)

    def coeff(self, var: VarId) -> Fraction:
        for candidate, value in self.terms:
            if candidate == var:
                return value
        return Fraction(0)

    def variables(self) -> tuple[VarId, ...]:
        return tuple(var for var, _ in self.terms)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def highest_variable(self) -> VarId | None:
        """The variable with the largest elimination index, if any."""
        if not self.terms:
            return None
        return self.terms[-1][0]

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        total = self.constant
        for var, coeff in self.terms:
            total += coeff * assignment[var.name]
        return total

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LinearExpr") -> "LinearExpr":
        return LinearExpr(self.terms + other.terms, self.constant + other.constant)

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        return self + (-other)

    def __neg__(self) -> "LinearExpr":
        return self.scale(Fraction(-1))

    def scale(self, factor: Fraction | int | str) -> "LinearExpr":
        factor = as_rational(factor)
        return LinearExpr(
            tuple((var, coeff * factor) for var, coeff in self.terms),
            self.constant * factor,
        )

    def shift(self, amount: Fraction | int | str) -> "LinearExpr":
        return LinearExpr(self.terms, self.constant + as_rational(amount))

    def rename(self, mapping: Mapping[str, VarId]) -> "LinearExpr":
        """Rebuild the expression over re-indexed variables (same names)."""
        try:
            terms = tuple((mapping[var.name], coeff) for var, coeff in self.terms)
        except KeyError as exc:
            raise KeyError(f"unknown variable {exc.args[0]!r}") from None
        return LinearExpr(terms, self.constant)


def term(var: VarId, coeff: Fraction | int | str = 1) -> LinearExpr:
    return LinearExpr(((var, as_rational(coeff)),))


def combination(pairs: Iterable[tuple[Fraction | int | str, VarId]], constant: Fraction | int | str = 0) -> LinearExpr:
    """Convenience builder: ``combination([(2, x), ("1/3", y)], 1)``."""
    return LinearExpr(tuple((v, as_rational(c)) for c, v in pairs), as_rational(constant))
