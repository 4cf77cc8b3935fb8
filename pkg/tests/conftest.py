"""Shared fixtures: bundled sales-manager datasets and small problem documents."""
from __future__ import annotations

from importlib import resources

import pytest

from sdrank import parse_problem


def load_dataset_text(filename: str) -> str:
    return (resources.files("sdrank") / "datasets" / filename).read_text()


@pytest.fixture(scope="session")
def iter1_text() -> str:
    return load_dataset_text("sales-manager-iter1.json")


@pytest.fixture(scope="session")
def iter2_text() -> str:
    return load_dataset_text("sales-manager-iter2.json")


@pytest.fixture(scope="session")
def iter1_problem(iter1_text):
    return parse_problem(iter1_text)


@pytest.fixture(scope="session")
def iter2_problem(iter2_text):
    return parse_problem(iter2_text)


TINY_FEASIBLE = """{
  "criteria": [{"name": "g1"}, {"name": "g2"}],
  "alternatives": [
    {"name": "x", "performances": {"g1": "1", "g2": "0"}},
    {"name": "y", "performances": {"g1": "0", "g2": "1"}}
  ],
  "comparisons": "x > y"
}"""

TINY_CONTRADICTORY = """{
  "criteria": [{"name": "g1"}, {"name": "g2"}],
  "alternatives": [
    {"name": "x", "performances": {"g1": "1", "g2": "0"}},
    {"name": "y", "performances": {"g1": "0", "g2": "1"}}
  ],
  "comparisons": [
    {"first": "x", "kind": "strict", "second": "y"},
    {"first": "y", "kind": "strict", "second": "x"}
  ]
}"""


@pytest.fixture()
def tiny_feasible_text() -> str:
    return TINY_FEASIBLE


@pytest.fixture()
def tiny_contradictory_text() -> str:
    return TINY_CONTRADICTORY


@pytest.fixture()
def tiny_feasible_problem():
    return parse_problem(TINY_FEASIBLE)


@pytest.fixture()
def tiny_contradictory_problem():
    return parse_problem(TINY_CONTRADICTORY)
