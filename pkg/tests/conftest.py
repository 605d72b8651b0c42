"""
Pytest configuration and fixtures for domkit tests.
"""

from pathlib import Path
from typing import Callable

import pytest

from domkit.basis import FiniteBasis, lift_antichain, one_point_basis, poset_from_relation
from domkit.codec import serialize_basis
from domkit.context import WorkbenchContextProvider
from domkit.terms import BOTTOM, Atom
from domkit.workflow import CommandRunner

A, B, C, D = Atom("a"), Atom("b"), Atom("c"), Atom("d")
T, F = Atom("t"), Atom("f")
TOP = Atom("top")


@pytest.fixture
def flat3() -> FiniteBasis:
    """Return the flat basis {bot, t, f}."""
    return lift_antichain(["t", "f"], "flat-3")


@pytest.fixture
def flat2() -> FiniteBasis:
    """Return the two-element flat basis {bot, a}."""
    return lift_antichain(["a"], "flat-2")


@pytest.fixture
def xy_flat3() -> FiniteBasis:
    """Return the flat basis {bot, x, y}."""
    return lift_antichain(["x", "y"], "flat-xy")


@pytest.fixture
def one_point() -> FiniteBasis:
    """Return the one-point basis {bot}."""
    return one_point_basis()


@pytest.fixture
def chain3() -> FiniteBasis:
    """Return the chain bot < a < b."""
    return poset_from_relation([BOTTOM, A, B], [(BOTTOM, A), (A, B)], "chain-3")


@pytest.fixture
def diamond() -> FiniteBasis:
    """Return the diamond bot < a, b < top."""
    return poset_from_relation(
        [BOTTOM, A, B, TOP], [(BOTTOM, A), (BOTTOM, B), (A, TOP), (B, TOP)], "diamond"
    )


@pytest.fixture
def butterfly() -> FiniteBasis:
    """Return the butterfly: a and b both below the incomparable c and d."""
    return poset_from_relation(
        [BOTTOM, A, B, C, D],
        [(BOTTOM, A), (BOTTOM, B), (A, C), (A, D), (B, C), (B, D)],
        "butterfly",
    )


@pytest.fixture
def write_basis(tmp_path: Path) -> Callable[[FiniteBasis, str], str]:
    """Return a helper writing a basis to a temporary JSON file."""

    def write(basis: FiniteBasis, filename: str = "") -> str:
        path = tmp_path / (filename or f"{basis.name}.json")
        path.write_text(serialize_basis(basis), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def runner() -> CommandRunner:
    """Return a command runner with default limits."""
    return CommandRunner(WorkbenchContextProvider.get_context_from_params())
