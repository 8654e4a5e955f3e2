"""Shared fixtures: the two-attribute counterexample table and the clinical schema."""

from __future__ import annotations

import pytest

from lazyelicit.utility import Attribute, Outcome, Prospect, SubutilityFunction

# A three-outcome world over two discrete attributes where the product-form
# utility ranks the prospects opposite to their per-attribute expectations.
COUNTEREXAMPLE_ROWS = [
    # (value_y, value_z, u_y, u_z)
    ("y1", "z1", 1.0, 0.0),
    ("y2", "z2", 0.0, 1.0),
    ("y3", "z3", 1 / 3, 1 / 3),
]


@pytest.fixture
def two_attribute_world():
    attributes = (
        Attribute(name="Y", kind="discrete", worst="y2", best="y1"),
        Attribute(name="Z", kind="discrete", worst="z1", best="z2"),
    )
    subutilities = (
        SubutilityFunction(
            owner="Y",
            form="tabulated",
            points=tuple((row[0], row[2]) for row in COUNTEREXAMPLE_ROWS),
        ),
        SubutilityFunction(
            owner="Z",
            form="tabulated",
            points=tuple((row[1], row[3]) for row in COUNTEREXAMPLE_ROWS),
        ),
    )
    return attributes, subutilities


def outcome(row: int) -> Outcome:
    y, z, _, _ = COUNTEREXAMPLE_ROWS[row]
    return Outcome(values=(y, z))


@pytest.fixture
def prospect_even_split() -> Prospect:
    """Half on (y1, z1), half on (y2, z2)."""
    return Prospect(support=((outcome(0), 0.5), (outcome(1), 0.5)))


@pytest.fixture
def prospect_corner_heavy() -> Prospect:
    """A quarter each on the first two outcomes, half on (y3, z3)."""
    return Prospect(
        support=((outcome(0), 0.25), (outcome(1), 0.25), (outcome(2), 0.5))
    )
