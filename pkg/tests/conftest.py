from pathlib import Path

import pytest

from lpmlnkit.grounder import ground
from lpmlnkit.syntax import parse_formula, parse_lpmln

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def gp_of(text: str):
    return ground(parse_lpmln(text))


def atoms(*names):
    """frozenset of atoms from their textual form, e.g. atoms("p", "bird(jo)")."""
    return frozenset(parse_formula(n) for n in names)


@pytest.fixture
def programs() -> Path:
    return PROGRAMS
