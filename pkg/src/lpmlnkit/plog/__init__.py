"""P-log front end."""
from .semantics import (
    WorldReport, check_conditions, possible_worlds, require_conditions, tau,
    validate_conditions,
)
from .syntax import PlogProgram, ground_plog, parse_plog
from .translate import crosscheck, phi, plog2lpmln, sigma3

__all__ = [
    "PlogProgram", "WorldReport", "check_conditions", "crosscheck", "ground_plog",
    "parse_plog", "phi", "plog2lpmln", "possible_worlds", "require_conditions",
    "sigma3", "tau", "validate_conditions",
]
