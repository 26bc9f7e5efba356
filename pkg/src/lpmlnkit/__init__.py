"""LP^MLN reasoning: grounding, stable models, probabilities, weak-constraint
translations and a P-log front end."""

__version__ = "0.1.0"
