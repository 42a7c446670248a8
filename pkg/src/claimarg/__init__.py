"""Claim verification with quantitative bipolar argumentation frameworks.

Builds argument trees around input claims, scores them with a generative
backend, evaluates them under gradual semantics, and lets users contest
the result by editing the framework.
"""

from claimarg.qbaf import Argument, Qbaf, Relation, validate
from claimarg.semantics import evaluate, semantics_names

__all__ = [
    "Argument",
    "Qbaf",
    "Relation",
    "validate",
    "evaluate",
    "semantics_names",
]

__version__ = "0.1.0"
