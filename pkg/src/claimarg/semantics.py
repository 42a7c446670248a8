"""Gradual semantics: bottom-up strength evaluation of argument trees.

Two semantics are registered: the discontinuity-free quantitative
argumentation debate semantics ("df-quad") and the quadratic energy
model ("qem"). A semantics is a pure function from an argument's base
score and the strengths of its attackers and supporters to its own
strength, so new semantics slot in without touching the tree code.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from claimarg.qbaf import Qbaf, require_valid

DF_QUAD = "df-quad"
QEM = "qem"

SemanticsFn = Callable[[float, Sequence[float], Sequence[float]], float]


class SemanticsError(ValueError):
    """Bad input to a semantics function."""


def _check_unit(value: float, what: str) -> float:
    if not (0.0 <= value <= 1.0):
        raise SemanticsError(f"{what} {value} outside [0, 1]")
    return value


def df_quad_aggregate(values: Sequence[float]) -> float:
    """Geometric aggregation: 0 for no children, else 1 - prod(1 - v)."""
    for v in values:
        _check_unit(v, "strength")
    if not values:
        return 0.0
    product = 1.0
    for v in values:
        product *= 1.0 - v
    return 1.0 - product


def df_quad_combine(base: float, agg_attack: float, agg_support: float) -> float:
    """Move the base score toward 0 or 1 by the imbalance between the
    aggregated attack and support strengths."""
    _check_unit(base, "base score")
    _check_unit(agg_attack, "aggregated attack")
    _check_unit(agg_support, "aggregated support")
    if agg_attack == agg_support:
        return base
    if agg_attack > agg_support:
        return base - base * (agg_attack - agg_support)
    return base + (1.0 - base) * (agg_support - agg_attack)


def qem_influence(energy: float) -> float:
    """Saturating influence of a signed energy: max(v,0)^2 / (1 + max(v,0)^2)."""
    if not math.isfinite(energy):
        raise SemanticsError(f"non-finite energy: {energy}")
    clipped = max(energy, 0.0)
    return clipped * clipped / (1.0 + clipped * clipped)


def qem_strength(base: float, energy: float) -> float:
    """base + (1 - base) * h(energy) - base * h(-energy)."""
    _check_unit(base, "base score")
    return base + (1.0 - base) * qem_influence(energy) - base * qem_influence(-energy)


def _df_quad(base: float, attackers: Sequence[float], supporters: Sequence[float]) -> float:
    return df_quad_combine(base, df_quad_aggregate(attackers), df_quad_aggregate(supporters))


def _qem(base: float, attackers: Sequence[float], supporters: Sequence[float]) -> float:
    energy = sum(supporters) - sum(attackers)
    return qem_strength(base, energy)


_REGISTRY: dict[str, SemanticsFn] = {
    DF_QUAD: _df_quad,
    QEM: _qem,
}


def semantics_names() -> list[str]:
    return sorted(_REGISTRY)


def get_semantics(name: str) -> SemanticsFn:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise SemanticsError(
            f"unknown semantics {name!r}; available: {', '.join(semantics_names())}"
        ) from None


def register_semantics(name: str, fn: SemanticsFn) -> None:
    _REGISTRY[name] = fn


def evaluate(qbaf: Qbaf, semantics: str = DF_QUAD) -> dict[str, float]:
    """Strengths for every argument, computed leaves-first in one pass.

    Deterministic: the same framework always yields bit-identical output.
    Children are folded in a fixed order (declaration order of relations).
    """
    fn = get_semantics(semantics)
    require_valid(qbaf)
    strengths: dict[str, float] = {}

    # Post-order without recursion: process a node once all children are done.
    pending = [qbaf.root]
    order: list[str] = []
    while pending:
        node = pending.pop()
        order.append(node)
        pending.extend(rel.source for rel in qbaf.incoming(node))
    for node in reversed(order):
        arg = qbaf.argument(node)
        if arg.base_score is None:
            raise SemanticsError(f"argument {node!r} has no base score")
        attackers = [
            strengths[r.source] for r in qbaf.incoming(node) if r.polarity == "attack"
        ]
        supporters = [
            strengths[r.source] for r in qbaf.incoming(node) if r.polarity == "support"
        ]
        strengths[node] = fn(arg.base_score, attackers, supporters)
    return strengths
