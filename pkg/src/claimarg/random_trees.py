"""Seeded random argument trees for property suites and fuzz tests."""

from __future__ import annotations

import random

from claimarg.qbaf import ATTACK, SUPPORT, Argument, Qbaf, Relation


def random_tree(
    rng: random.Random,
    max_depth: int = 4,
    max_children: int = 3,
    min_score: float = 0.0,
    max_score: float = 1.0,
    ensure_non_root: bool = False,
) -> Qbaf:
    """A valid random tree with base scores uniform in [min_score, max_score].

    ``ensure_non_root`` forces at least one child of the root so edit
    trials always have a non-root target.
    """
    def score() -> float:
        return rng.uniform(min_score, max_score)

    arguments = [Argument(id="n0", text="root", base_score=score())]
    relations: list[Relation] = []
    counter = 1
    frontier = [("n0", 0)]
    while frontier:
        parent, depth = frontier.pop(0)
        if depth >= max_depth:
            continue
        n_children = rng.randint(0, max_children)
        if parent == "n0" and ensure_non_root and n_children == 0:
            n_children = 1
        for _ in range(n_children):
            node = f"n{counter}"
            counter += 1
            polarity = rng.choice((ATTACK, SUPPORT))
            arguments.append(Argument(id=node, text=f"argument {node}", base_score=score()))
            relations.append(Relation(source=node, target=parent, polarity=polarity))
            frontier.append((node, depth + 1))
    return Qbaf(arguments, relations, root="n0")
