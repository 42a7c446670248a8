"""Argument trees: arguments, attack/support relations, base scores.

A framework is a tree rooted at the claim. Edges point child -> parent
(the source attacks or supports the target), so "one outgoing edge per
non-root argument" is exactly the single-path-to-root condition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

ATTACK = "attack"
SUPPORT = "support"
POLARITIES = (ATTACK, SUPPORT)

PRO = "pro"
CON = "con"


class QbafError(Exception):
    """Base error for framework operations."""


class UnknownArgumentError(QbafError):
    def __init__(self, arg_id: str):
        super().__init__(f"unknown argument: {arg_id!r}")
        self.arg_id = arg_id


class RootArgumentError(QbafError):
    """The operation is undefined for the root argument."""


class InvalidFrameworkError(QbafError):
    """A framework failed validation where a valid one was required."""

    def __init__(self, violations: list["Violation"]):
        super().__init__(
            "invalid framework: " + "; ".join(v.message for v in violations)
        )
        self.violations = violations


@dataclass(frozen=True)
class Argument:
    """One node of the tree. ``base_score`` is None while only the bare
    relation structure exists (before intrinsic strengths are assigned)."""

    id: str
    text: str = ""
    base_score: float | None = None


@dataclass(frozen=True)
class Relation:
    """A directed edge: ``source`` attacks or supports ``target``."""

    source: str
    target: str
    polarity: str


@dataclass(frozen=True)
class Violation:
    """One failed validity condition, pointing at the offending element."""

    code: str
    subject: str
    message: str


class Qbaf:
    """An immutable argument tree.

    Construction does not validate; call :func:`validate` (or build via
    modules that guarantee validity). All accessors are read-only, so
    instances are safe to share across threads.
    """

    __slots__ = ("_arguments", "_relations", "root", "_by_id", "_incoming", "_outgoing")

    def __init__(
        self,
        arguments: Iterable[Argument],
        relations: Iterable[Relation],
        root: str,
    ):
        self._arguments: tuple[Argument, ...] = tuple(arguments)
        self._relations: tuple[Relation, ...] = tuple(relations)
        self.root = root
        self._by_id = {a.id: a for a in self._arguments}
        self._incoming: dict[str, list[Relation]] = {a.id: [] for a in self._arguments}
        self._outgoing: dict[str, list[Relation]] = {a.id: [] for a in self._arguments}
        for rel in self._relations:
            if rel.target in self._incoming:
                self._incoming[rel.target].append(rel)
            if rel.source in self._outgoing:
                self._outgoing[rel.source].append(rel)

    @property
    def arguments(self) -> tuple[Argument, ...]:
        return self._arguments

    @property
    def relations(self) -> tuple[Relation, ...]:
        return self._relations

    def __contains__(self, arg_id: str) -> bool:
        return arg_id in self._by_id

    def __len__(self) -> int:
        return len(self._arguments)

    def argument(self, arg_id: str) -> Argument:
        try:
            return self._by_id[arg_id]
        except KeyError:
            raise UnknownArgumentError(arg_id) from None

    def incoming(self, arg_id: str) -> list[Relation]:
        """Relations whose target is ``arg_id`` (edges from its children)."""
        self.argument(arg_id)
        return list(self._incoming[arg_id])

    def outgoing(self, arg_id: str) -> list[Relation]:
        self.argument(arg_id)
        return list(self._outgoing[arg_id])

    def attackers(self, arg_id: str) -> set[str]:
        return {r.source for r in self.incoming(arg_id) if r.polarity == ATTACK}

    def supporters(self, arg_id: str) -> set[str]:
        return {r.source for r in self.incoming(arg_id) if r.polarity == SUPPORT}

    def is_leaf(self, arg_id: str) -> bool:
        return not self.incoming(arg_id)

    def descendants(self, arg_id: str) -> set[str]:
        """All arguments in the subtree rooted at ``arg_id`` (inclusive)."""
        self.argument(arg_id)
        seen = {arg_id}
        frontier = [arg_id]
        while frontier:
            current = frontier.pop()
            for rel in self._incoming.get(current, []):
                if rel.source not in seen:
                    seen.add(rel.source)
                    frontier.append(rel.source)
        return seen

    def __iter__(self) -> Iterator[Argument]:
        return iter(self._arguments)


def validate(qbaf: Qbaf) -> list[Violation]:
    """Check every structural invariant; an empty list means valid.

    Violations are data, not exceptions: each one names the offending
    argument or relation and the condition it breaks.
    """
    violations: list[Violation] = []
    seen_ids: set[str] = set()
    for arg in qbaf.arguments:
        if arg.id in seen_ids:
            violations.append(
                Violation("duplicate-id", arg.id, f"duplicate argument id {arg.id!r}")
            )
        seen_ids.add(arg.id)
        if arg.base_score is not None and not (0.0 <= arg.base_score <= 1.0):
            violations.append(
                Violation(
                    "score-out-of-range",
                    arg.id,
                    f"base score {arg.base_score} of {arg.id!r} outside [0, 1]",
                )
            )

    if qbaf.root not in seen_ids:
        violations.append(
            Violation("unknown-root", qbaf.root, f"root {qbaf.root!r} is not an argument")
        )
        return violations

    seen_pairs: set[tuple[str, str]] = set()
    for rel in qbaf.relations:
        subject = f"{rel.source}->{rel.target}"
        if rel.polarity not in POLARITIES:
            violations.append(
                Violation("bad-polarity", subject, f"unknown polarity {rel.polarity!r}")
            )
        if rel.source == rel.target:
            violations.append(
                Violation("self-relation", subject, f"self-relation on {rel.source!r}")
            )
        if (rel.source, rel.target) in seen_pairs:
            violations.append(
                Violation(
                    "duplicate-relation",
                    subject,
                    f"pair ({rel.source!r}, {rel.target!r}) appears more than once",
                )
            )
        seen_pairs.add((rel.source, rel.target))
        for endpoint in (rel.source, rel.target):
            if endpoint not in seen_ids:
                violations.append(
                    Violation(
                        "unknown-endpoint",
                        subject,
                        f"relation endpoint {endpoint!r} is not an argument",
                    )
                )

    if violations:
        # Graph-level checks assume well-formed elements.
        return violations

    for arg in qbaf.arguments:
        out = qbaf.outgoing(arg.id)
        if arg.id == qbaf.root:
            if out:
                violations.append(
                    Violation(
                        "root-outgoing",
                        arg.id,
                        f"root {arg.id!r} has outgoing relations",
                    )
                )
        elif len(out) == 0:
            violations.append(
                Violation(
                    "disconnected",
                    arg.id,
                    f"argument {arg.id!r} has no path to the root",
                )
            )
        elif len(out) > 1:
            violations.append(
                Violation(
                    "multiple-outgoing",
                    arg.id,
                    f"multiple outgoing relations from {arg.id!r}",
                )
            )

    violations.extend(_find_cycles(qbaf))
    if violations:
        return violations

    # With one outgoing edge per non-root and no cycles, walking edges
    # from any argument must terminate at the root.
    for arg in qbaf.arguments:
        if arg.id == qbaf.root:
            continue
        current = arg.id
        for _ in range(len(qbaf)):
            out = qbaf.outgoing(current)
            if not out:
                break
            current = out[0].target
        if current != qbaf.root:
            violations.append(
                Violation(
                    "disconnected",
                    arg.id,
                    f"argument {arg.id!r} has no path to the root",
                )
            )
    return violations


def _find_cycles(qbaf: Qbaf) -> list[Violation]:
    violations = []
    colors: dict[str, int] = {}  # 0 unseen, 1 on stack, 2 done

    def visit(node: str, stack: list[str]) -> None:
        colors[node] = 1
        stack.append(node)
        for rel in qbaf.outgoing(node):
            nxt = rel.target
            state = colors.get(nxt, 0)
            if state == 0:
                visit(nxt, stack)
            elif state == 1:
                cycle = stack[stack.index(nxt):] + [nxt]
                violations.append(
                    Violation(
                        "cyclic-path",
                        nxt,
                        "cyclic path: " + " -> ".join(cycle),
                    )
                )
        stack.pop()
        colors[node] = 2

    for arg in qbaf.arguments:
        if colors.get(arg.id, 0) == 0:
            visit(arg.id, [])
    return violations


def require_valid(qbaf: Qbaf) -> Qbaf:
    violations = validate(qbaf)
    if violations:
        raise InvalidFrameworkError(violations)
    return qbaf


def path_to_root(qbaf: Qbaf, arg_id: str) -> list[Relation]:
    """The unique edge sequence from ``arg_id`` up to the root.

    Precondition: the framework is valid and ``arg_id`` is not the root.
    """
    qbaf.argument(arg_id)
    if arg_id == qbaf.root:
        raise RootArgumentError("the root has no path to itself")
    path: list[Relation] = []
    current = arg_id
    while current != qbaf.root:
        out = qbaf.outgoing(current)
        if len(out) != 1 or len(path) > len(qbaf):
            raise InvalidFrameworkError(
                [Violation("not-a-tree", current, f"no unique path from {arg_id!r} to root")]
            )
        path.append(out[0])
        current = out[0].target
    return path


def classify(qbaf: Qbaf, arg_id: str) -> str:
    """``pro`` if the path to the root crosses an even number of attacks,
    ``con`` if odd."""
    attacks = sum(1 for rel in path_to_root(qbaf, arg_id) if rel.polarity == ATTACK)
    return PRO if attacks % 2 == 0 else CON


# --- canonical serialization -------------------------------------------------

def to_dict(qbaf: Qbaf, strengths: dict[str, dict[str, float]] | None = None) -> dict:
    doc: dict = {
        "root": qbaf.root,
        "arguments": [
            {"id": a.id, "text": a.text, "base_score": a.base_score}
            for a in qbaf.arguments
        ],
        "relations": [
            {"source": r.source, "target": r.target, "polarity": r.polarity}
            for r in qbaf.relations
        ],
    }
    if strengths is not None:
        doc["strengths"] = strengths
    return doc


def from_dict(doc: dict) -> Qbaf:
    try:
        arguments = [
            Argument(
                id=str(a["id"]),
                text=a.get("text", ""),
                base_score=None if a.get("base_score") is None else float(a["base_score"]),
            )
            for a in doc["arguments"]
        ]
        relations = [
            Relation(str(r["source"]), str(r["target"]), str(r["polarity"]))
            for r in doc["relations"]
        ]
        root = str(doc["root"])
    except (KeyError, TypeError) as exc:
        raise QbafError(f"malformed framework document: {exc}") from exc
    return Qbaf(arguments, relations, root)


def to_json(qbaf: Qbaf, strengths: dict[str, dict[str, float]] | None = None) -> str:
    return json.dumps(to_dict(qbaf, strengths), indent=2)


def from_json(text: str) -> Qbaf:
    return from_dict(json.loads(text))
