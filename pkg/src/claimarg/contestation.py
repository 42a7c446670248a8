"""Contesting a framework: edits, recomputed strengths, direction checks.

Users challenge a verdict by changing an argument's intrinsic strength,
adding a new argument, or removing a subtree. Every edit is applied to
a copy, both versions are evaluated, and the observed effect on the
root is compared against the direction the contestability results
predict from the edited argument's pro/con status.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from claimarg import semantics as semantics_mod
from claimarg.pipeline import decide
from claimarg.qbaf import (
    ATTACK,
    CON,
    POLARITIES,
    PRO,
    Argument,
    Qbaf,
    QbafError,
    Relation,
    classify,
    path_to_root,
    require_valid,
)
from claimarg.random_trees import random_tree

SET_BASE_SCORE = "set_base_score"
ADD_ARGUMENT = "add_argument"
REMOVE_ARGUMENT = "remove_argument"

NONDECREASE = "nondecrease"
NONINCREASE = "nonincrease"
NONE = "none"


class EditError(QbafError):
    """An edit cannot be applied to the given framework."""


@dataclass(frozen=True)
class NewArgument:
    text: str
    polarity: str
    base_score: float
    parent: str


@dataclass(frozen=True)
class ContestationEdit:
    """One user intervention. ``target`` names the edited argument; for
    additions it is the id the new argument will take."""

    kind: str
    target: str
    new_score: float | None = None
    new_argument: NewArgument | None = None

    def __post_init__(self):
        if self.kind == SET_BASE_SCORE:
            if self.new_score is None:
                raise ValueError("set_base_score requires new_score")
        elif self.kind == ADD_ARGUMENT:
            if self.new_argument is None:
                raise ValueError("add_argument requires new_argument")
        elif self.kind != REMOVE_ARGUMENT:
            raise ValueError(f"unknown edit kind {self.kind!r}")


@dataclass
class ContestationDiff:
    edit: ContestationEdit
    before_root_strength: float
    after_root_strength: float
    before_label: bool
    after_label: bool
    predicted_direction: str
    strength_deltas: dict[str, float]

    @property
    def flipped(self) -> bool:
        return self.before_label != self.after_label


def _check_edit(qbaf: Qbaf, edit: ContestationEdit) -> None:
    if edit.kind == SET_BASE_SCORE:
        qbaf.argument(edit.target)
        assert edit.new_score is not None
        if not (0.0 <= edit.new_score <= 1.0):
            raise EditError(f"new score {edit.new_score} outside [0, 1]")
    elif edit.kind == ADD_ARGUMENT:
        new = edit.new_argument
        assert new is not None
        if edit.target in qbaf:
            raise EditError(f"argument id {edit.target!r} already exists")
        qbaf.argument(new.parent)
        if new.polarity not in POLARITIES:
            raise EditError(f"unknown polarity {new.polarity!r}")
        if not (0.0 <= new.base_score <= 1.0):
            raise EditError(f"base score {new.base_score} outside [0, 1]")
    else:
        qbaf.argument(edit.target)
        if edit.target == qbaf.root:
            raise EditError("cannot remove the root argument")


def predict_direction(qbaf: Qbaf, edit: ContestationEdit) -> str:
    """Direction the root strength is guaranteed (weakly) to move.

    Raising a pro argument's base score, or adding a pro argument, never
    decreases the root strength; con inverts; removals carry no
    guarantee. Edits to the root itself follow the sign of the score
    change, since both semantics are monotone in an argument's own base
    score.
    """
    _check_edit(qbaf, edit)
    if edit.kind == REMOVE_ARGUMENT:
        return NONE
    if edit.kind == SET_BASE_SCORE:
        assert edit.new_score is not None
        current = qbaf.argument(edit.target).base_score
        if current is None:
            raise EditError(f"argument {edit.target!r} has no base score yet")
        if edit.new_score == current:
            return NONE
        increase = edit.new_score > current
        if edit.target == qbaf.root:
            return NONDECREASE if increase else NONINCREASE
        side = classify(qbaf, edit.target)
        if (side == PRO) == increase:
            return NONDECREASE
        return NONINCREASE
    # Addition: classify the new argument by attack parity in the edited tree.
    new = edit.new_argument
    assert new is not None
    attacks = 1 if new.polarity == ATTACK else 0
    if new.parent != qbaf.root:
        attacks += sum(
            1 for rel in path_to_root(qbaf, new.parent) if rel.polarity == ATTACK
        )
    return NONDECREASE if attacks % 2 == 0 else NONINCREASE


def apply_edit(
    qbaf: Qbaf, edit: ContestationEdit, semantics: str = semantics_mod.DF_QUAD
) -> tuple[Qbaf, ContestationDiff]:
    """Return the edited copy and a diff of both evaluations; the input
    framework is never mutated."""
    require_valid(qbaf)
    prediction = predict_direction(qbaf, edit)

    if edit.kind == SET_BASE_SCORE:
        arguments = [
            Argument(a.id, a.text, edit.new_score if a.id == edit.target else a.base_score)
            for a in qbaf.arguments
        ]
        edited = Qbaf(arguments, qbaf.relations, qbaf.root)
    elif edit.kind == ADD_ARGUMENT:
        new = edit.new_argument
        assert new is not None
        edited = Qbaf(
            list(qbaf.arguments) + [Argument(edit.target, new.text, new.base_score)],
            list(qbaf.relations)
            + [Relation(source=edit.target, target=new.parent, polarity=new.polarity)],
            qbaf.root,
        )
    else:
        removed = qbaf.descendants(edit.target)
        edited = Qbaf(
            [a for a in qbaf.arguments if a.id not in removed],
            [r for r in qbaf.relations if r.source not in removed and r.target not in removed],
            qbaf.root,
        )
    require_valid(edited)

    before = semantics_mod.evaluate(qbaf, semantics)
    after = semantics_mod.evaluate(edited, semantics)
    deltas = {
        arg_id: after[arg_id] - before[arg_id] for arg_id in before if arg_id in after
    }
    diff = ContestationDiff(
        edit=edit,
        before_root_strength=before[qbaf.root],
        after_root_strength=after[qbaf.root],
        before_label=decide(before[qbaf.root]),
        after_label=decide(after[qbaf.root]),
        predicted_direction=prediction,
        strength_deltas=deltas,
    )
    return edited, diff


# --- randomized property suites ---------------------------------------------

@dataclass
class PropertyReport:
    semantics: str
    strict: bool
    trials: int
    checked: int
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


# Weak inequalities hold exactly in real arithmetic; allow rounding hair.
_WEAK_TOLERANCE = 1e-12


def check_properties(
    semantics: str,
    trials: int,
    seed: int = 0,
    strict: bool | None = None,
) -> PropertyReport:
    """Randomized contestability trials: random valid trees, random
    qualifying edits, observed root movement checked against prediction.

    Weak inequalities are asserted for every trial. With ``strict`` (the
    default for the energy-based semantics), strict inequalities are
    additionally required on interior instances: all base scores inside
    (0, 1), the pre-edit root strength in (0, 1), and an edit that
    actually moves the edited argument's own strength.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if strict is None:
        strict = semantics == semantics_mod.QEM
    rng = random.Random(seed)
    lo, hi = (0.01, 0.99) if strict else (0.0, 1.0)
    report = PropertyReport(semantics=semantics, strict=strict, trials=trials, checked=0)

    for trial in range(trials):
        tree = random_tree(
            rng, max_depth=3, max_children=2, min_score=lo, max_score=hi,
            ensure_non_root=True,
        )
        if trial % 2 == 0:
            target = rng.choice([a.id for a in tree.arguments if a.id != tree.root])
            old = tree.argument(target).base_score
            assert old is not None
            new_score = rng.uniform(lo, hi)
            if abs(new_score - old) < 0.05:
                new_score = hi if old < (lo + hi) / 2 else lo
            edit = ContestationEdit(SET_BASE_SCORE, target, new_score=new_score)
        else:
            parent = rng.choice([a.id for a in tree.arguments])
            edit = ContestationEdit(
                ADD_ARGUMENT,
                "added",
                new_argument=NewArgument(
                    text="contesting argument",
                    polarity=rng.choice(("attack", "support")),
                    base_score=rng.uniform(max(lo, 0.05), hi),
                    parent=parent,
                ),
            )
        edited, diff = apply_edit(tree, edit, semantics)
        change = diff.after_root_strength - diff.before_root_strength
        report.checked += 1

        if diff.predicted_direction == NONDECREASE and change < -_WEAK_TOLERANCE:
            report.violations.append(
                f"trial {trial}: predicted nondecrease, root moved {change:+.3e}"
            )
        elif diff.predicted_direction == NONINCREASE and change > _WEAK_TOLERANCE:
            report.violations.append(
                f"trial {trial}: predicted nonincrease, root moved {change:+.3e}"
            )

        if strict and 0.0 < diff.before_root_strength < 1.0:
            if edit.kind == SET_BASE_SCORE:
                target_moved = diff.strength_deltas[edit.target] != 0.0
            else:
                target_moved = edit.new_argument.base_score > 0.0
            if target_moved and diff.predicted_direction != NONE and change == 0.0:
                report.violations.append(
                    f"trial {trial}: strict {diff.predicted_direction} expected, "
                    "root strength unchanged"
                )
    return report


def df_quad_saturation_example() -> tuple[Qbaf, ContestationEdit]:
    """A constructed instance where a pro edit leaves the root unchanged.

    The root's aggregated support is already saturated at 1 by a
    full-strength supporter, so raising another supporter's base score
    cannot move the root: the weak inequality holds with equality,
    showing the non-strict semantics is only weakly contestable.
    """
    qbaf = Qbaf(
        [
            Argument("root", "claim", 0.5),
            Argument("s1", "decisive supporter", 1.0),
            Argument("s2", "redundant supporter", 0.5),
            Argument("a1", "attacker", 0.3),
        ],
        [
            Relation("s1", "root", "support"),
            Relation("s2", "root", "support"),
            Relation("a1", "root", "attack"),
        ],
        root="root",
    )
    edit = ContestationEdit(SET_BASE_SCORE, "s2", new_score=0.9)
    return qbaf, edit


# --- serialization -----------------------------------------------------------

def edit_to_dict(edit: ContestationEdit) -> dict:
    doc: dict = {"kind": edit.kind, "target": edit.target}
    if edit.new_score is not None:
        doc["new_score"] = edit.new_score
    if edit.new_argument is not None:
        doc["new_argument"] = {
            "text": edit.new_argument.text,
            "polarity": edit.new_argument.polarity,
            "base_score": edit.new_argument.base_score,
            "parent": edit.new_argument.parent,
        }
    return doc


def edit_from_dict(doc: dict) -> ContestationEdit:
    try:
        new_argument = None
        if "new_argument" in doc:
            raw = doc["new_argument"]
            new_argument = NewArgument(
                text=raw.get("text", ""),
                polarity=raw["polarity"],
                base_score=float(raw["base_score"]),
                parent=str(raw["parent"]),
            )
        return ContestationEdit(
            kind=doc["kind"],
            target=str(doc["target"]),
            new_score=None if doc.get("new_score") is None else float(doc["new_score"]),
            new_argument=new_argument,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise EditError(f"malformed edit record: {exc}") from exc


def diff_to_dict(diff: ContestationDiff) -> dict:
    return {
        "edit": edit_to_dict(diff.edit),
        "before_root_strength": diff.before_root_strength,
        "after_root_strength": diff.after_root_strength,
        "before_label": diff.before_label,
        "after_label": diff.after_label,
        "flipped": diff.flipped,
        "predicted_direction": diff.predicted_direction,
        "strength_deltas": diff.strength_deltas,
    }
