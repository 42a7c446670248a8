"""Growing an argument tree around a claim and scoring its arguments.

Two phases: breadth-first generation of supporting/attacking arguments
down to a configured depth, then a scoring pass that asks the backend
for a 0-100 confidence per argument. Backends are pluggable; the mock
backend is fully deterministic under a seed so the whole pipeline can
run offline.
"""

from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Protocol

from claimarg.qbaf import ATTACK, SUPPORT, Argument, Qbaf, Relation, require_valid

log = logging.getLogger(__name__)

FIXED_HALF = "fixed_half"
ESTIMATED = "estimated"

PURPOSE_ARGUMENT = "argument"
PURPOSE_SCORE = "score"
PURPOSE_BASELINE = "baseline"


class BackendError(Exception):
    """The generative backend failed to produce a usable completion."""


class TemplateError(ValueError):
    """A template placeholder could not be resolved."""


class ConfidenceParseError(ValueError):
    def __init__(self, text: str):
        super().__init__(f"no number found in model output: {text!r}")
        self.raw_text = text


@dataclass(frozen=True)
class GenerationParams:
    """Shape of the generated tree and how the claim itself is scored."""

    depth: int = 1
    supporters_per_node: int = 1
    attackers_per_node: int = 1
    claim_base_mode: str = FIXED_HALF

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.supporters_per_node < 0 or self.attackers_per_node < 0:
            raise ValueError("per-node argument counts must be >= 0")
        if self.claim_base_mode not in (FIXED_HALF, ESTIMATED):
            raise ValueError(f"unknown claim base mode {self.claim_base_mode!r}")
        if self.depth > 2:
            log.warning("depth %d is experimental; evaluated settings are 1 and 2", self.depth)


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str

    def render(self, **values: str) -> str:
        try:
            return self.body.format_map(values)
        except KeyError as exc:
            raise TemplateError(
                f"template {self.name!r}: unresolved placeholder {exc.args[0]!r}"
            ) from None
        except (IndexError, ValueError) as exc:
            raise TemplateError(f"template {self.name!r}: {exc}") from None


def load_template(name: str) -> PromptTemplate:
    """Load a named template shipped with the package (``name`` without
    extension)."""
    body = (
        resources.files("claimarg.templates").joinpath(f"{name}.txt").read_text("utf-8")
    )
    return PromptTemplate(name=name, body=body)


class GeneratorBackend(Protocol):
    def complete(self, prompt: str, purpose: str) -> str:
        """Return the model's text for a rendered prompt. ``purpose`` is one
        of argument/score/baseline and may select decoding limits."""
        ...


class MockBackend:
    """Offline stand-in for a language model.

    Deterministic given the seed: output depends only on (seed, purpose,
    prompt). Produces recognisable argument text, numeric confidences for
    scoring prompts, and true/false or step-wise text for baseline prompts.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.calls = 0

    def _digest(self, prompt: str, purpose: str) -> bytes:
        payload = f"{self.seed}|{purpose}|{prompt}".encode("utf-8")
        return hashlib.sha256(payload).digest()

    def complete(self, prompt: str, purpose: str) -> str:
        self.calls += 1
        digest = self._digest(prompt, purpose)
        number = int.from_bytes(digest[:4], "big") % 101
        if purpose == PURPOSE_SCORE:
            return str(number)
        if purpose == PURPOSE_ARGUMENT:
            side = "Supporting" if "supporting" in prompt else "Counter"
            statement = ""
            match = re.search(r"(?:Statement|Motion): (.*)", prompt)
            if match:
                statement = match.group(1).strip()[:40]
            return f"{side} point {digest[:3].hex()} for: {statement}"
        # Baseline prompts: answer in the format the prompt asks for.
        if "0 to 100" in prompt:
            return str(number)
        if "true or false" in prompt:
            return "true" if digest[4] % 2 == 0 else "false"
        return f"Step 1: consider the claim. Step 2: weigh the evidence ({digest[:3].hex()})."


def parse_confidence(text: str) -> float:
    """First number in the text, clamped to [0, 100], mapped to [0, 1]."""
    match = re.search(r"[-+]?(?:\d+(?:\.\d+)?|\.\d+)", text)
    if match is None:
        raise ConfidenceParseError(text)
    value = float(match.group(0))
    return min(max(value, 0.0), 100.0) / 100.0


@dataclass
class Transcript:
    """Ordered record of every prompt/response exchange in one run."""

    turns: list[dict] = field(default_factory=list)

    def record(self, purpose: str, prompt: str, response: str) -> None:
        self.turns.append({"purpose": purpose, "prompt": prompt, "response": response})

    def __len__(self) -> int:
        return len(self.turns)


def complete_with_retry(
    backend: GeneratorBackend,
    prompt: str,
    purpose: str,
    transcript: Transcript | None,
    attempts: int = 2,
) -> str:
    last_error: Exception | None = None
    for _ in range(attempts):
        try:
            text = backend.complete(prompt, purpose)
        except Exception as exc:  # transport errors surface as BackendError
            last_error = exc
            continue
        if transcript is not None:
            transcript.record(purpose, prompt, text)
        if text and text.strip():
            return text.strip()
        last_error = BackendError("empty completion")
    raise BackendError(f"backend failed for {purpose} prompt: {last_error}") from last_error


def generate_baf(
    claim: str,
    backend: GeneratorBackend,
    params: GenerationParams,
    transcript: Transcript | None = None,
    template: PromptTemplate | None = None,
) -> Qbaf:
    """Breadth-first expansion of the claim into a relation tree.

    Every node above the leaf depth receives the configured number of
    supporters then attackers, each from one backend completion. Base
    scores are left unset.
    """
    if not claim or not claim.strip():
        raise ValueError("claim must be non-empty")
    template = template or load_template("argument_generation")

    arguments = [Argument(id="a0", text=claim.strip())]
    relations: list[Relation] = []
    counter = 1
    frontier: list[tuple[str, str, int]] = [("a0", claim.strip(), 0)]
    while frontier:
        parent_id, parent_text, depth = frontier.pop(0)
        if depth >= params.depth:
            continue
        plan = [(SUPPORT, "supporting", "support")] * params.supporters_per_node + [
            (ATTACK, "attacking", "attack")
        ] * params.attackers_per_node
        for polarity, gerund, verb in plan:
            prompt = template.render(
                claim=parent_text,
                supporting_or_attacking=gerund,
                support_or_attack=verb,
            )
            text = complete_with_retry(backend, prompt, PURPOSE_ARGUMENT, transcript)
            node_id = f"a{counter}"
            counter += 1
            arguments.append(Argument(id=node_id, text=text))
            relations.append(Relation(source=node_id, target=parent_id, polarity=polarity))
            frontier.append((node_id, text, depth + 1))
    return require_valid(Qbaf(arguments, relations, root="a0"))


def assign_base_scores(
    baf: Qbaf,
    backend: GeneratorBackend,
    params: GenerationParams,
    transcript: Transcript | None = None,
    template: PromptTemplate | None = None,
    claim_template: PromptTemplate | None = None,
) -> Qbaf:
    """Score every argument, yielding a fully quantified framework.

    Non-root arguments are scored against their parent with the polarity
    wording matching their relation; the root gets 0.5 or its own
    estimation prompt depending on the claim base mode.
    """
    require_valid(baf)
    template = template or load_template("strength_attribution")
    claim_template = claim_template or load_template("claim_strength_attribution")

    scores: dict[str, float] = {}
    root_arg = baf.argument(baf.root)
    if params.claim_base_mode == FIXED_HALF:
        scores[baf.root] = 0.5
    else:
        prompt = claim_template.render(claim=root_arg.text)
        scores[baf.root] = score_with_retry(backend, prompt, transcript)

    for arg in baf.arguments:
        if arg.id == baf.root:
            continue
        relation = baf.outgoing(arg.id)[0]
        parent = baf.argument(relation.target)
        supports = relation.polarity == SUPPORT
        prompt = template.render(
            parent=parent.text,
            argument=arg.text,
            in_favour_of_or_against="in favour of" if supports else "against",
            supports_or_refutes="supports" if supports else "refutes",
        )
        scores[arg.id] = score_with_retry(backend, prompt, transcript)

    rescored = [
        Argument(id=a.id, text=a.text, base_score=scores[a.id]) for a in baf.arguments
    ]
    return require_valid(Qbaf(rescored, baf.relations, baf.root))


def score_with_retry(
    backend: GeneratorBackend, prompt: str, transcript: Transcript | None
) -> float:
    """One confidence query; on an unparseable answer, retry once, then
    fall back to the neutral 0.5 with a logged warning."""
    for attempt in range(2):
        text = complete_with_retry(backend, prompt, PURPOSE_SCORE, transcript)
        try:
            return parse_confidence(text)
        except ConfidenceParseError:
            if attempt == 0:
                continue
            log.warning("unparseable confidence %r; substituting 0.5", text)
            return 0.5
    raise AssertionError("unreachable")
