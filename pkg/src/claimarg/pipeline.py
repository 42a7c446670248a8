"""End-to-end claim verification methods.

The argumentative method builds and evaluates an argument tree; the
three baselines (direct question, estimated confidence, chain of
thought) prompt the backend directly. All methods share one decision
rule: a claim is labelled true iff its strength is strictly above 0.5.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from claimarg import generation, semantics
from claimarg.generation import (
    GenerationParams,
    GeneratorBackend,
    Transcript,
    complete_with_retry,
    score_with_retry,
    load_template,
)
from claimarg.qbaf import Qbaf

log = logging.getLogger(__name__)

ARGLLM = "argllm"
DIRECT_QUESTION = "direct_question"
EST_CONFIDENCE = "est_confidence"
CHAIN_OF_THOUGHT = "chain_of_thought"
METHODS = (ARGLLM, DIRECT_QUESTION, EST_CONFIDENCE, CHAIN_OF_THOUGHT)

# Decision threshold for all strength-producing methods. Fixed by design,
# not tuned; exactly 0.5 maps to False because the comparison is strict.
DECISION_THRESHOLD = 0.5

CONDITIONING_TEMPLATE = (
    "Consider the following background information: {information} "
    "Given the background information the following is correct: {claim}"
)


class AnswerParseError(ValueError):
    def __init__(self, text: str):
        super().__init__(f"no true/false answer found in model output: {text!r}")
        self.raw_text = text


@dataclass(frozen=True)
class Claim:
    id: str
    text: str
    context: str | None = None
    gold_label: bool | None = None

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ValueError(f"claim {self.id!r} has empty text")


@dataclass
class Verdict:
    label: bool
    root_strength: float
    method: str
    qbaf: Qbaf | None = None
    strengths: dict[str, float] | None = None
    semantics: str | None = None
    transcript: Transcript = field(default_factory=Transcript)


@dataclass(frozen=True)
class MethodConfig:
    method: str
    backend: GeneratorBackend
    semantics: str = semantics.DF_QUAD
    generation: GenerationParams = field(default_factory=GenerationParams)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def name(self) -> str:
        """Short identifier for result tables."""
        if self.method != ARGLLM:
            return self.method
        mode = "0.5" if self.generation.claim_base_mode == generation.FIXED_HALF else "est"
        return f"argllm-{mode}-d{self.generation.depth}"


def decide(strength: float) -> bool:
    return strength > DECISION_THRESHOLD


def condition_claim(claim: Claim) -> str:
    """Embed the claim in its trusted background context, if any."""
    if claim.context is None:
        return claim.text
    if not claim.context.strip():
        log.warning("claim %s has an empty context; treating as unconditioned", claim.id)
        return claim.text
    return CONDITIONING_TEMPLATE.format(
        information=claim.context.strip(), claim=claim.text
    )


def parse_truth(text: str) -> bool:
    """First standalone 'true' or 'false' token, case-insensitive."""
    match = re.search(r"\b(true|false)\b", text, re.IGNORECASE)
    if match is None:
        raise AnswerParseError(text)
    return match.group(1).lower() == "true"


def verify_argllm(claim: Claim, config: MethodConfig) -> Verdict:
    """Generate, score, and evaluate an argument tree for the claim.

    The returned framework and strengths are the decision's faithful
    explanation: re-evaluating them reproduces the root strength.
    """
    transcript = Transcript()
    text = condition_claim(claim)
    baf = generation.generate_baf(text, config.backend, config.generation, transcript)
    qbaf = generation.assign_base_scores(baf, config.backend, config.generation, transcript)
    strengths = semantics.evaluate(qbaf, config.semantics)
    root_strength = strengths[qbaf.root]
    return Verdict(
        label=decide(root_strength),
        root_strength=root_strength,
        method=config.name,
        qbaf=qbaf,
        strengths=strengths,
        semantics=config.semantics,
        transcript=transcript,
    )


def verify_direct_question(claim: Claim, config: MethodConfig) -> Verdict:
    transcript = Transcript()
    prompt = load_template("direct_question").render(claim=condition_claim(claim))
    label = _truth_with_retry(config.backend, prompt, transcript)
    return Verdict(
        label=label,
        root_strength=1.0 if label else 0.0,
        method=config.name,
        transcript=transcript,
    )


def verify_est_confidence(claim: Claim, config: MethodConfig) -> Verdict:
    transcript = Transcript()
    prompt = load_template("est_confidence").render(claim=condition_claim(claim))
    strength = score_with_retry(config.backend, prompt, transcript)
    return Verdict(
        label=decide(strength),
        root_strength=strength,
        method=config.name,
        transcript=transcript,
    )


def verify_chain_of_thought(claim: Claim, config: MethodConfig) -> Verdict:
    transcript = Transcript()
    text = condition_claim(claim)
    reasoning_prompt = load_template("cot_reasoning").render(claim=text)
    reasoning = complete_with_retry(
        config.backend, reasoning_prompt, generation.PURPOSE_BASELINE, transcript
    )
    decision_prompt = load_template("cot_decision").render(claim=text, reasoning=reasoning)
    label = _truth_with_retry(config.backend, decision_prompt, transcript)
    return Verdict(
        label=label,
        root_strength=1.0 if label else 0.0,
        method=config.name,
        transcript=transcript,
    )


def _truth_with_retry(
    backend: GeneratorBackend, prompt: str, transcript: Transcript
) -> bool:
    for attempt in range(2):
        text = complete_with_retry(
            backend, prompt, generation.PURPOSE_BASELINE, transcript
        )
        try:
            return parse_truth(text)
        except AnswerParseError:
            if attempt == 1:
                raise
    raise AssertionError("unreachable")


_DISPATCH = {
    ARGLLM: verify_argllm,
    DIRECT_QUESTION: verify_direct_question,
    EST_CONFIDENCE: verify_est_confidence,
    CHAIN_OF_THOUGHT: verify_chain_of_thought,
}


def verify(claim: Claim, config: MethodConfig) -> Verdict:
    return _DISPATCH[config.method](claim, config)
