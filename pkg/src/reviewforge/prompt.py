"""Venue-aware multimodal prompt assembly and desk-scale prompt tuning.

The assembled system prompt embeds the output contract (exact section headers
plus the Action:Objective[Locator] grammar) that the review parser anchors
on: that contract is the bridge between free-text generation and
deterministic parsing. Tuning is greedy hill-climbing over a fixed edit menu,
scored by the composite metric S = lambda1*ROUGE-L + lambda2*embedding-F1.
"""

from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .embedding import TokenEmbedder
from .ingest.types import CompositeImage, HierarchicalSummary
from .llm import ChatMessage, ImagePart, ModelConfig, Provider, ProviderError, TextPart, complete
from .metrics import embed_sim, rouge_l
from .retrieval import ReviewGuidance
from .review import STRENGTHS_HEADER, SUMMARY_HEADER, TODO_HEADER, WEAKNESSES_HEADER

logger = logging.getLogger(__name__)

DEFAULT_DIMENSIONS = ("originality", "soundness", "clarity", "significance")
DEFAULT_LAMBDA1 = 0.5
DEFAULT_LAMBDA2 = 0.5

NO_GUIDANCE_MARKER = "no venue guidance available"

FIGURE_INSTRUCTION = (
    "Engage explicitly with the figures and tables visible in the attached "
    "page composite: describe what they show and whether they support the claims."
)

DEFAULT_LOCATOR_INSTRUCTION = (
    "Every to-do item must end with a precise locator in square brackets "
    "referencing a section, page, figure, or table of the manuscript, "
    'for example "[Section 4.1]", "[Page 5. Figure 3]", or "[Section 1. L12-L18]".'
)

_TODO_EXAMPLE_LINES = (
    "- Revise introduction: Describe the research gap [Section 1. L12-L18]",
    "- Update Figure 3 caption: Improve interpretability with detailed descriptions [Page 5. Figure 3]",
    "- Add citation: Ensure academic rigor for metric selections [Section 4.1]",
)


@dataclass(frozen=True)
class VenueProfile:
    venue: str
    dimensions: tuple[str, ...] = DEFAULT_DIMENSIONS
    formatting_instructions: str = "Write the review in plain markdown."
    locator_instruction: str = DEFAULT_LOCATOR_INSTRUCTION

    def __post_init__(self):
        if not self.dimensions:
            raise ValueError("profile needs at least one review dimension")


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    summary_text: Optional[str]
    guidance_block: str
    image: Optional[CompositeImage]
    fingerprint: str

    @property
    def has_image(self) -> bool:
        return self.image is not None

    @property
    def has_summary(self) -> bool:
        return self.summary_text is not None

    def to_messages(self) -> list[ChatMessage]:
        parts: list = []
        if self.summary_text is not None:
            parts.append(TextPart(f"Condensed manuscript:\n\n{self.summary_text}"))
        parts.append(TextPart(self.guidance_block))
        if self.image is not None:
            parts.append(ImagePart(data=self.image.data, format=self.image.format))
        return [
            ChatMessage.text("system", self.system_text),
            ChatMessage(role="user", parts=tuple(parts)),
        ]


def output_contract_text(profile: VenueProfile) -> str:
    """The exact section headers and to-do grammar the parser relies on."""
    dimension_headers = "\n".join(f"## {d.capitalize()}" for d in profile.dimensions)
    examples = "\n".join(_TODO_EXAMPLE_LINES)
    return (
        "Structure the review exactly with these markdown headers, in order:\n"
        f"{SUMMARY_HEADER}\n{dimension_headers}\n{STRENGTHS_HEADER}\n{WEAKNESSES_HEADER}\n{TODO_HEADER}\n\n"
        f"Under {TODO_HEADER}, write each item on its own line in the form "
        "`Action: Objective [Locator]` where Action is one executable instruction, "
        "Objective is its rationale, and Locator is one of `Section d`, `Section d.d`, "
        "`Section d. La-Lb`, `Page d`, `Page d. Figure d`, `Figure d`, or `Table d`. "
        "For example:\n"
        f"{examples}"
    )


def build_system_text(profile: VenueProfile, include_figures: bool) -> str:
    dims = ", ".join(profile.dimensions)
    lines = [
        f"You are an experienced peer reviewer for {profile.venue}. "
        f"Assess the manuscript along these dimensions, in this order: {dims}.",
        profile.formatting_instructions,
        profile.locator_instruction,
    ]
    if include_figures:
        lines.append(FIGURE_INSTRUCTION)
    lines.append(output_contract_text(profile))
    return "\n\n".join(lines)


def assemble_review_prompt(
    summary: Optional[HierarchicalSummary],
    guidance: Optional[ReviewGuidance],
    image: Optional[CompositeImage],
    profile: VenueProfile,
) -> PromptBundle:
    """Assemble the multimodal review prompt for one manuscript.

    Text-only ablation passes image=None (the figure instruction is then
    omitted); image-only passes summary=None. At least one of the two must be
    present. Absent guidance becomes a marked empty block.
    """
    if summary is None and image is None:
        raise ValueError("prompt needs a summary, an image, or both")
    if summary is not None and not summary.rendered_text.strip():
        raise ValueError("summary must be non-empty when provided")

    system_text = build_system_text(profile, include_figures=image is not None)

    if guidance is not None and guidance.aspects:
        aspect_lines = "\n".join(f"- {a}" for a in guidance.aspects)
        guidance_block = (
            "Review practices at this venue, distilled from prior reviews:\n" + aspect_lines
        )
    else:
        guidance_block = f"Venue guidance: {NO_GUIDANCE_MARKER}."

    summary_text = summary.rendered_text if summary is not None else None

    h = hashlib.sha256()
    h.update(system_text.encode("utf-8"))
    h.update(b"\x00")
    h.update((summary_text or "\x01absent").encode("utf-8"))
    h.update(b"\x00")
    h.update(guidance_block.encode("utf-8"))
    h.update(b"\x00")
    if image is not None:
        h.update(hashlib.sha256(image.data).digest())
    else:
        h.update(b"\x01no-image")
    return PromptBundle(
        system_text=system_text,
        summary_text=summary_text,
        guidance_block=guidance_block,
        image=image,
        fingerprint=h.hexdigest(),
    )


def composite_score(
    candidate: str,
    reference: str,
    lambda1: float = DEFAULT_LAMBDA1,
    lambda2: float = DEFAULT_LAMBDA2,
    embedder: TokenEmbedder | None = None,
) -> float:
    """S = lambda1 * ROUGE-L F1 + lambda2 * embedding-similarity F1."""
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("lambda weights must be >= 0")
    rouge_part = rouge_l(candidate, reference).f1 if lambda1 else 0.0
    embed_part = embed_sim(candidate, reference, embedder).f1 if lambda2 else 0.0
    return lambda1 * rouge_part + lambda2 * embed_part


# ---------------------------------------------------------------------------
# Prompt tuning


@dataclass(frozen=True)
class TuningSample:
    input_text: str
    reference_review: str


@dataclass
class TunedPrompt:
    text: str
    history: list[tuple[int, float]] = field(default_factory=list)  # (iteration, mean S)
    provenance: list[str] = field(default_factory=list)  # applied edit descriptions

    @property
    def best_so_far(self) -> list[float]:
        best: list[float] = []
        for _, score in self.history:
            best.append(score if not best else max(best[-1], score))
        return best

    def to_json_dict(self) -> dict:
        return {
            "text": self.text,
            "history": [{"iteration": i, "mean_score": s} for i, s in self.history],
            "applied_edits": list(self.provenance),
            "best_so_far": self.best_so_far,
        }


def _append_line_edit(label: str, line: str) -> tuple[str, Callable[[str], str]]:
    def apply(text: str) -> str:
        if line in text:
            return text
        return f"{text}\n{line}"

    return label, apply


def _reorder_dimensions(text: str) -> str:
    dims = ", ".join(DEFAULT_DIMENSIONS)
    rotated = ", ".join(DEFAULT_DIMENSIONS[1:] + DEFAULT_DIMENSIONS[:1])
    if dims in text:
        return text.replace(dims, rotated, 1)
    line = f"Weigh the dimensions in this order: {rotated}."
    return text if line in text else f"{text}\n{line}"


EDIT_MENU: tuple[tuple[str, Callable[[str], str]], ...] = (
    ("reorder dimensions", _reorder_dimensions),
    _append_line_edit(
        "strengthen figure instruction",
        "Always comment on at least one figure or table, citing its number.",
    ),
    _append_line_edit(
        "add brevity emphasis", "Keep every comment under three sentences."
    ),
    _append_line_edit(
        "add locator emphasis",
        "Never emit a to-do without a bracketed locator.",
    ),
    _append_line_edit(
        "swap exemplar phrasing",
        'Phrase actions as direct imperatives, e.g. "Clarify the sampling procedure".',
    ),
)


def tune_prompt(
    base: str,
    samples: Sequence[TuningSample],
    provider: Provider,
    config: ModelConfig | None = None,
    embedder: TokenEmbedder | None = None,
    lambda1: float = DEFAULT_LAMBDA1,
    lambda2: float = DEFAULT_LAMBDA2,
    iterations: int = 5,
    max_workers: int = 4,
) -> TunedPrompt:
    """Greedy prompt refinement against reference reviews.

    Each iteration applies one edit from the fixed menu (cycling), scores the
    mean composite S of the provider's outputs over all samples, and keeps the
    edit only on strict improvement. Sample evaluations within an iteration
    run concurrently; accept decisions are sequential.
    """
    if not samples:
        raise ValueError("samples must be non-empty")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    config = config or ModelConfig()

    def mean_score(prompt_text: str, iteration: int) -> float:
        def score_one(sample: TuningSample) -> float:
            messages = [
                ChatMessage.text("system", prompt_text),
                ChatMessage.text("user", sample.input_text),
            ]
            try:
                result = complete(messages, config, provider)
            except ProviderError as exc:
                raise ProviderError(f"iteration {iteration}: {exc}") from exc
            return composite_score(result.text, sample.reference_review, lambda1, lambda2, embedder)

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return sum(pool.map(score_one, samples)) / len(samples)

    tuned = TunedPrompt(text=base)
    best_score = mean_score(base, 0)
    tuned.history.append((0, best_score))
    for i in range(1, iterations + 1):
        label, edit = EDIT_MENU[(i - 1) % len(EDIT_MENU)]
        candidate = edit(tuned.text)
        if candidate == tuned.text:
            tuned.history.append((i, best_score))
            continue
        candidate_score = mean_score(candidate, i)
        if candidate_score > best_score:
            tuned.text = candidate
            best_score = candidate_score
            tuned.provenance.append(label)
            logger.debug("iteration %d accepted edit %r (S=%.4f)", i, label, candidate_score)
        tuned.history.append((i, candidate_score))
    return tuned
