"""Provider wiring: HTTP, offline template, or an error for unknown names.

The offline provider synthesizes a contract-conforming review from the prompt
content itself. It is deterministic, so the demo CLI and service run fully
offline while still exercising every pipeline stage.
"""

from __future__ import annotations

import logging
import re
from typing import Sequence

from ..config import LlmConfig
from ..llm import ChatMessage, CompletionResult, HttpProvider, ImagePart, ModelConfig, Provider, TextPart

logger = logging.getLogger(__name__)

_HEADER_RE = re.compile(r"^## ([A-Za-z][A-Za-z -]*)$", re.M)


class OfflineReviewProvider:
    """Deterministic stand-in for a multimodal reviewer model."""

    def complete_once(self, messages: Sequence[ChatMessage], config: ModelConfig) -> CompletionResult:
        system_text = ""
        user_text = ""
        has_image = False
        for message in messages:
            for part in message.parts:
                if isinstance(part, TextPart):
                    if message.role == "system":
                        system_text += part.text + "\n"
                    else:
                        user_text += part.text + "\n"
                elif isinstance(part, ImagePart):
                    has_image = True

        headers = _HEADER_RE.findall(system_text)
        if not headers:
            headers = ["Summary", "Strengths", "Weaknesses", "To-Do"]
        dimensions = [h for h in headers if h not in ("Summary", "Strengths", "Weaknesses", "To-Do")]

        snippets = [
            ln.strip()
            for ln in user_text.splitlines()
            if ln.strip() and not ln.startswith(("==", "Condensed", "Review practices", "Venue guidance", "-"))
        ]
        lead = snippets[0] if snippets else "The manuscript presents its contribution concisely."
        lead = lead[:240]

        lines = ["## Summary", f"The manuscript can be condensed as follows: {lead}", ""]
        for dim in dimensions:
            lines.append(f"## {dim}")
            lines.append(
                f"The {dim.lower()} of the work is plausible but under-evidenced; "
                f"the text should make its {dim.lower()} case explicit."
            )
            lines.append("")
        lines += [
            "## Strengths",
            "- The problem statement is easy to follow.",
            "- The document structure surfaces the main claims early.",
            "",
            "## Weaknesses",
            "- Key design choices are asserted rather than justified.",
        ]
        if has_image:
            lines.append("- Figure and table captions are too terse to stand alone.")
        lines += [
            "",
            "## To-Do",
            "- Clarify the main contribution: State the research gap explicitly [Section 1]",
            "- Tighten the opening page: Lead with the central result [Page 1]",
            "- Justify parameter choices: Add evidence for each default [Section 2]",
        ]
        if has_image:
            lines.append(
                "- Expand the first figure caption: Make the figure self-contained [Figure 1]"
            )
        text = "\n".join(lines)
        return CompletionResult(
            text=text,
            input_tokens=len(user_text.split()),
            output_tokens=len(text.split()),
            latency_ms=0.0,
        )


def build_provider(config: LlmConfig) -> Provider:
    if config.provider == "http":
        return HttpProvider()
    if config.provider == "offline":
        return OfflineReviewProvider()
    raise ValueError(f"unknown llm provider {config.provider!r} (expected 'http' or 'offline')")


def model_config(config: LlmConfig) -> ModelConfig:
    return ModelConfig(
        endpoint=config.endpoint,
        model=config.model,
        temperature=config.temperature,
        max_output_tokens=config.max_output_tokens,
        timeout_s=config.timeout_s,
        max_retries=config.max_retries,
        credential_env=config.credential_env,
    )
