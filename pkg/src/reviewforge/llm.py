"""Provider-agnostic multimodal chat-completion client.

One request shape (the de-facto chat-completions JSON schema, images as
base64 data URLs) covers both hosted APIs and local deployments. Transient
failures (HTTP 5xx, timeouts, 429) retry with exponential backoff; other 4xx
never retry. Credentials are read from the environment at call time and never
appear in logs, errors, or serialized configs.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import os
import random
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Sequence, Union

from .errors import ReviewForgeError

logger = logging.getLogger(__name__)

DEFAULT_CREDENTIAL_ENV = "REVIEWFORGE_API_KEY"
BACKOFF_BASE_S = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_JITTER = 0.2
BACKOFF_CAP_S = 30.0


class AuthError(ReviewForgeError):
    """Credential rejected (401/403); never retried."""


class RateLimited(ReviewForgeError):
    """429 persisted through all retries."""


class ProviderError(ReviewForgeError):
    """Provider failure: retry-exhausted 5xx/timeout, or a non-retryable 4xx."""


class OversizeInput(ReviewForgeError):
    """Provider reported a context-length overflow."""


class UnscriptedPrompt(ReviewForgeError):
    """Mock provider saw a prompt fingerprint it has no reply for."""


class TransientFailure(Exception):
    """Internal marker for retryable failures; classified after retries."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind  # "rate" | "server" | "timeout"


@dataclass(frozen=True)
class TextPart:
    text: str


@dataclass(frozen=True)
class ImagePart:
    data: bytes
    format: str = "png"


Part = Union[TextPart, ImagePart]


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    parts: tuple[Part, ...]

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"invalid role {self.role!r}")
        if not self.parts:
            raise ValueError("message parts must be non-empty")
        if self.role != "user" and any(isinstance(p, ImagePart) for p in self.parts):
            raise ValueError("image parts are only allowed in user messages")

    @classmethod
    def text(cls, role: str, text: str) -> "ChatMessage":
        return cls(role=role, parts=(TextPart(text),))


@dataclass(frozen=True)
class ModelConfig:
    endpoint: str = "http://localhost:8080/v1/chat/completions"
    model: str = "local-multimodal"
    temperature: float = 0.2
    max_output_tokens: int = 2048
    timeout_s: float = 60.0
    max_retries: int = 3
    credential_env: str = DEFAULT_CREDENTIAL_ENV

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class CompletionResult:
    text: str
    input_tokens: int = 0
    output_tokens: int = 0
    latency_ms: float = 0.0


class Provider(Protocol):
    """One completion attempt; raises TransientFailure for retryable errors."""

    def complete_once(self, messages: Sequence[ChatMessage], config: ModelConfig) -> CompletionResult: ...


def fingerprint_messages(messages: Sequence[ChatMessage]) -> str:
    """Stable hash of rendered messages; image bytes contribute their digest."""
    h = hashlib.sha256()
    for msg in messages:
        h.update(msg.role.encode())
        h.update(b"\x00")
        for part in msg.parts:
            if isinstance(part, TextPart):
                h.update(b"t")
                h.update(part.text.encode("utf-8"))
            else:
                h.update(b"i")
                h.update(part.format.encode())
                h.update(hashlib.sha256(part.data).digest())
            h.update(b"\x00")
    return h.hexdigest()


def backoff_delay(attempt: int, rng: random.Random) -> float:
    """Delay before retry `attempt` (0-based): doubling base with +-20% jitter.

    The jitter band is narrower than the doubling factor, so delays are
    non-decreasing across attempts even at the cap.
    """
    base = BACKOFF_BASE_S * (BACKOFF_FACTOR**attempt)
    jitter = 1.0 + BACKOFF_JITTER * (2.0 * rng.random() - 1.0)
    return min(BACKOFF_CAP_S, base * jitter)


def complete(
    messages: Sequence[ChatMessage],
    config: ModelConfig,
    provider: Provider,
    sleeper: Callable[[float], None] = time.sleep,
    rng: Optional[random.Random] = None,
) -> CompletionResult:
    """Run one completion with retries on transient failures.

    Total attempts = max_retries + 1. 4xx other than 429 never retry.
    """
    if not messages:
        raise ValueError("messages must be non-empty")
    rng = rng or random.Random()
    last: Optional[TransientFailure] = None
    for attempt in range(config.max_retries + 1):
        try:
            return provider.complete_once(messages, config)
        except TransientFailure as failure:
            last = failure
            if attempt < config.max_retries:
                delay = backoff_delay(attempt, rng)
                logger.debug("transient %s failure, retry %d in %.2fs", failure.kind, attempt + 1, delay)
                sleeper(delay)
    assert last is not None
    if last.kind == "rate":
        raise RateLimited(str(last))
    raise ProviderError(str(last))


# ---------------------------------------------------------------------------
# Providers


class HttpProvider:
    """Chat-completions HTTP provider (hosted API or local deployment)."""

    def complete_once(self, messages: Sequence[ChatMessage], config: ModelConfig) -> CompletionResult:
        import requests

        payload = {
            "model": config.model,
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
            "messages": [_wire_message(m) for m in messages],
        }
        headers = {"Content-Type": "application/json"}
        credential = os.environ.get(config.credential_env, "")
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        started = time.monotonic()
        try:
            response = requests.post(
                config.endpoint, json=payload, headers=headers, timeout=config.timeout_s
            )
        except requests.Timeout as exc:
            raise TransientFailure("timeout", "provider request timed out") from exc
        except requests.ConnectionError as exc:
            raise TransientFailure("timeout", f"connection failed: {type(exc).__name__}") from exc
        latency_ms = (time.monotonic() - started) * 1000.0
        status = response.status_code
        if status in (401, 403):
            raise AuthError(f"provider rejected credentials (HTTP {status})")
        if status == 429:
            raise TransientFailure("rate", "provider rate limit (HTTP 429)")
        if status >= 500:
            raise TransientFailure("server", f"provider server error (HTTP {status})")
        body_text = response.text
        if status >= 400:
            if _mentions_context_overflow(body_text) or status == 413:
                raise OversizeInput(f"provider reported input too large (HTTP {status})")
            raise ProviderError(f"provider request failed (HTTP {status})")
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
            if isinstance(text, list):  # content-array variants
                text = "".join(p.get("text", "") for p in text if isinstance(p, dict))
            usage = body.get("usage", {})
            return CompletionResult(
                text=text,
                input_tokens=int(usage.get("prompt_tokens", 0)),
                output_tokens=int(usage.get("completion_tokens", 0)),
                latency_ms=latency_ms,
            )
        except (KeyError, IndexError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ProviderError(f"malformed provider response: {type(exc).__name__}") from exc


def _mentions_context_overflow(body: str) -> bool:
    lowered = body.lower()
    return "context length" in lowered or "context_length" in lowered or "maximum context" in lowered


def _wire_message(message: ChatMessage) -> dict:
    content = []
    for part in message.parts:
        if isinstance(part, TextPart):
            content.append({"type": "text", "text": part.text})
        else:
            b64 = base64.b64encode(part.data).decode()
            content.append(
                {"type": "image_url", "image_url": {"url": f"data:image/{part.format};base64,{b64}"}}
            )
    return {"role": message.role, "content": content}


@dataclass
class MockCall:
    fingerprint: str
    attempt: int


class MockProvider:
    """Deterministic scripted provider keyed on prompt fingerprints.

    `script` maps fingerprint -> reply text; `default_reply`, when set,
    answers unscripted prompts (otherwise UnscriptedPrompt is raised).
    `failures` is a queue of TransientFailure kinds ("rate", "server",
    "timeout") consumed once each before any scripted reply is served.
    """

    def __init__(
        self,
        script: Optional[dict[str, str]] = None,
        default_reply: Optional[str] = None,
        failures: Optional[Sequence[str]] = None,
    ):
        self.script = dict(script or {})
        self.default_reply = default_reply
        self._failures = list(failures or [])
        self.calls: list[MockCall] = []
        self._lock = threading.Lock()

    def complete_once(self, messages: Sequence[ChatMessage], config: ModelConfig) -> CompletionResult:
        fp = fingerprint_messages(messages)
        with self._lock:
            self.calls.append(MockCall(fingerprint=fp, attempt=len(self.calls)))
            if self._failures:
                kind = self._failures.pop(0)
                raise TransientFailure(kind, f"scripted {kind} failure")
        reply = self.script.get(fp, self.default_reply)
        if reply is None:
            raise UnscriptedPrompt(f"no scripted reply for prompt fingerprint {fp[:12]}…")
        return CompletionResult(
            text=reply,
            input_tokens=sum(len(p.text.split()) for m in messages for p in m.parts if isinstance(p, TextPart)),
            output_tokens=len(reply.split()),
            latency_ms=0.0,
        )


class CompletionSummarizer:
    """Summarizer backed by the chat client, for LLM-backed hierarchies."""

    def __init__(self, provider: Provider, config: ModelConfig, max_sentences: int = 3):
        self.provider = provider
        self.config = config
        self.max_sentences = max_sentences

    def summarize(self, sentences: Sequence[str]) -> str:
        prompt = (
            f"Summarize the following passage in at most {self.max_sentences} sentences, "
            "keeping concrete claims and numbers.\n\n" + " ".join(sentences)
        )
        result = complete(
            [ChatMessage.text("user", prompt)], self.config, self.provider
        )
        return result.text.strip()
