"""Review-generation job state machine.

States advance strictly forward through the canonical order (skipping is
allowed, e.g. the retrieval stage without RAG); `failed` is terminal and
reachable from any non-terminal state with a non-empty detail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..errors import ReviewForgeError

QUEUED = "queued"
INGESTING = "ingesting"
RETRIEVING = "retrieving"
GENERATING = "generating"
PARSING = "parsing"
DONE = "done"
FAILED = "failed"

CANONICAL_ORDER = (QUEUED, INGESTING, RETRIEVING, GENERATING, PARSING, DONE)


class InvalidTransition(ReviewForgeError):
    pass


@dataclass
class Job:
    id: str
    manuscript_id: str
    venue: str
    mode: str = "multimodal"
    use_rag: bool = True
    state: str = QUEUED
    error: str = ""
    review_id: str = ""
    timestamps: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.timestamps.setdefault(self.state, time.time())

    def advance(self, state: str) -> None:
        if self.state == FAILED or self.state == DONE:
            raise InvalidTransition(f"job {self.id} is terminal ({self.state})")
        if state == FAILED:
            raise InvalidTransition("use fail() to enter the failed state")
        current = CANONICAL_ORDER.index(self.state)
        target = CANONICAL_ORDER.index(state)
        if target <= current:
            raise InvalidTransition(f"cannot move {self.state} -> {state}")
        self.state = state
        self.timestamps[state] = time.time()

    def fail(self, detail: str) -> None:
        if not detail:
            raise InvalidTransition("failed state requires a detail message")
        if self.state == DONE:
            raise InvalidTransition("job already done")
        self.state = FAILED
        self.error = detail
        self.timestamps[FAILED] = time.time()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "manuscript_id": self.manuscript_id,
            "venue": self.venue,
            "mode": self.mode,
            "use_rag": self.use_rag,
            "state": self.state,
            "error": self.error,
            "review_id": self.review_id,
            "timestamps": dict(self.timestamps),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Job":
        return cls(
            id=raw["id"],
            manuscript_id=raw["manuscript_id"],
            venue=raw["venue"],
            mode=raw.get("mode", "multimodal"),
            use_rag=bool(raw.get("use_rag", True)),
            state=raw.get("state", QUEUED),
            error=raw.get("error", ""),
            review_id=raw.get("review_id", ""),
            timestamps=dict(raw.get("timestamps", {})),
        )
