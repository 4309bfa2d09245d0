"""Service layer: persistent store, job state machine, pipeline, HTTP API, CLI."""

from .jobs import Job
from .pipeline import ReviewService
from .store import Store

__all__ = ["Job", "ReviewService", "Store"]
