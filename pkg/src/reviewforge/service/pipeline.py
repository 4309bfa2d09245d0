"""Pipeline orchestration: ingest, retrieve, generate, parse, persist.

One ReviewService owns the store, the provider, and the venue registry. Review
generation runs as an asynchronous job whose state is persisted at every
transition, so polling clients always observe a prefix of the canonical state
order. At most one generation job is in flight per manuscript.
"""

from __future__ import annotations

import hashlib
import logging
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from ..config import AppConfig
from ..embedding import Embedder, HashedBagOfWordsEmbedder
from ..errors import ReviewForgeError
from ..ingest.cluster import cluster_recursive
from ..ingest.extract import extract_text
from ..ingest.images import compose_pages, render_pages
from ..ingest.summarize import ExtractiveSummarizer, Summarizer, summarize_hierarchy
from ..ingest.types import CompositeImage, Manuscript
from ..llm import Provider, complete
from ..prompt import PromptBundle, VenueProfile, assemble_review_prompt
from ..retrieval import (
    CorpusIndex,
    ReviewGuidance,
    embed,
    index_corpus,
    index_from_doc,
    index_to_doc,
    parse_corpus_lines,
    retrieve_top_k,
    summarize_review_practices,
)
from ..review import parse_review, review_to_dict, validate_review
from . import jobs
from .jobs import Job
from .providers import build_provider, model_config
from .records import (
    composite_from_dict,
    composite_to_dict,
    manuscript_from_dict,
    manuscript_to_dict,
)
from .store import Store

logger = logging.getLogger(__name__)

MODES = ("text_only", "image_only", "multimodal")


class UnknownManuscript(ReviewForgeError):
    pass


class UnknownVenue(ReviewForgeError):
    pass


class UnknownJob(ReviewForgeError):
    pass


class UnknownReview(ReviewForgeError):
    pass


class MissingIndex(ReviewForgeError):
    """RAG requested but the venue has no corpus index."""


class IndexOutOfRange(ReviewForgeError):
    pass


class PayloadTooLarge(ReviewForgeError):
    pass


class ReviewService:
    def __init__(
        self,
        config: Optional[AppConfig] = None,
        store: Optional[Store] = None,
        provider: Optional[Provider] = None,
        embedder: Optional[Embedder] = None,
        summarizer: Optional[Summarizer] = None,
        max_workers: int = 2,
    ):
        self.config = config or AppConfig()
        self.store = store or Store(self.config.service.data_dir)
        self.provider = provider if provider is not None else build_provider(self.config.llm)
        self.embedder = embedder or HashedBagOfWordsEmbedder(self.config.retrieval.dimension)
        self.summarizer = summarizer or ExtractiveSummarizer()
        self._executor = ThreadPoolExecutor(max_workers=max_workers)
        self._inflight: dict[str, str] = {}
        self._inflight_lock = threading.Lock()
        self._index_cache: dict[str, CorpusIndex] = {}
        self._profiles: dict[str, VenueProfile] = {}
        for venue in self.config.service.venues:
            self._profiles[venue] = VenueProfile(venue=venue)
        self._load_profile_assets()
        for venue in self.store.list_ids("index"):
            self._profiles.setdefault(venue, VenueProfile(venue=venue))

    def _load_profile_assets(self) -> None:
        assets_dir = self.config.prompt.assets_dir
        if not assets_dir or not Path(assets_dir).is_dir():
            return
        import json

        for path in sorted(Path(assets_dir).glob("*.json")):
            try:
                raw = json.loads(path.read_text(encoding="utf-8"))
                profile = VenueProfile(
                    venue=raw["venue"],
                    dimensions=tuple(raw.get("dimensions", [])) or VenueProfile.__dataclass_fields__["dimensions"].default,
                    formatting_instructions=raw.get("formatting_instructions", "Write the review in plain markdown."),
                    locator_instruction=raw.get("locator_instruction", VenueProfile.__dataclass_fields__["locator_instruction"].default),
                )
            except (KeyError, ValueError, TypeError) as exc:
                logger.warning("skipping bad venue profile %s: %s", path.name, exc)
                continue
            self._profiles[profile.venue] = profile

    # -- manuscripts

    def submit_manuscript(self, pdf_bytes: bytes) -> str:
        limit = self.config.service.max_upload_mb * 1024 * 1024
        if len(pdf_bytes) > limit:
            raise PayloadTooLarge(f"upload exceeds {self.config.service.max_upload_mb} MB")
        manuscript_id = hashlib.sha256(pdf_bytes).hexdigest()[:16]
        if self.store.exists("manuscript", manuscript_id):
            return manuscript_id

        ing = self.config.ingest
        # Text and visual streams are independent; run them concurrently.
        with ThreadPoolExecutor(max_workers=2) as pool:
            text_future = pool.submit(extract_text, pdf_bytes)
            image_future = pool.submit(render_pages, pdf_bytes, ing.dpi)
            manuscript = text_future.result()
            page_images = image_future.result()
        composite = compose_pages(page_images, ing.target_width, ing.separator_height)
        manuscript.page_images = page_images

        payload = {
            "manuscript": manuscript_to_dict(manuscript),
            "composite": composite_to_dict(composite),
        }
        self.store.write("manuscript", manuscript_id, payload)
        return manuscript_id

    def get_manuscript(self, manuscript_id: str) -> tuple[Manuscript, CompositeImage]:
        payload = self.store.read("manuscript", manuscript_id)
        if payload is None:
            raise UnknownManuscript(f"manuscript {manuscript_id!r} not found")
        return (
            manuscript_from_dict(payload["manuscript"]),
            composite_from_dict(payload["composite"]),
        )

    # -- venues and corpora

    def list_venues(self) -> list[dict]:
        out = []
        for venue in sorted(self._profiles):
            profile = self._profiles[venue]
            out.append(
                {
                    "venue": venue,
                    "dimensions": list(profile.dimensions),
                    "has_index": self._has_index(venue),
                }
            )
        return out

    def get_profile(self, venue: str) -> VenueProfile:
        profile = self._profiles.get(venue)
        if profile is None:
            raise UnknownVenue(f"venue {venue!r} has no profile")
        return profile

    def _has_index(self, venue: str) -> bool:
        return venue in self._index_cache or self.store.exists("index", venue)

    def _get_index(self, venue: str) -> CorpusIndex:
        if venue in self._index_cache:
            return self._index_cache[venue]
        payload = self.store.read("index", venue)
        if payload is None:
            raise MissingIndex(f"no corpus index for venue {venue!r}")
        index = index_from_doc(payload)
        self._index_cache[venue] = index
        return index

    def load_corpus(self, text_or_lines, venue: str) -> dict:
        """Index a JSON Lines corpus for a venue; per-line errors are returned."""
        entries, errors = parse_corpus_lines(text_or_lines)
        if not entries:
            raise ValueError(f"corpus contains no valid entries ({len(errors)} bad lines)")
        index = index_corpus(entries, self.embedder)
        self.store.write("index", venue, index_to_doc(index))
        self._index_cache[venue] = index
        self._profiles.setdefault(venue, VenueProfile(venue=venue))
        return {"venue": venue, "count": index.size, "errors": errors}

    def load_corpus_path(self, path: str | Path, venue: str) -> dict:
        return self.load_corpus(Path(path).read_text(encoding="utf-8"), venue)

    # -- review jobs

    def generate_review(
        self, manuscript_id: str, venue: str, mode: str = "multimodal", use_rag: bool = True
    ) -> str:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not self.store.exists("manuscript", manuscript_id):
            raise UnknownManuscript(f"manuscript {manuscript_id!r} not found")
        self.get_profile(venue)
        if use_rag and not self._has_index(venue):
            raise MissingIndex(f"no corpus index for venue {venue!r}; load one or pass use_rag=false")

        with self._inflight_lock:
            existing = self._inflight.get(manuscript_id)
            if existing is not None:
                job_payload = self.store.read("job", existing)
                if job_payload and job_payload["state"] not in (jobs.DONE, jobs.FAILED):
                    return existing
            job = Job(
                id=uuid.uuid4().hex[:12],
                manuscript_id=manuscript_id,
                venue=venue,
                mode=mode,
                use_rag=use_rag,
            )
            self._persist_job(job)
            self._inflight[manuscript_id] = job.id
        self._executor.submit(self._run_job_guarded, job)
        return job.id

    def _persist_job(self, job: Job) -> None:
        self.store.write("job", job.id, job.to_dict())

    def _run_job_guarded(self, job: Job) -> None:
        try:
            self.run_job(job)
        except Exception as exc:  # job must always end in a terminal state
            logger.exception("job %s failed", job.id)
            if job.state not in (jobs.DONE, jobs.FAILED):
                job.fail(f"{type(exc).__name__}: {exc}")
                self._persist_job(job)
        finally:
            with self._inflight_lock:
                if self._inflight.get(job.manuscript_id) == job.id:
                    del self._inflight[job.manuscript_id]

    def run_job(self, job: Job) -> None:
        """Execute one generation job synchronously, persisting each state."""
        job.advance(jobs.INGESTING)
        self._persist_job(job)
        manuscript, composite = self.get_manuscript(job.manuscript_id)

        guidance: Optional[ReviewGuidance] = None
        if job.use_rag:
            job.advance(jobs.RETRIEVING)
            self._persist_job(job)
            index = self._get_index(job.venue)
            query = embed(_query_text(manuscript), self.embedder)
            results = retrieve_top_k(query, index, self.config.retrieval.k)
            guidance = summarize_review_practices(
                results, max_aspects=self.config.retrieval.max_aspects
            )

        job.advance(jobs.GENERATING)
        self._persist_job(job)
        profile = self.get_profile(job.venue)
        bundle = self._assemble_bundle(manuscript, composite, guidance, profile, job.mode)
        result = complete(bundle.to_messages(), model_config(self.config.llm), self.provider)

        job.advance(jobs.PARSING)
        self._persist_job(job)
        review_id = _review_id(job, bundle, result.text)
        review = parse_review(
            result.text,
            profile,
            manuscript_id=job.manuscript_id,
            venue=job.venue,
            review_id=review_id,
        )
        report = validate_review(review, manuscript)
        payload = review_to_dict(review)
        payload["mode"] = job.mode
        payload["use_rag"] = job.use_rag
        payload["validation"] = report.statuses
        payload["validation_messages"] = report.messages
        payload["prompt_fingerprint"] = bundle.fingerprint
        self.store.write("review", review_id, payload)

        job.review_id = review_id
        job.advance(jobs.DONE)
        self._persist_job(job)

    def _assemble_bundle(
        self,
        manuscript: Manuscript,
        composite: CompositeImage,
        guidance: Optional[ReviewGuidance],
        profile: VenueProfile,
        mode: str,
    ) -> PromptBundle:
        ing = self.config.ingest
        summary = None
        if mode != "image_only":
            tree = cluster_recursive(
                manuscript.sentences,
                alpha=ing.alpha,
                min_cluster=ing.min_cluster,
                max_depth=ing.max_depth,
                window=ing.window,
            )
            summary = summarize_hierarchy(tree, manuscript, self.summarizer, ing.token_budget)
        image = composite if mode != "text_only" else None
        return assemble_review_prompt(summary, guidance, image, profile)

    # -- reads and updates

    def get_job(self, job_id: str) -> dict:
        payload = self.store.read("job", job_id)
        if payload is None:
            raise UnknownJob(f"job {job_id!r} not found")
        return payload

    def wait_for_job(self, job_id: str, timeout_s: float = 30.0, poll_s: float = 0.05) -> dict:
        deadline = time.monotonic() + timeout_s
        while True:
            payload = self.get_job(job_id)
            if payload["state"] in (jobs.DONE, jobs.FAILED):
                return payload
            if time.monotonic() >= deadline:
                raise TimeoutError(f"job {job_id} still {payload['state']} after {timeout_s}s")
            time.sleep(poll_s)

    def get_review(self, review_id: str) -> dict:
        payload = self.store.read("review", review_id)
        if payload is None:
            raise UnknownReview(f"review {review_id!r} not found")
        return payload

    def set_todo_done(self, review_id: str, index: int, done: bool) -> dict:
        def mutate(payload: dict) -> dict:
            todos = payload.get("todos", [])
            if not 0 <= index < len(todos):
                raise IndexOutOfRange(f"todo index {index} out of range (0..{len(todos) - 1})")
            todos[index]["done"] = bool(done)
            return payload

        try:
            updated = self.store.update("review", review_id, mutate)
        except KeyError:
            raise UnknownReview(f"review {review_id!r} not found") from None
        return updated["todos"][index]

    def shutdown(self, wait: bool = True) -> None:
        self._executor.shutdown(wait=wait)


def _query_text(manuscript: Manuscript) -> str:
    """Approximate "title. abstract" from the extracted text.

    The first page's first line stands in for the title; the first eight
    sentences stand in for the abstract.
    """
    title = ""
    if manuscript.pages:
        lines = manuscript.pages[0].text.splitlines()
        title = lines[0] if lines else ""
    abstract = " ".join(s.text for s in manuscript.sentences[:8])
    text = f"{title}. {abstract}".strip(". ") or "untitled manuscript"
    return text


def _review_id(job: Job, bundle: PromptBundle, reply_text: str) -> str:
    h = hashlib.sha256()
    for chunk in (
        job.manuscript_id,
        job.venue,
        job.mode,
        str(job.use_rag),
        bundle.fingerprint,
        hashlib.sha256(reply_text.encode("utf-8")).hexdigest(),
    ):
        h.update(chunk.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:16]
