"""Structured review parsing and the Action:Objective[#] to-do grammar.

A to-do line is `Action ":" Objective "[" Locator "]"`: an executable
instruction, a rationale, and a document locator. Six locator shapes are
recognized; anything else is malformed and surfaced (never silently repaired,
since repairs would hide prompt drift). Rendering is canonical and
parse(render(x)) == x holds for every valid item.
"""

from __future__ import annotations

import hashlib
import logging
import re
import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import ReviewForgeError

logger = logging.getLogger(__name__)

REVIEW_SCHEMA_VERSION = 1

# The literal heading the review parser anchors on; prompt assembly embeds it.
TODO_HEADER = "## To-Do"
SUMMARY_HEADER = "## Summary"
STRENGTHS_HEADER = "## Strengths"
WEAKNESSES_HEADER = "## Weaknesses"

SECTION_KIND = "section"
SECTION_LINES_KIND = "section_lines"
PAGE_KIND = "page"
PAGE_FIGURE_KIND = "page_figure"
FIGURE_KIND = "figure"
TABLE_KIND = "table"

VALID = "valid"
UNKNOWN_TARGET = "unknown_target"
MALFORMED = "malformed"

REASON_MISSING_COLON = "missing colon"
REASON_MISSING_BRACKETS = "missing locator brackets"
REASON_BAD_LOCATOR = "unrecognized locator"


class MalformedTodo(ReviewForgeError):
    def __init__(self, reason: str, line: str = ""):
        super().__init__(f"{reason}: {line!r}" if line else reason)
        self.reason = reason
        self.line = line


class MissingTodoSection(ReviewForgeError):
    """The generated markdown has no To-Do section: the output contract broke."""


@dataclass(frozen=True)
class Locator:
    kind: str
    section_path: Optional[tuple[int, ...]] = None
    page: Optional[int] = None
    figure: Optional[int] = None
    table: Optional[int] = None
    line_range: Optional[tuple[int, int]] = None

    def render(self) -> str:
        if self.kind == SECTION_KIND:
            return f"Section {_dotted(self.section_path)}"
        if self.kind == SECTION_LINES_KIND:
            a, b = self.line_range
            return f"Section {_dotted(self.section_path)}. L{a}-L{b}"
        if self.kind == PAGE_KIND:
            return f"Page {self.page}"
        if self.kind == PAGE_FIGURE_KIND:
            return f"Page {self.page}. Figure {self.figure}"
        if self.kind == FIGURE_KIND:
            return f"Figure {self.figure}"
        if self.kind == TABLE_KIND:
            return f"Table {self.table}"
        raise ValueError(f"unknown locator kind {self.kind!r}")


def _dotted(path: tuple[int, ...]) -> str:
    return ".".join(str(p) for p in path)


@dataclass
class TodoItem:
    index: int
    action: str
    objective: str
    locator: Locator
    done: bool = False


# Locator grammar, keyword case-sensitive, internal runs of spaces tolerated.
_LOC_SECTION_LINES = re.compile(r"^Section\s+(\d+(?:\.\d+)*)\.\s+L(\d+)-L(\d+)$")
_LOC_SECTION = re.compile(r"^Section\s+(\d+(?:\.\d+)*)$")
_LOC_PAGE_FIGURE = re.compile(r"^Page\s+(\d+)\.\s+Figure\s+(\d+)$")
_LOC_PAGE = re.compile(r"^Page\s+(\d+)$")
_LOC_FIGURE = re.compile(r"^Figure\s+(\d+)$")
_LOC_TABLE = re.compile(r"^Table\s+(\d+)$")

_LIST_MARKER_RE = re.compile(r"^\s*(?:[-*+]\s+)?(?:\[[ xX]\]\s*)?")


def strip_list_marker(line: str) -> str:
    """Remove a leading bullet and/or checkbox marker."""
    return _LIST_MARKER_RE.sub("", line, count=1).strip()


def _path_of(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split("."))


def parse_locator(text: str) -> Locator:
    text = re.sub(r"\s+", " ", text.strip())
    m = _LOC_SECTION_LINES.match(text)
    if m:
        a, b = int(m.group(2)), int(m.group(3))
        if a < 1 or b < a:
            raise MalformedTodo(REASON_BAD_LOCATOR, text)
        return Locator(kind=SECTION_LINES_KIND, section_path=_path_of(m.group(1)), line_range=(a, b))
    m = _LOC_SECTION.match(text)
    if m:
        return Locator(kind=SECTION_KIND, section_path=_path_of(m.group(1)))
    m = _LOC_PAGE_FIGURE.match(text)
    if m:
        return Locator(kind=PAGE_FIGURE_KIND, page=int(m.group(1)), figure=int(m.group(2)))
    m = _LOC_PAGE.match(text)
    if m:
        return Locator(kind=PAGE_KIND, page=int(m.group(1)))
    m = _LOC_FIGURE.match(text)
    if m:
        return Locator(kind=FIGURE_KIND, figure=int(m.group(1)))
    m = _LOC_TABLE.match(text)
    if m:
        return Locator(kind=TABLE_KIND, table=int(m.group(1)))
    raise MalformedTodo(REASON_BAD_LOCATOR, text)


def parse_todo_line(line: str, index: int = 0) -> TodoItem:
    """Parse one `Action: Objective [Locator]` line into a TodoItem."""
    text = strip_list_marker(line)
    bracket = text.rfind("[")
    if bracket < 0 or not text.rstrip().endswith("]"):
        # Diagnose the colon first so "Fix everything [Page 2]" reports the
        # missing colon, not the brackets.
        if ":" not in text.split("[", 1)[0]:
            raise MalformedTodo(REASON_MISSING_COLON, line)
        raise MalformedTodo(REASON_MISSING_BRACKETS, line)
    head = text[:bracket]
    locator_text = text.rstrip()[bracket + 1 : -1]
    colon = head.find(":")
    if colon < 0:
        raise MalformedTodo(REASON_MISSING_COLON, line)
    action = re.sub(r"\s+", " ", head[:colon]).strip()
    objective = re.sub(r"\s+", " ", head[colon + 1 :]).strip()
    if not action or not objective:
        raise MalformedTodo(REASON_MISSING_COLON, line)
    if "[" in objective:
        raise MalformedTodo(REASON_BAD_LOCATOR, line)
    return TodoItem(index=index, action=action, objective=objective, locator=parse_locator(locator_text))


def render_todo(item: TodoItem) -> str:
    """Canonical single-space serialization; parse(render(x)) == x."""
    return f"{item.action}: {item.objective} [{item.locator.render()}]"


def render_checklist(todos: list[TodoItem]) -> str:
    """Markdown checkbox list of to-dos, preserving done flags."""
    lines = []
    for item in todos:
        mark = "x" if item.done else " "
        lines.append(f"- [{mark}] {render_todo(item)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Review documents


@dataclass
class Review:
    id: str
    manuscript_id: str
    venue: str
    summary: str
    dimension_comments: dict[str, str]
    strengths: list[str]
    weaknesses: list[str]
    todos: list[TodoItem]
    malformed: list[tuple[str, str]]  # (line, reason)
    raw_markdown: str
    created_at: float


@dataclass
class ValidationReport:
    statuses: list[str]  # one per todo, VALID or UNKNOWN_TARGET
    messages: list[str] = field(default_factory=list)


_HEADING_RE = re.compile(r"^(#{1,6})\s*(.+?)\s*#*\s*$")


def _normalize_heading(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", " ", text.lower()).strip()


_TODO_ALIASES = {"to do", "to dos", "todo", "todos", "to do list", "todo list", "action items"}


def parse_review(
    markdown: str,
    profile,
    manuscript_id: str = "",
    venue: str = "",
    review_id: str | None = None,
    created_at: float | None = None,
) -> Review:
    """Split contract-conforming markdown into a structured Review.

    Headers match case-insensitively in any order; unknown sections are kept
    only in the raw markdown, which is always preserved byte-exact. Raises
    MissingTodoSection when no to-do header is present.
    """
    sections: dict[str, list[str]] = {}
    current: Optional[str] = None
    order: list[str] = []
    for line in markdown.splitlines():
        m = _HEADING_RE.match(line.strip())
        if m:
            current = _normalize_heading(m.group(2))
            if current not in sections:
                sections[current] = []
                order.append(current)
            continue
        if current is not None:
            sections[current].append(line)

    dimension_names = list(profile.dimensions)
    todo_key = next((k for k in order if k in _TODO_ALIASES), None)
    if todo_key is None:
        raise MissingTodoSection("generated review has no To-Do section")

    def body(key: str) -> str:
        return "\n".join(sections.get(key, [])).strip()

    def bullet_items(key: str) -> list[str]:
        items = []
        for line in sections.get(key, []):
            stripped = strip_list_marker(line)
            if stripped:
                items.append(stripped)
        return items

    todos: list[TodoItem] = []
    malformed: list[tuple[str, str]] = []
    for line in sections.get(todo_key, []):
        if not line.strip():
            continue
        try:
            item = parse_todo_line(line, index=len(todos))
        except MalformedTodo as exc:
            malformed.append((line.rstrip("\n"), exc.reason))
            continue
        todos.append(item)

    dimension_comments = {}
    for name in dimension_names:
        dimension_comments[name] = body(_normalize_heading(name))

    rid = review_id if review_id is not None else hashlib.sha256(markdown.encode("utf-8")).hexdigest()[:16]
    return Review(
        id=rid,
        manuscript_id=manuscript_id,
        venue=venue,
        summary=body("summary"),
        dimension_comments=dimension_comments,
        strengths=bullet_items("strengths"),
        weaknesses=bullet_items("weaknesses"),
        todos=todos,
        malformed=malformed,
        raw_markdown=markdown,
        created_at=created_at if created_at is not None else time.time(),
    )


def validate_locator(locator: Locator, manuscript) -> str:
    """Check a locator against the manuscript; returns VALID or UNKNOWN_TARGET.

    Line ranges are approximated against the section's sentence count since
    extracted PDFs carry no source lines.
    """
    outline = manuscript.outline
    if locator.kind == SECTION_KIND:
        return VALID if outline.has_section(locator.section_path) else UNKNOWN_TARGET
    if locator.kind == SECTION_LINES_KIND:
        if not outline.has_section(locator.section_path):
            return UNKNOWN_TARGET
        count = len(manuscript.sentences_in_section(locator.section_path))
        a, b = locator.line_range
        return VALID if b <= count else UNKNOWN_TARGET
    if locator.kind == PAGE_KIND:
        return VALID if 1 <= locator.page <= manuscript.page_count else UNKNOWN_TARGET
    if locator.kind == PAGE_FIGURE_KIND:
        page_ok = 1 <= locator.page <= manuscript.page_count
        return VALID if page_ok and locator.figure in outline.figures else UNKNOWN_TARGET
    if locator.kind == FIGURE_KIND:
        return VALID if locator.figure in outline.figures else UNKNOWN_TARGET
    if locator.kind == TABLE_KIND:
        return VALID if locator.table in outline.tables else UNKNOWN_TARGET
    return UNKNOWN_TARGET


def validate_review(review: Review, manuscript) -> ValidationReport:
    statuses = []
    messages = []
    for item in review.todos:
        status = validate_locator(item.locator, manuscript)
        statuses.append(status)
        if status != VALID:
            messages.append(f"todo {item.index}: locator [{item.locator.render()}] not found")
    for line, reason in review.malformed:
        messages.append(f"malformed to-do line ({reason}): {line}")
    return ValidationReport(statuses=statuses, messages=messages)


# ---------------------------------------------------------------------------
# JSON serialization (schema versioned)


def locator_to_dict(locator: Locator) -> dict:
    out: dict = {"kind": locator.kind}
    if locator.section_path is not None:
        out["section_path"] = list(locator.section_path)
    if locator.page is not None:
        out["page"] = locator.page
    if locator.figure is not None:
        out["figure"] = locator.figure
    if locator.table is not None:
        out["table"] = locator.table
    if locator.line_range is not None:
        out["line_range"] = list(locator.line_range)
    return out


def locator_from_dict(raw: dict) -> Locator:
    return Locator(
        kind=raw["kind"],
        section_path=tuple(raw["section_path"]) if "section_path" in raw else None,
        page=raw.get("page"),
        figure=raw.get("figure"),
        table=raw.get("table"),
        line_range=tuple(raw["line_range"]) if "line_range" in raw else None,
    )


def review_to_dict(review: Review) -> dict:
    return {
        "schema_version": REVIEW_SCHEMA_VERSION,
        "id": review.id,
        "manuscript_id": review.manuscript_id,
        "venue": review.venue,
        "summary": review.summary,
        "dimension_comments": dict(review.dimension_comments),
        "strengths": list(review.strengths),
        "weaknesses": list(review.weaknesses),
        "todos": [
            {
                "index": t.index,
                "action": t.action,
                "objective": t.objective,
                "locator": locator_to_dict(t.locator),
                "done": t.done,
            }
            for t in review.todos
        ],
        "malformed": [list(pair) for pair in review.malformed],
        "raw_markdown": review.raw_markdown,
        "created_at": review.created_at,
    }


def review_from_dict(raw: dict) -> Review:
    return Review(
        id=raw["id"],
        manuscript_id=raw["manuscript_id"],
        venue=raw["venue"],
        summary=raw["summary"],
        dimension_comments=dict(raw["dimension_comments"]),
        strengths=list(raw["strengths"]),
        weaknesses=list(raw["weaknesses"]),
        todos=[
            TodoItem(
                index=t["index"],
                action=t["action"],
                objective=t["objective"],
                locator=locator_from_dict(t["locator"]),
                done=bool(t["done"]),
            )
            for t in raw["todos"]
        ],
        malformed=[(line, reason) for line, reason in raw.get("malformed", [])],
        raw_markdown=raw["raw_markdown"],
        created_at=raw["created_at"],
    )


