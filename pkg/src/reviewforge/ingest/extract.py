"""Text-stream extraction: pages, sentences, and the section outline.

Extraction reads the embedded text layer only; scanned documents surface as
NoTextLayer. Heading detection is deliberately deterministic: a line opening
with a dotted number ("2", "4.1") or a short bold/oversized run opens a
section, and sentences inherit the most recent heading.
"""

from __future__ import annotations

import hashlib
import logging
import re
import statistics
from dataclasses import dataclass

from .pdfio import PdfPage, TextSpan, open_document
from .types import (
    Manuscript,
    MalformedPdf,
    NoTextLayer,
    OutlineNode,
    PageText,
    SectionOutline,
    Sentence,
)

logger = logging.getLogger(__name__)

_LINE_Y_TOLERANCE = 2.0  # points
_HEADING_MAX_TOKENS = 12
_LARGE_FONT_RATIO = 1.2

_NUMBERED_HEADING_RE = re.compile(r"^(\d+(?:\.\d+)*)\s+(\S.*)$")
_FIGURE_RE = re.compile(r"^(?:Figure|Fig\.?)\s+(\d+)\b")
_TABLE_RE = re.compile(r"^Table\s+(\d+)\b")

# Abbreviations that end with '.' but do not end a sentence.
_ABBREVIATIONS = (
    "et al.", "e.g.", "i.e.", "cf.", "vs.", "etc.", "resp.", "approx.",
    "Fig.", "Figs.", "Eq.", "Eqs.", "Tab.", "Sec.", "No.",
    "Dr.", "Mr.", "Ms.", "Prof.",
)

_SPLIT_RE = re.compile(r"([.!?])(\s+)(?=[A-Z0-9])")
_MIN_SENTENCE_TOKENS = 2


@dataclass
class Line:
    page: int
    y: float
    text: str
    size: float
    bold: bool


def _assemble_lines(page: PdfPage) -> list[Line]:
    """Group positioned spans into reading-order lines (top to bottom)."""
    spans = [s for s in page.spans if s.text.strip()]
    if not spans:
        return []
    spans.sort(key=lambda s: (-s.y, s.x))
    lines: list[list[TextSpan]] = []
    for span in spans:
        if lines and abs(lines[-1][0].y - span.y) <= _LINE_Y_TOLERANCE:
            lines[-1].append(span)
        else:
            lines.append([span])
    out = []
    for group in lines:
        group.sort(key=lambda s: s.x)
        text = " ".join(s.text.strip() for s in group).strip()
        if not text:
            continue
        out.append(
            Line(
                page=page.number,
                y=group[0].y,
                text=re.sub(r"\s+", " ", text),
                size=max(s.size for s in group),
                bold=all(s.bold for s in group),
            )
        )
    return out


def _body_font_size(lines: list[Line]) -> float:
    sizes = [ln.size for ln in lines if ln.size > 0]
    return statistics.median(sizes) if sizes else 0.0


def _is_heading(line: Line, body_size: float) -> tuple[bool, str | None, str]:
    """Return (opens_section, numbering label or None, title text)."""
    tokens = line.text.split()
    if len(tokens) > _HEADING_MAX_TOKENS:
        return False, None, ""
    m = _NUMBERED_HEADING_RE.match(line.text)
    # The trailing-punctuation guard keeps numeric prose ("3 out of 4 runs.")
    # from opening a section.
    if m and not line.text.rstrip().endswith((".", "!", "?", ",", ";", ":")):
        return True, m.group(1), m.group(2).strip()
    if body_size > 0 and (line.bold or line.size >= _LARGE_FONT_RATIO * body_size):
        if any(c.isalpha() for c in line.text) and not _FIGURE_RE.match(line.text) \
                and not _TABLE_RE.match(line.text):
            return True, None, line.text
    return False, None, ""


def split_sentences(text: str) -> list[str]:
    """Deterministic sentence segmentation with an abbreviation stop-list.

    Splits after '.', '!' or '?' followed by whitespace and an uppercase
    letter or digit; fragments below 2 tokens are merged forward.
    """
    text = re.sub(r"\s+", " ", text).strip()
    if not text:
        return []
    pieces: list[str] = []
    start = 0
    for m in _SPLIT_RE.finditer(text):
        head = text[start : m.end(1)]
        if any(head.endswith(abbr) for abbr in _ABBREVIATIONS):
            continue
        pieces.append(head.strip())
        start = m.end()
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    # Merge short fragments forward; a short trailing fragment merges backward.
    merged: list[str] = []
    carry = ""
    for piece in pieces:
        candidate = f"{carry} {piece}".strip() if carry else piece
        if len(candidate.split()) < _MIN_SENTENCE_TOKENS:
            carry = candidate
            continue
        merged.append(candidate)
        carry = ""
    if carry:
        if merged:
            merged[-1] = f"{merged[-1]} {carry}"
        else:
            merged.append(carry)
    return merged


def _attach_section(outline: SectionOutline, stack: list[OutlineNode], node: OutlineNode) -> None:
    if node.label is None:
        outline.sections.append(node)
        return
    depth = node.label.count(".")
    while stack and (stack[-1].label is None or stack[-1].label.count(".") >= depth):
        stack.pop()
    if stack:
        stack[-1].children.append(node)
    else:
        outline.sections.append(node)
    stack.append(node)


def extract_text(pdf_bytes: bytes) -> Manuscript:
    """Parse a PDF's embedded text into pages, sentences, and an outline.

    Raises MalformedPdf for unparseable input and NoTextLayer when the
    document contains no extractable characters.
    """
    doc = open_document(pdf_bytes)
    pdf_pages = doc.pages()
    if not pdf_pages:
        raise MalformedPdf("document has no pages")

    page_lines = [_assemble_lines(p) for p in pdf_pages]
    all_lines = [ln for lines in page_lines for ln in lines]
    if not any(ln.text.strip() for ln in all_lines):
        raise NoTextLayer("no extractable text; document appears to be scanned")

    body_size = _body_font_size(all_lines)
    outline = SectionOutline()
    stack: list[OutlineNode] = []
    sentences: list[Sentence] = []
    pages: list[PageText] = []

    current_path: tuple[int, ...] = ()

    for pdf_page, lines in zip(pdf_pages, page_lines):
        buffer: list[str] = []
        buffer_page = pdf_page.number

        def flush(path: tuple[int, ...], page_no: int) -> None:
            nonlocal buffer
            if not buffer:
                return
            for text in split_sentences(" ".join(buffer)):
                sentences.append(
                    Sentence(
                        index=len(sentences),
                        text=text,
                        page=page_no,
                        section_path=path,
                        token_count=len(text.split()),
                    )
                )
            buffer = []

        for line in lines:
            fig = _FIGURE_RE.match(line.text)
            if fig:
                outline.figures.setdefault(int(fig.group(1)), line.page)
            tab = _TABLE_RE.match(line.text)
            if tab:
                outline.tables.setdefault(int(tab.group(1)), line.page)

            opens, label, title = _is_heading(line, body_size)
            if opens:
                flush(current_path, buffer_page)
                node = OutlineNode(title=title, label=label, page=line.page)
                if label is not None and outline.has_section(node.path):
                    # Duplicate numbering (e.g. running headers): keep the first.
                    current_path = node.path
                else:
                    _attach_section(outline, stack, node)
                    current_path = node.path if node.path is not None else ()
            else:
                buffer.append(line.text)
        flush(current_path, buffer_page)
        pages.append(
            PageText(page=pdf_page.number, text="\n".join(ln.text for ln in lines))
        )

    manuscript_id = hashlib.sha256(pdf_bytes).hexdigest()[:16]
    return Manuscript(
        id=manuscript_id,
        pages=pages,
        sentences=sentences,
        outline=outline,
        page_images=[],
    )
