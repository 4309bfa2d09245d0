"""Domain types for manuscript ingestion: text stream, cluster tree, page images."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from ..errors import ReviewForgeError


class MalformedPdf(ReviewForgeError):
    """Input bytes are not a parseable PDF document."""


class NoTextLayer(ReviewForgeError):
    """PDF parsed but contains no extractable text (scanned document)."""


class InvalidBoundaries(ReviewForgeError):
    """Partition boundaries out of range or not strictly increasing."""


class EmptyInput(ReviewForgeError):
    """An operation received an empty sentence list."""


class SummarizerFailure(ReviewForgeError):
    """A summarizer failed; carries the cluster range it was working on."""

    def __init__(self, message: str, start: int = -1, end: int = -1):
        super().__init__(message)
        self.start = start
        self.end = end


class RenderFailure(ReviewForgeError):
    """Rendering a page raster failed; carries the page index."""

    def __init__(self, message: str, page: int = -1):
        super().__init__(message)
        self.page = page


class EmptyPageList(ReviewForgeError):
    """compose_pages called with no pages."""


@dataclass(frozen=True)
class PageText:
    """Raw extracted text of one page, lines joined by newlines."""

    page: int
    text: str


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    page: int
    section_path: tuple[int, ...]
    token_count: int


@dataclass
class OutlineNode:
    """One heading in the section tree.

    ``label`` is the dotted numbering string ("4.1") for numbered headings,
    None for font-detected headings without a number.
    """

    title: str
    label: Optional[str]
    page: int
    children: list["OutlineNode"] = field(default_factory=list)

    @property
    def path(self) -> Optional[tuple[int, ...]]:
        if self.label is None:
            return None
        return tuple(int(p) for p in self.label.split("."))


@dataclass
class SectionOutline:
    sections: list[OutlineNode] = field(default_factory=list)
    figures: dict[int, int] = field(default_factory=dict)  # figure number -> page
    tables: dict[int, int] = field(default_factory=dict)  # table number -> page

    def iter_nodes(self) -> Iterator[OutlineNode]:
        stack = list(reversed(self.sections))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def section_paths(self) -> set[tuple[int, ...]]:
        return {n.path for n in self.iter_nodes() if n.path is not None}

    def has_section(self, path: tuple[int, ...]) -> bool:
        return path in self.section_paths()


@dataclass(frozen=True)
class PageImage:
    page: int
    width: int
    height: int
    data: bytes
    format: str = "png"


@dataclass(frozen=True)
class CompositeImage:
    width: int
    height: int
    data: bytes
    format: str = "png"
    separators: tuple[int, ...] = ()  # y-offset of each separator band
    page_ranges: tuple[tuple[int, int, int], ...] = ()  # (page, y0, y1), y1 exclusive


@dataclass
class Manuscript:
    id: str
    pages: list[PageText]
    sentences: list[Sentence]
    outline: SectionOutline
    page_images: list[PageImage] = field(default_factory=list)

    @property
    def page_count(self) -> int:
        return len(self.pages)

    def sentences_in_section(self, path: tuple[int, ...]) -> list[Sentence]:
        return [s for s in self.sentences if s.section_path == path]


@dataclass
class ClusterNode:
    """Half-open sentence range [start, end); children partition it exactly."""

    start: int
    end: int
    score: float = 0.0
    children: list["ClusterNode"] = field(default_factory=list)
    summary: Optional[str] = None

    @property
    def size(self) -> int:
        return self.end - self.start

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class ClusterTree:
    root: ClusterNode

    def leaves(self) -> list[ClusterNode]:
        out: list[ClusterNode] = []

        def walk(node: ClusterNode) -> None:
            if node.is_leaf:
                out.append(node)
            else:
                for child in node.children:
                    walk(child)

        walk(self.root)
        return out

    def boundaries(self) -> list[int]:
        """Interior breakpoints of the leaf partition, in document order."""
        leaves = self.leaves()
        return [leaf.start for leaf in leaves[1:]]


@dataclass(frozen=True)
class PartitionScore:
    burst: float
    balance: float
    alpha: float
    total: float


@dataclass(frozen=True)
class SummaryEntry:
    """One summarized cluster; level 0 is the whole-document overview."""

    level: int
    start: int
    end: int
    text: str
    section_paths: tuple[tuple[int, ...], ...] = ()


@dataclass
class HierarchicalSummary:
    levels: list[SummaryEntry]
    rendered_text: str
    token_budget: int
