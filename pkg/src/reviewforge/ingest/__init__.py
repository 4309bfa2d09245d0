"""Manuscript ingestion: text stream (extract, cluster, summarize) and
visual stream (render, compose). The two streams are independent and safe to
run concurrently for one document."""

from .cluster import boundary_novelty, cluster_recursive, score_partition
from .extract import extract_text, split_sentences
from .images import compose_pages, render_pages
from .summarize import ExtractiveSummarizer, Summarizer, render_summary, summarize_hierarchy
from .types import (
    ClusterNode,
    ClusterTree,
    CompositeImage,
    EmptyInput,
    EmptyPageList,
    HierarchicalSummary,
    InvalidBoundaries,
    MalformedPdf,
    Manuscript,
    NoTextLayer,
    OutlineNode,
    PageImage,
    PageText,
    PartitionScore,
    RenderFailure,
    SectionOutline,
    Sentence,
    SummarizerFailure,
    SummaryEntry,
)

__all__ = [
    "boundary_novelty",
    "cluster_recursive",
    "score_partition",
    "extract_text",
    "split_sentences",
    "compose_pages",
    "render_pages",
    "ExtractiveSummarizer",
    "Summarizer",
    "render_summary",
    "summarize_hierarchy",
    "ClusterNode",
    "ClusterTree",
    "CompositeImage",
    "EmptyInput",
    "EmptyPageList",
    "HierarchicalSummary",
    "InvalidBoundaries",
    "MalformedPdf",
    "Manuscript",
    "NoTextLayer",
    "OutlineNode",
    "PageImage",
    "PageText",
    "PartitionScore",
    "RenderFailure",
    "SectionOutline",
    "Sentence",
    "SummarizerFailure",
    "SummaryEntry",
]
