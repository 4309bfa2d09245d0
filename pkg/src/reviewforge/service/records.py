"""JSON-safe serialization of ingest artifacts for the record store."""

from __future__ import annotations

import base64

from ..ingest.types import (
    CompositeImage,
    Manuscript,
    OutlineNode,
    PageImage,
    PageText,
    SectionOutline,
    Sentence,
)

MANUSCRIPT_SCHEMA_VERSION = 1


def _node_to_dict(node: OutlineNode) -> dict:
    return {
        "title": node.title,
        "label": node.label,
        "page": node.page,
        "children": [_node_to_dict(c) for c in node.children],
    }


def _node_from_dict(raw: dict) -> OutlineNode:
    return OutlineNode(
        title=raw["title"],
        label=raw.get("label"),
        page=raw["page"],
        children=[_node_from_dict(c) for c in raw.get("children", [])],
    )


def outline_to_dict(outline: SectionOutline) -> dict:
    return {
        "sections": [_node_to_dict(n) for n in outline.sections],
        "figures": {str(k): v for k, v in outline.figures.items()},
        "tables": {str(k): v for k, v in outline.tables.items()},
    }


def outline_from_dict(raw: dict) -> SectionOutline:
    return SectionOutline(
        sections=[_node_from_dict(n) for n in raw.get("sections", [])],
        figures={int(k): v for k, v in raw.get("figures", {}).items()},
        tables={int(k): v for k, v in raw.get("tables", {}).items()},
    )


def page_image_to_dict(image: PageImage) -> dict:
    return {
        "page": image.page,
        "width": image.width,
        "height": image.height,
        "format": image.format,
        "data": base64.b64encode(image.data).decode(),
    }


def page_image_from_dict(raw: dict) -> PageImage:
    return PageImage(
        page=raw["page"],
        width=raw["width"],
        height=raw["height"],
        format=raw.get("format", "png"),
        data=base64.b64decode(raw["data"]),
    )


def composite_to_dict(image: CompositeImage) -> dict:
    return {
        "width": image.width,
        "height": image.height,
        "format": image.format,
        "data": base64.b64encode(image.data).decode(),
        "separators": list(image.separators),
        "page_ranges": [list(r) for r in image.page_ranges],
    }


def composite_from_dict(raw: dict) -> CompositeImage:
    return CompositeImage(
        width=raw["width"],
        height=raw["height"],
        format=raw.get("format", "png"),
        data=base64.b64decode(raw["data"]),
        separators=tuple(raw.get("separators", [])),
        page_ranges=tuple(tuple(r) for r in raw.get("page_ranges", [])),
    )


def manuscript_to_dict(manuscript: Manuscript) -> dict:
    return {
        "schema_version": MANUSCRIPT_SCHEMA_VERSION,
        "id": manuscript.id,
        "pages": [{"page": p.page, "text": p.text} for p in manuscript.pages],
        "sentences": [
            {
                "index": s.index,
                "text": s.text,
                "page": s.page,
                "section_path": list(s.section_path),
                "token_count": s.token_count,
            }
            for s in manuscript.sentences
        ],
        "outline": outline_to_dict(manuscript.outline),
        "page_images": [page_image_to_dict(im) for im in manuscript.page_images],
    }


def manuscript_from_dict(raw: dict) -> Manuscript:
    return Manuscript(
        id=raw["id"],
        pages=[PageText(page=p["page"], text=p["text"]) for p in raw["pages"]],
        sentences=[
            Sentence(
                index=s["index"],
                text=s["text"],
                page=s["page"],
                section_path=tuple(s["section_path"]),
                token_count=s["token_count"],
            )
            for s in raw["sentences"]
        ],
        outline=outline_from_dict(raw["outline"]),
        page_images=[page_image_from_dict(im) for im in raw.get("page_images", [])],
    )
