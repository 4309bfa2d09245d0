"""Visual stream: rasterize pages and stack them into one composite image.

Rendering paints the embedded text layer onto a white canvas at the page's
true geometry. That keeps dimensions and layout faithful for downstream
composition without a full graphics rasterizer; vector art and embedded
images are out of scope for this backend.
"""

from __future__ import annotations

import io
import logging

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from .pdfio import open_document
from .types import CompositeImage, EmptyPageList, MalformedPdf, PageImage, RenderFailure

logger = logging.getLogger(__name__)

DEFAULT_DPI = 144
DEFAULT_TARGET_WIDTH = 1024
DEFAULT_SEPARATOR_HEIGHT = 8
SEPARATOR_GRAY = (128, 128, 128)

MIN_DPI, MAX_DPI = 72, 300

_FONT_CACHE: dict[int, ImageFont.ImageFont] = {}


def _font(size_px: int) -> ImageFont.ImageFont:
    size_px = max(6, min(96, size_px))
    if size_px not in _FONT_CACHE:
        _FONT_CACHE[size_px] = ImageFont.load_default(size=size_px)
    return _FONT_CACHE[size_px]


def _png_bytes(image: Image.Image) -> bytes:
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()


def _decode(image: PageImage | CompositeImage) -> Image.Image:
    return Image.open(io.BytesIO(image.data)).convert("RGB")


def render_pages(pdf_bytes: bytes, dpi: int = DEFAULT_DPI) -> list[PageImage]:
    """Render each page to a PNG raster at the requested density."""
    if not MIN_DPI <= dpi <= MAX_DPI:
        raise ValueError(f"dpi must be in [{MIN_DPI}, {MAX_DPI}]")
    doc = open_document(pdf_bytes)
    pages = doc.pages()
    if not pages:
        raise MalformedPdf("document has no pages")
    scale = dpi / 72.0
    out: list[PageImage] = []
    for page in pages:
        try:
            width = max(1, round(page.width * scale))
            height = max(1, round(page.height * scale))
            canvas = Image.new("RGB", (width, height), (255, 255, 255))
            draw = ImageDraw.Draw(canvas)
            for span in page.spans:
                size_px = round(span.size * scale)
                if size_px <= 0 or not span.text.strip():
                    continue
                # PDF y is the baseline from the bottom edge; PIL draws from
                # the glyph top, so shift up by an approximate ascent.
                top = height - (span.y + 0.8 * span.size) * scale
                draw.text((span.x * scale, top), span.text, fill=(0, 0, 0), font=_font(size_px))
            out.append(
                PageImage(
                    page=page.number,
                    width=width,
                    height=height,
                    data=_png_bytes(canvas),
                )
            )
        except MalformedPdf:
            raise
        except Exception as exc:
            raise RenderFailure(f"failed to render page {page.number}: {exc}", page=page.number) from exc
    return out


def compose_pages(
    pages: list[PageImage],
    target_width: int = DEFAULT_TARGET_WIDTH,
    separator_height: int = DEFAULT_SEPARATOR_HEIGHT,
) -> CompositeImage:
    """Scale pages to one width and stack them with solid separator bands."""
    if not pages:
        raise EmptyPageList("compose_pages requires at least one page")
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    if separator_height < 0:
        raise ValueError("separator_height must be >= 0")

    scaled: list[Image.Image] = []
    for page in pages:
        img = _decode(page)
        if img.width != target_width:
            new_height = max(1, round(img.height * target_width / img.width))
            img = img.resize((target_width, new_height), Image.LANCZOS)
        scaled.append(img)

    total_height = sum(im.height for im in scaled) + separator_height * (len(scaled) - 1)
    canvas = Image.new("RGB", (target_width, total_height), SEPARATOR_GRAY)
    separators: list[int] = []
    page_ranges: list[tuple[int, int, int]] = []
    y = 0
    for i, (page, img) in enumerate(zip(pages, scaled)):
        canvas.paste(img, (0, y))
        page_ranges.append((page.page, y, y + img.height))
        y += img.height
        if i + 1 < len(scaled):
            separators.append(y)
            y += separator_height
    return CompositeImage(
        width=target_width,
        height=total_height,
        data=_png_bytes(canvas),
        separators=tuple(separators),
        page_ranges=tuple(page_ranges),
    )


def composite_slice(composite: CompositeImage, y0: int, y1: int) -> np.ndarray:
    """Pixels of the composite between two y offsets, as an array."""
    img = _decode(composite)
    return np.asarray(img)[y0:y1, :, :]


def page_pixels(image: PageImage | CompositeImage) -> np.ndarray:
    return np.asarray(_decode(image))
