"""Shared fixtures: programmatic PDFs (written with reportlab, read back by
the package's own parser) and corpus/review fixtures."""

from __future__ import annotations

import io
import json
import random

import pytest
from PIL import Image
from reportlab.lib.pagesizes import letter
from reportlab.pdfgen import canvas


def build_pdf(pages: list[list[tuple]], pagesize=letter) -> bytes:
    """Build a PDF where each page is a list of (text, x, y, font, size)."""
    buf = io.BytesIO()
    c = canvas.Canvas(buf, pagesize=pagesize)
    for page in pages:
        for text, x, y, font, size in page:
            c.setFont(font, size)
            c.drawString(x, y, text)
        c.showPage()
    c.save()
    return buf.getvalue()


def text_page(lines: list[tuple[str, str, int]], top: float = 740.0, leading: float = 16.0):
    """Lay out (text, font, size) rows top-down at x=72."""
    out = []
    y = top
    for text, font, size in lines:
        out.append((text, 72, y, font, size))
        y -= leading
    return out


BODY = "Helvetica"
BOLD = "Helvetica-Bold"


@pytest.fixture(scope="session")
def three_page_pdf() -> bytes:
    page1 = text_page(
        [
            ("Adaptive Widget Calibration", BOLD, 16),
            ("1 Introduction", BOLD, 13),
            ("Widget calibration drifts under thermal load. This gap is rarely measured.", BODY, 11),
            ("We study drift on commodity hardware. Our benchmark covers nine devices.", BODY, 11),
            ("Prior tools assume static offsets. That assumption fails in the field.", BODY, 11),
        ]
    )
    page2 = text_page(
        [
            ("2 Method", BOLD, 13),
            ("We sample sensor offsets every minute. Samples feed a rolling estimator.", BODY, 11),
            ("The estimator fuses temperature and load. Fusion weights adapt online.", BODY, 11),
            ("Figure 1: Calibration pipeline from raw samples to corrected output.", BODY, 9),
            ("2.1 Estimator", BOLD, 12),
            ("The rolling window holds sixty samples. Old samples decay exponentially.", BODY, 11),
            ("Table 1: Symbols used by the estimator.", BODY, 9),
        ]
    )
    page3 = text_page(
        [
            ("3 Results", BOLD, 13),
            ("Drift fell by half across devices. Gains were largest on cheap sensors.", BODY, 11),
            ("The method adds negligible overhead. Memory use stays below one megabyte.", BODY, 11),
            ("4 Conclusion", BOLD, 13),
            ("Rolling calibration is practical today. Wider trials remain future work.", BODY, 11),
        ]
    )
    return build_pdf([page1, page2, page3])


@pytest.fixture(scope="session")
def one_sentence_pdf() -> bytes:
    return build_pdf([[("Hello world.", 72, 720, BODY, 11)]])


@pytest.fixture(scope="session")
def image_only_pdf() -> bytes:
    img = Image.new("RGB", (64, 64), (200, 30, 30))
    img_buf = io.BytesIO()
    img.save(img_buf, format="PNG")
    img_buf.seek(0)
    buf = io.BytesIO()
    c = canvas.Canvas(buf, pagesize=letter)
    from reportlab.lib.utils import ImageReader

    c.drawImage(ImageReader(img_buf), 72, 600, width=128, height=128)
    c.showPage()
    c.save()
    return buf.getvalue()


@pytest.fixture(scope="session")
def zero_page_pdf() -> bytes:
    # Hand-built: structurally valid, catalog present, zero kids.
    body = (
        b"%PDF-1.4\n"
        b"1 0 obj\n<< /Type /Catalog /Pages 2 0 R >>\nendobj\n"
        b"2 0 obj\n<< /Type /Pages /Kids [] /Count 0 >>\nendobj\n"
        b"trailer\n<< /Root 1 0 R /Size 3 >>\n"
        b"%%EOF\n"
    )
    return body


def corpus_entry_dict(i: int, title: str, abstract: str, reviews: list[str] | None = None) -> dict:
    return {
        "id": f"paper-{i:04d}",
        "title": title,
        "abstract": abstract,
        "venue": "testconf",
        "year": 2021 + (i % 2),
        "reviews": reviews or [],
    }


def synthetic_corpus_lines(n: int, seed: int = 7) -> list[str]:
    """n JSONL corpus entries over a closed vocabulary, deterministic."""
    rng = random.Random(seed)
    vocab = [f"term{j}" for j in range(120)]
    lines = []
    for i in range(n):
        title = " ".join(rng.choice(vocab) for _ in range(6))
        abstract = " ".join(rng.choice(vocab) for _ in range(30))
        reviews = [
            "The method narrows its claims well. "
            + " ".join(rng.choice(vocab) for _ in range(12)),
            "Experiments are thorough. " + " ".join(rng.choice(vocab) for _ in range(10)),
        ]
        lines.append(json.dumps(corpus_entry_dict(i, title, abstract, reviews)))
    return lines


FIXTURE_REVIEW_MARKDOWN = """## Summary
The manuscript studies rolling calibration for widget sensors and reports halved drift.

## Originality
The drift benchmark is new, though the estimator reuses standard fusion ideas.

## Soundness
Sampling methodology is plausible; variance reporting is missing.

## Clarity
Sections follow a clean arc from gap to results.

## Significance
Practitioners with cheap sensors benefit most.

## Strengths
- Clear problem statement grounded in field failures.
- Low overhead makes adoption realistic.

## Weaknesses
- No confidence intervals on the headline numbers.
- Estimator hyperparameters are asserted, not swept.

## To-Do
- Revise introduction: Describe the research gap [Section 1. L12-L18]
- Update Figure 3 caption: Improve interpretability with detailed descriptions [Page 5. Figure 3]
- Add citation: Ensure academic rigor for metric selections [Section 4.1]
- Report variance: Add confidence intervals to headline results [Section 3]
- Tighten the abstract: Lead with the drift reduction [Page 1]
"""
