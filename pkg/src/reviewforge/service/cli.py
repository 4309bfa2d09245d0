"""Command-line interface: review a PDF, load a corpus, serve the API."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..config import load_config
from ..metrics import evaluate_pair_file
from ..review import TodoItem, locator_from_dict, render_checklist
from .pipeline import ReviewService

logger = logging.getLogger(__name__)


def _build_service(args: argparse.Namespace) -> ReviewService:
    config = load_config(args.config) if args.config else load_config()
    if getattr(args, "data_dir", None):
        config.service.data_dir = args.data_dir
    return ReviewService(config)


def _cmd_review(args: argparse.Namespace) -> int:
    service = _build_service(args)
    pdf_bytes = Path(args.pdf).read_bytes()
    manuscript_id = service.submit_manuscript(pdf_bytes)
    print(f"manuscript: {manuscript_id}", file=sys.stderr)
    job_id = service.generate_review(
        manuscript_id, args.venue, mode=args.mode, use_rag=not args.no_rag
    )
    job = service.wait_for_job(job_id, timeout_s=args.timeout)
    if job["state"] == "failed":
        print(f"review failed: {job['error']}", file=sys.stderr)
        return 1
    review = service.get_review(job["review_id"])
    todos = [
        TodoItem(
            index=t["index"],
            action=t["action"],
            objective=t["objective"],
            locator=locator_from_dict(t["locator"]),
            done=t["done"],
        )
        for t in review["todos"]
    ]
    output = review["raw_markdown"] + "\n\n## Checklist\n" + render_checklist(todos) + "\n"
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        print(output)
    service.shutdown()
    return 0


def _cmd_corpus_load(args: argparse.Namespace) -> int:
    service = _build_service(args)
    summary = service.load_corpus_path(args.file, args.venue)
    print(json.dumps(summary, indent=2))
    service.shutdown()
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    config = load_config(args.config) if args.config else load_config()
    if args.host:
        config.service.host = args.host
    if args.port:
        config.service.port = args.port
    service = ReviewService(config)
    app = create_app(service)
    uvicorn.run(app, host=config.service.host, port=config.service.port)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    report = evaluate_pair_file(args.pairs, csv_path=args.csv)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2), encoding="utf-8")
        print(f"wrote {args.json}", file=sys.stderr)
    else:
        print(json.dumps(report["aggregate"], indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    # --config/--data-dir are accepted both before and after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON config file")
    common.add_argument("--data-dir", help="override service.data_dir")

    parser = argparse.ArgumentParser(prog="reviewforge", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name: str, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p_review = add_parser("review", help="generate a review for a PDF")
    p_review.add_argument("pdf")
    p_review.add_argument("--venue", required=True)
    p_review.add_argument("--mode", default="multimodal", choices=["text_only", "image_only", "multimodal"])
    p_review.add_argument("--no-rag", action="store_true", help="skip corpus retrieval")
    p_review.add_argument("--out", help="write markdown + checklist to a file")
    p_review.add_argument("--timeout", type=float, default=120.0)
    p_review.set_defaults(func=_cmd_review)

    p_corpus = add_parser("corpus", help="corpus administration")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command", required=True)
    p_load = corpus_sub.add_parser("load", parents=[common], help="index a JSON Lines corpus for a venue")
    p_load.add_argument("file")
    p_load.add_argument("--venue", required=True)
    p_load.set_defaults(func=_cmd_corpus_load)

    p_serve = add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.set_defaults(func=_cmd_serve)

    p_eval = add_parser("eval", help="batch-score candidate/reference pairs")
    p_eval.add_argument("pairs", help="JSON Lines file of {candidate, reference}")
    p_eval.add_argument("--csv", help="write per-pair scores as CSV")
    p_eval.add_argument("--json", help="write the full report as JSON")
    p_eval.set_defaults(func=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
