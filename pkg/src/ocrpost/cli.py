"""Command-line interface.

Subcommands: run (correct a document), eval (score against a reference),
train-lm (desk-scale model training), serve (review service), candidates
(debug-print one word's candidate set).

Exit codes: 0 ok, 2 usage, 3 I/O, 4 OCR subprocess failure, 5 model parse
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from ocrpost import __version__, candidates, corrector, evalkit, ingest, lexicon, ngram

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_OCR = 4
EXIT_MODEL = 5


@dataclass
class RunConfig:
    input: str
    output: str
    lexicon_paths: list[str]
    lm_path: str
    page_range: tuple[int, int] | None = None
    confusion_map_path: str | None = None
    k: int = 3
    cutoff: float = 0.6
    max_sites: int = 8
    arrow: str = "ascii"
    workers: int = 1
    ocr_command: str | None = None
    manifest: bool = False
    save_raw: str | None = None

    def manifest_lines(self) -> list[str]:
        pairs = {
            "tool": f"ocrpost {__version__}",
            "input": self.input,
            "output": self.output,
            "pages": f"{self.page_range[0]}..{self.page_range[1]}"
            if self.page_range
            else "all",
            "lexicon": ",".join(self.lexicon_paths),
            "lm": self.lm_path,
            "confusion_map": self.confusion_map_path or "builtin:f>s",
            "k": self.k,
            "cutoff": self.cutoff,
            "max_sites": self.max_sites,
            "arrow": self.arrow,
            "workers": self.workers,
            "ocr_command": self.ocr_command or "-",
            "save_raw": self.save_raw or "-",
        }
        return [f"{key}={value}" for key, value in pairs.items()]


def _progress(message: str) -> None:
    print(f"[ocrpost] {message}", file=sys.stderr, flush=True)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocrpost", description="Post-OCR correction toolkit"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="correct a document and write the edit ledger")
    # positional compatibility: run INPUT OUTPUT [FIRST LAST]
    run.add_argument("input_pos", nargs="?", metavar="INPUT")
    run.add_argument("output_pos", nargs="?", metavar="OUTPUT")
    run.add_argument("first_pos", nargs="?", type=int, metavar="FIRST")
    run.add_argument("last_pos", nargs="?", type=int, metavar="LAST")
    run.add_argument("--input", "-i")
    run.add_argument("--out", "-o")
    run.add_argument("--from-page", type=int)
    run.add_argument("--to-page", type=int)
    run.add_argument("--lexicon", action="append", default=[])
    run.add_argument("--lm")
    run.add_argument("--confusion-map")
    run.add_argument("--k", type=int, default=3)
    run.add_argument("--cutoff", type=float, default=0.6)
    run.add_argument("--max-sites", type=int, default=8)
    run.add_argument("--arrow", choices=["ascii", "unicode"], default="ascii")
    run.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    run.add_argument("--ocr-cmd", default=os.environ.get("OCRPOST_OCR_CMD"))
    run.add_argument("--manifest", action="store_true")
    run.add_argument("--save-raw", help="also write the pre-correction lines")

    ev = sub.add_parser("eval", help="score a correction against a reference")
    ev.add_argument("--raw", required=True)
    ev.add_argument("--hyp", required=True)
    ev.add_argument("--ref", required=True)
    ev.add_argument("--ignore-case", action="store_true")
    ev.add_argument("--json", action="store_true")

    tr = sub.add_parser("train-lm", help="train a small backoff model")
    tr.add_argument("--corpus", required=True)
    tr.add_argument("--order", type=int, default=3)
    tr.add_argument("--discount", type=float, default=0.75)
    tr.add_argument("--out", required=True)

    sv = sub.add_parser("serve", help="review service over a finished run")
    sv.add_argument("--ledger", required=True)
    sv.add_argument("--raw", required=True, help="pre-correction lines (see run --save-raw)")
    sv.add_argument("--port", type=int, default=8765)
    sv.add_argument("--decisions")
    sv.add_argument("--ui-dir", default=_default_ui_dir())

    ca = sub.add_parser("candidates", help="print a word's candidate set as JSON")
    ca.add_argument("word")
    ca.add_argument("--lexicon", action="append", required=True)
    ca.add_argument("--confusion-map")
    ca.add_argument("--k", type=int, default=3)
    ca.add_argument("--cutoff", type=float, default=0.6)
    ca.add_argument("--max-sites", type=int, default=8)
    return parser


def _default_ui_dir() -> str | None:
    here = os.path.dirname(os.path.abspath(__file__))
    for base in (os.path.join(here, "..", ".."),):
        cand = os.path.realpath(os.path.join(base, "frontend", "dist"))
        if os.path.isdir(cand):
            return cand
    return None


def _load_confusion_map(path: str | None, max_sites: int) -> candidates.ConfusionMap:
    if path is None:
        return candidates.ConfusionMap(max_sites=max_sites)
    return candidates.ConfusionMap.from_file(path, max_sites=max_sites)


def _cmd_run(args) -> int:
    input_path = args.input or args.input_pos
    output_path = args.out or args.output_pos
    first = args.from_page if args.from_page is not None else args.first_pos
    last = args.to_page if args.to_page is not None else args.last_pos
    if not input_path or not output_path:
        print("run: an input and an output path are required", file=sys.stderr)
        return EXIT_USAGE
    if (first is None) != (last is None):
        print("run: --from-page and --to-page must be given together", file=sys.stderr)
        return EXIT_USAGE
    if not args.lexicon:
        print("run: at least one --lexicon is required", file=sys.stderr)
        return EXIT_USAGE
    if not args.lm:
        print("run: --lm is required", file=sys.stderr)
        return EXIT_USAGE
    page_range = (first, last) if first is not None else None

    try:
        lex = lexicon.load(args.lexicon)
        _progress(f"lexicon loaded: {len(lex)} words")
        cmap = _load_confusion_map(args.confusion_map, args.max_sites)
    except (lexicon.LexiconError, candidates.ConfusionMapError, OSError) as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        model = ngram.load_arpa(args.lm)
        _progress(f"model loaded: order {model.order}, {len(model.vocab)} unigrams")
    except OSError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    except ngram.ArpaFormatError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_MODEL

    try:
        doc = ingest.acquire(
            input_path,
            page_range=page_range,
            ocr_command=args.ocr_cmd,
            workers=args.workers,
        )
        _progress(f"acquired {len(doc.pages)} page(s)")
    except ingest.OcrCommandError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_OCR
    except ingest.IngestError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO

    config = corrector.CorrectorConfig(
        k=args.k, cutoff=args.cutoff, workers=args.workers
    )
    rejoined = ingest.rejoin_hyphens(doc)
    corrected = corrector.correct_document(doc, lex, cmap, model, config)
    edits_total = sum(len(cl.edits) for cl in corrected)
    _progress(f"corrected {len(corrected)} lines, {edits_total} edits")

    run_config = RunConfig(
        input=input_path,
        output=output_path,
        lexicon_paths=args.lexicon,
        lm_path=args.lm,
        page_range=page_range,
        confusion_map_path=args.confusion_map,
        k=args.k,
        cutoff=args.cutoff,
        max_sites=args.max_sites,
        arrow=args.arrow,
        workers=args.workers,
        ocr_command=args.ocr_cmd,
        manifest=args.manifest,
        save_raw=args.save_raw,
    )
    try:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            corrector.write_ledger(
                corrected,
                fh,
                arrow=args.arrow,
                header=run_config.manifest_lines() if args.manifest else None,
            )
        if args.save_raw:
            with open(args.save_raw, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("\n".join(rejoined.lines()) + "\n")
    except OSError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().replace("\r\n", "\n").rstrip("\n").split("\n")


def _cmd_eval(args) -> int:
    try:
        raw = _read_lines(args.raw)
        hyp = _read_lines(args.hyp)
        ref = _read_lines(args.ref)
    except OSError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        report = evalkit.evaluate(raw, hyp, ref, ignore_case=args.ignore_case)
    except evalkit.EvalError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(report.to_json())
    else:
        rate = (
            f"{report.correction_rate:.3f}"
            if report.correction_rate is not None
            else "n/a"
        )
        print(f"WER  before {report.wer_before:.4f}  after {report.wer_after:.4f}")
        print(f"CER  before {report.cer_before:.4f}  after {report.cer_after:.4f}")
        print(
            f"errors {report.errors_total}  fixed {report.errors_fixed}  "
            f"rate {rate}"
        )
        print(f"lines with edits: {report.lines_with_edits_fraction:.3f}")
    return EXIT_OK


def _cmd_train(args) -> int:
    try:
        model = ngram.train_small(args.corpus, order=args.order, discount=args.discount)
        ngram.write_arpa(model, args.out)
    except OSError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _progress(f"trained order-{args.order} model -> {args.out}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from ocrpost import review

    try:
        session = review.ReviewSession.load(
            args.ledger, args.raw, decisions_path=args.decisions
        )
    except OSError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    except (review.ReviewError, ValueError) as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        server = review.ReviewServer(
            session, port=args.port, ui_dir=args.ui_dir, quiet=False
        )
    except review.ReviewError as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    _progress(f"review service on http://127.0.0.1:{server.port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


def _cmd_candidates(args) -> int:
    try:
        lex = lexicon.load(args.lexicon)
        cmap = _load_confusion_map(args.confusion_map, args.max_sites)
    except (lexicon.LexiconError, candidates.ConfusionMapError, OSError) as exc:
        print(f"ocrpost: {exc}", file=sys.stderr)
        return EXIT_IO
    cset = candidates.generate(args.word, lex, cmap, k=args.k, cutoff=args.cutoff)
    payload = {
        "word": cset.original,
        "recognized": lexicon.contains(lex, cset.original),
        "alternatives": [
            {"text": c.text, "kind": c.kind, "score": c.score}
            for c in cset.alternatives
        ],
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "eval": _cmd_eval,
        "train-lm": _cmd_train,
        "serve": _cmd_serve,
        "candidates": _cmd_candidates,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
