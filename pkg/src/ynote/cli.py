"""``ynote`` command line.

Exit status: 0 success, 1 validation failure, 2 I/O or format error,
3 usage error. Payloads go to stdout (or ``--out``); diagnostics and
summaries go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import audio, metrics, pipeline
from .core import YNoteError
from .interop import ConversionError, abc_import, midi_export, midi_import, musicxml_import
from .text import YNoteSyntaxError, format_note, normalize, parse_stream, serialize

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _err(*parts) -> None:
    print(*parts, file=sys.stderr)


def _emit(payload, out) -> None:
    if out:
        path = Path(out)
        if isinstance(payload, bytes):
            path.write_bytes(payload)
        else:
            path.write_text(payload)
    elif isinstance(payload, bytes):
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(payload)
        sys.stdout.flush()


def _read_score(path):
    score, diags = parse_stream(Path(path).read_text())
    if diags:
        raise YNoteSyntaxError(diags)
    return score


def cmd_validate(args) -> int:
    _, diags = parse_stream(Path(args.path).read_bytes())
    for d in diags:
        _err(d)
    return EXIT_INVALID if diags else EXIT_OK


def cmd_normalize(args) -> int:
    text, report = normalize(Path(args.input).read_bytes())
    _emit(text, args.out)
    _err(report.summary())
    if args.report:
        lines = [report.summary()] + [
            f"{e.offset}: {e.rule}: {e.old!r} -> {e.new!r}" for e in report.edits
        ]
        Path(args.report).write_text("\n".join(lines) + "\n")
    return EXIT_OK


_IMPORTERS = {
    "midi": lambda p: midi_import(Path(p).read_bytes()),
    "abc": lambda p: abc_import(Path(p).read_text()),
    "musicxml": lambda p: musicxml_import(Path(p).read_bytes()),
}


def cmd_convert(args) -> int:
    if args.src == "ynote":
        score = _read_score(args.input)
    else:
        score, loss = _IMPORTERS[args.src](args.input)
        _err(loss.summary())
    if args.tempo is not None:
        score = type(score)(score.notes, tempo_bpm=args.tempo)
    if args.dst == "ynote":
        payload = serialize(score)
    elif args.dst == "midi":
        payload = midi_export(score)
    else:
        payload = audio.render_wav(score, audio.RenderConfig(sample_rate=args.sample_rate))
    _emit(payload, args.out)
    return EXIT_OK


def cmd_prompt(args) -> int:
    score = _read_score(args.input)
    prompt = pipeline.extract_prompt(score, args.mode)
    _emit(prompt.to_text(), args.out)
    return EXIT_OK


def cmd_train(args) -> int:
    corpus_dir = Path(args.corpus)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"not a directory: {corpus_dir}")
    corpus = pipeline.load_corpus(corpus_dir)
    if not corpus:
        raise FileNotFoundError(f"no .ynote files in {corpus_dir}")
    model = pipeline.train_markov([[format_note(n) for n in s.notes] for _, s in corpus], args.order)
    model.save(args.out)
    _err(f"trained order-{model.order} model on {len(corpus)} pieces, "
         f"{len(model.transitions)} contexts, {len(model.vocabulary)} tokens")
    return EXIT_OK


def cmd_generate(args) -> int:
    model = pipeline.MarkovModel.load(args.model)
    prompt = metrics.tokenize(Path(args.prompt).read_text())
    if args.length < len(prompt):
        raise UsageError(f"--length {args.length} is shorter than the prompt ({len(prompt)} notes)")
    raw = pipeline.generate(model, prompt, args.length, args.seed)
    text, report = normalize(raw)
    _emit(text, args.out)
    _err(report.summary())
    return EXIT_OK


def cmd_evaluate(args) -> int:
    references = [metrics.tokenize(Path(r).read_text()) for r in args.reference]
    records = []
    for i, cand in enumerate(args.candidates):
        text, report = normalize(Path(cand).read_bytes())
        records.append(metrics.evaluate(
            f"Sample {i + 1}",
            metrics.tokenize(text),
            references,
            repair_ratio=report.ratio,
            chars_modified=report.chars_modified,
            chars_total=report.chars_total,
            extra={"candidate": str(cand)},
        ))
    _emit(metrics.format_report(records), args.out)
    if args.records:
        with open(args.records, "w") as fp:
            metrics.write_records(records, fp)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ynote", description="YNote music notation toolkit.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="strictly parse a YNote file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("normalize", help="repair a YNote stream")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--report", help="write the repair summary and edit list here")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("convert", help="convert between YNote, MIDI, ABC, MusicXML and WAV")
    p.add_argument("--from", dest="src", required=True, choices=["midi", "abc", "musicxml", "ynote"])
    p.add_argument("--to", dest="dst", required=True, choices=["ynote", "midi", "wav"])
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--tempo", type=float, help="override tempo in BPM")
    p.add_argument("--sample-rate", type=int, default=44100)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("prompt", help="extract a generation prompt")
    p.add_argument("--mode", required=True, choices=["first-bar", "bar-endpoints"])
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("train", help="train the Markov baseline on a directory of .ynote files")
    p.add_argument("corpus")
    p.add_argument("--order", type=int, default=pipeline.DEFAULT_ORDER)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="continue a prompt with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--prompt", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="BLEU/ROUGE tables for candidates against references")
    p.add_argument("candidates", nargs="+")
    p.add_argument("--reference", action="append", required=True)
    p.add_argument("--out")
    p.add_argument("--records", help="write one JSON record per sample here")
    p.set_defaults(func=cmd_evaluate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "order", 1) < 1:
        _err("ynote: error: --order must be >= 1")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"ynote: error: {exc}")
        return EXIT_USAGE
    except YNoteSyntaxError as exc:
        for d in exc.diagnostics:
            _err(d)
        return EXIT_INVALID
    except ConversionError as exc:
        _err(f"ynote: {exc}")
        return EXIT_IO
    except (OSError, UnicodeDecodeError) as exc:
        _err(f"ynote: {exc}")
        return EXIT_IO
    except (YNoteError, ValueError) as exc:
        _err(f"ynote: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
