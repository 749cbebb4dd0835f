"""Command-line driver for the pipeline stages, voice tools, listening-test
scoring, and the HTTP service.

Stage subcommands read UTF-8 text from --in or standard input and write the
stage serialization to standard output.  Exit codes: 0 success, 1 usage
error, 2 processing error (the failing stage is named on standard error).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .data import ENV_DATA_DIR
from .errors import LugandaTtsError, PipelineStageError
from .evaluation import (
    MrtGrid,
    MrtSession,
    make_mrt_session,
    read_mos_responses_csv,
    read_mrt_sheets_csv,
    render_report,
    score_mos,
    score_mrt,
)
from .frontend import InputKind
from .pipeline import Pipeline
from .prosody import Precision
from .serialize import render_output
from .service import DEFAULT_PORT, ServiceConfig, TtsService, make_server
from .synthvoice import default_corpus_texts, make_synthetic_session
from .voicedb import (
    annotate_units,
    build_inventory,
    compute_pitch_marks,
    estimate_f0,
    load_inventory,
    parse_labels,
    save_inventory,
    segment_units,
    select_corpus,
    validate_session,
)
from .wavio import read_wav

STAGE_OUTPUT = {
    "tokenize": "TOKENS",
    "normalize": "WORDS",
    "phonemize": "PHONEMES",
    "prosody": "ALLOPHONES",
    "pho": "ACOUSTPARAMS",
    "synth": "AUDIO",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read_input(args) -> str:
    if getattr(args, "text", None):
        return args.text
    if getattr(args, "infile", None):
        return Path(args.infile).read_text(encoding="utf-8")
    return sys.stdin.read()


def _pipeline(args) -> Pipeline:
    return Pipeline(data_dir=args.data_dir, precision=Precision(args.precision))


def build_parser() -> _Parser:
    parser = _Parser(prog="luganda-tts", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--data-dir",
        default=None,
        help=f"data directory (default: bundled tables, or ${ENV_DATA_DIR})",
    )
    parser.add_argument(
        "--precision",
        choices=[p.value for p in Precision],
        default="normal",
        help="articulation precision for the postlexical rules",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    for name in ("tokenize", "normalize", "phonemize", "prosody", "pho", "synth"):
        p = sub.add_parser(name, help=f"run the pipeline and print the {STAGE_OUTPUT[name]} output")
        p.add_argument("text", nargs="?", help="input text (default: stdin)")
        p.add_argument("--in", dest="infile", help="read input from a file")
        p.add_argument("--ssml", action="store_true", help="treat input as SSML")
        if name == "synth":
            p.add_argument("--voice", required=True, help="voice inventory directory")
            p.add_argument("--out", help="output wav path (default: stdout bytes)")

    p = sub.add_parser("voice-select-corpus", help="greedy triphone-coverage sentence selection")
    p.add_argument("candidates", help="file with one candidate sentence per line")
    p.add_argument("--max-sentences", type=int, default=100)
    p.add_argument("--max-words", type=int, default=12)

    p = sub.add_parser("voice-import", help="validate a recording session directory")
    p.add_argument("session", help="directory containing wav/ and text/")

    p = sub.add_parser("voice-pitchmarks", help="pitch marks of a wav file, one sample index per line")
    p.add_argument("wav")

    p = sub.add_parser("voice-features", help="unit segmentation and edge features for a wav + lab pair")
    p.add_argument("wav")
    p.add_argument("lab")

    p = sub.add_parser("voice-build", help="build a voice inventory from a session directory")
    p.add_argument("session", help="directory with wav/, text/, lab/")
    p.add_argument("out", help="output inventory directory")
    p.add_argument(
        "--synthetic-corpus",
        nargs="?",
        const="bundled",
        help="generate a synthetic session first (from a prompt file, or the bundled corpus)",
    )

    p = sub.add_parser("eval-mrt-make", help="create a seeded MRT session (JSON to stdout)")
    p.add_argument("--grid", help="MRT grid TSV (default: bundled)")
    p.add_argument("--items", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval-mrt-score", help="score MRT response sheets against a session")
    p.add_argument("--session", required=True, help="session JSON file")
    p.add_argument("--sheets", required=True, help="CSV file: listener,item,answer")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("eval-mos-score", help="score MOS responses")
    p.add_argument("--responses", required=True, help="CSV file: listener,sentence,rating")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--voice", action="append", default=[], help="NAME=DIR or DIR (repeatable)")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def _cmd_stage(args) -> int:
    pipeline = _pipeline(args)
    text = _read_input(args)
    kind = InputKind.SSML if getattr(args, "ssml", False) else InputKind.PLAIN
    output_type = STAGE_OUTPUT[args.command]
    voice = None
    if output_type == "AUDIO":
        voice = load_inventory(args.voice)
    _ctype, body = render_output(pipeline, text, kind, output_type, voice)
    if output_type == "AUDIO" and args.out:
        Path(args.out).write_bytes(body)
    elif output_type == "AUDIO":
        sys.stdout.buffer.write(body)
    else:
        sys.stdout.write(body.decode("utf-8"))
    return 0


def _cmd_select_corpus(args) -> int:
    pipeline = _pipeline(args)
    lines = [
        ln.strip()
        for ln in Path(args.candidates).read_text(encoding="utf-8").splitlines()
        if ln.strip() and not ln.startswith("#")
    ]
    chosen = select_corpus(lines, args.max_sentences, args.max_words, pipeline.sentence_triphones)
    for sent in chosen:
        sys.stdout.write(f"{sent.id}\t{len(sent.triphones)}\t{sent.text}\n")
    return 0


def _cmd_voice_import(args) -> int:
    pairs = validate_session(args.session)
    for wav, txt in pairs:
        sys.stdout.write(f"{wav}\t{txt}\n")
    return 0


def _cmd_pitchmarks(args) -> int:
    wave = read_wav(args.wav)
    marks = compute_pitch_marks(wave, estimate_f0(wave))
    for m in marks:
        sys.stdout.write(f"{int(m)}\n")
    return 0


def _cmd_features(args) -> int:
    wave = read_wav(args.wav)
    labels = parse_labels(Path(args.lab).read_text(encoding="utf-8"))
    units = segment_units(wave, labels, source_id=Path(args.wav).stem)
    annotate_units(wave, units)
    for u in units:
        left = " ".join(f"{v:.4f}" for v in u.left_features)
        right = " ".join(f"{v:.4f}" for v in u.right_features)
        sys.stdout.write(
            f"{u.id}\t{u.phone}\t{u.triphone}\t{u.duration_ms}\t{u.mean_f0:.1f}\t{left}\t{right}\n"
        )
    return 0


def _cmd_voice_build(args) -> int:
    if args.synthetic_corpus is not None:
        pipeline = _pipeline(args)
        if args.synthetic_corpus == "bundled":
            texts = default_corpus_texts(args.data_dir)
        else:
            texts = [
                ln.strip()
                for ln in Path(args.synthetic_corpus).read_text(encoding="utf-8").splitlines()
                if ln.strip() and not ln.startswith("#")
            ]
        make_synthetic_session(texts, args.session, pipeline)
    inv = build_inventory(args.session)
    save_inventory(inv, args.out)
    sys.stdout.write(f"{len(inv)} units -> {args.out}\n")
    return 0


def _cmd_mrt_make(args) -> int:
    grid = MrtGrid.load(path=args.grid) if args.grid else MrtGrid.load(data_dir=args.data_dir)
    session = make_mrt_session(grid, args.items, args.seed)
    sys.stdout.write(session.to_json() + "\n")
    return 0


def _cmd_mrt_score(args) -> int:
    session = MrtSession.from_json(Path(args.session).read_text(encoding="utf-8"))
    sheets = read_mrt_sheets_csv(Path(args.sheets).read_text(encoding="utf-8"))
    report = score_mrt(session, sheets)
    sys.stdout.write(render_report(report, "JSON" if args.json else "TEXT"))
    return 0


def _cmd_mos_score(args) -> int:
    responses = read_mos_responses_csv(Path(args.responses).read_text(encoding="utf-8"))
    report = score_mos(responses)
    sys.stdout.write(render_report(report, "JSON" if args.json else "TEXT"))
    return 0


def _cmd_serve(args) -> int:
    pipeline = _pipeline(args)
    voice_dirs = {}
    for entry in args.voice:
        if "=" in entry:
            name, directory = entry.split("=", 1)
        else:
            name, directory = Path(entry).name, entry
        voice_dirs[name] = directory
    try:
        config = ServiceConfig(port=args.port, voice_dirs=voice_dirs, data_dir=args.data_dir)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    voices = {name: load_inventory(directory) for name, directory in config.voice_dirs.items()}
    service = TtsService(pipeline, voices)
    server = make_server(service, port=config.port, host=args.host)
    print(f"serving on http://{args.host}:{args.port} with voices: {sorted(voices) or 'none'}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "tokenize": _cmd_stage,
    "normalize": _cmd_stage,
    "phonemize": _cmd_stage,
    "prosody": _cmd_stage,
    "pho": _cmd_stage,
    "synth": _cmd_stage,
    "voice-select-corpus": _cmd_select_corpus,
    "voice-import": _cmd_voice_import,
    "voice-pitchmarks": _cmd_pitchmarks,
    "voice-features": _cmd_features,
    "voice-build": _cmd_voice_build,
    "eval-mrt-make": _cmd_mrt_make,
    "eval-mrt-score": _cmd_mrt_score,
    "eval-mos-score": _cmd_mos_score,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except PipelineStageError as exc:
        print(f"error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return 2
    except LugandaTtsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
