"""Stage output serializations shared by the library, CLI, and HTTP service.

Formats (all UTF-8 text, LF newlines):
  TOKENS       one `surface<TAB>KIND` line per token, blank line between sentences
  WORDS        one `surface<TAB>POS` line per word after normalization,
               blank line between sentences
  PHONEMES     one line per pronounceable word: phones space-separated
  ALLOPHONES   one line per sentence: `<SENTENCE_TYPE>` then each word's
               phones with `.` between syllables, `[tone]` after accented
               words, `{tone}` at phrase breaks
  ACOUSTPARAMS the MBROLA-compatible .pho text
  AUDIO        canonical RIFF/PCM wav bytes
"""
from __future__ import annotations

from .acoustics import emit_pho
from .frontend import InputKind, UtteranceDoc
from .pipeline import Pipeline


OUTPUT_TYPES = ("TOKENS", "WORDS", "PHONEMES", "ALLOPHONES", "ACOUSTPARAMS", "AUDIO")
_STAGE_FOR = {
    "TOKENS": "parse",
    "WORDS": "analyze",
    "PHONEMES": "analyze",
    "ALLOPHONES": "postlexical",
    "ACOUSTPARAMS": "f0",
    "AUDIO": "f0",
}


def serialize_tokens(doc: UtteranceDoc) -> str:
    blocks = []
    for sentence in doc.sentences:
        blocks.append(
            "\n".join(f"{tok.surface}\t{tok.kind.value}" for tok in sentence.tokens)
        )
    return ("\n\n".join(blocks) + "\n") if blocks else ""


def serialize_words(doc: UtteranceDoc) -> str:
    blocks = []
    for sentence in doc.sentences:
        lines = [f"{w.surface}\t{w.pos.value}" for w in sentence.words]
        blocks.append("\n".join(lines))
    return ("\n\n".join(blocks) + "\n") if blocks else ""


def serialize_phonemes(doc: UtteranceDoc) -> str:
    lines = []
    for sentence in doc.sentences:
        for word in sentence.words:
            if word.syllables:
                lines.append(" ".join(word.phones))
    return ("\n".join(lines) + "\n") if lines else ""


def serialize_allophones(doc: UtteranceDoc) -> str:
    lines = []
    for sentence in doc.sentences:
        parts = [f"<{sentence.sentence_type.value}>"] if sentence.sentence_type else []
        breaks_at = {b.position: b for b in sentence.breaks}
        accents_at = {a.word_index: a for a in sentence.accents}
        if -1 in breaks_at:
            parts.append("{" + breaks_at[-1].boundary_tone + "}")
        for i, word in enumerate(sentence.words):
            if word.syllables:
                syl_texts = [" ".join(s.phones) for s in word.syllables]
                parts.append(" . ".join(syl_texts))
                if i in accents_at:
                    parts.append(f"[{accents_at[i].tone}]")
            if i in breaks_at:
                parts.append("{" + breaks_at[i].boundary_tone + "}")
        lines.append(" ".join(parts))
    return ("\n".join(lines) + "\n") if lines else ""


def serialize_acoustparams(doc: UtteranceDoc) -> str:
    segments = [seg for sentence in doc.sentences for seg in sentence.segments]
    return emit_pho(segments)


def render_output(
    pipeline: Pipeline,
    text: str,
    input_kind: InputKind,
    output_type: str,
    voice=None,
) -> tuple[str, bytes]:
    """(content type, body) for one stage output; the single code path used
    by the CLI and the HTTP service."""
    if output_type not in OUTPUT_TYPES:
        raise ValueError(f"unknown output type {output_type!r}")
    if output_type == "AUDIO":
        from .synth import synthesize_text, wav_bytes

        wave, _pho, _doc = synthesize_text(text, voice, pipeline=pipeline, input_kind=input_kind)
        return "audio/wav", wav_bytes(wave)
    doc = pipeline.process(text, input_kind, upto=_STAGE_FOR[output_type])
    body = {
        "TOKENS": serialize_tokens,
        "WORDS": serialize_words,
        "PHONEMES": serialize_phonemes,
        "ALLOPHONES": serialize_allophones,
        "ACOUSTPARAMS": serialize_acoustparams,
    }[output_type](doc)
    return "text/plain; charset=utf-8", body.encode("utf-8")
