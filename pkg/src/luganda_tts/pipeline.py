"""Pipeline orchestration: wires the front-end, linguistic, prosodic, and
acoustic stages over a shared set of loaded resources.

A Pipeline is read-only after construction and safe to share across threads;
every call processes its own document.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import acoustics, frontend, linguistics, prosody
from .data import resolve_data_dir
from .errors import PipelineStageError
from .frontend import InputKind, NormalizationTables, UtteranceDoc
from .linguistics import Lexicon, PhoneSetDef, load_ending_rules, load_function_words
from .prosody import Precision, ToneMap, load_rules

STAGES = ("parse", "normalize", "analyze", "prosody", "postlexical", "durations", "f0")


def _stage(name: str):
    def wrap(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PipelineStageError:
            raise
        except Exception as exc:
            raise PipelineStageError(name, exc) from exc

    return wrap


@dataclass(frozen=True)
class UnitTarget:
    """A selection target: one non-silence segment plus its triphone context."""

    phone: str
    triphone: str
    duration_ms: int
    mean_f0: float | None
    segment_index: int  # index into the flat segment list


class Pipeline:
    def __init__(self, data_dir=None, precision: Precision = Precision.NORMAL):
        self.data_dir = resolve_data_dir(data_dir)
        self.precision = precision
        self.phoneset = PhoneSetDef.load(data_dir)
        self.lexicon = Lexicon.load(self.phoneset, data_dir)
        self.func_words = load_function_words(data_dir)
        self.w_words = frontend.load_w_words(data_dir)
        self.tables = NormalizationTables.load(data_dir)
        self.ending_rules = load_ending_rules(data_dir)
        self.tone_map = ToneMap.load(data_dir)
        self.rules = load_rules(phoneset=self.phoneset, data_dir=data_dir)
        self.duration_table = acoustics.DurationTable.load(data_dir)
        self.f0_config = acoustics.F0Config.load(data_dir)

    # ------------------------------------------------------------------
    # stage wrappers

    def parse(self, text: str, input_kind: InputKind = InputKind.PLAIN) -> UtteranceDoc:
        if input_kind is InputKind.SSML:
            return _stage("parse")(frontend.parse_ssml_subset, text)
        return _stage("parse")(frontend.parse_plain, text)

    def normalize(self, doc: UtteranceDoc) -> UtteranceDoc:
        return _stage("normalize")(frontend.normalize, doc, self.tables)

    def analyze(self, doc: UtteranceDoc) -> UtteranceDoc:
        """POS tagging, chunking, phonemization, and inflection endings."""

        def run():
            for sentence in doc.sentences:
                words = linguistics.tag_pos(sentence, self.func_words, self.lexicon)
                chunks = linguistics.chunk_phrases(words)
                for i, word in enumerate(words):
                    if word.pos in (linguistics.POS.PUNC, linguistics.POS.OTHER):
                        continue
                    linguistics.transcribe_word(word, self.lexicon, self.phoneset)
                    words[i] = linguistics.apply_inflection(
                        word,
                        self.ending_rules,
                        self.phoneset,
                        in_noun_phrase=linguistics.in_chunk(i, chunks),
                    )
                sentence.words = words
            return doc

        return _stage("analyze")(run)

    def add_prosody(self, doc: UtteranceDoc) -> UtteranceDoc:
        def run():
            for sentence in doc.sentences:
                sentence.sentence_type = prosody.detect_sentence_type(sentence, self.w_words)
                chunks = linguistics.chunk_phrases(sentence.words)
                sentence.breaks = prosody.assign_phrase_breaks(sentence, chunks)
                sentence.accents = prosody.assign_accents(sentence, sentence.breaks)
                prosody.assign_tones(
                    sentence.sentence_type, sentence.accents, sentence.breaks, self.tone_map
                )
            return doc

        return _stage("prosody")(run)

    def apply_postlexical(self, doc: UtteranceDoc) -> UtteranceDoc:
        return _stage("postlexical")(
            prosody.apply_postlexical, doc, self.rules, self.precision, self.phoneset
        )

    def add_acoustics(self, doc: UtteranceDoc) -> UtteranceDoc:
        doc = _stage("durations")(
            acoustics.compute_durations, doc, self.duration_table, self.phoneset, self.precision
        )
        return _stage("f0")(acoustics.compute_f0, doc, self.f0_config, self.phoneset)

    # ------------------------------------------------------------------
    # composed entry points

    def process(
        self,
        text: str,
        input_kind: InputKind = InputKind.PLAIN,
        upto: str = "f0",
    ) -> UtteranceDoc:
        doc = self.parse(text, input_kind)
        order = {name: i for i, name in enumerate(STAGES)}
        stop = order[upto]
        if stop >= order["normalize"]:
            self.normalize(doc)
        if stop >= order["analyze"]:
            self.analyze(doc)
        if stop >= order["prosody"]:
            self.add_prosody(doc)
        if stop >= order["postlexical"]:
            self.apply_postlexical(doc)
        if stop >= order["durations"]:
            self.add_acoustics(doc)
        return doc

    def word_phone_rows(self, text: str, input_kind: InputKind = InputKind.PLAIN) -> list[list[str]]:
        """Per-word phone sequences after phonemization (one row per word)."""
        doc = self.process(text, input_kind, upto="analyze")
        rows = []
        for sentence in doc.sentences:
            for word in sentence.words:
                if word.syllables:
                    rows.append(word.phones)
        return rows

    def sentence_triphones(self, text: str) -> set[str]:
        """Triphone labels over the utterance's phones, <sil>-padded at edges."""
        phones = [p for row in self.word_phone_rows(text) for p in row]
        return set(triphone_labels(phones))

    def utterance_segments(self, doc: UtteranceDoc) -> list[acoustics.SegmentTarget]:
        return [seg for sentence in doc.sentences for seg in sentence.segments]

    def utterance_targets(self, doc: UtteranceDoc) -> list[UnitTarget]:
        """Selection targets for the non-silence segments of a processed doc."""
        segments = self.utterance_segments(doc)
        track = _target_f0_track(segments)
        targets = []
        for i, seg in enumerate(segments):
            if seg.phone == acoustics.SILENCE:
                continue
            left = segments[i - 1].phone if i > 0 else acoustics.SILENCE
            right = segments[i + 1].phone if i + 1 < len(segments) else acoustics.SILENCE
            left_label = "<sil>" if left == acoustics.SILENCE else left
            right_label = "<sil>" if right == acoustics.SILENCE else right
            targets.append(
                UnitTarget(
                    phone=seg.phone,
                    triphone=f"{left_label}-{seg.phone}+{right_label}",
                    duration_ms=seg.duration_ms,
                    mean_f0=track[i],
                    segment_index=i,
                )
            )
        return targets


def triphone_labels(phones: list[str]) -> list[str]:
    labels = []
    for i, p in enumerate(phones):
        left = phones[i - 1] if i > 0 else "<sil>"
        right = phones[i + 1] if i + 1 < len(phones) else "<sil>"
        labels.append(f"{left}-{p}+{right}")
    return labels


def _target_f0_track(segments) -> list[float | None]:
    """Nominal F0 per segment: linear interpolation of targets at midpoints."""
    points: list[tuple[float, float]] = []
    starts = []
    t = 0.0
    for seg in segments:
        starts.append(t)
        for percent, hz in seg.f0_targets:
            points.append((t + percent / 100.0 * seg.duration_ms / 1000.0, hz))
        t += seg.duration_ms / 1000.0
    if not points:
        return [None] * len(segments)
    points.sort()
    times = [p[0] for p in points]
    values = [p[1] for p in points]

    def interp(x: float) -> float:
        if x <= times[0]:
            return values[0]
        if x >= times[-1]:
            return values[-1]
        for i in range(1, len(times)):
            if x <= times[i]:
                t0, t1 = times[i - 1], times[i]
                v0, v1 = values[i - 1], values[i]
                if t1 == t0:
                    return v1
                return v0 + (v1 - v0) * (x - t0) / (t1 - t0)
        return values[-1]

    return [
        interp(starts[i] + seg.duration_ms / 2000.0) for i, seg in enumerate(segments)
    ]
