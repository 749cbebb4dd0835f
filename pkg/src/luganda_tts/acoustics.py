"""Symbolic-to-physical translation: segment durations, F0 targets, and the
MBROLA-compatible .pho text format.

A .pho line is `<phone> <duration_ms> [<percent> <hz>]...`; `;` starts a
comment line.  Durations are positive integers, percents strictly increasing
in 0..100, Hz printed with at most one decimal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .data import read_tsv, resolve_data_dir
from .errors import LugandaTtsError, MissingDuration, PhoSyntax
from .frontend import UtteranceDoc
from .linguistics import PhoneSetDef, Word
from .prosody import BreakLevel, Precision

SILENCE = "_"


@dataclass
class SegmentTarget:
    phone: str
    duration_ms: int
    f0_targets: list[tuple[int, float]] = field(default_factory=list)
    # provenance, ignored by equality so parsed segments compare clean
    word_index: int | None = field(default=None, compare=False)
    syl_index: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.duration_ms < 1:
            raise LugandaTtsError(f"segment {self.phone!r}: duration must be >= 1 ms")
        percents = [p for p, _ in self.f0_targets]
        if any(not 0 <= p <= 100 for p in percents):
            raise LugandaTtsError(f"segment {self.phone!r}: percent outside 0..100")
        if any(b <= a for a, b in zip(percents, percents[1:])):
            raise LugandaTtsError(f"segment {self.phone!r}: percents must increase")
        if any(hz <= 0 for _, hz in self.f0_targets):
            raise LugandaTtsError(f"segment {self.phone!r}: Hz must be positive")


@dataclass
class DurationTable:
    base_ms: dict[str, float]
    geminate: float = 1.6
    long_vowel: float = 1.5
    accented: float = 1.2
    phrase_final: float = 1.3
    precision_mult: dict[Precision, float] = field(
        default_factory=lambda: {Precision.PRECISE: 1.1, Precision.NORMAL: 1.0, Precision.RELAXED: 0.9}
    )
    sil_intonation_ms: int = 200
    sil_intermediate_ms: int = 100

    def __post_init__(self):
        values = list(self.base_ms.values()) + [
            self.geminate, self.long_vowel, self.accented, self.phrase_final,
            self.sil_intonation_ms, self.sil_intermediate_ms,
            *self.precision_mult.values(),
        ]
        if any(v <= 0 for v in values):
            raise LugandaTtsError("duration table entries must be positive")

    @classmethod
    def load(cls, data_dir=None) -> "DurationTable":
        base = resolve_data_dir(data_dir)
        base_ms: dict[str, float] = {}
        mults: dict[str, float] = {}
        sils: dict[str, float] = {}
        for row in read_tsv(Path(base) / "duration_table.tsv"):
            key, value = row[0], float(row[1])
            prefix, _, name = key.partition(":")
            if prefix == "phone":
                base_ms[name] = value
            elif prefix == "mult":
                mults[name] = value
            elif prefix == "sil":
                sils[name] = value
            else:
                raise LugandaTtsError(f"duration table: unknown key {key!r}")
        return cls(
            base_ms=base_ms,
            geminate=mults.get("geminate", 1.6),
            long_vowel=mults.get("long_vowel", 1.5),
            accented=mults.get("accented", 1.2),
            phrase_final=mults.get("phrase_final", 1.3),
            precision_mult={
                Precision.PRECISE: mults.get("precision_precise", 1.1),
                Precision.NORMAL: mults.get("precision_normal", 1.0),
                Precision.RELAXED: mults.get("precision_relaxed", 0.9),
            },
            sil_intonation_ms=int(sils.get("intonation", 200)),
            sil_intermediate_ms=int(sils.get("intermediate", 100)),
        )


@dataclass
class F0Config:
    topline_hz: float = 180.0
    baseline_hz: float = 110.0
    declination_hz_per_s: float = 10.0
    accent_excursion: float = 0.30
    boundary_endpoints: dict[str, str] = field(
        default_factory=lambda: {
            "L-L%": "baseline", "H-H%": "topline", "L-H%": "mid",
            "L-": "local_low", "H-": "local_high",
        }
    )

    def __post_init__(self):
        if not self.topline_hz > self.baseline_hz > 0:
            raise LugandaTtsError("F0 config requires topline > baseline > 0")

    @property
    def clamp_range(self) -> tuple[float, float]:
        return self.baseline_hz * 0.8, self.topline_hz * (1.0 + self.accent_excursion)

    @classmethod
    def load(cls, data_dir=None) -> "F0Config":
        base = resolve_data_dir(data_dir)
        scalars: dict[str, float] = {}
        boundaries: dict[str, str] = {}
        for row in read_tsv(Path(base) / "f0_config.tsv"):
            key, value = row[0], row[1]
            if key.startswith("boundary:"):
                boundaries[key.split(":", 1)[1]] = value
            else:
                scalars[key] = float(value)
        cfg = cls(
            topline_hz=scalars.get("topline_hz", 180.0),
            baseline_hz=scalars.get("baseline_hz", 110.0),
            declination_hz_per_s=scalars.get("declination_hz_per_s", 10.0),
            accent_excursion=scalars.get("accent_excursion", 0.30),
        )
        if boundaries:
            cfg.boundary_endpoints = boundaries
        return cfg


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def compute_durations(
    doc: UtteranceDoc,
    table: DurationTable,
    phoneset: PhoneSetDef,
    precision: Precision = Precision.NORMAL,
) -> UtteranceDoc:
    """Fill each sentence's segment list with durations and break silences."""
    for sentence in doc.sentences:
        segments: list[SegmentTarget] = []
        break_after = {b.position: b.level for b in sentence.breaks}
        if -1 in break_after:
            segments.append(_silence_segment(break_after[-1], table))
        words: list[Word] = sentence.words
        # phrase-final lengthening lands on the last audible syllable before
        # each break, which may sit earlier than the break's own (punctuation)
        # word
        final_lengthened: set[int] = set()
        for position in break_after:
            for wi in range(position, -1, -1):
                if words[wi].syllables:
                    final_lengthened.add(wi)
                    break
        for wi, word in enumerate(words):
            final_syl = len(word.syllables) - 1
            for si, syl in enumerate(word.syllables):
                for phone in syl.phones:
                    base_key = phone[:-1] if phone.endswith(":") else phone
                    if base_key not in table.base_ms:
                        raise MissingDuration(f"no duration for phone {phone!r}")
                    value = table.base_ms[base_key]
                    if phoneset.is_geminate(phone):
                        value *= table.geminate
                    if phoneset.is_long(phone):
                        value *= table.long_vowel
                    if word.accented and syl.stress:
                        value *= table.accented
                    if wi in final_lengthened and si == final_syl:
                        value *= table.phrase_final
                    value *= table.precision_mult[precision]
                    segments.append(
                        SegmentTarget(
                            phone=phone,
                            duration_ms=max(1, _round_half_up(value)),
                            word_index=wi,
                            syl_index=si,
                        )
                    )
            if wi in break_after:
                segments.append(_silence_segment(break_after[wi], table))
        sentence.segments = segments
    return doc


def _silence_segment(level: BreakLevel, table: DurationTable) -> SegmentTarget:
    ms = table.sil_intonation_ms if level is BreakLevel.INTONATION else table.sil_intermediate_ms
    return SegmentTarget(phone=SILENCE, duration_ms=ms)


def compute_f0(doc: UtteranceDoc, cfg: F0Config, phoneset: PhoneSetDef) -> UtteranceDoc:
    """Place F0 targets: declining phrase baseline, accent peaks, boundary tones."""
    lo, hi = cfg.clamp_range

    def clamp(hz: float, where: str) -> float:
        if hz < lo or hz > hi:
            doc.warnings.append(f"f0 clamp at {where}: {hz:.1f} Hz")
            return min(max(hz, lo), hi)
        return hz

    for sentence in doc.sentences:
        segments = sentence.segments
        if not segments:
            continue
        # start time of each segment in seconds
        starts = []
        t = 0.0
        for seg in segments:
            starts.append(t)
            t += seg.duration_ms / 1000.0

        def decl(t_s: float) -> float:
            return max(cfg.baseline_hz, cfg.topline_hz - cfg.declination_hz_per_s * t_s)

        pending: dict[int, list[tuple[int, float]]] = {}

        def add(seg_i: int, percent: int, hz: float, where: str):
            pending.setdefault(seg_i, []).append((percent, clamp(hz, where)))

        add(0, 0, cfg.topline_hz, "phrase start")

        # accent targets at the stressed syllable's first vowel
        for accent in sentence.accents:
            word = sentence.words[accent.word_index]
            seg_i = _accent_vowel_segment(segments, accent.word_index, word, phoneset)
            if seg_i is None:
                continue
            t_mid = starts[seg_i] + segments[seg_i].duration_ms / 2000.0
            base = decl(t_mid)
            exc = cfg.accent_excursion
            tone = accent.tone if accent.tone in {"H*", "L*", "L+H*"} else None
            if tone is None:
                doc.warnings.append(f"unknown accent tone {accent.tone!r}; using H*")
                tone = "H*"
            where = f"accent {tone} word {accent.word_index}"
            if tone == "H*":
                add(seg_i, 50, base * (1 + exc), where)
            elif tone == "L*":
                add(seg_i, 50, base * (1 - exc), where)
            else:  # L+H*
                add(seg_i, 20, base * (1 - exc), where)
                add(seg_i, 80, base * (1 + exc), where)

        # boundary targets at 100% of the last voiced segment before each break
        for brk in sentence.breaks:
            seg_i = _segment_before_break(segments, brk.position)
            if seg_i is None:
                continue
            t_end = starts[seg_i] + segments[seg_i].duration_ms / 1000.0
            endpoint = cfg.boundary_endpoints.get(brk.boundary_tone)
            if endpoint is None:
                doc.warnings.append(
                    f"unknown boundary tone {brk.boundary_tone!r}; using L-L%"
                )
                endpoint = cfg.boundary_endpoints.get("L-L%", "baseline")
            base = decl(t_end)
            hz = {
                "baseline": cfg.baseline_hz,
                "topline": cfg.topline_hz,
                "mid": (cfg.baseline_hz + cfg.topline_hz) / 2.0,
                "local_low": base * 0.85,
                "local_high": base * 1.15,
            }[endpoint]
            add(seg_i, 100, hz, f"boundary {brk.boundary_tone}")

        for seg_i, targets in pending.items():
            merged: dict[int, float] = {}
            for percent, hz in sorted(targets):
                merged[percent] = hz  # later writers win on collision
            segments[seg_i].f0_targets = sorted(merged.items())
    return doc


def _accent_vowel_segment(segments, word_index: int, word: Word, phoneset: PhoneSetDef) -> int | None:
    stressed = next((si for si, s in enumerate(word.syllables) if s.stress), 0)
    fallback = None
    for i, seg in enumerate(segments):
        if seg.word_index != word_index:
            continue
        if phoneset.is_vowel(seg.phone):
            if seg.syl_index == stressed:
                return i
            if fallback is None:
                fallback = i
    return fallback


def _segment_before_break(segments, position: int) -> int | None:
    best = None
    for i, seg in enumerate(segments):
        if seg.phone == SILENCE or seg.word_index is None:
            continue
        if seg.word_index <= position:
            best = i
    return best


# ---------------------------------------------------------------------------
# .pho emit/parse

def _format_hz(hz: float) -> str:
    rounded = round(hz, 1)
    if rounded == int(rounded):
        return str(int(rounded))
    return f"{rounded:.1f}"


def emit_pho(segments: list[SegmentTarget]) -> str:
    """Render segments as MBROLA .pho text; empty input yields empty text."""
    lines = []
    for seg in segments:
        parts = [seg.phone, str(seg.duration_ms)]
        for percent, hz in seg.f0_targets:
            parts.append(str(percent))
            parts.append(_format_hz(hz))
        lines.append(" ".join(parts))
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def parse_pho(text: str) -> list[SegmentTarget]:
    """Parse .pho text; comments (;) and blank lines are skipped."""
    segments = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        fields = line.split()
        if len(fields) < 2:
            raise PhoSyntax(line_no, "expected `phone duration`")
        phone = fields[0]
        try:
            duration = int(fields[1])
        except ValueError:
            raise PhoSyntax(line_no, f"bad duration {fields[1]!r}") from None
        if duration < 1:
            raise PhoSyntax(line_no, "duration must be >= 1")
        rest = fields[2:]
        if len(rest) % 2 != 0:
            raise PhoSyntax(line_no, "unpaired percent/Hz value")
        targets: list[tuple[int, float]] = []
        for p_text, hz_text in zip(rest[::2], rest[1::2]):
            try:
                percent = int(p_text)
                hz = float(hz_text)
            except ValueError:
                raise PhoSyntax(line_no, f"bad target pair {p_text!r} {hz_text!r}") from None
            if not 0 <= percent <= 100:
                raise PhoSyntax(line_no, f"percent {percent} outside 0..100")
            if targets and percent <= targets[-1][0]:
                raise PhoSyntax(line_no, "percents must strictly increase")
            if hz <= 0:
                raise PhoSyntax(line_no, f"Hz must be positive, got {hz}")
            targets.append((percent, hz))
        segments.append(SegmentTarget(phone=phone, duration_ms=duration, f0_targets=targets))
    return segments
