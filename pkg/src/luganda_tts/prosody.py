"""Prosody: sentence types, phrase breaks, pitch accents, tones, and
postlexical rewrite rules.

Accent assignment follows the GToBI principle that every intermediate phrase
should carry at least one pitch accent: nouns and adjectives are always
accented, and accentless phrases are repaired from the ranking
full verb > modal verb > adverb.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .data import read_tsv, resolve_data_dir
from .errors import InvalidRule, LugandaTtsError
from .frontend import (
    DirectiveKind,
    Sentence,
    SentenceType,
    TokenKind,
    UtteranceDoc,
)
from .linguistics import POS, PhoneSetDef, Syllable, Word


class BreakLevel(Enum):
    INTERMEDIATE = "INTERMEDIATE"
    INTONATION = "INTONATION"


class Precision(Enum):
    PRECISE = "precise"
    NORMAL = "normal"
    RELAXED = "relaxed"


@dataclass
class PhraseBreak:
    position: int  # break occurs after this word index; -1 = utterance-initial
    level: BreakLevel
    boundary_tone: str = ""


@dataclass
class PitchAccent:
    word_index: int
    tone: str = ""
    nuclear: bool = False


# Labels the acoustic stage knows how to realize.
KNOWN_ACCENT_TONES = {"H*", "L*", "L+H*"}
KNOWN_BOUNDARY_TONES = {"L-", "H-", "L-L%", "H-H%", "L-H%"}
FALLBACK_ACCENT = "H*"
FALLBACK_BOUNDARY = "L-L%"


@dataclass(frozen=True)
class ToneEntry:
    accent: str
    nuclear_accent: str
    intermediate_boundary: str
    final_boundary: str


class ToneMap:
    def __init__(self, entries: dict[SentenceType, ToneEntry]):
        self.entries = entries
        self.alphabet = set()
        for e in entries.values():
            self.alphabet.update([e.accent, e.nuclear_accent, e.intermediate_boundary, e.final_boundary])

    @classmethod
    def load(cls, data_dir=None) -> "ToneMap":
        base = resolve_data_dir(data_dir)
        entries = {}
        for row in read_tsv(Path(base) / "tone_map.tsv"):
            stype = SentenceType(row[0])
            entry = ToneEntry(row[1], row[2], row[3], row[4])
            if (entry.nuclear_accent, entry.final_boundary) == (entry.accent, entry.intermediate_boundary):
                raise LugandaTtsError(
                    f"tone map for {stype.value}: sentence-final tones must differ from non-final ones"
                )
            if not entry.intermediate_boundary.endswith("-"):
                raise LugandaTtsError(
                    f"tone map for {stype.value}: intermediate boundary must be a phrase tone (X-)"
                )
            if "%" not in entry.final_boundary:
                raise LugandaTtsError(
                    f"tone map for {stype.value}: final boundary must be a full tone (X-Y%)"
                )
            entries[stype] = entry
        return cls(entries)


# ---------------------------------------------------------------------------
# Sentence type and break/accent assignment

def detect_sentence_type(sentence: Sentence, w_words: set[str]) -> SentenceType:
    final = sentence.tokens[-1] if sentence.tokens else None
    if final is not None and final.kind is TokenKind.PUNCT:
        if final.surface == "!":
            return SentenceType.EXCLAMATIVE
        if final.surface == "?":
            has_w = any(
                t.kind is TokenKind.WORD and t.surface.lower() in w_words
                for t in sentence.tokens
            )
            return SentenceType.INTERROGATIVE_W if has_w else SentenceType.INTERROGATIVE_YN
    return SentenceType.DECLARATIVE


INTERMEDIATE_PUNCT = {",", ";", ":"}


def assign_phrase_breaks(sentence: Sentence, chunks=None) -> list[PhraseBreak]:
    """Breaks at pause punctuation and markup, one intonation break at the end."""
    words: list[Word] = sentence.words
    last = len(words) - 1
    positions: dict[int, BreakLevel] = {}
    for i, word in enumerate(words):
        if word.pos is POS.PUNC and word.surface in INTERMEDIATE_PUNCT and i != last:
            positions[i] = BreakLevel.INTERMEDIATE
    for directive in sentence.markup_directives:
        if directive.kind is not DirectiveKind.BREAK:
            continue
        anchor_token = directive.anchor[0]
        if anchor_token < 0:
            positions.setdefault(-1, BreakLevel.INTERMEDIATE)
            continue
        pos = None
        for i, word in enumerate(words):
            if word.token_index <= anchor_token:
                pos = i
        if pos is not None and pos != last:
            positions.setdefault(pos, BreakLevel.INTERMEDIATE)
    positions[last] = BreakLevel.INTONATION
    return [PhraseBreak(p, positions[p]) for p in sorted(positions)]


ACCENT_RANK = {POS.FULL_VERB: 3, POS.MODAL_VERB: 2, POS.ADV: 1}
ALWAYS_ACCENTED = {POS.NOUN, POS.ADJ}


def assign_accents(sentence: Sentence, breaks: list[PhraseBreak]) -> list[PitchAccent]:
    """Accent nouns/adjectives, then repair accentless phrases by POS rank."""
    words: list[Word] = sentence.words
    accented = [w.pos in ALWAYS_ACCENTED for w in words]

    prev = -1
    for brk in breaks:
        if brk.position < 0:
            continue
        span = range(prev + 1, brk.position + 1)
        prev = brk.position
        if any(accented[i] for i in span):
            continue
        best_rank = 0
        best_i = None
        for i in span:
            rank = ACCENT_RANK.get(words[i].pos, 0)
            if rank > best_rank:
                best_rank = rank
                best_i = i
        if best_i is not None:
            accented[best_i] = True
        elif any(words[i].pos is not POS.PUNC for i in span):
            sentence.warnings.append(
                f"phrase ending at word {brk.position} has no accentable word"
            )

    accents = []
    for i, flag in enumerate(accented):
        if flag:
            words[i].accented = True
            accents.append(PitchAccent(word_index=i))
    if accents:
        accents[-1].nuclear = True
    return accents


def assign_tones(
    sentence_type: SentenceType,
    accents: list[PitchAccent],
    breaks: list[PhraseBreak],
    tone_map: ToneMap,
) -> tuple[list[PitchAccent], list[PhraseBreak]]:
    entry = tone_map.entries[sentence_type]
    for accent in accents:
        accent.tone = entry.nuclear_accent if accent.nuclear else entry.accent
    for brk in breaks:
        if brk.level is BreakLevel.INTONATION:
            brk.boundary_tone = entry.final_boundary
        else:
            brk.boundary_tone = entry.intermediate_boundary
    return accents, breaks


# ---------------------------------------------------------------------------
# Postlexical rewrite rules

@dataclass(frozen=True)
class PatternItem:
    kind: str  # "phone" | "boundary"
    # phone items:
    literal: str | None = None
    phone_class: str | None = None  # "V" or "C"
    var: str | None = None  # e.g. "V1"
    long_only: bool = False
    symbol_set: frozenset[str] | None = None
    need_accent: bool = False
    need_stress: bool = False
    # boundary items: "#" word, "%" phrase
    boundary: str | None = None


@dataclass(frozen=True)
class RewriteRule:
    name: str
    focus: tuple[PatternItem, ...]
    left: tuple[PatternItem, ...]
    right: tuple[PatternItem, ...]
    replacement: tuple[PatternItem, ...]
    precision_levels: frozenset[Precision]

    def active_at(self, precision: Precision) -> bool:
        return precision in self.precision_levels


_CLASS_RE = re.compile(r"^([VC])([0-9]*)(:?)$")


def _parse_item(text: str, phoneset: PhoneSetDef, rule_name: str) -> PatternItem:
    need_accent = need_stress = False
    while True:
        if text.endswith("+acc"):
            text = text[: -len("+acc")]
            need_accent = True
        elif text.endswith("+str"):
            text = text[: -len("+str")]
            need_stress = True
        else:
            break
    if text in ("#", "%"):
        if need_accent or need_stress:
            raise InvalidRule(f"{rule_name}: boundary item cannot carry flags")
        return PatternItem(kind="boundary", boundary=text)
    if text.startswith("{") and text.endswith("}"):
        symbols = frozenset(s.strip() for s in text[1:-1].split(","))
        for s in symbols:
            if s not in phoneset:
                raise InvalidRule(f"{rule_name}: unknown phone {s!r} in set")
        return PatternItem(kind="phone", symbol_set=symbols,
                           need_accent=need_accent, need_stress=need_stress)
    m = _CLASS_RE.match(text)
    if m:
        cls_name, var_digits, long_mark = m.groups()
        var = cls_name + var_digits if var_digits else None
        return PatternItem(kind="phone", phone_class=cls_name, var=var,
                           long_only=bool(long_mark),
                           need_accent=need_accent, need_stress=need_stress)
    if text not in phoneset:
        raise InvalidRule(f"{rule_name}: unknown symbol {text!r}")
    return PatternItem(kind="phone", literal=text,
                       need_accent=need_accent, need_stress=need_stress)


def parse_rule_line(line: str, phoneset: PhoneSetDef) -> RewriteRule:
    """Parse `name: focus / left _ right -> replacement [@levels]`."""
    if ":" not in line:
        raise InvalidRule(f"missing rule name in {line!r}")
    name, rest = line.split(":", 1)
    name = name.strip()
    if "->" not in rest:
        raise InvalidRule(f"{name}: missing '->'")
    lhs, rhs = rest.split("->", 1)

    levels = frozenset(Precision)
    rhs = rhs.strip()
    if "@" in rhs:
        rhs, tag = rhs.split("@", 1)
        try:
            levels = frozenset(Precision(t.strip()) for t in tag.split(","))
        except ValueError as exc:
            raise InvalidRule(f"{name}: bad precision tag {tag!r}") from exc
        rhs = rhs.strip()

    if "/" in lhs:
        focus_text, ctx = lhs.split("/", 1)
        if "_" not in ctx:
            raise InvalidRule(f"{name}: context must contain '_'")
        left_text, right_text = ctx.split("_", 1)
    else:
        focus_text, left_text, right_text = lhs, "", ""

    def parse_seq(text: str) -> tuple[PatternItem, ...]:
        return tuple(_parse_item(t, phoneset, name) for t in text.split())

    focus = parse_seq(focus_text)
    if not any(it.kind == "phone" for it in focus):
        raise InvalidRule(f"{name}: focus must contain at least one phone item")
    left = parse_seq(left_text)
    right = parse_seq(right_text)
    replacement = parse_seq(rhs)
    for item in replacement:
        if item.kind == "boundary" or item.symbol_set is not None:
            raise InvalidRule(f"{name}: replacement items must be symbols or variables")
        if item.var is not None and item.long_only:
            # the lengthened variant of every bindable symbol must exist
            cat_ok = all(
                (p.symbol + ":") in phoneset
                for p in phoneset.phones
                if not p.symbol.endswith(":")
                and p.category.value == ("VOWEL" if item.phone_class == "V" else "CONSONANT")
            )
            if not cat_ok:
                raise InvalidRule(f"{name}: phone set lacks long forms for class {item.phone_class}")
        if item.literal is not None and item.literal not in phoneset:
            raise InvalidRule(f"{name}: unknown replacement symbol {item.literal!r}")
    return RewriteRule(name, focus, left, right, replacement, levels)


def load_rules(path=None, phoneset: PhoneSetDef | None = None, data_dir=None) -> list[RewriteRule]:
    if phoneset is None:
        phoneset = PhoneSetDef.load(data_dir)
    if path is None:
        path = resolve_data_dir(data_dir) / "postlexical.rules"
    rules = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            rules.append(parse_rule_line(line, phoneset))
    return rules


@dataclass
class _Rec:
    phone: str
    word_i: int
    syl_i: int
    stressed: bool
    accented: bool


def _flatten(sentence: Sentence) -> list[_Rec]:
    records = []
    for wi, word in enumerate(sentence.words):
        for si, syl in enumerate(word.syllables):
            for p in syl.phones:
                records.append(_Rec(p, wi, si, syl.stress, word.accented))
    return records


def _gap_flags(records: list[_Rec], left: int, right: int, barriers: set[int]):
    """(word_boundary, phrase_barrier) between records[left] and records[right]."""
    if left < 0 or right >= len(records):
        return True, True
    a, b = records[left], records[right]
    word_boundary = a.word_i != b.word_i
    phrase_barrier = any(a.word_i <= p < b.word_i for p in barriers)
    return word_boundary, phrase_barrier


def _item_matches(item: PatternItem, rec: _Rec, bindings: dict[str, str],
                  phoneset: PhoneSetDef) -> bool:
    if item.need_accent and not rec.accented:
        return False
    if item.need_stress and not rec.stressed:
        return False
    sym = rec.phone
    base = sym[:-1] if sym.endswith(":") else sym
    if item.literal is not None:
        return sym == item.literal
    if item.symbol_set is not None:
        return sym in item.symbol_set
    if item.phone_class == "V" and not phoneset.is_vowel(sym):
        return False
    if item.phone_class == "C" and not phoneset.is_consonant(sym):
        return False
    if item.long_only and not sym.endswith(":"):
        return False
    if item.var is not None:
        bound = bindings.get(item.var)
        if bound is not None and bound != base:
            return False
        bindings[item.var] = base
    return True


def _match_span(items: tuple[PatternItem, ...], records: list[_Rec], start: int,
                barriers: set[int], phoneset: PhoneSetDef,
                bindings: dict[str, str], edge_start: bool) -> int | None:
    """Match items against records from `start`; return records consumed."""
    k = start
    pending: list[str] = []
    consumed_any = not edge_start
    for item in items:
        if item.kind == "boundary":
            pending.append(item.boundary)
            continue
        if k >= len(records):
            return None
        wb, pb = _gap_flags(records, k - 1, k, barriers)
        if consumed_any or pending:
            if "%" in pending:
                if not pb:
                    return None
            elif consumed_any and pb:
                return None
            if "#" in pending and not wb:
                return None
        if not _item_matches(item, records[k], bindings, phoneset):
            return None
        pending = []
        consumed_any = True
        k += 1
    if pending:
        wb, pb = _gap_flags(records, k - 1, k, barriers)
        if "%" in pending and not pb:
            return None
        if "#" in pending and not wb:
            return None
    return k - start


def _phone_item_count(items: tuple[PatternItem, ...]) -> int:
    return sum(1 for it in items if it.kind == "phone")


def _apply_rule(rule: RewriteRule, records: list[_Rec], barriers: set[int],
                phoneset: PhoneSetDef) -> list[_Rec]:
    out: list[_Rec] = list(records)
    i = 0
    while i < len(out):
        bindings: dict[str, str] = {}
        # left context ends just before i
        n_left = _phone_item_count(rule.left)
        left_start = i - n_left
        if left_start < 0:
            if n_left > 0:
                i += 1
                continue
            left_start = i
        if rule.left:
            got = _match_span(rule.left, out, left_start, barriers, phoneset,
                              bindings, edge_start=True)
            if got is None or left_start + got != i:
                i += 1
                continue
        focus_got = _match_span(rule.focus, out, i, barriers, phoneset,
                                bindings, edge_start=not rule.left)
        if focus_got is None:
            i += 1
            continue
        if rule.right:
            right_got = _match_span(rule.right, out, i + focus_got, barriers,
                                    phoneset, bindings, edge_start=False)
            if right_got is None:
                i += 1
                continue
        proto = out[i]
        new_recs = []
        for item in rule.replacement:
            if item.var is not None:
                base = bindings[item.var]
                sym = base + ":" if item.long_only else base
            else:
                sym = item.literal
            if sym not in phoneset:
                raise InvalidRule(f"{rule.name}: replacement produced unknown phone {sym!r}")
            new_recs.append(_Rec(sym, proto.word_i, proto.syl_i, proto.stressed, proto.accented))
        out[i : i + focus_got] = new_recs
        # scanning resumes after the replaced span; deletions shrink the list,
        # so staying put still terminates
        i += len(new_recs)
    return out


def _rebuild_words(sentence: Sentence, records: list[_Rec], phoneset: PhoneSetDef) -> None:
    by_word: dict[int, list[_Rec]] = {}
    for rec in records:
        by_word.setdefault(rec.word_i, []).append(rec)
    for wi, word in enumerate(sentence.words):
        if not word.syllables:
            continue
        recs = by_word.get(wi, [])
        if not recs:
            word.syllables = []
            continue
        # group consecutive records by original syllable index
        groups: list[tuple[bool, list[str]]] = []
        cur_syl = None
        for rec in recs:
            if rec.syl_i != cur_syl:
                groups.append((rec.stressed, []))
                cur_syl = rec.syl_i
            groups[-1][1].append(rec.phone)
        # merge nucleus-less groups into a neighbor
        merged: list[tuple[bool, list[str]]] = []
        pending: tuple[bool, list[str]] | None = None
        for stressed, phones in groups:
            if pending is not None:
                stressed = stressed or pending[0]
                phones = pending[1] + phones
                pending = None
            if any(phoneset.is_vowel(p) for p in phones):
                merged.append((stressed, phones))
            else:
                pending = (stressed, phones)
        if pending is not None:
            if merged:
                merged[-1] = (merged[-1][0] or pending[0], merged[-1][1] + pending[1])
            else:
                merged.append(pending)
        word.syllables = [Syllable(phones=list(p), stress=s) for s, p in merged]


def apply_postlexical(
    doc: UtteranceDoc,
    rules: list[RewriteRule],
    precision: Precision,
    phoneset: PhoneSetDef,
) -> UtteranceDoc:
    """Run each rule once, in order, left to right, across every sentence."""
    active = [r for r in rules if r.active_at(precision)]
    for sentence in doc.sentences:
        if not sentence.words:
            continue
        barriers = {
            b.position for b in sentence.breaks if b.level is BreakLevel.INTERMEDIATE
        }
        records = _flatten(sentence)
        for rule in active:
            records = _apply_rule(rule, records, barriers, phoneset)
        _rebuild_words(sentence, records, phoneset)
    return doc
