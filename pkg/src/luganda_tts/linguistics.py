"""Lexical analysis: POS tagging, chunking, phonemization, syllabification.

Phone symbols are SAMPA-style ASCII: five vowels plus ":"-marked long
counterparts, consonants plus ":"-marked geminates, "J" for ny, "N" for ng',
and "_" for silence.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .data import read_tsv, resolve_data_dir
from .errors import LugandaTtsError, NoNucleus, UnphonemizableInput
from .frontend import Sentence, TokenKind


class PhoneCategory(Enum):
    VOWEL = "VOWEL"
    CONSONANT = "CONSONANT"
    SILENCE = "SILENCE"


class POS(Enum):
    NOUN = "NOUN"
    ADJ = "ADJ"
    FULL_VERB = "FULL_VERB"
    MODAL_VERB = "MODAL_VERB"
    ADV = "ADV"
    FUNC = "FUNC"
    NUM = "NUM"
    PUNC = "PUNC"
    OTHER = "OTHER"


class TranscriptionSource(Enum):
    LEXICON = "LEXICON"
    LTS = "LTS"


SILENCE = "_"

# Orthography-to-phone map for single letters.  h, q and x are not part of
# the Luganda alphabet and produce no phone.
LETTER_PHONES = {
    "a": "a", "b": "b", "c": "c", "d": "d", "e": "e", "f": "f", "g": "g",
    "i": "i", "j": "j", "k": "k", "l": "l", "m": "m", "n": "n", "o": "o",
    "p": "p", "r": "r", "s": "s", "t": "t", "u": "u", "v": "v", "w": "w",
    "y": "y", "z": "z",
}
VOWEL_LETTERS = set("aeiou")


@dataclass(frozen=True)
class PhoneDef:
    symbol: str
    category: PhoneCategory
    features: frozenset[str]


class PhoneSetDef:
    """The phone inventory with category and feature lookups."""

    def __init__(self, phones: list[PhoneDef], silence_symbol: str = SILENCE):
        self.phones = phones
        self.silence_symbol = silence_symbol
        self.by_symbol = {p.symbol: p for p in phones}
        if len(self.by_symbol) != len(phones):
            raise LugandaTtsError("phone set contains duplicate symbols")

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.by_symbol

    def is_vowel(self, symbol: str) -> bool:
        p = self.by_symbol.get(symbol)
        return p is not None and p.category is PhoneCategory.VOWEL

    def is_consonant(self, symbol: str) -> bool:
        p = self.by_symbol.get(symbol)
        return p is not None and p.category is PhoneCategory.CONSONANT

    def is_long(self, symbol: str) -> bool:
        p = self.by_symbol.get(symbol)
        return p is not None and "LONG" in p.features

    def is_geminate(self, symbol: str) -> bool:
        p = self.by_symbol.get(symbol)
        return p is not None and "GEMINATE" in p.features

    @classmethod
    def load(cls, data_dir=None) -> "PhoneSetDef":
        base = resolve_data_dir(data_dir)
        phones = []
        for row in read_tsv(Path(base) / "phoneset.tsv"):
            symbol = row[0]
            category = PhoneCategory(row[1])
            feats = frozenset(f for f in (row[2].split(",") if len(row) > 2 and row[2] else []) if f)
            phones.append(PhoneDef(symbol, category, feats))
        return cls(phones)


@dataclass
class LexiconEntry:
    grapheme: str
    phones: list[str]
    syllables: list[list[str]]
    pos_hint: POS | None = None
    inflection_class: str | None = None


class Lexicon:
    """Grapheme-to-transcription dictionary, keys lowercased."""

    def __init__(self, entries: dict[str, LexiconEntry]):
        self.entries = entries

    def get(self, grapheme: str) -> LexiconEntry | None:
        return self.entries.get(grapheme.lower())

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, phoneset: PhoneSetDef, data_dir=None) -> "Lexicon":
        base = resolve_data_dir(data_dir)
        entries: dict[str, LexiconEntry] = {}
        for row in read_tsv(Path(base) / "lexicon.tsv"):
            grapheme = row[0].lower()
            syllables: list[list[str]] = [[]]
            for item in row[1].split():
                if item == ".":
                    syllables.append([])
                else:
                    if item not in phoneset:
                        raise LugandaTtsError(
                            f"lexicon entry {grapheme!r} uses unknown phone {item!r}"
                        )
                    syllables[-1].append(item)
            syllables = [s for s in syllables if s]
            if not syllables:
                raise LugandaTtsError(f"lexicon entry {grapheme!r} has no phones")
            pos_hint = POS[row[2]] if len(row) > 2 and row[2] else None
            phones = [p for syl in syllables for p in syl]
            entries[grapheme] = LexiconEntry(grapheme, phones, syllables, pos_hint)
        return cls(entries)


@dataclass
class Syllable:
    phones: list[str]
    stress: bool = False


@dataclass
class Word:
    surface: str
    token_index: int
    pos: POS
    syllables: list[Syllable] = field(default_factory=list)
    accented: bool = False
    transcription_source: TranscriptionSource | None = None
    inflect: str | None = None

    @property
    def phones(self) -> list[str]:
        return [p for syl in self.syllables for p in syl.phones]


@dataclass(frozen=True)
class ChunkSpan:
    start: int
    end: int  # inclusive
    kind: str = "NOUN_PHRASE"


# ---------------------------------------------------------------------------
# POS tagging and chunking

def load_function_words(data_dir=None) -> dict[str, POS]:
    base = resolve_data_dir(data_dir)
    table = {}
    for row in read_tsv(Path(base) / "function_words.tsv"):
        table[row[0].lower()] = POS[row[1]] if len(row) > 1 and row[1] else POS.FUNC
    return table


def tag_pos(sentence: Sentence, func_words: dict[str, POS], lexicon: Lexicon) -> list[Word]:
    """Build the sentence's word list with one POS per word."""
    words: list[Word] = []
    for ti, tok in enumerate(sentence.tokens):
        if tok.kind is TokenKind.PUNCT:
            words.append(Word(surface=tok.surface, token_index=ti, pos=POS.PUNC))
            continue
        if tok.kind is TokenKind.SYMBOL:
            words.append(Word(surface=tok.surface, token_index=ti, pos=POS.OTHER))
            continue
        pieces = tok.normalized_words
        for wi, piece in enumerate(pieces):
            lowered = piece.lower()
            if lowered in func_words:
                pos = func_words[lowered]
            else:
                entry = lexicon.get(lowered)
                if entry is not None and entry.pos_hint is not None:
                    pos = entry.pos_hint
                elif tok.kind is TokenKind.NUMBER:
                    pos = POS.NUM
                else:
                    pos = POS.NOUN
            word = Word(surface=piece, token_index=ti, pos=pos)
            for flag in tok.flags:
                # the inflection ending lands on the last expansion word
                if flag.startswith("inflect:") and wi == len(pieces) - 1:
                    word.inflect = flag.split(":", 1)[1]
            words.append(word)
    return words


CHUNKABLE = {POS.NOUN, POS.ADJ, POS.NUM}


def chunk_phrases(words: list[Word]) -> list[ChunkSpan]:
    """Maximal runs of noun/adjective/numeral words become noun phrases."""
    spans: list[ChunkSpan] = []
    start = None
    for i, word in enumerate(words):
        if word.pos in CHUNKABLE:
            if start is None:
                start = i
        elif start is not None:
            spans.append(ChunkSpan(start, i - 1))
            start = None
    if start is not None:
        spans.append(ChunkSpan(start, len(words) - 1))
    return spans


def in_chunk(index: int, chunks: list[ChunkSpan]) -> bool:
    return any(c.start <= index <= c.end for c in chunks)


# ---------------------------------------------------------------------------
# Letter-to-sound and syllabification

def letter_to_sound(grapheme: str, phoneset: PhoneSetDef) -> list[str]:
    """Rule-cascade G2P for words missing from the lexicon.

    Longest match first: ng' and ny digraphs, doubled letters as length,
    elision apostrophes dropped, then single letters.
    """
    text = grapheme.lower()
    phones: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        if text.startswith("nny", i):
            phones.append("J:")
            i += 3
        elif text.startswith("ng'", i):
            phones.append("N")
            i += 3
        elif text.startswith("ny", i):
            phones.append("J")
            i += 2
        elif (
            i + 1 < n
            and text[i] == text[i + 1]
            and text[i] in LETTER_PHONES
        ):
            phones.append(LETTER_PHONES[text[i]] + ":")
            i += 2
        elif text[i] == "'":
            i += 1  # elision apostrophe: consonant and following vowel both sound
        elif text[i] in LETTER_PHONES:
            phones.append(LETTER_PHONES[text[i]])
            i += 1
        else:
            i += 1  # letter outside the alphabet: no phone
    if not phones:
        raise UnphonemizableInput(f"no letter of {grapheme!r} maps to a phone")
    for p in phones:
        if p not in phoneset:
            raise LugandaTtsError(f"letter-to-sound produced unknown phone {p!r}")
    return phones


def phonemize_word(
    grapheme: str, lexicon: Lexicon, phoneset: PhoneSetDef
) -> tuple[list[str], TranscriptionSource]:
    """Lexicon lookup first, letter-to-sound rules otherwise."""
    if not grapheme:
        raise UnphonemizableInput("empty grapheme")
    entry = lexicon.get(grapheme)
    if entry is not None:
        return list(entry.phones), TranscriptionSource.LEXICON
    return letter_to_sound(grapheme, phoneset), TranscriptionSource.LTS


def syllabify(phones: list[str], phoneset: PhoneSetDef) -> list[Syllable]:
    """Open-syllable, maximal-onset segmentation.

    Every vowel is a nucleus and takes all consonants since the previous
    vowel as its onset; consonants after the last vowel join the final
    syllable.
    """
    syllables: list[Syllable] = []
    onset: list[str] = []
    for p in phones:
        if phoneset.is_vowel(p):
            syllables.append(Syllable(phones=onset + [p]))
            onset = []
        else:
            onset.append(p)
    if onset:
        if not syllables:
            raise NoNucleus(f"no vowel in {phones!r}")
        syllables[-1].phones.extend(onset)
    if not syllables:
        raise NoNucleus(f"no vowel in {phones!r}")
    return syllables


def transcribe_word(word: Word, lexicon: Lexicon, phoneset: PhoneSetDef) -> Word:
    """Fill a word's syllables; first syllable carries default lexical stress."""
    entry = lexicon.get(word.surface)
    if entry is not None:
        syllables = [Syllable(phones=list(s)) for s in entry.syllables]
        source = TranscriptionSource.LEXICON
    else:
        phones = letter_to_sound(word.surface, phoneset)
        syllables = syllabify(phones, phoneset)
        source = TranscriptionSource.LTS
    syllables[0].stress = True
    word.syllables = syllables
    word.transcription_source = source
    return word


# ---------------------------------------------------------------------------
# Inflection endings

@dataclass(frozen=True)
class EndingRule:
    trigger: str
    pos: str  # POS name or "*"
    context: str  # "np" or "any"
    phones: tuple[str, ...]


def load_ending_rules(data_dir=None) -> list[EndingRule]:
    base = resolve_data_dir(data_dir)
    rules = []
    for row in read_tsv(Path(base) / "inflection_endings.tsv"):
        rules.append(EndingRule(row[0], row[1], row[2], tuple(row[3].split())))
    return rules


def apply_inflection(
    word: Word,
    ending_rules: list[EndingRule],
    phoneset: PhoneSetDef,
    in_noun_phrase: bool = False,
) -> Word:
    """Append the ending selected by trigger, POS and chunk context."""
    if word.inflect is None or not word.syllables:
        return word
    for rule in ending_rules:
        if rule.trigger != word.inflect:
            continue
        if rule.pos != "*" and rule.pos != word.pos.name:
            continue
        if rule.context == "np" and not in_noun_phrase:
            continue
        phones = word.phones + list(rule.phones)
        syllables = syllabify(phones, phoneset)
        syllables[0].stress = True
        return replace(word, syllables=syllables)
    return word
