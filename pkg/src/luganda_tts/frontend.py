"""Text front-end: plain/SSML parsing, tokenization, and normalization.

The parser produces an UtteranceDoc whose tokens, for plain input, losslessly
partition the source text: concatenating every token's leading whitespace and
surface (plus the document's trailing whitespace) reproduces the input.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .data import read_tsv, resolve_data_dir
from .errors import MalformedMarkup, OutOfRange

DIGITS = set("0123456789")
PUNCT_CHARS = set(".,;:?!()[]\"'-")
SENTENCE_FINAL = {".", "?", "!"}
CURRENCY_SYMBOLS = set("$€£")


class InputKind(Enum):
    PLAIN = "PLAIN"
    SSML = "SSML"


class TokenKind(Enum):
    WORD = "WORD"
    NUMBER = "NUMBER"
    ABBREV = "ABBREV"
    PUNCT = "PUNCT"
    SYMBOL = "SYMBOL"


class NumberType(Enum):
    CARDINAL = "CARDINAL"
    ORDINAL = "ORDINAL"
    TELEPHONE = "TELEPHONE"


class DirectiveKind(Enum):
    BREAK = "BREAK"
    SAY_AS = "SAY_AS"
    EMPHASIS = "EMPHASIS"


class SentenceType(Enum):
    DECLARATIVE = "DECLARATIVE"
    INTERROGATIVE_W = "INTERROGATIVE_W"
    INTERROGATIVE_YN = "INTERROGATIVE_YN"
    EXCLAMATIVE = "EXCLAMATIVE"


@dataclass
class Token:
    surface: str
    leading_ws: str
    kind: TokenKind
    char_span: tuple[int, int]
    expansion: list[str] | None = None
    flags: set[str] = field(default_factory=set)

    @property
    def normalized_words(self) -> list[str]:
        return self.expansion if self.expansion is not None else [self.surface]


@dataclass
class MarkupDirective:
    kind: DirectiveKind
    strength_or_value: str
    anchor: tuple[int, int]  # inclusive token index range within the sentence


@dataclass
class Sentence:
    tokens: list[Token]
    sentence_type: SentenceType | None = None
    markup_directives: list[MarkupDirective] = field(default_factory=list)
    # filled by later stages
    words: list = field(default_factory=list)
    breaks: list = field(default_factory=list)
    accents: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def directive_for_token(self, index: int, kind: DirectiveKind) -> MarkupDirective | None:
        for d in self.markup_directives:
            if d.kind is kind and d.anchor[0] <= index <= d.anchor[1]:
                return d
        return None


@dataclass
class UtteranceDoc:
    sentences: list[Sentence]
    source_text: str
    input_kind: InputKind
    trailing_ws: str = ""
    warnings: list[str] = field(default_factory=list)

    def round_trip_text(self) -> str:
        parts = []
        for sent in self.sentences:
            for tok in sent.tokens:
                parts.append(tok.leading_ws)
                parts.append(tok.surface)
        parts.append(self.trailing_ws)
        return "".join(parts)

    def all_tokens(self):
        for sent in self.sentences:
            yield from sent.tokens


@dataclass
class NormalizationTables:
    numerals: dict[str, list[str]]
    abbreviations: dict[str, tuple[str, list[str]]]

    @classmethod
    def load(cls, data_dir=None) -> "NormalizationTables":
        base = resolve_data_dir(data_dir)
        numerals = {}
        for row in read_tsv(base / "numerals.tsv"):
            numerals[row[0]] = row[1].split()
        abbrevs = {}
        for row in read_tsv(base / "abbreviations.tsv"):
            abbrevs[row[0]] = (row[1], row[2].split())
        return cls(numerals=numerals, abbreviations=abbrevs)


# ---------------------------------------------------------------------------
# Tokenization

def _is_ascii_digit(c: str) -> bool:
    return c in DIGITS


def _boundary_after(text: str, idx: int) -> bool:
    """True when the terminator at text[idx] ends a sentence.

    Terminators end a sentence when followed by whitespace plus a capital
    letter, or by end of input.  Dots followed by lowercase or digits are
    abbreviation/ordinal dots.
    """
    k = idx + 1
    if k >= len(text):
        return True
    if not text[k].isspace():
        return False
    while k < len(text) and text[k].isspace():
        k += 1
    if k >= len(text):
        return True
    return text[k].isupper()


def _consume_word(text: str, i: int) -> int:
    """Advance past a word: letters, elision apostrophes, abbreviation dots."""
    n = len(text)
    while i < n:
        if text[i].isalpha():
            i += 1
        elif text[i] == "'" and i + 1 < n and text[i + 1].isalpha():
            i += 1
        elif text[i] == "." and i + 1 < n and text[i + 1].isalpha():
            # dot glued to a following letter: internal abbreviation dot
            i += 1
        else:
            break
    # a trailing dot that does not end the sentence stays on the abbreviation
    if i < n and text[i] == "." and not _boundary_after(text, i):
        i += 1
    return i


def _classify_word(surface: str) -> TokenKind:
    if "." in surface:
        return TokenKind.ABBREV
    if len(surface) >= 2 and surface.isupper():
        return TokenKind.ABBREV
    return TokenKind.WORD


def _scan(text: str) -> tuple[list[Token], str]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    trailing = ""
    while i < n:
        j = i
        while j < n and text[j].isspace():
            j += 1
        ws = text[i:j]
        if j >= n:
            trailing = ws
            break
        start = j
        c = text[j]
        if c.isalpha():
            j = _consume_word(text, j)
            kind = _classify_word(text[start:j])
        elif _is_ascii_digit(c):
            while j < n and _is_ascii_digit(text[j]):
                j += 1
            kind = TokenKind.NUMBER
        elif c in PUNCT_CHARS:
            j += 1
            kind = TokenKind.PUNCT
        else:
            j += 1
            kind = TokenKind.SYMBOL
        tokens.append(Token(surface=text[start:j], leading_ws=ws, kind=kind, char_span=(start, j)))
        i = j
    return tokens, trailing


def tokenize(sentence_text: str) -> list[Token]:
    """Cut one sentence's text into tokens (no sentence splitting)."""
    tokens, _ = _scan(sentence_text)
    return tokens


def _split_sentences(text: str, tokens: list[Token]) -> list[list[Token]]:
    sentences: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        current.append(tok)
        if (
            tok.kind is TokenKind.PUNCT
            and tok.surface in SENTENCE_FINAL
            and _boundary_after(text, tok.char_span[1] - 1)
        ):
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def parse_plain(text: str) -> UtteranceDoc:
    """Parse plain UTF-8 text into an UtteranceDoc."""
    tokens, trailing = _scan(text)
    groups = _split_sentences(text, tokens)
    sentences = [Sentence(tokens=g) for g in groups]
    return UtteranceDoc(
        sentences=sentences,
        source_text=text,
        input_kind=InputKind.PLAIN,
        trailing_ws=trailing,
    )


# ---------------------------------------------------------------------------
# SSML subset

_SAY_AS_VALUES = {"cardinal", "ordinal", "telephone"}
_KNOWN_ELEMENTS = {"speak", "s", "break", "say-as", "emphasis"}


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _flatten_ssml(el, events: list, warnings: list[str]) -> None:
    # element boundaries separate tokens, so a space goes in around each
    # markup marker (SSML input carries no byte round-trip guarantee)
    if el.text:
        events.append(("text", el.text))
    for child in el:
        name = _local_name(child.tag)
        if name == "s":
            events.append(("text", " "))
            events.append(("s_open",))
            _flatten_ssml(child, events, warnings)
            events.append(("s_close",))
            events.append(("text", " "))
        elif name == "break":
            events.append(("break", child.get("strength", "medium")))
            events.append(("text", " "))
        elif name == "say-as":
            value = child.get("interpret-as", "")
            if value in _SAY_AS_VALUES:
                events.append(("text", " "))
                events.append(("sayas_open", value))
                _flatten_ssml(child, events, warnings)
                events.append(("sayas_close",))
                events.append(("text", " "))
            else:
                warnings.append(f"say-as interpret-as={value!r} not supported; text kept")
                _flatten_ssml(child, events, warnings)
        elif name == "emphasis":
            events.append(("text", " "))
            events.append(("emph_open", child.get("level", "moderate")))
            _flatten_ssml(child, events, warnings)
            events.append(("emph_close",))
            events.append(("text", " "))
        else:
            warnings.append(f"unknown element <{name}> skipped")
        if child.tail:
            events.append(("text", child.tail))


def text_content(xml_text: str) -> str:
    """The text an SSML document would speak, markup stripped."""
    doc = parse_ssml_subset(xml_text)
    pieces = []
    for sent in doc.sentences:
        for tok in sent.tokens:
            pieces.append(tok.leading_ws)
            pieces.append(tok.surface)
    return "".join(pieces)


def parse_ssml_subset(xml_text: str) -> UtteranceDoc:
    """Parse the supported SSML subset (speak, s, break, say-as, emphasis)."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedMarkup(f"ill-formed XML: {exc}") from exc
    if _local_name(root.tag) != "speak":
        raise MalformedMarkup(f"root element is <{_local_name(root.tag)}>, expected <speak>")

    warnings: list[str] = []
    events: list = []
    _flatten_ssml(root, events, warnings)

    # Lay the text chunks into one string, remembering markup positions.
    full_text_parts: list[str] = []
    offset = 0
    # markers: (char_offset, event) for non-text events
    markers: list[tuple[int, tuple]] = []
    for ev in events:
        if ev[0] == "text":
            full_text_parts.append(ev[1])
            offset += len(ev[1])
        else:
            markers.append((offset, ev))
    full_text = "".join(full_text_parts)

    tokens, trailing = _scan(full_text)
    forced_ends: set[int] = set()  # global token index that must end a sentence

    def token_index_before(pos: int) -> int:
        """Index of the last token starting before pos, -1 if none."""
        idx = -1
        for i, tok in enumerate(tokens):
            if tok.char_span[0] < pos:
                idx = i
            else:
                break
        return idx

    def token_range_within(start: int, end: int) -> tuple[int, int] | None:
        lo = hi = None
        for i, tok in enumerate(tokens):
            if tok.char_span[0] >= start and tok.char_span[1] <= end:
                if lo is None:
                    lo = i
                hi = i
        if lo is None:
            return None
        return (lo, hi)

    directives: list[tuple[tuple[int, int], DirectiveKind, str]] = []  # global anchors
    open_spans: list[tuple[str, str, int]] = []  # (kind, value, start_offset)
    for pos, ev in markers:
        tag = ev[0]
        if tag == "break":
            directives.append(((token_index_before(pos),) * 2, DirectiveKind.BREAK, ev[1]))
        elif tag == "sayas_open":
            open_spans.append(("say-as", ev[1], pos))
        elif tag == "emph_open":
            open_spans.append(("emphasis", ev[1], pos))
        elif tag in ("sayas_close", "emph_close"):
            kind_name, value, start = open_spans.pop()
            rng = token_range_within(start, pos)
            if rng is not None:
                kind = DirectiveKind.SAY_AS if kind_name == "say-as" else DirectiveKind.EMPHASIS
                directives.append((rng, kind, value))
        elif tag == "s_close":
            idx = token_index_before(pos)
            if idx >= 0:
                forced_ends.add(idx)

    # Sentence boundaries: punctuation rule plus forced <s> closes.
    groups: list[list[int]] = []
    current: list[int] = []
    for i, tok in enumerate(tokens):
        current.append(i)
        ends = i in forced_ends
        if (
            tok.kind is TokenKind.PUNCT
            and tok.surface in SENTENCE_FINAL
            and _boundary_after(full_text, tok.char_span[1] - 1)
        ):
            ends = True
        if ends:
            groups.append(current)
            current = []
    if current:
        groups.append(current)

    sentences = []
    for group in groups:
        base = group[0]
        sent = Sentence(tokens=[tokens[i] for i in group])
        for anchor, kind, value in directives:
            lo, hi = anchor
            if kind is DirectiveKind.BREAK:
                # a break before any token anchors at -1 within the first sentence
                if lo < base:
                    if base == 0 and lo == -1:
                        sent.markup_directives.append(MarkupDirective(kind, value, (-1, -1)))
                    continue
                if lo > group[-1]:
                    continue
                local = lo - base
                sent.markup_directives.append(MarkupDirective(kind, value, (local, local)))
            else:
                if hi < base or lo > group[-1]:
                    continue
                local_lo = max(lo, base) - base
                local_hi = min(hi, group[-1]) - base
                sent.markup_directives.append(MarkupDirective(kind, value, (local_lo, local_hi)))
        sentences.append(sent)

    return UtteranceDoc(
        sentences=sentences,
        source_text=xml_text,
        input_kind=InputKind.SSML,
        trailing_ws=trailing,
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# Normalization

_NUMBER_RE = re.compile(r"[0-9]+\Z")
MAX_NUMBER_DIGITS = 9


def expand_number(digits: str, number_type: NumberType, tables: NormalizationTables) -> list[str]:
    """Expand a digit string into Luganda number words."""
    if not _NUMBER_RE.match(digits):
        raise ValueError(f"not a digit string: {digits!r}")
    numerals = tables.numerals
    if number_type is NumberType.TELEPHONE:
        return [w for c in digits for w in numerals[c]]
    if len(digits) > MAX_NUMBER_DIGITS:
        raise OutOfRange(f"{digits!r} has more than {MAX_NUMBER_DIGITS} digits")
    n = int(digits)
    words = _compose_cardinal(n, numerals)
    if number_type is NumberType.ORDINAL:
        prefix = "".join(numerals.get("ordinal_prefix", []))
        words = [prefix + words[0]] + words[1:]
    return words


def _compose_cardinal(n: int, numerals: dict[str, list[str]]) -> list[str]:
    if n == 0:
        return list(numerals["0"])
    components: list[list[str]] = []
    if n >= 1000:
        thousands, n = divmod(n, 1000)
        components.append(_compose_cardinal(thousands, numerals) + numerals["1000"])
    hundreds, rest = divmod(n, 100)
    if hundreds:
        part = list(numerals["100"])
        if hundreds > 1:
            part += numerals[str(hundreds)]
        components.append(part)
    tens = rest - rest % 10
    units = rest % 10
    if tens:
        components.append(list(numerals[str(tens)]))
    if units:
        components.append(list(numerals[str(units)]))
    conjunction = numerals.get("conjunction", [])
    words: list[str] = []
    for i, part in enumerate(components):
        if i > 0:
            words.extend(conjunction)
        words.extend(part)
    return words


def _number_type_for(sent: Sentence, index: int) -> NumberType:
    tok = sent.tokens[index]
    directive = sent.directive_for_token(index, DirectiveKind.SAY_AS)
    if directive is not None:
        return NumberType(directive.strength_or_value.upper())
    # an attached non-final dot marks an ordinal
    nxt = sent.tokens[index + 1] if index + 1 < len(sent.tokens) else None
    if (
        nxt is not None
        and nxt.kind is TokenKind.PUNCT
        and nxt.surface == "."
        and nxt.leading_ws == ""
        and index + 1 != len(sent.tokens) - 1
    ):
        return NumberType.ORDINAL
    if len(tok.surface) > MAX_NUMBER_DIGITS:
        return NumberType.TELEPHONE
    return NumberType.CARDINAL


def _is_currency_adjacent(sent: Sentence, index: int) -> bool:
    for nb in (index - 1, index + 1):
        if 0 <= nb < len(sent.tokens):
            tok = sent.tokens[nb]
            if tok.surface in CURRENCY_SYMBOLS:
                gap = tok.leading_ws if nb == index + 1 else sent.tokens[index].leading_ws
                if gap == "":
                    return True
    return False


def normalize(doc: UtteranceDoc, tables: NormalizationTables) -> UtteranceDoc:
    """Expand NUMBER and ABBREV tokens in place; idempotent."""
    for sent in doc.sentences:
        for i, tok in enumerate(sent.tokens):
            if tok.expansion is not None:
                continue
            if tok.kind is TokenKind.NUMBER:
                if _is_currency_adjacent(sent, i):
                    tok.flags.add("currency-unexpanded")
                    continue
                ntype = _number_type_for(sent, i)
                try:
                    tok.expansion = expand_number(tok.surface, ntype, tables)
                except OutOfRange:
                    tok.flags.add("number-out-of-range")
                    continue
                if ntype is NumberType.ORDINAL:
                    tok.flags.add("inflect:ordinal")
            elif tok.kind is TokenKind.ABBREV or tok.kind is TokenKind.WORD:
                # recognition is table-driven, so dotless abbreviations
                # ("Dkt") expand even when they tokenize as plain words
                key = tok.surface.replace(".", "")
                entry = tables.abbreviations.get(key)
                if entry is None:
                    if tok.kind is TokenKind.ABBREV:
                        tok.flags.add("no-abbrev-entry")
                    continue
                mode, words = entry
                tok.expansion = list(words)
                if mode == "expand":
                    tok.flags.add("inflect:abbrev")
    return doc


def load_frontend_tables(data_dir=None) -> NormalizationTables:
    return NormalizationTables.load(data_dir)


def load_w_words(data_dir=None) -> set[str]:
    base = resolve_data_dir(data_dir)
    return {row[0] for row in read_tsv(Path(base) / "w_words.tsv")}
