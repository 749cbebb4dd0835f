"""Front-end tests: parsing, tokenization, markup, and normalization."""
import copy
import random
import re

import pytest

from luganda_tts import (
    InputKind,
    NormalizationTables,
    NumberType,
    TokenKind,
    expand_number,
    normalize,
    parse_plain,
    parse_ssml_subset,
    tokenize,
)
from luganda_tts.errors import MalformedMarkup, OutOfRange
from luganda_tts.frontend import DirectiveKind, text_content

ELISION_SENTENCE = (
    "era ndyerera ddala ennyumba ya Yerobowaamu ng'omuntu bw'ayera obusa "
    "n'okuggwaawo ne buggwaawo bwonna"
)


@pytest.fixture(scope="module")
def tables():
    return NormalizationTables.load()


# ---------------------------------------------------------------------------
# parse_plain / tokenize

def test_empty_input_yields_empty_doc():
    doc = parse_plain("")
    assert doc.sentences == []
    assert doc.input_kind is InputKind.PLAIN
    assert doc.round_trip_text() == ""


def test_apostrophe_words_stay_single_tokens():
    doc = parse_plain(ELISION_SENTENCE)
    assert len(doc.sentences) == 1
    tokens = doc.sentences[0].tokens
    assert len(tokens) == 13
    assert all(t.kind is TokenKind.WORD for t in tokens)
    assert tokens[6].surface == "ng'omuntu"


def test_question_and_exclamation_split_sentences():
    doc = parse_plain("Ogenda wa? Genda!")
    assert len(doc.sentences) == 2
    assert doc.sentences[0].tokens[-1].surface == "?"
    assert doc.sentences[1].tokens[-1].surface == "!"


def test_tokenize_final_dot_is_punct():
    tokens = tokenize("butiko.")
    assert [(t.surface, t.kind) for t in tokens] == [
        ("butiko", TokenKind.WORD),
        (".", TokenKind.PUNCT),
    ]


def test_tokenize_word_then_number():
    tokens = tokenize("nkumi 3")
    assert [t.kind for t in tokens] == [TokenKind.WORD, TokenKind.NUMBER]


def test_abbreviation_dots_stay_attached():
    # the final dot is followed by a lowercase word, so it is not a terminator
    doc = parse_plain("U.S.A. butiko")
    assert len(doc.sentences) == 1
    tokens = doc.sentences[0].tokens
    assert tokens[0].surface == "U.S.A."
    assert tokens[0].kind is TokenKind.ABBREV


def test_sentence_boundary_needs_capital_or_eoi():
    assert len(parse_plain("genda. butiko").sentences) == 1
    assert len(parse_plain("genda. Butiko").sentences) == 2
    assert len(parse_plain("genda.").sentences) == 1


def test_round_trip_exact_for_plain_input():
    text = "  era \t ndyerera,  ddala!  Genda.\n"
    doc = parse_plain(text)
    assert doc.round_trip_text() == text


LUGANDA_ALPHABET = "abcdefgijklmnoprstuvwyz"


def _random_text(rng: random.Random) -> str:
    pieces = []
    for _ in range(rng.randrange(0, 12)):
        kind = rng.random()
        if kind < 0.6:
            word = "".join(rng.choice(LUGANDA_ALPHABET) for _ in range(rng.randrange(1, 9)))
            if rng.random() < 0.2 and len(word) > 2:
                pos = rng.randrange(1, len(word) - 1)
                word = word[:pos] + "'" + word[pos:]
            pieces.append(word)
        elif kind < 0.75:
            pieces.append(str(rng.randrange(0, 10**6)))
        elif kind < 0.9:
            pieces.append(rng.choice([".", ",", "?", "!", ";", ":"]))
        else:
            pieces.append(rng.choice(["#", "$", "@"]))
        pieces.append(rng.choice(["", " ", "  ", "\t", "\n", " \n "]))
    return "".join(pieces)


def test_property_lossless_tokenization_1000_cases():
    rng = random.Random(20260809)
    number_re = re.compile(r"[0-9]+\Z")
    for _ in range(1000):
        text = _random_text(rng)
        doc = parse_plain(text)
        assert doc.round_trip_text() == text, repr(text)
        for sentence in doc.sentences:
            assert len(sentence.tokens) >= 1
            for token in sentence.tokens:
                if token.kind is TokenKind.NUMBER:
                    assert number_re.match(token.surface)


# ---------------------------------------------------------------------------
# SSML subset

def test_ssml_plain_passthrough():
    doc = parse_ssml_subset("<speak>ssatu</speak>")
    assert len(doc.sentences) == 1
    assert [t.surface for t in doc.sentences[0].tokens] == ["ssatu"]
    assert doc.sentences[0].markup_directives == []
    assert doc.input_kind is InputKind.SSML


def test_ssml_say_as_cardinal_anchors_number():
    doc = parse_ssml_subset('<speak><say-as interpret-as="cardinal">3</say-as></speak>')
    sent = doc.sentences[0]
    assert sent.tokens[0].kind is TokenKind.NUMBER
    directive = sent.directive_for_token(0, DirectiveKind.SAY_AS)
    assert directive is not None
    assert directive.strength_or_value == "cardinal"


def test_ssml_unknown_element_skipped_with_warning():
    doc = parse_ssml_subset("<speak><unknown/>wa</speak>")
    assert len(list(doc.all_tokens())) == 1
    assert len(doc.warnings) == 1


def test_ssml_unknown_element_content_is_skipped():
    doc = parse_ssml_subset("<speak><unknown>erased</unknown>wa</speak>")
    assert [t.surface for t in doc.all_tokens()] == ["wa"]


def test_ssml_malformed_and_wrong_root_raise():
    with pytest.raises(MalformedMarkup):
        parse_ssml_subset("<speak>unclosed")
    with pytest.raises(MalformedMarkup):
        parse_ssml_subset("<talk>wa</talk>")


def test_ssml_break_anchors_after_previous_token():
    doc = parse_ssml_subset("<speak>wa <break/> ko</speak>")
    sent = doc.sentences[0]
    breaks = [d for d in sent.markup_directives if d.kind is DirectiveKind.BREAK]
    assert len(breaks) == 1
    assert breaks[0].anchor == (0, 0)


def test_ssml_s_elements_force_sentence_breaks():
    doc = parse_ssml_subset("<speak><s>Ogenda wa</s><s>genda</s></speak>")
    assert len(doc.sentences) == 2
    assert [t.surface for t in doc.sentences[1].tokens] == ["genda"]


def test_ssml_emphasis_recorded():
    doc = parse_ssml_subset("<speak>ne <emphasis level='strong'>butiko</emphasis></speak>")
    sent = doc.sentences[0]
    directive = sent.directive_for_token(1, DirectiveKind.EMPHASIS)
    assert directive is not None
    assert directive.strength_or_value == "strong"


def test_ssml_leading_break_anchors_before_first_token():
    doc = parse_ssml_subset("<speak><break/>wa</speak>")
    breaks = [d for d in doc.sentences[0].markup_directives if d.kind is DirectiveKind.BREAK]
    assert len(breaks) == 1
    assert breaks[0].anchor == (-1, -1)


def test_ssml_surfaces_match_parse_plain_of_text_content():
    samples = [
        "<speak>era ndyerera ddala</speak>",
        "<speak><s>Ogenda wa?</s><s>Genda!</s></speak>",
        '<speak>nkumi <say-as interpret-as="cardinal">42</say-as> za <emphasis>kabaka</emphasis></speak>',
        "<speak>wa <break/> ko <unknown>gone</unknown> era</speak>",
    ]
    for xml in samples:
        via_ssml = [t.surface for t in parse_ssml_subset(xml).all_tokens()]
        via_plain = [t.surface for t in parse_plain(text_content(xml)).all_tokens()]
        assert via_ssml == via_plain, xml


# ---------------------------------------------------------------------------
# expand_number

def test_expand_telephone_single_digit(tables):
    assert expand_number("0", NumberType.TELEPHONE, tables) == tables.numerals["0"]


def test_expand_cardinal_42_composes_tens_and_units(tables):
    # oracle: table rows for 40 and 2 joined by the conjunction row
    expected = tables.numerals["40"] + tables.numerals["conjunction"] + tables.numerals["2"]
    assert expand_number("42", NumberType.CARDINAL, tables) == expected
    assert expand_number("42", NumberType.CARDINAL, tables) == ["amakumi", "ana", "mu", "bbiri"]


def test_expand_cardinal_hundreds_and_thousands(tables):
    n = tables.numerals
    conj = n["conjunction"]
    assert expand_number("100", NumberType.CARDINAL, tables) == n["100"]
    assert expand_number("342", NumberType.CARDINAL, tables) == (
        n["100"] + n["3"] + conj + n["40"] + conj + n["2"]
    )
    assert expand_number("1000", NumberType.CARDINAL, tables) == n["1"] + n["1000"]
    assert expand_number("5005", NumberType.CARDINAL, tables) == (
        n["5"] + n["1000"] + conj + n["5"]
    )


def test_expand_cardinal_ten_digits_out_of_range(tables):
    with pytest.raises(OutOfRange):
        expand_number("1000000000", NumberType.CARDINAL, tables)
    # nine digits stays in range
    assert expand_number("999999999", NumberType.CARDINAL, tables)


def test_expand_ordinal_prefixes_first_word(tables):
    prefix = "".join(tables.numerals["ordinal_prefix"])
    cardinal = expand_number("2", NumberType.CARDINAL, tables)
    ordinal = expand_number("2", NumberType.ORDINAL, tables)
    assert ordinal[0] == prefix + cardinal[0]
    assert ordinal[1:] == cardinal[1:]


def test_property_telephone_length_equals_digit_count(tables):
    rng = random.Random(7)
    for _ in range(200):
        digits = "".join(rng.choice("0123456789") for _ in range(rng.randrange(1, 15)))
        assert len(expand_number(digits, NumberType.TELEPHONE, tables)) == len(digits)


# ---------------------------------------------------------------------------
# normalize

def test_normalize_doc_without_numbers_unchanged(tables):
    doc = parse_plain("era ndyerera ddala")
    before = copy.deepcopy(doc)
    normalize(doc, tables)
    assert doc == before


def test_normalize_say_as_cardinal(tables):
    doc = parse_ssml_subset('<speak><say-as interpret-as="cardinal">3</say-as></speak>')
    normalize(doc, tables)
    tok = doc.sentences[0].tokens[0]
    assert tok.expansion == tables.numerals["3"]


def test_normalize_telephone_say_as_is_per_digit(tables):
    doc = parse_ssml_subset('<speak><say-as interpret-as="telephone">256</say-as></speak>')
    normalize(doc, tables)
    tok = doc.sentences[0].tokens[0]
    assert tok.expansion == tables.numerals["2"] + tables.numerals["5"] + tables.numerals["6"]
    assert len(tok.expansion) == 3


def test_normalize_ordinal_dot_flags_inflection(tables):
    doc = parse_plain("omuntu 3. ogenda")
    normalize(doc, tables)
    tok = doc.sentences[0].tokens[1]
    assert tok.kind is TokenKind.NUMBER
    prefix = "".join(tables.numerals["ordinal_prefix"])
    assert tok.expansion[0].startswith(prefix)
    assert "inflect:ordinal" in tok.flags


def test_normalize_long_unmarked_digits_read_as_telephone(tables):
    doc = parse_plain("tujja 0256772123456")
    normalize(doc, tables)
    tok = doc.sentences[0].tokens[1]
    assert tok.expansion is not None
    assert len(tok.expansion) == len(tok.surface)


def test_normalize_abbreviations_spell_and_expand(tables):
    doc = parse_plain("USA ne Dkt")
    normalize(doc, tables)
    tokens = doc.sentences[0].tokens
    assert tokens[0].expansion == ["yu", "esi", "eyi"]
    assert tokens[2].expansion == ["ddokita"]
    assert "inflect:abbrev" in tokens[2].flags


def test_normalize_unknown_abbreviation_flagged(tables):
    doc = parse_plain("XYZ wa")
    normalize(doc, tables)
    tok = doc.sentences[0].tokens[0]
    assert tok.kind is TokenKind.ABBREV
    assert tok.expansion is None
    assert "no-abbrev-entry" in tok.flags


def test_normalize_currency_left_unexpanded(tables):
    doc = parse_plain("$3 wa")
    normalize(doc, tables)
    tok = doc.sentences[0].tokens[1]
    assert tok.expansion is None
    assert "currency-unexpanded" in tok.flags


def test_normalize_is_idempotent_1000_cases(tables):
    rng = random.Random(99)
    for _ in range(1000):
        doc = parse_plain(_random_text(rng))
        once = normalize(doc, tables)
        snapshot = copy.deepcopy(once)
        twice = normalize(once, tables)
        assert twice == snapshot
