#!/usr/bin/env python3
"""Walkthrough of the text front-end: tokenization, sentence splitting,
SSML markup, and number/abbreviation normalization."""
from luganda_tts import NormalizationTables, normalize, parse_plain, parse_ssml_subset

tables = NormalizationTables.load()

print("=== Plain text ===")
text = "Ogenda wa? Nkumi 3. Genda mangu!"
doc = parse_plain(text)
print(f"input: {text!r}")
print(f"sentences: {len(doc.sentences)}")
for i, sentence in enumerate(doc.sentences):
    print(f"  [{i}] " + " | ".join(f"{t.surface}/{t.kind.value}" for t in sentence.tokens))
print(f"round trip == input: {doc.round_trip_text() == text}")

print("\n=== Normalization ===")
normalize(doc, tables)
for sentence in doc.sentences:
    for token in sentence.tokens:
        if token.expansion:
            print(f"  {token.surface!r} -> {' '.join(token.expansion)}")

print("\n=== Abbreviations ===")
doc = normalize(parse_plain("Dkt Mwebaze ne USA"), tables)
for token in doc.sentences[0].tokens:
    if token.expansion:
        print(f"  {token.surface!r} -> {' '.join(token.expansion)}")

print("\n=== SSML subset ===")
xml = '<speak>abantu <say-as interpret-as="telephone">256</say-as> <break/> era</speak>'
doc = normalize(parse_ssml_subset(xml), tables)
print(f"input: {xml}")
for sentence in doc.sentences:
    print("  tokens: " + " | ".join(t.surface for t in sentence.tokens))
    for directive in sentence.markup_directives:
        print(f"  directive: {directive.kind.value} {directive.strength_or_value!r} at {directive.anchor}")
    for token in sentence.tokens:
        if token.expansion:
            print(f"  {token.surface!r} -> {' '.join(token.expansion)}")
