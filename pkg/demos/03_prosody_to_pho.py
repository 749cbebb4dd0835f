#!/usr/bin/env python3
"""From words to physical targets: sentence types, accents, breaks, tones,
postlexical rules at each precision level, and the final .pho output."""
from luganda_tts import Pipeline
from luganda_tts.prosody import Precision
from luganda_tts.serialize import serialize_acoustparams, serialize_allophones

for text in ("Ogenda wa?", "Genda!", "omuntu, ne era, ayita bulungi."):
    pipeline = Pipeline()
    doc = pipeline.process(text, upto="prosody")
    sentence = doc.sentences[0]
    print(f"input: {text!r}")
    print(f"  type: {sentence.sentence_type.value}")
    for accent in sentence.accents:
        word = sentence.words[accent.word_index]
        star = " (nuclear)" if accent.nuclear else ""
        print(f"  accent {accent.tone} on {word.surface!r}{star}")
    for brk in sentence.breaks:
        print(f"  break {brk.level.value} {brk.boundary_tone} after word {brk.position}")
    print()

print("=== precision levels change the phone string ===")
for precision in Precision:
    pipeline = Pipeline(precision=precision)
    doc = pipeline.process("maaso ddala", upto="postlexical")
    print(f"  {precision.value:8} {serialize_allophones(doc).strip()}")

print("\n=== acoustic parameters (.pho) ===")
pipeline = Pipeline()
doc = pipeline.process("butiko.", upto="f0")
print(serialize_acoustparams(doc))
