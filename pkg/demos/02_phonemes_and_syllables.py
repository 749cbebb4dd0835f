#!/usr/bin/env python3
"""Grapheme-to-phoneme conversion and unit segmentation, displayed as the
classic word / syllables / phonemes / triphones table."""
from luganda_tts import Lexicon, PhoneSetDef, phonemize_word, syllabify
from luganda_tts.pipeline import triphone_labels

phoneset = PhoneSetDef.load()
lexicon = Lexicon.load(phoneset)

for word in ("butiko", "bbiri", "ennyumba", "ng'omuntu", "okuggwaawo", "ssatu"):
    phones, source = phonemize_word(word, lexicon, phoneset)
    syllables = syllabify(phones, phoneset)
    print(f"Word       {word}   ({source.value})")
    print(f"Syllables  {' | '.join(''.join(s.phones) for s in syllables)}")
    print(f"Phonemes   {' '.join(phones)}")
    print(f"Triphones  {' | '.join(triphone_labels(phones))}")
    print()
