#!/usr/bin/env python3
"""Voice building end to end: corpus selection, a synthetic recording
session, pitch marks, unit segmentation, and inventory persistence."""
import tempfile
from pathlib import Path

from luganda_tts import (
    Pipeline,
    load_inventory,
    make_synthetic_session,
    read_wav,
    save_inventory,
    select_corpus,
    validate_session,
)
from luganda_tts.voicedb import build_inventory, compute_pitch_marks, estimate_f0

pipeline = Pipeline()

print("=== greedy corpus selection ===")
candidates = [
    "butiko",
    "omuntu ogenda",
    "butiko omuntu",  # adds nothing once the first two are taken
    "abantu bbiri ne ssatu",
]
for sent in select_corpus(candidates, 10, 12, pipeline.sentence_triphones):
    print(f"  picked [{sent.id}] {sent.text!r} ({len(sent.triphones)} triphones)")

with tempfile.TemporaryDirectory() as tmp:
    session_dir = Path(tmp) / "session"
    voice_dir = Path(tmp) / "voice"

    print("\n=== synthetic recording session ===")
    make_synthetic_session(["butiko", "omuntu ogenda"], session_dir, pipeline)
    pairs = validate_session(session_dir)
    print(f"  {len(pairs)} wav/text pairs validated (16 kHz, 16-bit, mono)")

    wave = read_wav(pairs[0][0])
    marks = compute_pitch_marks(wave, estimate_f0(wave))
    print(f"  first recording: {wave.duration_s:.2f} s, {len(marks)} pitch marks")

    print("\n=== unit inventory ===")
    inv = build_inventory(session_dir, metadata={"speaker": "synthetic"})
    print(f"  {len(inv)} units from {len(inv.waves)} recordings")
    for unit in inv.units[:6]:
        print(
            f"  unit {unit.id}: {unit.triphone:<14} {unit.duration_ms} ms, "
            f"mean F0 {unit.mean_f0:.0f} Hz, {len(unit.pitch_marks)} marks"
        )

    save_inventory(inv, voice_dir)
    again = load_inventory(voice_dir)
    print(f"  saved + reloaded: inventories equal -> {again == inv}")
