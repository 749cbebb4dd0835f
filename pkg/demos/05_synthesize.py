#!/usr/bin/env python3
"""Full text-to-audio synthesis on the bundled synthetic voice, with a look
inside the unit-selection path. Writes out.wav next to this script."""
import tempfile
import time
from pathlib import Path

from luganda_tts import Pipeline, build_synthetic_voice, synthesize_text, write_wav

pipeline = Pipeline()

with tempfile.TemporaryDirectory() as tmp:
    print("building the bundled synthetic voice...")
    voice = build_synthetic_voice(Path(tmp) / "session", pipeline=pipeline)
    print(f"  {len(voice)} units")

    text = "abantu bbiri ne ssatu"
    t0 = time.time()
    wave, pho, doc = synthesize_text(text, voice, pipeline=pipeline)
    print(f"\nsynthesized {text!r} in {time.time() - t0:.3f} s")
    print(f"  audio: {len(wave.samples)} samples ({wave.duration_s:.2f} s)")

    path = doc.unit_path
    print(f"  path cost {path.total_cost:.2f} over {len(path.unit_ids)} units:")
    for uid, (tc, jc) in zip(path.unit_ids, path.steps):
        unit = voice.unit(uid)
        print(f"    {unit.triphone:<14} from {unit.source_id}  target={tc:.2f} join={jc:.2f}")

    print("\nacoustic targets (.pho):")
    print(pho)

    out = Path(__file__).parent / "out.wav"
    write_wav(wave, out)
    print(f"wrote {out}")
