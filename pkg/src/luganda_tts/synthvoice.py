"""Deterministic synthetic voice generation for demos and tests.

Each phone renders as a band-limited harmonic pulse train whose F0 and
spectral shape derive from a CRC of the phone symbol, so sessions rebuild
bit-identically anywhere.  The generator writes a standard recording session
(wav/, text/, lab/) that the normal voice-building path ingests.
"""
from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

from .data import resolve_data_dir
from .pipeline import Pipeline
from .voicedb import VoiceInventory, build_inventory
from .wavio import SAMPLE_RATE, Waveform, write_wav

SIL_MS = 150
VOWEL_MS = 90
CONSONANT_MS = 70
LENGTH_FACTOR = 1.4
PEAK = 0.45


def phone_f0(symbol: str) -> float:
    return 100.0 + zlib.crc32(symbol.encode("utf-8")) % 80


def phone_signal(symbol: str, n_samples: int) -> np.ndarray:
    """A pulse-train-like sum of harmonics, unique per phone symbol."""
    if symbol == "_":
        return np.zeros(n_samples, dtype=np.int16)
    f0 = phone_f0(symbol)
    rng = np.random.default_rng(zlib.crc32(symbol.encode("utf-8")))
    t = np.arange(n_samples) / SAMPLE_RATE
    signal = np.zeros(n_samples)
    k = 1
    while k * f0 < 6000:
        amp = rng.uniform(0.5, 1.0) / k
        signal += amp * np.sin(2 * np.pi * k * f0 * t)
        k += 1
    peak = np.max(np.abs(signal)) or 1.0
    return np.round(signal / peak * PEAK * 32767).astype(np.int16)


def _phone_ms(symbol: str, pipeline: Pipeline) -> int:
    if pipeline.phoneset.is_vowel(symbol):
        ms = VOWEL_MS
    else:
        ms = CONSONANT_MS
    if symbol.endswith(":"):
        ms = int(ms * LENGTH_FACTOR)
    return ms


def make_synthetic_session(texts: list[str], session_dir, pipeline: Pipeline | None = None) -> list[str]:
    """Write wav/, text/, and lab/ files for the given prompt texts."""
    pipeline = pipeline or Pipeline()
    session_dir = Path(session_dir)
    for sub in ("wav", "text", "lab"):
        (session_dir / sub).mkdir(parents=True, exist_ok=True)

    source_ids = []
    for idx, text in enumerate(texts):
        phones = [p for row in pipeline.word_phone_rows(text) for p in row]
        sequence = ["_"] + phones + ["_"]
        chunks = []
        labels = []
        cursor = 0
        for symbol in sequence:
            ms = SIL_MS if symbol == "_" else _phone_ms(symbol, pipeline)
            n = ms * SAMPLE_RATE // 1000
            chunks.append(phone_signal(symbol, n))
            labels.append((cursor / SAMPLE_RATE, (cursor + n) / SAMPLE_RATE, symbol))
            cursor += n
        samples = np.concatenate(chunks)
        source_id = f"audio{idx:03d}"
        write_wav(Waveform(samples=samples), session_dir / "wav" / f"{source_id}.wav")
        (session_dir / "text" / f"{source_id}.txt").write_text(text + "\n", encoding="utf-8")
        lab_lines = [f"{s:.6f} {e:.6f} {p}" for s, e, p in labels]
        (session_dir / "lab" / f"{source_id}.lab").write_text(
            "\n".join(lab_lines) + "\n", encoding="utf-8"
        )
        source_ids.append(source_id)
    return source_ids


def default_corpus_texts(data_dir=None) -> list[str]:
    path = resolve_data_dir(data_dir) / "voice_corpus.txt"
    texts = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            texts.append(line)
    return texts


def build_synthetic_voice(
    session_dir,
    texts: list[str] | None = None,
    pipeline: Pipeline | None = None,
) -> VoiceInventory:
    """Generate a synthetic session and build its unit inventory."""
    pipeline = pipeline or Pipeline()
    if texts is None:
        texts = default_corpus_texts()
    make_synthetic_session(texts, session_dir, pipeline)
    return build_inventory(session_dir, metadata={"speaker": "synthetic"})
