"""Bit-exact RIFF/PCM WAV reading and writing (16 kHz, 16-bit, mono).

The writer emits the canonical 44-byte header; the reader accepts any chunk
layout but only PCM mono 16-bit at the engine sample rate.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import LugandaTtsError, UnsupportedWav

SAMPLE_RATE = 16000
BITS = 16


@dataclass
class Waveform:
    samples: np.ndarray  # int16
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        if self.sample_rate != SAMPLE_RATE:
            raise LugandaTtsError(f"sample rate must be {SAMPLE_RATE}, got {self.sample_rate}")
        self.samples = np.asarray(self.samples, dtype=np.int16)

    def __eq__(self, other):
        if not isinstance(other, Waveform):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.samples, other.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def wav_bytes(w: Waveform) -> bytes:
    data = w.samples.astype("<i2").tobytes()
    byte_rate = SAMPLE_RATE * BITS // 8
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(data),
        b"WAVE",
        b"fmt ",
        16,
        1,  # PCM
        1,  # mono
        SAMPLE_RATE,
        byte_rate,
        2,  # block align
        BITS,
        b"data",
        len(data),
    )
    return header + data


def write_wav(w: Waveform, path) -> None:
    with open(path, "wb") as fh:
        fh.write(wav_bytes(w))


def parse_wav_bytes(blob: bytes) -> Waveform:
    if len(blob) < 12 or blob[:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise UnsupportedWav("not a RIFF/WAVE file")
    pos = 12
    fmt = None
    data = None
    while pos + 8 <= len(blob):
        chunk_id = blob[pos : pos + 4]
        (size,) = struct.unpack("<I", blob[pos + 4 : pos + 8])
        body = blob[pos + 8 : pos + 8 + size]
        if chunk_id == b"fmt ":
            fmt = body
        elif chunk_id == b"data":
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned
    if fmt is None or data is None:
        raise UnsupportedWav("missing fmt or data chunk")
    if len(fmt) < 16:
        raise UnsupportedWav("short fmt chunk")
    audio_format, channels, rate, _byte_rate, _block_align, bits = struct.unpack("<HHIIHH", fmt[:16])
    if audio_format != 1:
        raise UnsupportedWav(f"not PCM (format {audio_format})")
    if channels != 1:
        raise UnsupportedWav(f"expected mono, got {channels} channels")
    if rate != SAMPLE_RATE:
        raise UnsupportedWav(f"expected {SAMPLE_RATE} Hz, got {rate}")
    if bits != BITS:
        raise UnsupportedWav(f"expected {BITS}-bit samples, got {bits}")
    samples = np.frombuffer(data, dtype="<i2").astype(np.int16)
    return Waveform(samples=samples)


def read_wav(path) -> Waveform:
    with open(path, "rb") as fh:
        return parse_wav_bytes(fh.read())
