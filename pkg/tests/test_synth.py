"""Unit-selection, rendering, and WAV I/O tests."""
import itertools
import random
import struct

import numpy as np
import pytest

from luganda_tts import (
    CostWeights,
    RenderOptions,
    UnitPath,
    Waveform,
    read_wav,
    render,
    select_units,
    synthesize_text,
    write_wav,
)
from luganda_tts.acoustics import SegmentTarget
from luganda_tts.errors import MissingPhone, PipelineStageError, UnsupportedWav
from luganda_tts.pipeline import UnitTarget
from luganda_tts.synth import (
    candidates_for,
    expected_render_length,
    join_cost,
    target_cost,
    wav_bytes,
)
from luganda_tts.voicedb import Unit, VoiceInventory


# ---------------------------------------------------------------------------
# instance generator and exhaustive oracle

def _random_instance(rng: random.Random, max_targets=5, max_per_phone=3):
    phones = ["a", "b", "k"]
    labels = ["<sil>-a+b", "a-b+k", "b-k+<sil>", "k-a+b", "<sil>-k+a"]
    inv = VoiceInventory()
    uid = 0
    cursor = 0
    for phone in phones:
        for _ in range(rng.randint(1, max_per_phone)):
            length = rng.randrange(400, 3200, 16)
            inv.add_unit(
                Unit(
                    id=uid,
                    phone=phone,
                    triphone=rng.choice([f"x-{phone}+y"] + labels),
                    source_id=rng.choice(["s0", "s1"]),
                    start=cursor,
                    end=cursor + length,
                    duration_ms=max(1, length // 16),
                    mean_f0=rng.uniform(90, 250),
                    left_f0=rng.uniform(90, 250),
                    right_f0=rng.uniform(90, 250),
                    left_features=np.asarray(
                        [rng.uniform(-1, 1) for _ in range(13)], dtype=np.float32
                    ),
                    right_features=np.asarray(
                        [rng.uniform(-1, 1) for _ in range(13)], dtype=np.float32
                    ),
                )
            )
            uid += 1
            cursor += length
    targets = []
    for i in range(rng.randint(1, max_targets)):
        phone = rng.choice(phones)
        targets.append(
            UnitTarget(
                phone=phone,
                triphone=rng.choice([f"x-{phone}+y", f"q-{phone}+q"]),
                duration_ms=rng.randrange(40, 200),
                mean_f0=rng.uniform(100, 220) if rng.random() < 0.8 else None,
                segment_index=i,
            )
        )
    return inv, targets


def _exhaustive_minimum(targets, inv, w):
    layers = [candidates_for(t, inv) for t in targets]
    best = None
    for combo in itertools.product(*[units for units, _fb in layers]):
        total = target_cost(combo[0], targets[0], w, layers[0][1])
        for i in range(1, len(combo)):
            total = (total + join_cost(combo[i - 1], combo[i], w)) + target_cost(
                combo[i], targets[i], w, layers[i][1]
            )
        if best is None or total < best:
            best = total
    return best


def test_forced_path_cost_is_target_plus_joins():
    rng = random.Random(1)
    inv, _ = _random_instance(rng, max_per_phone=1)
    w = CostWeights()
    targets = [
        UnitTarget(phone=u.phone, triphone=u.triphone, duration_ms=u.duration_ms,
                   mean_f0=None, segment_index=i)
        for i, u in enumerate(inv.units)
    ]
    path = select_units(targets, inv, w)
    assert path.unit_ids == [u.id for u in inv.units]
    manual = target_cost(inv.units[0], targets[0], w, False)
    for i in range(1, len(inv.units)):
        manual = (manual + join_cost(inv.units[i - 1], inv.units[i], w)) + target_cost(
            inv.units[i], targets[i], w, False
        )
    assert path.total_cost == manual


def test_viterbi_matches_exhaustive_oracle_200_instances():
    rng = random.Random(20260800)
    w = CostWeights()
    for _ in range(200):
        inv, targets = _random_instance(rng)
        path = select_units(targets, inv, w)
        assert path.total_cost == _exhaustive_minimum(targets, inv, w)
        assert len(path.unit_ids) == len(targets)


def test_argmin_invariant_under_weight_scaling():
    rng = random.Random(5150)
    base = CostWeights()
    for _ in range(60):
        inv, targets = _random_instance(rng)
        reference = select_units(targets, inv, base).unit_ids
        for c in (0.5, 2.0, 10.0):
            assert select_units(targets, inv, base.scaled(c)).unit_ids == reference


def test_source_adjacent_join_is_exactly_zero():
    rng = random.Random(7)
    inv, _ = _random_instance(rng)
    w = CostWeights()
    adjacent = None
    for a in inv.units:
        for b in inv.units:
            if a.source_id == b.source_id and a.end == b.start:
                adjacent = (a, b)
    assert adjacent is not None
    assert join_cost(adjacent[0], adjacent[1], w) == 0.0


def test_missing_phone_raises():
    rng = random.Random(9)
    inv, _ = _random_instance(rng)
    target = UnitTarget(phone="z", triphone="a-z+a", duration_ms=50, mean_f0=None, segment_index=0)
    with pytest.raises(MissingPhone):
        select_units([target], inv, CostWeights())


def test_empty_targets_empty_path():
    path = select_units([], VoiceInventory(), CostWeights())
    assert path.unit_ids == [] and path.total_cost == 0.0


# ---------------------------------------------------------------------------
# rendering

def _render_inventory():
    inv = VoiceInventory()
    rng = np.random.default_rng(42)
    samples = np.round(rng.uniform(-0.3, 0.3, 16000) * 32767).astype(np.int16)
    inv.add_wave("s0", samples)
    inv.add_unit(Unit(id=0, phone="a", triphone="<sil>-a+b", source_id="s0",
                      start=0, end=1600, duration_ms=100))
    inv.add_unit(Unit(id=1, phone="b", triphone="a-b+<sil>", source_id="s0",
                      start=1600, end=3200, duration_ms=100))
    inv.add_unit(Unit(id=2, phone="b", triphone="x-b+y", source_id="s0",
                      start=8000, end=9600, duration_ms=100))
    return inv


def test_render_single_unit_verbatim():
    inv = _render_inventory()
    path = UnitPath(unit_ids=[0], total_cost=0.0, steps=[(0.0, 0.0)])
    targets = [SegmentTarget(phone="a", duration_ms=100)]
    wave = render(path, inv, targets)
    assert np.array_equal(wave.samples, inv.waves["s0"][0:1600])


def test_render_adjacent_units_butt_splice():
    inv = _render_inventory()
    path = UnitPath(unit_ids=[0, 1], total_cost=0.0, steps=[])
    targets = [SegmentTarget(phone="a", duration_ms=100), SegmentTarget(phone="b", duration_ms=100)]
    wave = render(path, inv, targets)
    assert len(wave.samples) == 3200
    assert np.array_equal(wave.samples, inv.waves["s0"][0:3200])


def test_render_crossfade_length():
    inv = _render_inventory()
    path = UnitPath(unit_ids=[0, 2], total_cost=0.0, steps=[])
    targets = [SegmentTarget(phone="a", duration_ms=100), SegmentTarget(phone="b", duration_ms=100)]
    wave = render(path, inv, targets, RenderOptions(crossfade_ms=5))
    assert len(wave.samples) == 1600 + 1600 - 80
    assert len(wave.samples) == expected_render_length(path, inv, targets)


def test_render_inserts_silence_segments():
    inv = _render_inventory()
    path = UnitPath(unit_ids=[0], total_cost=0.0, steps=[])
    targets = [
        SegmentTarget(phone="a", duration_ms=100),
        SegmentTarget(phone="_", duration_ms=200),
    ]
    wave = render(path, inv, targets)
    assert len(wave.samples) == 1600 + 3200
    assert np.all(wave.samples[1600:] == 0)


def test_render_match_durations_doubles_length(small_voice):
    unit = small_voice.units[1]  # a vowel with pitch marks
    assert len(unit.pitch_marks) >= 2
    path = UnitPath(unit_ids=[unit.id], total_cost=0.0, steps=[])
    natural = unit.end - unit.start
    targets = [SegmentTarget(phone=unit.phone, duration_ms=2 * natural // 16)]
    wave = render(path, small_voice, targets, RenderOptions(match_durations=True))
    assert abs(len(wave.samples) - 2 * natural) <= 0.05 * 2 * natural


# ---------------------------------------------------------------------------
# WAV I/O

GOLDEN_HEADER_1S = (
    b"RIFF" + struct.pack("<I", 36 + 32000) + b"WAVE"
    + b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, 16000, 32000, 2, 16)
    + b"data" + struct.pack("<I", 32000)
)


def test_wav_golden_header_one_second():
    wave = Waveform(samples=np.zeros(16000, dtype=np.int16))
    blob = wav_bytes(wave)
    assert blob[:44] == GOLDEN_HEADER_1S
    assert len(blob) == 44 + 32000


def test_wav_empty_file_is_header_only(tmp_path):
    path = tmp_path / "empty.wav"
    write_wav(Waveform(samples=np.zeros(0, dtype=np.int16)), path)
    assert path.stat().st_size == 44
    blob = path.read_bytes()
    assert struct.unpack("<I", blob[40:44])[0] == 0


def test_wav_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(77)
    samples = rng.integers(-32768, 32767, 16000, dtype=np.int16)
    path = tmp_path / "t.wav"
    write_wav(Waveform(samples=samples), path)
    loaded = read_wav(path)
    assert np.array_equal(loaded.samples, samples)
    write_wav(loaded, tmp_path / "t2.wav")
    assert (tmp_path / "t.wav").read_bytes() == (tmp_path / "t2.wav").read_bytes()


def test_wav_rejects_stereo(tmp_path):
    data = np.zeros(400, dtype=np.int16).tobytes()
    blob = (
        b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
        + b"fmt " + struct.pack("<IHHIIHH", 16, 1, 2, 16000, 64000, 4, 16)
        + b"data" + struct.pack("<I", len(data)) + data
    )
    path = tmp_path / "stereo.wav"
    path.write_bytes(blob)
    with pytest.raises(UnsupportedWav):
        read_wav(path)


def test_wav_rejects_nonsense(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(b"not a wav")
    with pytest.raises(UnsupportedWav):
        read_wav(path)


# ---------------------------------------------------------------------------
# synthesize_text

def test_synthesize_butiko_six_units(small_voice, pipeline):
    wave, pho, doc = synthesize_text("butiko", small_voice, pipeline=pipeline)
    assert len(doc.unit_path.unit_ids) == 6
    non_silence = [ln for ln in pho.splitlines() if not ln.startswith("_")]
    assert len(non_silence) == 6
    assert len(wave.samples) > 0


def test_synthesize_empty_text(small_voice, pipeline):
    wave, pho, doc = synthesize_text("", small_voice, pipeline=pipeline)
    assert len(wave.samples) == 0
    assert pho == ""
    assert doc.sentences == []


def test_synthesize_missing_phone_tagged_select(small_voice, pipeline):
    with pytest.raises(PipelineStageError) as info:
        synthesize_text("zzizi", small_voice, pipeline=pipeline)
    assert info.value.stage == "select"
