"""Unit selection and waveform generation.

Selection is a Viterbi search over per-target candidate units: target costs
penalize triphone mismatch and duration/F0 deviation, join costs measure
edge-feature distance, and units that were adjacent in a source recording
join for free.  Costs accumulate left to right in double precision; ties
break toward the lower unit id.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .acoustics import SILENCE, SegmentTarget, emit_pho
from .errors import MissingPhone, PipelineStageError
from .frontend import InputKind, UtteranceDoc
from .pipeline import Pipeline, UnitTarget
from .voicedb import Unit, VoiceInventory
from .wavio import SAMPLE_RATE, Waveform, read_wav, wav_bytes, write_wav  # noqa: F401

DEFAULT_CROSSFADE_MS = 5


@dataclass(frozen=True)
class CostWeights:
    w_triphone_mismatch: float = 10.0
    w_phone_fallback_penalty: float = 20.0
    w_duration: float = 5.0
    w_f0: float = 0.05
    w_join_spectral: float = 1.0
    w_join_f0: float = 0.02
    contiguity_bonus: float = 0.0  # source-adjacent joins always cost exactly 0

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0")

    def scaled(self, c: float) -> "CostWeights":
        return CostWeights(
            self.w_triphone_mismatch * c,
            self.w_phone_fallback_penalty * c,
            self.w_duration * c,
            self.w_f0 * c,
            self.w_join_spectral * c,
            self.w_join_f0 * c,
            self.contiguity_bonus * c,
        )


@dataclass
class UnitPath:
    unit_ids: list[int]
    total_cost: float
    steps: list[tuple[float, float]]  # per step: (target_cost, join_cost)


def target_cost(unit: Unit, target: UnitTarget, w: CostWeights, fallback: bool) -> float:
    cost = 0.0
    if fallback:
        cost += w.w_phone_fallback_penalty
    if unit.triphone != target.triphone:
        cost += w.w_triphone_mismatch
    cost += w.w_duration * abs(math.log(unit.duration_ms / target.duration_ms))
    if target.mean_f0 is not None:
        cost += w.w_f0 * abs(unit.mean_f0 - target.mean_f0)
    return cost


def source_adjacent(a: Unit, b: Unit) -> bool:
    return a.source_id == b.source_id and a.end == b.start


def join_cost(a: Unit, b: Unit, w: CostWeights) -> float:
    if source_adjacent(a, b):
        return 0.0
    spectral = float(
        np.linalg.norm(a.right_features.astype(np.float64) - b.left_features.astype(np.float64))
    )
    return w.w_join_spectral * spectral + w.w_join_f0 * abs(a.right_f0 - b.left_f0)


def candidates_for(target: UnitTarget, inv: VoiceInventory) -> tuple[list[Unit], bool]:
    ids = inv.by_triphone.get(target.triphone)
    if ids:
        return [inv.unit(i) for i in ids], False
    ids = inv.by_phone.get(target.phone)
    if not ids:
        raise MissingPhone(f"no unit for phone {target.phone!r}")
    return [inv.unit(i) for i in ids], True


def select_units(targets: list[UnitTarget], inv: VoiceInventory, w: CostWeights | None = None) -> UnitPath:
    """Minimum-cost unit sequence via Viterbi over per-target candidates."""
    w = w or CostWeights()
    if not targets:
        return UnitPath(unit_ids=[], total_cost=0.0, steps=[])

    layers: list[tuple[list[Unit], bool]] = [candidates_for(t, inv) for t in targets]

    first_units, first_fb = layers[0]
    costs = [target_cost(u, targets[0], w, first_fb) for u in first_units]
    tcosts = [[c for c in costs]]
    back: list[list[int | None]] = [[None] * len(first_units)]
    jcosts: list[list[float]] = [[0.0] * len(first_units)]

    for ti in range(1, len(targets)):
        units, fb = layers[ti]
        prev_units, _ = layers[ti - 1]
        new_costs = []
        new_back = []
        new_join = []
        new_tc = []
        for u in units:
            tc = target_cost(u, targets[ti], w, fb)
            best_cost = None
            best_prev = None
            best_join = 0.0
            for pi, pu in enumerate(prev_units):
                jc = join_cost(pu, u, w)
                cand = (costs[pi] + jc) + tc
                if (
                    best_cost is None
                    or cand < best_cost
                    or (cand == best_cost and pu.id < prev_units[best_prev].id)
                ):
                    best_cost = cand
                    best_prev = pi
                    best_join = jc
            new_costs.append(best_cost)
            new_back.append(best_prev)
            new_join.append(best_join)
            new_tc.append(tc)
        costs = new_costs
        back.append(new_back)
        jcosts.append(new_join)
        tcosts.append(new_tc)

    final_units, _ = layers[-1]
    best_i = 0
    for i in range(1, len(final_units)):
        if costs[i] < costs[best_i] or (
            costs[i] == costs[best_i] and final_units[i].id < final_units[best_i].id
        ):
            best_i = i

    indices = [best_i]
    for ti in range(len(targets) - 1, 0, -1):
        indices.append(back[ti][indices[-1]])
    indices.reverse()

    unit_ids = [layers[ti][0][idx].id for ti, idx in enumerate(indices)]
    steps = [(tcosts[ti][idx], jcosts[ti][idx]) for ti, idx in enumerate(indices)]
    return UnitPath(unit_ids=unit_ids, total_cost=costs[best_i], steps=steps)


# ---------------------------------------------------------------------------
# Rendering

@dataclass
class RenderOptions:
    match_durations: bool = False
    crossfade_ms: int = DEFAULT_CROSSFADE_MS


def _scale_with_marks(slice_: np.ndarray, marks_rel: np.ndarray, target_len: int) -> np.ndarray:
    """Pitch-synchronous period repetition/deletion toward target_len."""
    head_end = int(marks_rel[0])
    tail_start = int(marks_rel[-1])
    periods = [slice_[int(a) : int(b)] for a, b in zip(marks_rel[:-1], marks_rel[1:])]
    head = slice_[:head_end]
    tail = slice_[tail_start:]
    interior_natural = tail_start - head_end
    interior_target = target_len - len(head) - len(tail)
    if interior_natural <= 0 or interior_target <= 0 or not periods:
        return _scale_resample(slice_, target_len)
    n_out = max(1, int(round(interior_target * len(periods) / interior_natural)))
    chosen = [periods[min(len(periods) - 1, i * len(periods) // n_out)] for i in range(n_out)]
    return np.concatenate([head, *chosen, tail])


def _scale_resample(slice_: np.ndarray, target_len: int) -> np.ndarray:
    if len(slice_) == 0 or target_len <= 0:
        return np.zeros(max(0, target_len), dtype=np.int16)
    idx = np.minimum((np.arange(target_len) * len(slice_)) // max(1, target_len), len(slice_) - 1)
    return slice_[idx]


def render(
    path: UnitPath,
    inv: VoiceInventory,
    targets: list[SegmentTarget],
    opts: RenderOptions | None = None,
) -> Waveform:
    """Concatenate unit slices, crossfading non-adjacent joins.

    `targets` is the full segment list including silences; the path covers
    the non-silence segments in order.  Source-adjacent units butt-splice;
    other unit-to-unit joins overlap by the crossfade length (clipped to the
    shorter slice); silences butt-splice.
    """
    opts = opts or RenderOptions()
    cf = opts.crossfade_ms * SAMPLE_RATE // 1000
    unit_iter = iter(path.unit_ids)
    prev_unit: Unit | None = None

    out = np.zeros(0, dtype=np.float64)
    for seg in targets:
        if seg.phone == SILENCE:
            out = np.concatenate([out, np.zeros(seg.duration_ms * SAMPLE_RATE // 1000)])
            prev_unit = None
            continue
        unit = inv.unit(next(unit_iter))
        slice_ = inv.waves[unit.source_id][unit.start : unit.end].astype(np.float64)
        if opts.match_durations:
            target_len = seg.duration_ms * SAMPLE_RATE // 1000
            if abs(target_len - len(slice_)) > 0.02 * len(slice_):
                marks_rel = unit.pitch_marks - unit.start
                if len(marks_rel) >= 2:
                    slice_ = _scale_with_marks(slice_, marks_rel, target_len).astype(np.float64)
                else:
                    slice_ = _scale_resample(slice_.astype(np.int16), target_len).astype(np.float64)
        if prev_unit is None:
            out = np.concatenate([out, slice_])
        elif source_adjacent(prev_unit, unit):
            out = np.concatenate([out, slice_])
        else:
            overlap = min(cf, len(out), len(slice_))
            if overlap > 0:
                ramp = np.linspace(0.0, 1.0, overlap, endpoint=False)
                mixed = out[-overlap:] * (1.0 - ramp) + slice_[:overlap] * ramp
                out = np.concatenate([out[:-overlap], mixed, slice_[overlap:]])
            else:
                out = np.concatenate([out, slice_])
        prev_unit = unit
    samples = np.clip(np.round(out), -32768, 32767).astype(np.int16)
    return Waveform(samples=samples)


def expected_render_length(
    path: UnitPath, inv: VoiceInventory, targets: list[SegmentTarget], opts: RenderOptions | None = None
) -> int:
    """Sample count render() should produce (natural durations)."""
    opts = opts or RenderOptions()
    cf = opts.crossfade_ms * SAMPLE_RATE // 1000
    total = 0
    unit_iter = iter(path.unit_ids)
    prev_unit: Unit | None = None
    prev_len = 0
    for seg in targets:
        if seg.phone == SILENCE:
            total += seg.duration_ms * SAMPLE_RATE // 1000
            prev_unit = None
            continue
        unit = inv.unit(next(unit_iter))
        length = unit.end - unit.start
        total += length
        if prev_unit is not None and not source_adjacent(prev_unit, unit):
            total -= min(cf, prev_len, length)
        prev_unit = unit
        prev_len = length
    return total


# ---------------------------------------------------------------------------
# Full text-to-audio composition

def synthesize_text(
    text: str,
    voice: VoiceInventory,
    pipeline: Pipeline | None = None,
    weights: CostWeights | None = None,
    opts: RenderOptions | None = None,
    input_kind: InputKind = InputKind.PLAIN,
) -> tuple[Waveform, str, UtteranceDoc]:
    """Run the whole pipeline and return (audio, .pho text, annotated doc)."""
    pipeline = pipeline or Pipeline()
    doc = pipeline.process(text, input_kind, upto="f0")
    segments = pipeline.utterance_segments(doc)
    pho_text = emit_pho(segments)
    targets = pipeline.utterance_targets(doc)
    try:
        path = select_units(targets, voice, weights)
    except PipelineStageError:
        raise
    except Exception as exc:
        raise PipelineStageError("select", exc) from exc
    try:
        wave = render(path, voice, segments, opts)
    except Exception as exc:
        raise PipelineStageError("render", exc) from exc
    doc.unit_path = path  # stage inspection
    return wave, pho_text, doc
