"""Voice inventory construction: corpus selection, session validation, label
ingestion, unit segmentation, pitch marking, and join features.

Units are phone-sized slices of the source recordings labeled with their
triphone context `L-P+R`, padded with `<sil>` at utterance edges.  Inventories
persist as a directory: voice.manifest, units.tsv, features.f32, and the
source audio under wav/.
"""
from __future__ import annotations

import datetime
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    CorruptInventory,
    FormatMismatch,
    LabelSyntax,
    LugandaTtsError,
    NonContiguous,
    OrphanFiles,
    OutOfRange,
)
from .wavio import SAMPLE_RATE, Waveform, read_wav, write_wav

SIL = "_"
SIL_LABEL = "<sil>"
FEATURE_CEPSTRA = 12  # per-edge vector = cepstra + one energy slot
EDGE_WINDOW = 400  # 25 ms at 16 kHz


@dataclass(frozen=True)
class CorpusSentence:
    id: int
    text: str
    triphones: frozenset[str]


@dataclass
class LabelTrack:
    entries: list[tuple[float, float, str]]  # (start_s, end_s, phone)

    @property
    def duration_s(self) -> float:
        return self.entries[-1][1] if self.entries else 0.0


@dataclass
class Unit:
    id: int
    phone: str
    triphone: str
    source_id: str
    start: int  # sample index into the source file
    end: int
    duration_ms: int
    mean_f0: float = 0.0
    left_f0: float = 0.0
    right_f0: float = 0.0
    pitch_marks: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    left_features: np.ndarray = field(default_factory=lambda: np.zeros(FEATURE_CEPSTRA + 1, dtype=np.float32))
    right_features: np.ndarray = field(default_factory=lambda: np.zeros(FEATURE_CEPSTRA + 1, dtype=np.float32))

    def __eq__(self, other):
        if not isinstance(other, Unit):
            return NotImplemented
        return (
            self.id == other.id
            and self.phone == other.phone
            and self.triphone == other.triphone
            and self.source_id == other.source_id
            and self.start == other.start
            and self.end == other.end
            and self.duration_ms == other.duration_ms
            and self.mean_f0 == other.mean_f0
            and self.left_f0 == other.left_f0
            and self.right_f0 == other.right_f0
            and np.array_equal(self.pitch_marks, other.pitch_marks)
            and np.array_equal(self.left_features, other.left_features)
            and np.array_equal(self.right_features, other.right_features)
        )


class VoiceInventory:
    """Immutable-after-build unit store indexed by triphone and by phone."""

    def __init__(self, metadata: dict[str, str] | None = None):
        self.units: list[Unit] = []
        self.by_triphone: dict[str, list[int]] = {}
        self.by_phone: dict[str, list[int]] = {}
        self.waves: dict[str, np.ndarray] = {}  # source_id -> int16 samples
        self.sample_rate = SAMPLE_RATE
        self.metadata = dict(metadata or {})

    def add_wave(self, source_id: str, samples: np.ndarray) -> None:
        self.waves[source_id] = np.asarray(samples, dtype=np.int16)

    def add_unit(self, unit: Unit) -> None:
        self.units.append(unit)
        self.by_triphone.setdefault(unit.triphone, []).append(unit.id)
        self.by_phone.setdefault(unit.phone, []).append(unit.id)

    def unit(self, unit_id: int) -> Unit:
        return self.units[unit_id]

    def __len__(self) -> int:
        return len(self.units)

    def __eq__(self, other):
        if not isinstance(other, VoiceInventory):
            return NotImplemented
        return (
            self.units == other.units
            and self.by_triphone == other.by_triphone
            and self.by_phone == other.by_phone
            and set(self.waves) == set(other.waves)
            and all(np.array_equal(self.waves[k], other.waves[k]) for k in self.waves)
        )


# ---------------------------------------------------------------------------
# Corpus selection

def select_corpus(
    candidates: list[str],
    max_sentences: int,
    max_words_per_sentence: int,
    triphones_fn,
) -> list[CorpusSentence]:
    """Greedy phonetic-coverage selection; ties go to the earlier candidate."""
    pool: list[CorpusSentence] = []
    for i, text in enumerate(candidates):
        if len(text.split()) > max_words_per_sentence:
            continue
        pool.append(CorpusSentence(id=i, text=text, triphones=frozenset(triphones_fn(text))))
    covered: set[str] = set()
    selected: list[CorpusSentence] = []
    remaining = list(pool)
    while remaining and len(selected) < max_sentences:
        best = None
        best_gain = 0
        for cand in remaining:
            gain = len(cand.triphones - covered)
            if gain > best_gain:
                best = cand
                best_gain = gain
        if best is None:
            break
        selected.append(best)
        covered |= best.triphones
        remaining.remove(best)
    return selected


# ---------------------------------------------------------------------------
# Recording session validation

def validate_session(directory) -> list[tuple[Path, Path]]:
    """Match wav/ and text/ basenames; verify the recording format."""
    directory = Path(directory)
    wav_dir = directory / "wav"
    txt_dir = directory / "text"
    if not wav_dir.is_dir() or not txt_dir.is_dir():
        raise LugandaTtsError(f"{directory} must contain wav/ and text/ subdirectories")
    wavs = {p.stem: p for p in sorted(wav_dir.glob("*.wav"))}
    txts = {p.stem: p for p in sorted(txt_dir.glob("*.txt"))}
    orphan_wavs = sorted(set(wavs) - set(txts))
    orphan_txts = sorted(set(txts) - set(wavs))
    if orphan_wavs or orphan_txts:
        raise OrphanFiles([str(wavs[s]) for s in orphan_wavs], [str(txts[s]) for s in orphan_txts])
    pairs = []
    for stem in sorted(wavs):
        try:
            read_wav(wavs[stem])
        except Exception as exc:
            raise FormatMismatch(f"{wavs[stem]}: {exc}") from exc
        pairs.append((wavs[stem], txts[stem]))
    return pairs


# ---------------------------------------------------------------------------
# Label files

HTK_TICKS_PER_S = 10_000_000


def parse_labels(text: str, time_unit: str = "SECONDS") -> LabelTrack:
    """Parse `start end phone` lines; HTK_100NS timestamps are tick counts."""
    if time_unit not in ("SECONDS", "HTK_100NS"):
        raise ValueError(f"unknown time unit {time_unit!r}")
    entries: list[tuple[float, float, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise LabelSyntax(f"line {line_no}: expected `start end phone`")
        try:
            start = float(fields[0])
            end = float(fields[1])
        except ValueError:
            raise LabelSyntax(f"line {line_no}: non-numeric time") from None
        if time_unit == "HTK_100NS":
            start /= HTK_TICKS_PER_S
            end /= HTK_TICKS_PER_S
        if start < 0 or end <= start:
            raise LabelSyntax(f"line {line_no}: need 0 <= start < end")
        if entries and abs(entries[-1][1] - start) > 1e-6:
            raise NonContiguous(
                f"line {line_no}: starts at {start}, previous entry ended at {entries[-1][1]}"
            )
        entries.append((start, end, fields[2]))
    return LabelTrack(entries=entries)


# ---------------------------------------------------------------------------
# Segmentation

def segment_units(
    wave: Waveform,
    labels: LabelTrack,
    source_id: str = "",
    first_unit_id: int = 0,
) -> list[Unit]:
    """One unit per non-silence label, triphone-labeled from its neighbors."""
    n = len(wave.samples)
    units = []
    entries = labels.entries
    for i, (start_s, end_s, phone) in enumerate(entries):
        if phone == SIL:
            continue
        start = int(round(start_s * SAMPLE_RATE))
        end = int(round(end_s * SAMPLE_RATE))
        if end > n:
            raise OutOfRange(f"label [{start_s}, {end_s}] exceeds wave of {n} samples")
        left = entries[i - 1][2] if i > 0 else SIL
        right = entries[i + 1][2] if i + 1 < len(entries) else SIL
        left = SIL_LABEL if left == SIL else left
        right = SIL_LABEL if right == SIL else right
        units.append(
            Unit(
                id=first_unit_id + len(units),
                phone=phone,
                triphone=f"{left}-{phone}+{right}",
                source_id=source_id,
                start=start,
                end=end,
                duration_ms=int(round((end_s - start_s) * 1000)),
            )
        )
    return units


# ---------------------------------------------------------------------------
# F0 estimation and pitch marking

def estimate_f0(
    wave: Waveform,
    frame_ms: int = 25,
    hop_ms: int = 10,
    fmin: float = 60.0,
    fmax: float = 400.0,
    voicing_threshold: float = 0.3,
) -> list[tuple[float, float | None]]:
    """Autocorrelation F0 track: (frame center time, Hz or None when unvoiced)."""
    sr = wave.sample_rate
    x = wave.samples.astype(np.float64) / 32768.0
    frame = int(sr * frame_ms / 1000)
    hop = int(sr * hop_ms / 1000)
    lag_min = max(1, int(sr / fmax))
    lag_max = min(frame - 1, int(np.ceil(sr / fmin)))
    track: list[tuple[float, float | None]] = []
    for start in range(0, len(x) - frame + 1, hop):
        seg = x[start : start + frame]
        seg = seg - seg.mean()
        t = (start + frame / 2) / sr
        energy = float(np.dot(seg, seg))
        if energy <= 1e-12:
            track.append((t, None))
            continue
        acf = np.correlate(seg, seg, mode="full")[frame - 1 :]
        window = acf[lag_min : lag_max + 1]
        best = int(np.argmax(window)) + lag_min
        ratio = acf[best] / acf[0]
        if ratio <= voicing_threshold:
            track.append((t, None))
            continue
        lag = float(best)
        if 0 < best < len(acf) - 1:
            denom = acf[best - 1] - 2 * acf[best] + acf[best + 1]
            if abs(denom) > 1e-12:
                delta = 0.5 * (acf[best - 1] - acf[best + 1]) / denom
                if abs(delta) <= 0.5:
                    lag = best + delta
        track.append((t, sr / lag))
    return track


def _nearest_rising_zero_crossing(x: np.ndarray, around: int, radius: int) -> int | None:
    n = len(x)

    def is_crossing(i: int) -> bool:
        return 1 <= i < n and x[i - 1] < 0 <= x[i]

    for d in range(radius + 1):
        if is_crossing(around - d):
            return around - d
        if d and is_crossing(around + d):
            return around + d
    return None


def compute_pitch_marks(wave: Waveform, frame_f0: list[tuple[float, float | None]]) -> np.ndarray:
    """Period-spaced marks in voiced regions, snapped to rising zero crossings."""
    sr = wave.sample_rate
    x = wave.samples
    marks: list[int] = []
    if not frame_f0:
        return np.empty(0, dtype=np.int64)
    hop_s = frame_f0[1][0] - frame_f0[0][0] if len(frame_f0) > 1 else 0.01

    # contiguous voiced runs
    runs: list[list[tuple[float, float]]] = []
    current: list[tuple[float, float]] = []
    for t, hz in frame_f0:
        if hz is None:
            if current:
                runs.append(current)
                current = []
        else:
            current.append((t, hz))
    if current:
        runs.append(current)

    # frame centers sit half a window from the signal edge; extend each run by
    # that margin (plus one hop for the unframed tail when the signal length
    # is not hop-aligned) so marks cover the whole voiced span
    half_window_s = frame_f0[0][0]
    for run in runs:
        t0 = max(0.0, run[0][0] - half_window_s)
        t1 = run[-1][0] + half_window_s + hop_s
        t = t0
        while t < t1:
            # local F0 from the nearest frame in this run (frames are regular)
            idx = min(len(run) - 1, max(0, int(round((t - run[0][0]) / hop_s))))
            hz = run[idx][1]
            period = sr / hz
            provisional = int(round(t * sr))
            snapped = _nearest_rising_zero_crossing(x, provisional, int(period / 2))
            if snapped is not None and (not marks or snapped > marks[-1]):
                marks.append(snapped)
            t += 1.0 / hz
    return np.asarray(marks, dtype=np.int64)


# ---------------------------------------------------------------------------
# Join features

def compute_edge_features(wave: Waveform, unit: Unit, k: int = FEATURE_CEPSTRA) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge real cepstrum (k coefficients) plus a log-energy slot.

    Windows are centered on the edge sample, so contiguous units from one
    recording share the window at their common boundary.  Units shorter than
    one window use their whole span for both edges.
    """
    x = wave.samples.astype(np.float64) / 32768.0
    if unit.end - unit.start < EDGE_WINDOW:
        left = right = _edge_vector(x[unit.start : unit.end], k)
        return left, right
    left = _edge_vector(_window_at(x, unit.start), k)
    right = _edge_vector(_window_at(x, unit.end), k)
    return left, right


def _window_at(x: np.ndarray, center: int) -> np.ndarray:
    half = EDGE_WINDOW // 2
    lo = max(0, center - half)
    hi = min(len(x), center + half)
    return x[lo:hi]


def _edge_vector(seg: np.ndarray, k: int) -> np.ndarray:
    if len(seg) == 0:
        return np.zeros(k + 1, dtype=np.float32)
    tapered = seg * np.hamming(len(seg))
    spectrum = np.abs(np.fft.rfft(tapered))
    log_mag = np.log(np.maximum(spectrum, 1e-10))
    cepstrum = np.fft.irfft(log_mag, n=2 * (len(log_mag) - 1))[:k]
    if len(cepstrum) < k:
        cepstrum = np.pad(cepstrum, (0, k - len(cepstrum)))
    energy = 0.5 * np.log(float(np.dot(seg, seg)) + 1e-12)
    return np.concatenate([cepstrum, [energy]]).astype(np.float32)


# ---------------------------------------------------------------------------
# Inventory building

def _track_value_near(track: list[tuple[float, float | None]], t: float,
                      lo: float, hi: float) -> float | None:
    best = None
    best_d = None
    for time_s, hz in track:
        if hz is None or not (lo - 1e-9 <= time_s <= hi + 1e-9):
            continue
        d = abs(time_s - t)
        if best_d is None or d < best_d:
            best, best_d = hz, d
    return best


def annotate_units(wave: Waveform, units: list[Unit]) -> None:
    """Fill pitch marks, F0 statistics, and edge features for segmented units."""
    track = estimate_f0(wave)
    marks = compute_pitch_marks(wave, track)
    sr = wave.sample_rate
    for unit in units:
        start_s, end_s = unit.start / sr, unit.end / sr
        inside = [hz for t, hz in track if hz is not None and start_s <= t < end_s]
        unit.mean_f0 = float(np.mean(inside)) if inside else 0.0
        left = _track_value_near(track, start_s, start_s, end_s)
        right = _track_value_near(track, end_s, start_s, end_s)
        unit.left_f0 = float(left) if left is not None else unit.mean_f0
        unit.right_f0 = float(right) if right is not None else unit.mean_f0
        unit.pitch_marks = marks[(marks >= unit.start) & (marks < unit.end)]
        unit.left_features, unit.right_features = compute_edge_features(wave, unit)


def build_inventory(session_dir, metadata: dict[str, str] | None = None) -> VoiceInventory:
    """Build a voice from a session directory holding wav/, text/, and lab/."""
    session_dir = Path(session_dir)
    pairs = validate_session(session_dir)
    lab_dir = session_dir / "lab"
    inv = VoiceInventory(metadata=metadata)
    inv.metadata.setdefault("created", datetime.date.today().isoformat())
    next_id = 0
    for wav_path, _txt_path in pairs:
        source_id = wav_path.stem
        lab_path = lab_dir / f"{source_id}.lab"
        if not lab_path.exists():
            raise LugandaTtsError(f"missing label file {lab_path}")
        wave = read_wav(wav_path)
        labels = parse_labels(lab_path.read_text(encoding="utf-8"))
        units = segment_units(wave, labels, source_id=source_id, first_unit_id=next_id)
        annotate_units(wave, units)
        inv.add_wave(source_id, wave.samples)
        for unit in units:
            inv.add_unit(unit)
        next_id += len(units)
    return inv


# ---------------------------------------------------------------------------
# Persistence

_MANIFEST_SCHEMA = "1"


def save_inventory(inv: VoiceInventory, directory) -> None:
    directory = Path(directory)
    (directory / "wav").mkdir(parents=True, exist_ok=True)

    rows = []
    feature_blocks = []
    for u in inv.units:
        marks = ",".join(str(int(m)) for m in u.pitch_marks)
        rows.append(
            "\t".join(
                [
                    str(u.id), u.phone, u.triphone, u.source_id,
                    str(u.start), str(u.end), str(u.duration_ms),
                    repr(u.mean_f0), repr(u.left_f0), repr(u.right_f0), marks,
                ]
            )
        )
        feature_blocks.append(u.left_features.astype("<f4"))
        feature_blocks.append(u.right_features.astype("<f4"))
    units_text = "\n".join(rows) + ("\n" if rows else "")
    units_bytes = units_text.encode("utf-8")
    features_bytes = (
        np.concatenate(feature_blocks).tobytes() if feature_blocks else b""
    )

    (directory / "units.tsv").write_bytes(units_bytes)
    (directory / "features.f32").write_bytes(features_bytes)
    for source_id, samples in sorted(inv.waves.items()):
        write_wav(Waveform(samples=samples), directory / "wav" / f"{source_id}.wav")

    manifest = {
        "schema": _MANIFEST_SCHEMA,
        "sample_rate": str(inv.sample_rate),
        "n_units": str(len(inv.units)),
        "feature_dim": str(FEATURE_CEPSTRA + 1),
        "checksum_units": str(zlib.crc32(units_bytes)),
        "checksum_features": str(zlib.crc32(features_bytes)),
        "sources": ",".join(sorted(inv.waves)),
    }
    manifest.update({f"meta_{k}": v for k, v in sorted(inv.metadata.items())})
    lines = [f"{k}={v}" for k, v in manifest.items()]
    (directory / "voice.manifest").write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_inventory(directory) -> VoiceInventory:
    directory = Path(directory)
    manifest_path = directory / "voice.manifest"
    if not manifest_path.exists():
        raise CorruptInventory(f"missing {manifest_path}")
    manifest: dict[str, str] = {}
    for line in manifest_path.read_text(encoding="utf-8").splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            manifest[key] = value
    if manifest.get("schema") != _MANIFEST_SCHEMA:
        raise CorruptInventory(f"unsupported schema {manifest.get('schema')!r}")

    try:
        units_bytes = (directory / "units.tsv").read_bytes()
        features_bytes = (directory / "features.f32").read_bytes()
    except OSError as exc:
        raise CorruptInventory(str(exc)) from exc
    if str(zlib.crc32(units_bytes)) != manifest.get("checksum_units"):
        raise CorruptInventory("units.tsv checksum mismatch")
    if str(zlib.crc32(features_bytes)) != manifest.get("checksum_features"):
        raise CorruptInventory("features.f32 checksum mismatch")

    n_units = int(manifest.get("n_units", "0"))
    dim = int(manifest.get("feature_dim", str(FEATURE_CEPSTRA + 1)))
    features = np.frombuffer(features_bytes, dtype="<f4")
    if len(features) != n_units * 2 * dim:
        raise CorruptInventory("feature block has wrong size")

    inv = VoiceInventory(
        metadata={k[5:]: v for k, v in manifest.items() if k.startswith("meta_")}
    )
    rows = [r for r in units_bytes.decode("utf-8").splitlines() if r]
    if len(rows) != n_units:
        raise CorruptInventory(f"expected {n_units} units, found {len(rows)}")
    for i, row in enumerate(rows):
        cols = row.split("\t")
        if len(cols) != 11:
            raise CorruptInventory(f"units.tsv row {i + 1}: expected 11 columns")
        marks = (
            np.asarray([int(v) for v in cols[10].split(",")], dtype=np.int64)
            if cols[10]
            else np.empty(0, dtype=np.int64)
        )
        unit = Unit(
            id=int(cols[0]), phone=cols[1], triphone=cols[2], source_id=cols[3],
            start=int(cols[4]), end=int(cols[5]), duration_ms=int(cols[6]),
            mean_f0=float(cols[7]), left_f0=float(cols[8]), right_f0=float(cols[9]),
            pitch_marks=marks,
            left_features=features[(2 * i) * dim : (2 * i + 1) * dim].copy(),
            right_features=features[(2 * i + 1) * dim : (2 * i + 2) * dim].copy(),
        )
        inv.add_unit(unit)
    for source_id in manifest.get("sources", "").split(","):
        if source_id:
            inv.add_wave(source_id, read_wav(directory / "wav" / f"{source_id}.wav").samples)
    return inv
