"""Listening-test administration and scoring: Modified Rhyme Test
(intelligibility) and Mean Opinion Score (naturalness).

Scoring arithmetic: MRT reports percent correct to one decimal; MOS reports
the rating distribution to one decimal (round half up per bucket) and the
exact weighted mean.  Blank or invalid MRT answers count as incorrect.
"""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .data import read_tsv, resolve_data_dir
from .errors import EmptyGrid, EmptyResponses, LengthMismatch, LugandaTtsError

MOS_LABELS = {1: "Bad", 2: "Poor", 3: "Fair", 4: "Good", 5: "Excellent"}
MOS_EFFORT = {
    1: "No meaning understood",
    2: "Considerable effort required",
    3: "Moderate effort required",
    4: "Attention necessary",
    5: "No effort required",
}


@dataclass(frozen=True)
class MrtGrid:
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != 6:
                raise LugandaTtsError(f"MRT row {i} has {len(row)} words, expected 6")
            if len(set(row)) != 6:
                raise LugandaTtsError(f"MRT row {i} repeats a word")

    @classmethod
    def load(cls, data_dir=None, path=None) -> "MrtGrid":
        if path is None:
            path = resolve_data_dir(data_dir) / "mrt_grid.tsv"
        rows = tuple(tuple(row) for row in read_tsv(Path(path)))
        return cls(rows=rows)


@dataclass(frozen=True)
class MrtItem:
    row_index: int
    correct_word: str
    stimulus: str  # audio file name for the synthesized word


@dataclass(frozen=True)
class MrtSession:
    items: tuple[MrtItem, ...]
    seed: int
    grid: MrtGrid

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "rows": [list(r) for r in self.grid.rows],
                "items": [
                    {"row": it.row_index, "correct": it.correct_word, "stimulus": it.stimulus}
                    for it in self.items
                ],
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "MrtSession":
        blob = json.loads(text)
        grid = MrtGrid(rows=tuple(tuple(r) for r in blob["rows"]))
        items = tuple(
            MrtItem(row_index=it["row"], correct_word=it["correct"], stimulus=it["stimulus"])
            for it in blob["items"]
        )
        return cls(items=items, seed=blob["seed"], grid=grid)


@dataclass
class MrtResponseSheet:
    listener_id: str
    answers: list[str]  # chosen words, "" = blank


@dataclass(frozen=True)
class MosResponse:
    listener_id: str
    sentence_id: str
    rating: int

    def __post_init__(self):
        if self.rating not in (1, 2, 3, 4, 5):
            raise LugandaTtsError(f"MOS rating must be 1..5, got {self.rating}")


@dataclass
class EvalReport:
    mrt_percent_correct: float | None = None
    mrt_confusions: dict[int, dict[str, int]] = field(default_factory=dict)
    mrt_n_answers: int = 0
    mos_distribution: dict[int, float] = field(default_factory=dict)
    mos_mean: float | None = None
    mos_n_responses: int = 0
    n_listeners: int = 0


def _round1_half_up(x: float) -> float:
    return int(x * 10 + 0.5) / 10 if x >= 0 else -(int(-x * 10 + 0.5) / 10)


# ---------------------------------------------------------------------------
# MRT

def make_mrt_session(grid: MrtGrid, n_items: int, seed: int) -> MrtSession:
    """Sample stimulus items uniformly and reproducibly."""
    if not grid.rows:
        raise EmptyGrid("MRT grid has no rows")
    if n_items < 1:
        raise LugandaTtsError("n_items must be >= 1")
    rng = random.Random(seed)
    items = []
    for i in range(n_items):
        row_index = rng.randrange(len(grid.rows))
        word = grid.rows[row_index][rng.randrange(6)]
        items.append(
            MrtItem(row_index=row_index, correct_word=word, stimulus=f"mrt_{i:03d}_{word}.wav")
        )
    return MrtSession(items=tuple(items), seed=seed, grid=grid)


def score_mrt(session: MrtSession, sheets: list[MrtResponseSheet]) -> EvalReport:
    """Percent correct over all listeners plus per-row confusion counts."""
    for sheet in sheets:
        if len(sheet.answers) != len(session.items):
            raise LengthMismatch(
                f"sheet {sheet.listener_id!r} has {len(sheet.answers)} answers, "
                f"session has {len(session.items)} items"
            )
    total = 0
    correct = 0
    confusions: dict[int, dict[str, int]] = {}
    for sheet in sheets:
        for item, answer in zip(session.items, sheet.answers):
            total += 1
            if answer == item.correct_word:
                correct += 1
            row = confusions.setdefault(item.row_index, {})
            row[answer] = row.get(answer, 0) + 1
    report = EvalReport(
        mrt_percent_correct=_round1_half_up(100.0 * correct / total) if total else 0.0,
        mrt_confusions=confusions,
        mrt_n_answers=total,
        n_listeners=len(sheets),
    )
    return report


# ---------------------------------------------------------------------------
# MOS

def score_mos(responses: list[MosResponse]) -> EvalReport:
    """Rating distribution (percent per rating) and the exact weighted mean."""
    if not responses:
        raise EmptyResponses("no MOS responses")
    counts = {r: 0 for r in range(1, 6)}
    for resp in responses:
        counts[resp.rating] += 1
    n = len(responses)
    distribution = {r: _round1_half_up(100.0 * counts[r] / n) for r in range(1, 6)}
    mean = sum(r * counts[r] for r in range(1, 6)) / n
    return EvalReport(
        mos_distribution=distribution,
        mos_mean=mean,
        mos_n_responses=n,
        n_listeners=len({resp.listener_id for resp in responses}),
    )


def merge_reports(mrt: EvalReport | None, mos: EvalReport | None) -> EvalReport:
    report = EvalReport()
    if mrt is not None:
        report.mrt_percent_correct = mrt.mrt_percent_correct
        report.mrt_confusions = mrt.mrt_confusions
        report.mrt_n_answers = mrt.mrt_n_answers
        report.n_listeners = max(report.n_listeners, mrt.n_listeners)
    if mos is not None:
        report.mos_distribution = mos.mos_distribution
        report.mos_mean = mos.mos_mean
        report.mos_n_responses = mos.mos_n_responses
        report.n_listeners = max(report.n_listeners, mos.n_listeners)
    return report


# ---------------------------------------------------------------------------
# Rendering and CSV I/O

def render_report(report: EvalReport, format: str = "TEXT") -> str:
    """Deterministic serialization; JSON schema documented in the README."""
    if format == "JSON":
        blob = {
            "mrt": None,
            "mos": None,
            "n_listeners": report.n_listeners,
        }
        if report.mrt_percent_correct is not None:
            blob["mrt"] = {
                "percent_correct": report.mrt_percent_correct,
                "n_answers": report.mrt_n_answers,
                "confusions": {
                    str(row): dict(sorted(words.items()))
                    for row, words in sorted(report.mrt_confusions.items())
                },
            }
        if report.mos_mean is not None:
            blob["mos"] = {
                "mean": report.mos_mean,
                "distribution": {str(r): report.mos_distribution[r] for r in range(1, 6)},
                "n_responses": report.mos_n_responses,
            }
        return json.dumps(blob, indent=2, sort_keys=True) + "\n"
    if format != "TEXT":
        raise ValueError(f"unknown report format {format!r}")
    lines = []
    if report.mrt_percent_correct is not None:
        lines.append(f"MRT percent correct: {report.mrt_percent_correct:.1f}")
        lines.append(f"MRT answers scored: {report.mrt_n_answers}")
    if report.mos_mean is not None:
        lines.append(f"MOS mean: {report.mos_mean:.2f}")
        for r in range(1, 6):
            pct = report.mos_distribution.get(r, 0.0)
            lines.append(f"  {r} {MOS_LABELS[r]:<9} {MOS_EFFORT[r]:<28} {pct:.1f}%")
    lines.append(f"listeners: {report.n_listeners}")
    return "\n".join(lines) + "\n"


def write_mrt_sheet_csv(sheet: MrtResponseSheet) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["listener", "item", "answer"])
    for i, answer in enumerate(sheet.answers):
        writer.writerow([sheet.listener_id, i, answer])
    return buf.getvalue()


def read_mrt_sheets_csv(text: str) -> list[MrtResponseSheet]:
    """Read `listener,item,answer` rows into per-listener sheets."""
    per_listener: dict[str, dict[int, str]] = {}
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return []
    for row in reader:
        if not row:
            continue
        listener, item, answer = row[0], int(row[1]), row[2] if len(row) > 2 else ""
        per_listener.setdefault(listener, {})[item] = answer
    sheets = []
    for listener in sorted(per_listener):
        answers_by_item = per_listener[listener]
        n = max(answers_by_item) + 1
        sheets.append(
            MrtResponseSheet(
                listener_id=listener,
                answers=[answers_by_item.get(i, "") for i in range(n)],
            )
        )
    return sheets


def read_mos_responses_csv(text: str) -> list[MosResponse]:
    """Read `listener,sentence,rating` rows."""
    responses = []
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return []
    for row in reader:
        if not row:
            continue
        responses.append(
            MosResponse(listener_id=row[0], sentence_id=row[1], rating=int(row[2]))
        )
    return responses
