"""Listening-test scoring: MRT and MOS arithmetic, reports, CSV round trips."""
import json
import random

import pytest

from luganda_tts import (
    EvalReport,
    MosResponse,
    MrtGrid,
    MrtResponseSheet,
    make_mrt_session,
    render_report,
    score_mos,
    score_mrt,
)
from luganda_tts.errors import EmptyGrid, EmptyResponses, LengthMismatch, LugandaTtsError
from luganda_tts.evaluation import (
    merge_reports,
    read_mos_responses_csv,
    read_mrt_sheets_csv,
    write_mrt_sheet_csv,
)


@pytest.fixture(scope="module")
def grid():
    return MrtGrid.load()


def test_bundled_grid_is_12_by_6(grid):
    assert len(grid.rows) == 12
    assert all(len(r) == 6 for r in grid.rows)
    assert grid.rows[0] == ("bbiri", "bibiri", "ebiri", "ekika", "ebika", "muntu")


def test_grid_rejects_short_rows():
    with pytest.raises(LugandaTtsError):
        MrtGrid(rows=(("a", "b"),))


# ---------------------------------------------------------------------------
# sessions

def test_session_reproducible(grid):
    a = make_mrt_session(grid, 12, seed=42)
    b = make_mrt_session(grid, 12, seed=42)
    assert a.items == b.items
    assert a.to_json() == b.to_json()


def test_session_items_belong_to_rows(grid):
    session = make_mrt_session(grid, 12, seed=7)
    assert len(session.items) == 12
    for item in session.items:
        assert item.correct_word in grid.rows[item.row_index]


def test_empty_grid_raises():
    with pytest.raises(EmptyGrid):
        make_mrt_session(MrtGrid(rows=()), 5, seed=0)


def test_session_json_round_trip(grid):
    from luganda_tts import MrtSession

    session = make_mrt_session(grid, 8, seed=3)
    again = MrtSession.from_json(session.to_json())
    assert again.items == session.items
    assert again.grid.rows == session.grid.rows


# ---------------------------------------------------------------------------
# MRT scoring

def test_all_correct_scores_100(grid):
    session = make_mrt_session(grid, 10, seed=1)
    sheet = MrtResponseSheet("l1", [it.correct_word for it in session.items])
    report = score_mrt(session, [sheet])
    assert report.mrt_percent_correct == 100.0


def test_71_of_100_scores_71_percent(grid):
    session = make_mrt_session(grid, 100, seed=2)
    answers = []
    for i, item in enumerate(session.items):
        if i < 71:
            answers.append(item.correct_word)
        else:
            wrong = next(w for w in grid.rows[item.row_index] if w != item.correct_word)
            answers.append(wrong)
    report = score_mrt(session, [MrtResponseSheet("l1", answers)])
    assert report.mrt_percent_correct == 71.0
    assert report.mrt_n_answers == 100


def test_blank_answer_counts_incorrect(grid):
    session = make_mrt_session(grid, 1, seed=3)
    report = score_mrt(session, [MrtResponseSheet("l1", [""])])
    assert report.mrt_percent_correct == 0.0


def test_length_mismatch_raises(grid):
    session = make_mrt_session(grid, 3, seed=4)
    with pytest.raises(LengthMismatch):
        score_mrt(session, [MrtResponseSheet("l1", ["x"])])


def test_mrt_confusions_accumulate(grid):
    session = make_mrt_session(grid, 5, seed=5)
    sheets = [
        MrtResponseSheet("l1", [it.correct_word for it in session.items]),
        MrtResponseSheet("l2", [""] * 5),
    ]
    report = score_mrt(session, sheets)
    total = sum(c for row in report.mrt_confusions.values() for c in row.values())
    assert total == 10
    assert report.n_listeners == 2


def test_mrt_permutation_invariant(grid):
    session = make_mrt_session(grid, 6, seed=6)
    rng = random.Random(0)
    sheets = []
    for listener in range(4):
        answers = [
            it.correct_word if rng.random() < 0.5 else "" for it in session.items
        ]
        sheets.append(MrtResponseSheet(f"l{listener}", answers))
    forward = score_mrt(session, sheets)
    backward = score_mrt(session, list(reversed(sheets)))
    assert forward.mrt_percent_correct == backward.mrt_percent_correct
    assert forward.mrt_confusions == backward.mrt_confusions


# ---------------------------------------------------------------------------
# MOS scoring

def test_all_threes():
    responses = [MosResponse("l1", f"s{i}", 3) for i in range(10)]
    report = score_mos(responses)
    assert report.mos_mean == 3.0
    assert report.mos_distribution == {1: 0.0, 2: 0.0, 3: 100.0, 4: 0.0, 5: 0.0}


def test_reported_distribution_means_3_00_exactly():
    # distribution {1: 5%, 2: 20%, 3: 49%, 4: 22%, 5: 4%} over 100 responses;
    # weighted-sum oracle: 0.05 + 0.40 + 1.47 + 0.88 + 0.20 = 3.00
    counts = {1: 5, 2: 20, 3: 49, 4: 22, 5: 4}
    oracle = sum(r * c for r, c in counts.items()) / 100
    assert oracle == 3.00
    responses = []
    i = 0
    for rating, count in counts.items():
        for _ in range(count):
            responses.append(MosResponse(f"l{i % 20}", f"s{i}", rating))
            i += 1
    report = score_mos(responses)
    assert report.mos_mean == 3.0
    assert report.mos_distribution == {1: 5.0, 2: 20.0, 3: 49.0, 4: 22.0, 5: 4.0}


def test_rating_out_of_scale_rejected_at_construction():
    with pytest.raises(LugandaTtsError):
        MosResponse("l1", "s1", 6)
    with pytest.raises(LugandaTtsError):
        MosResponse("l1", "s1", 0)


def test_empty_responses_raise():
    with pytest.raises(EmptyResponses):
        score_mos([])


def test_mos_permutation_invariant():
    rng = random.Random(12)
    responses = [
        MosResponse(f"l{rng.randrange(5)}", f"s{i}", rng.randint(1, 5)) for i in range(60)
    ]
    a = score_mos(responses)
    b = score_mos(list(reversed(responses)))
    assert a.mos_mean == b.mos_mean
    assert a.mos_distribution == b.mos_distribution


def test_distribution_sums_to_100_within_rounding():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randrange(1, 60)
        responses = [MosResponse("l", f"s{i}", rng.randint(1, 5)) for i in range(n)]
        report = score_mos(responses)
        # the +-0.2 bound is tight (four buckets can round up by 0.05 each);
        # the epsilon only absorbs float representation noise
        assert abs(sum(report.mos_distribution.values()) - 100.0) <= 0.2 + 1e-9


# ---------------------------------------------------------------------------
# reports

def test_render_empty_report_skeleton():
    text = render_report(EvalReport(), "TEXT")
    assert "listeners: 0" in text
    blob = json.loads(render_report(EvalReport(), "JSON"))
    assert blob == {"mrt": None, "mos": None, "n_listeners": 0}


def test_render_reference_distribution_json_mean():
    counts = {1: 5, 2: 20, 3: 49, 4: 22, 5: 4}
    responses = []
    i = 0
    for rating, count in counts.items():
        for _ in range(count):
            responses.append(MosResponse("l1", f"s{i}", rating))
            i += 1
    blob = json.loads(render_report(score_mos(responses), "JSON"))
    assert blob["mos"]["mean"] == 3.0


def test_render_text_has_line_per_rating():
    responses = [MosResponse("l1", "s1", 3)]
    text = render_report(score_mos(responses), "TEXT")
    for label in ("Bad", "Poor", "Fair", "Good", "Excellent"):
        assert label in text


def test_merge_reports_combines_fragments(grid):
    session = make_mrt_session(grid, 2, seed=9)
    mrt = score_mrt(session, [MrtResponseSheet("l1", [it.correct_word for it in session.items])])
    mos = score_mos([MosResponse("l2", "s0", 4)])
    merged = merge_reports(mrt, mos)
    assert merged.mrt_percent_correct == 100.0
    assert merged.mos_mean == 4.0


# ---------------------------------------------------------------------------
# CSV round trips

def test_mrt_sheet_csv_round_trip():
    sheet = MrtResponseSheet("lst", ["bbiri", "", "muntu"])
    text = write_mrt_sheet_csv(sheet)
    sheets = read_mrt_sheets_csv(text)
    assert len(sheets) == 1
    assert sheets[0].listener_id == "lst"
    assert sheets[0].answers == sheet.answers


def test_mos_csv_round_trip():
    text = "listener,sentence,rating\nl1,s0,3\nl1,s1,5\n"
    responses = read_mos_responses_csv(text)
    assert responses == [MosResponse("l1", "s0", 3), MosResponse("l1", "s1", 5)]
