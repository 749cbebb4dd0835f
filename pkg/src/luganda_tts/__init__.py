"""Luganda text-to-speech engine.

Text flows through a staged pipeline (tokenize, normalize, phonemize,
prosody, acoustic targets) into MBROLA-compatible .pho parameters and
concatenative unit-selection audio, with a voice-building toolkit and
MRT/MOS listening-test scoring alongside.
"""

__version__ = "0.1.0"

from .acoustics import (  # noqa: F401
    DurationTable,
    F0Config,
    SegmentTarget,
    compute_durations,
    compute_f0,
    emit_pho,
    parse_pho,
)
from .errors import LugandaTtsError, PipelineStageError  # noqa: F401
from .frontend import (  # noqa: F401
    InputKind,
    MarkupDirective,
    NormalizationTables,
    NumberType,
    Sentence,
    SentenceType,
    Token,
    TokenKind,
    UtteranceDoc,
    expand_number,
    normalize,
    parse_plain,
    parse_ssml_subset,
    tokenize,
)
from .linguistics import (  # noqa: F401
    POS,
    ChunkSpan,
    Lexicon,
    LexiconEntry,
    PhoneSetDef,
    Syllable,
    TranscriptionSource,
    Word,
    apply_inflection,
    chunk_phrases,
    letter_to_sound,
    phonemize_word,
    syllabify,
    tag_pos,
)
from .pipeline import Pipeline, UnitTarget  # noqa: F401
from .prosody import (  # noqa: F401
    BreakLevel,
    PhraseBreak,
    PitchAccent,
    Precision,
    RewriteRule,
    ToneMap,
    apply_postlexical,
    assign_accents,
    assign_phrase_breaks,
    assign_tones,
    detect_sentence_type,
    load_rules,
)
from .evaluation import (  # noqa: F401
    EvalReport,
    MosResponse,
    MrtGrid,
    MrtResponseSheet,
    MrtSession,
    make_mrt_session,
    render_report,
    score_mos,
    score_mrt,
)
from .synth import (  # noqa: F401
    CostWeights,
    RenderOptions,
    UnitPath,
    render,
    select_units,
    synthesize_text,
)
from .synthvoice import build_synthetic_voice, make_synthetic_session  # noqa: F401
from .voicedb import (  # noqa: F401
    CorpusSentence,
    LabelTrack,
    Unit,
    VoiceInventory,
    build_inventory,
    compute_edge_features,
    compute_pitch_marks,
    estimate_f0,
    load_inventory,
    parse_labels,
    save_inventory,
    segment_units,
    select_corpus,
    validate_session,
)
from .wavio import Waveform, read_wav, write_wav  # noqa: F401
