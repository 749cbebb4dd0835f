import pytest

from luganda_tts import Pipeline, build_synthetic_voice
from luganda_tts.synthvoice import default_corpus_texts


@pytest.fixture(scope="session")
def pipeline():
    return Pipeline()


@pytest.fixture(scope="session")
def voice(pipeline, tmp_path_factory):
    """The bundled synthetic demo voice, built once per test session."""
    session_dir = tmp_path_factory.mktemp("voice-session")
    return build_synthetic_voice(session_dir, texts=default_corpus_texts(), pipeline=pipeline)


@pytest.fixture(scope="session")
def small_voice(pipeline, tmp_path_factory):
    """A tiny two-prompt voice for fast unit tests."""
    session_dir = tmp_path_factory.mktemp("small-voice-session")
    return build_synthetic_voice(
        session_dir, texts=["butiko", "omuntu ogenda mangu"], pipeline=pipeline
    )
