"""Exception types raised across the synthesis pipeline."""


class LugandaTtsError(Exception):
    """Base class for all engine errors."""


class MalformedMarkup(LugandaTtsError):
    """Markup input is not well-formed or has the wrong root element."""


class OutOfRange(LugandaTtsError):
    """A number lies outside the numeral table's coverage."""


class UnphonemizableInput(LugandaTtsError):
    """No letter of the input maps to any phone."""


class NoNucleus(LugandaTtsError):
    """A phone sequence contains no vowel to serve as a syllable nucleus."""


class InvalidRule(LugandaTtsError):
    """A rewrite rule references unknown symbols or cannot be parsed."""


class MissingDuration(LugandaTtsError):
    """A phone has no entry in the duration table."""


class PhoSyntax(LugandaTtsError):
    """A .pho line cannot be parsed; carries the line number and reason."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class FormatMismatch(LugandaTtsError):
    """A recording does not match the required 16 kHz/16-bit/mono format."""


class OrphanFiles(LugandaTtsError):
    """A recording session has wav files without text or vice versa."""

    def __init__(self, orphan_wavs, orphan_txts):
        self.orphan_wavs = list(orphan_wavs)
        self.orphan_txts = list(orphan_txts)
        super().__init__(
            f"orphan wav files: {self.orphan_wavs}; orphan txt files: {self.orphan_txts}"
        )


class LabelSyntax(LugandaTtsError):
    """A label file line cannot be parsed."""


class NonContiguous(LugandaTtsError):
    """Label entries overlap or leave gaps."""


class CorruptInventory(LugandaTtsError):
    """A voice inventory on disk fails its checksum or schema check."""


class MissingPhone(LugandaTtsError):
    """The voice inventory has no unit for a requested phone."""


class UnsupportedWav(LugandaTtsError):
    """A wav file is not PCM 16 kHz/16-bit/mono."""


class EmptyGrid(LugandaTtsError):
    """An MRT grid has no rows."""


class LengthMismatch(LugandaTtsError):
    """A response sheet does not match the session item count."""


class EmptyResponses(LugandaTtsError):
    """A MOS scoring request carries no responses."""


class PipelineStageError(LugandaTtsError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage={stage}: {cause}")
        self.stage = stage
        self.cause = cause
