"""Exception hierarchy shared across the toolkit."""


class HandMotionError(Exception):
    """Base class for all toolkit errors."""


class DegenerateRotation(HandMotionError):
    """6D rotation input has zero or colinear columns."""


class NotARotation(HandMotionError):
    """Matrix fails the orthonormality check."""


class LayoutMismatch(HandMotionError):
    """Feature vector or skeleton does not match the canonical layout."""


class IndexOutOfRange(HandMotionError):
    """Joint or frame index outside the valid range."""


class BadMagic(HandMotionError):
    """Binary container does not start with the expected magic bytes."""


class VersionUnsupported(HandMotionError):
    """Binary container version is unknown to this reader."""


class TruncatedPayload(HandMotionError):
    """Binary container payload is shorter than its header promises."""


class FrameCountMismatch(HandMotionError):
    """Two per-frame streams disagree on their frame counts."""


class NonFiniteObjective(HandMotionError):
    """Optimization objective became NaN or Inf."""


class UnknownAnchor(HandMotionError):
    """Body-part anchor name is not defined on the skeleton."""


class SchemaViolation(HandMotionError):
    """A record violates the documented schema; carries the field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class MissingLexiconEntry(HandMotionError):
    """An attribute token has no entry in the lexicon."""

    def __init__(self, token: str):
        super().__init__(f"no lexicon entry for token {token!r}")
        self.token = token


class EndpointError(HandMotionError):
    """LLM endpoint failed after retries; retryable at the caller's discretion."""


class ParseError(HandMotionError):
    """LLM response could not be parsed into exactly three descriptions."""


class FixtureMiss(HandMotionError):
    """No recorded fixture for this request hash."""


class ZeroVector(HandMotionError):
    """Cosine operations require nonzero vectors."""


class UnknownWord(HandMotionError):
    """Word has no entry in the dictionary index."""


class FeatureWidthMismatch(HandMotionError):
    """Motion feature width does not match the model's expected subset."""


class EmptyText(HandMotionError):
    """Text input tokenized to nothing."""


class EmptyDataset(HandMotionError):
    """Training requires a nonempty dataset."""


class BadScheduleParams(HandMotionError):
    """Noise schedule parameters are invalid."""


class LengthExceedsMax(HandMotionError):
    """Requested sequence length exceeds the model's maximum."""


class CovarianceSingularBeyondTolerance(HandMotionError):
    """Covariance product has eigenvalues below the negative tolerance."""


class InsufficientSamples(HandMotionError):
    """Not enough samples for the requested number of pairs."""


class MissingCheckpoint(HandMotionError):
    """A required model checkpoint is absent."""


class BadFrameIndex(HandMotionError):
    """Frame index outside the motion's range."""


class ConfigError(HandMotionError):
    """Invalid or inconsistent configuration."""


class StageFailure(HandMotionError):
    """A pipeline stage failed; carries the stage name and cause."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
