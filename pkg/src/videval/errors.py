"""Exception types shared across the evaluation engine."""


class EngineError(Exception):
    """Base class for every error the engine raises on purpose."""


class SchemaError(EngineError):
    """A record, payload, or metadata object violates its schema."""


class DuplicateIdError(SchemaError):
    """Two prompt records in one suite share a prompt_id."""


class UnknownDirectionError(SchemaError):
    """A motion-direction token is outside the canonical four."""


class AdapterUnavailableError(EngineError):
    """The perception adapter cannot be reached at all."""


class MissingFixtureError(EngineError):
    """The fixture store has no artifact for the requested key."""


class ProtocolError(EngineError):
    """An adapter returned a payload that violates the wire schema."""


class EmptyMaskError(EngineError):
    """A segmentation mask has no set pixels."""


class DimensionMismatchError(EngineError):
    """Two images or grids that must share dimensions do not."""


class UnparseableResponseError(EngineError):
    """A judge response could not be parsed into the expected shape."""


class OutOfRangeError(EngineError):
    """A parsed rubric score lies outside its rubric's range."""


class MissingPlaceholderError(EngineError):
    """A rendered template still contains an unresolved placeholder."""


class EmptyInputError(EngineError):
    """An aggregate was asked for over zero elements."""


class NoForegroundPointsError(EngineError):
    """No tracked point starts on the foreground mask."""


class NoBackgroundPointsError(EngineError):
    """No tracked point starts off every object mask."""


class DegenerateInputError(EngineError):
    """A correlation input is constant, so the statistic is undefined."""


class InsufficientOverlapError(EngineError):
    """Fewer than two (model, prompt) keys are shared by both sides."""


class EmptyCategoryError(EngineError):
    """A suite category ended up with zero evaluable videos."""
