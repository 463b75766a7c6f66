"""Exception types shared across the pipeline.

Every error carries a stable machine-readable ``code`` so CLI and service
layers can map failures without parsing messages.
"""


class CcsError(Exception):
    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class UnsupportedEncryptionError(CcsError):
    code = "unsupported-encryption"


class ParseFailureError(CcsError):
    code = "parse-failure"

    def __init__(self, message: str, offset: int | None = None, **details):
        super().__init__(message, **details)
        self.offset = offset


class SchemaViolationError(CcsError):
    """Raised by deserializers; ``path`` is the JSON path of the first failure."""

    code = "schema-violation"

    def __init__(self, message: str, path: str = "$", **details):
        super().__init__(f"{path}: {message}", **details)
        self.path = path


class UnknownLabelError(CcsError):
    code = "unknown-label"


class EmptyDatasetError(CcsError):
    code = "empty-dataset"


class SchemaMismatchError(CcsError):
    code = "schema-mismatch"


class ShapeError(CcsError):
    code = "shape-error"


class BadScaleError(CcsError):
    code = "bad-scale"


class EmptyInputError(CcsError):
    code = "empty-input"


class MissingLabelError(CcsError):
    code = "missing-label"


class NoSuchOperationError(CcsError):
    code = "no-such-operation"


class MissingInputError(CcsError):
    code = "missing-input"


class BadOrderingError(CcsError):
    code = "bad-ordering"
