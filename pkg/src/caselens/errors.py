"""Exception types shared across the pipeline."""


class CaseLensError(Exception):
    """Base class for all caselens errors."""


class UnreadablePdf(CaseLensError):
    """PDF is encrypted, corrupt, or has no extractable text layer (OCR is out of scope)."""


class EmptyDocument(CaseLensError):
    """Source document yielded zero extractable characters."""


class NoMarkersFound(CaseLensError):
    """Document contains no temporal markers to segment on."""


class UnknownCategory(CaseLensError):
    """No keyword table exists for the requested semantic category."""


class UnknownTag(CaseLensError):
    """Tag is not part of its category's vocabulary."""


class FeatureValidationError(CaseLensError):
    """Extracted features failed error-level validation."""

    def __init__(self, case_id: str, issues):
        self.case_id = case_id
        self.issues = issues
        details = "; ".join(str(i) for i in issues)
        super().__init__(f"{case_id}: {details}")


class SchemaVersionMismatch(CaseLensError):
    """Database file carries a different schema version (or is not a caselens store)."""


class StorageError(CaseLensError):
    """A write failed; the transaction was rolled back."""


class EmptyInput(CaseLensError):
    """Operation requires at least one element."""
