"""Exception types shared across the pipeline.

Every error carries a stable symbolic code so CLI output and the API can
report failures uniformly.
"""


class ScibankError(Exception):
    """Base class for all scibank errors."""

    code = "E_GENERIC"


class SurveyFormatError(ScibankError):
    """The survey file itself is unusable (bad header, undecodable bytes)."""

    code = "E_SCHEMA"


class EmptyTermError(ScibankError):
    """A phrase is empty after trimming, or folds to nothing indexable."""

    code = "E_EMPTY_TERM"


class EmailFormatError(ScibankError):
    """Address violates the one-@, nonempty-local/domain, no-whitespace rule."""

    code = "E_EMAIL"


class DuplicateResearcherError(ScibankError):
    """Two input records hash to the same researcher id."""

    code = "E_DUP_ID"


class EmptyPopulationError(ScibankError):
    """A rate was requested against a zero-sized population."""

    code = "E_DIV0"


class SiteWriteError(ScibankError):
    """Emitting the static site failed at the filesystem level."""

    code = "E_IO"


class BankFormatError(ScibankError):
    """A bank file is unreadable or carries an unsupported format version."""

    code = "E_BANK_FORMAT"
