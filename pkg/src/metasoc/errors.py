"""Exception hierarchy shared by all metasoc modules."""


class MetasocError(Exception):
    """Base class for every error raised by this package."""


class CorpusError(MetasocError, ValueError):
    """Problem with a corpus block; carries the offending ``sent_id``."""

    def __init__(self, message, sent_id=None):
        self.sent_id = sent_id
        if sent_id is not None:
            message = f"sentence {sent_id!r}: {message}"
        super().__init__(message)


class MissingYear(CorpusError):
    pass


class MalformedTree(CorpusError):
    pass


class EmptyInput(MetasocError, ValueError):
    pass


class FitError(MetasocError, ValueError):
    """Model fitting could not produce a result."""


class TooFewPoints(FitError):
    pass


class NonPositiveY(FitError):
    pass


class DegenerateData(FitError):
    pass


class NoConvergence(FitError):
    def __init__(self, message, fit=None):
        self.fit = fit
        super().__init__(message)


class LengthMismatch(MetasocError, ValueError):
    pass


class ZeroVariance(MetasocError, ValueError):
    def __init__(self, message, variable=None):
        self.variable = variable
        super().__init__(message)


class DisconnectedGraph(MetasocError, ValueError):
    pass
