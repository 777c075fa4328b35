class RevsymError(ValueError):
    """Base class for domain errors raised by this package."""


class ParseError(RevsymError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotReversibleError(RevsymError):
    pass


class AlphabetError(RevsymError):
    pass


class FeedbackError(RevsymError):
    """An emitted output cannot be fed back as the next input."""

    def __init__(self, message, step):
        self.step = step
        super().__init__(f"step {step}: {message}")


class InconsistentObservations(RevsymError):
    """Candidate set emptied: observations cannot come from the model."""

    def __init__(self, message, step):
        self.step = step
        super().__init__(f"step {step}: {message}")


class LatticeError(RevsymError):
    pass
