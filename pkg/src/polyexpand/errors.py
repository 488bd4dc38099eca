"""Exception types shared across the package."""


class PolyexpandError(Exception):
    pass


class FormatError(PolyexpandError, ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LimitExceeded(PolyexpandError, ValueError):
    """A configured brute-force or enumeration bound was exceeded."""


class NoConvergence(PolyexpandError, RuntimeError):
    def __init__(self, message: str, estimate: float):
        self.estimate = estimate
        super().__init__(f"{message} (best estimate {estimate!r})")


class VerificationFailure(PolyexpandError, AssertionError):
    """An invariant that must hold by theory was observed to be violated."""
