class BridgekitError(Exception):
    pass


class GraphFormatError(BridgekitError):
    """Malformed graph or instance file. Message carries the offending line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CapExceededError(BridgekitError):
    """An exact computation was asked for on a graph above its size cap."""


class InternalInconsistencyError(BridgekitError):
    """A property the algorithms rely on failed to hold; indicates a bug, not bad input."""
