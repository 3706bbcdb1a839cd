"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all deglocus errors."""


class RingMismatchError(ToolkitError):
    """Operands belong to different rings."""


class DegreeGuardExceeded(ToolkitError):
    """A computation produced an intermediate polynomial above the degree cap.

    This is a resource error: the computation was aborted, no partial or
    truncated answer is ever returned.
    """

    def __init__(self, degree: int, cap: int):
        super().__init__(f"intermediate total degree {degree} exceeds guard {cap}")
        self.degree = degree
        self.cap = cap


class HypothesisError(ToolkitError):
    """A mathematical hypothesis required by an operation does not hold."""


class ComponentSetError(ToolkitError):
    """A candidate component decomposition failed verification."""


class ScenarioError(ToolkitError):
    """Scenario file is syntactically or semantically invalid."""

    def __init__(self, message: str, line: int | None = None):
        loc = f"line {line}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
