"""Exception hierarchy shared by every module."""
from typing import Optional


class SkewHochschildError(Exception):
    """Base class for all engine errors"""


class DivisionByZeroError(SkewHochschildError, ZeroDivisionError):
    """Raised when a zero Scalar is inverted"""


class DegenerateParameterError(SkewHochschildError, ValueError):
    """Raised when a parameter choice makes a required denominator vanish"""


class UnsupportedAutomorphismError(SkewHochschildError, ValueError):
    """Raised when an automorphism does not make sense for the algebra kind"""


class NotationError(SkewHochschildError, ValueError):
    """Parse failure in Scalar / AElement text, with the failing position"""

    def __init__(self, message: str, text: str = "", position: int = 0,
                 line: int = 1, column: int = 1):
        self.text = text
        self.position = position
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column}): {text!r}")


class BasisMembershipError(SkewHochschildError, ValueError):
    """A chain basis element does not belong to the basis of the chosen family"""


class FamilyHypothesisError(SkewHochschildError, ValueError):
    """A complex family or suite was selected for a spec violating its hypotheses"""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        message = f"hypothesis violated: {hypothesis}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class ConfigError(SkewHochschildError, ValueError):
    """Unreadable or invalid scenario file"""


class WindowError(SkewHochschildError, ValueError):
    """Empty or malformed truncation window"""


class MarginTooSmallError(WindowError):
    """Certification margin below the family minimum"""

    def __init__(self, required, given):
        self.required = required
        self.given = given
        super().__init__(f"margin {given} is below the required minimum {required}")


class ResourceLimitError(SkewHochschildError, RuntimeError):
    """A window grew past the configured basis or matrix caps"""


class DoubleComplexSignError(SkewHochschildError, RuntimeError):
    """Composite of differentials is not zero, or the commutation sign is not uniform"""

    def __init__(self, message: str, witness: Optional[str] = None):
        self.witness = witness
        if witness:
            message = f"{message}; witness: {witness}"
        super().__init__(message)
