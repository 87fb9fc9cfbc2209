"""Exception types shared across the package.

Input validation uses plain ValueError.  The classes below mark failures
that are properties of the data rather than of the call: unparseable
profile text, evaluation outside a function's domain, quadrature that
cannot meet its tolerance, and profiles whose decay toward the model
metric is too slow for renormalization.
"""


class RenvolError(Exception):
    """Base class for all package-specific errors."""


class ExpressionError(RenvolError):
    """Problem with a profile expression (parsing or evaluation)."""


class ParseError(ExpressionError):
    """Profile text could not be parsed.

    ``offset`` is the character position of the offending token within
    the expression; ``line`` is set when the expression came from a
    profile file.
    """

    def __init__(self, message, offset, line=None):
        text = "syntax error at offset %d: %s" % (offset, message)
        if line is not None:
            text = "line %d: %s" % (line, text)
        super().__init__(text)
        self.reason = message
        self.offset = offset
        self.line = line


class EvaluationError(ExpressionError):
    """Expression evaluation failed (e.g. an unbound parameter)."""


class DomainError(EvaluationError):
    """Evaluation hit a domain violation (log/sqrt of a negative, 1/0)."""


class QuadratureError(RenvolError):
    """Quadrature or root finding could not reach the requested accuracy."""


class DecayError(RenvolError):
    """Profile does not decay to the reference metric fast enough.

    Raised both by the asymptotics validator and by the renormalized
    volume routine when the truncated volume fails its stability check.
    """
