"""Exception hierarchy."""


class OdekitError(Exception):
    pass


class MalformedExpressionError(OdekitError):
    pass


class DivisionByZeroError(OdekitError, ZeroDivisionError):
    pass


class MissingBindingError(OdekitError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no value bound for variable {self.name!r}"


class PoleError(OdekitError, ZeroDivisionError):
    """Denominator vanishes at the evaluation point; callers resample."""


class ParseError(OdekitError, ValueError):
    def __init__(self, message, offset, text=""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


class UnsupportedExponentError(ParseError):
    pass


class CaseViolationError(OdekitError):
    """A quantity was requested outside the case where it is defined."""

    def __init__(self, condition, detail=""):
        msg = f"case violation: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.condition = condition


class MaximalDegenerationError(CaseViolationError):
    def __init__(self, detail="A = B = 0, N undefined"):
        super().__init__("alpha = 0", detail)


class SingularFrameError(CaseViolationError):
    def __init__(self, detail="alpha and gamma are parallel"):
        super().__init__("M = 0", detail)


class InvalidTransformationError(OdekitError):
    pass
