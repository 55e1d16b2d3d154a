"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TorusStabError(Exception):
    exit_code = 1


class ParseError(TorusStabError):
    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DimensionMismatch(TorusStabError, ValueError):
    exit_code = 2


class ZeroPolynomial(TorusStabError, ValueError):
    pass


class MonomialInput(TorusStabError, ValueError):
    pass


class ZeroVector(TorusStabError, ValueError):
    pass


class NotPrimitive(TorusStabError, ValueError):
    pass


class DependentRows(TorusStabError, ValueError):
    pass


class DegenerateInput(TorusStabError, ValueError):
    pass


class UnsupportedArity(TorusStabError):
    exit_code = 3


class ArityLimit(UnsupportedArity):
    pass


class ConductorOverflow(TorusStabError):
    exit_code = 4


class BoundOverflow(TorusStabError):
    exit_code = 4


class CostLimit(TorusStabError):
    exit_code = 4


class LemmaViolation(TorusStabError):
    """A computation contradicted one of the structural lemmas the algorithms rely on."""


class VerificationMismatch(TorusStabError):
    exit_code = 5
