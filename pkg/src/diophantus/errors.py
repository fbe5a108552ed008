"""Exception hierarchy shared by every module of the package."""


class DiophantusError(Exception):
    """Base class for all errors raised by diophantus."""


class BadInput(DiophantusError, ValueError):
    pass


class ZeroInput(BadInput):
    pass


class ZeroArgument(BadInput):
    pass


class NonPositive(BadInput):
    pass


class EvenModulus(BadInput):
    pass


class CompositeModulus(BadInput):
    pass


class NotPrime(BadInput):
    pass


class SquareInput(BadInput):
    pass


class UnknownFamily(BadInput):
    pass


class IndefiniteForm(BadInput):
    pass


class BadBasis(BadInput):
    pass


class UnsupportedDiscriminant(BadInput):
    pass


class FactorizationIncomplete(DiophantusError, ArithmeticError):
    pass


class DegenerateDiscriminant(DiophantusError, ArithmeticError):
    """The p-adic search ran past its precision cap without deciding."""


class SearchExhausted(DiophantusError, ArithmeticError):
    pass


class NoWitness(DiophantusError, LookupError):
    pass


class LocallyUnsolvable(DiophantusError):
    """Raised where a computation only makes sense with local points."""

    def __init__(self, place, message: str = ""):
        self.place = place
        super().__init__(message or f"no local solution at place {place}")
