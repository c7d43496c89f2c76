"""Exception hierarchy shared by all modules."""


class KNDeformError(Exception):
    """Base class for every error raised by kndeform."""


class UnknownParameter(KNDeformError, ValueError):
    pass


class UnboundParameter(KNDeformError, ValueError):
    pass


class KindMismatch(KNDeformError, TypeError):
    pass


class OutOfWindow(KNDeformError, LookupError):
    pass


class NonPolynomialParameter(KNDeformError, ValueError):
    pass


class SingularCurve(KNDeformError, ArithmeticError):
    pass


class ExceptionalLine(SingularCurve):
    pass


class ExceptionalPoint(SingularCurve):
    pass


class InvalidAlgebra(KNDeformError, ValueError):
    pass
