"""Exception hierarchy shared by all modules."""


class NutFinslerError(Exception):
    """Base class for library errors."""


class ConfigurationError(NutFinslerError, ValueError):
    """Bad sizes, orders, flags or parameter values."""


class DomainError(NutFinslerError, ValueError):
    """Function evaluated outside its domain (sqrt of non-positive, y = 0 for u_a, ...)."""


class SingularJetError(NutFinslerError, ZeroDivisionError):
    """Division by a jet whose constant term vanishes."""


class NotPositiveDefiniteError(NutFinslerError, ArithmeticError):
    """Cholesky failed: the matrix is not symmetric positive definite."""


class OutsideDomainError(NutFinslerError, ValueError):
    """Navigation data requested where |W|^2 >= 1."""


class DegenerateFlagError(NutFinslerError, ValueError):
    """Plane or flag whose Gram determinant is below threshold."""
