"""Exception types raised by jostlab."""


class JostlabError(Exception):
    """Base class for all library errors."""


class NonzeroEta(JostlabError, ValueError):
    """Coulomb interactions (eta != 0) are not implemented."""


class ZeroArgument(JostlabError, ValueError):
    """Irregular waves are singular at z = 0 for ell >= 1."""


class NoConvergence(JostlabError, RuntimeError):
    """An iterative procedure hit its iteration cap."""


class SingularAtPole(JostlabError, ZeroDivisionError):
    """Energy coincides with an eigenvalue of C(0, B)."""


class EigensolveFailure(JostlabError, RuntimeError):
    pass


class InvalidParams(JostlabError, ValueError):
    pass


class SingularPotential(InvalidParams):
    """Potential denominator (or Wronskian) vanishes inside [0, a]."""


class ConstraintViolated(InvalidParams):
    pass


class AtExactPole(JostlabError, ZeroDivisionError):
    pass


class PotentialSingularAtNode(JostlabError, ValueError):
    pass


class UnsupportedPartialWave(JostlabError, ValueError):
    """The quadratic Siegert eigenproblem exists only for ell = 0, eta = 0."""
