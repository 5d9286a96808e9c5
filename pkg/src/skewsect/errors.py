"""Exception types raised across the package."""


class SkewSectError(Exception):
    """Base class for all errors raised by skewsect."""


class ZeroTriple(SkewSectError, ValueError):
    pass


class NegativeCoordinate(SkewSectError, ValueError):
    pass


class CollinearInputs(SkewSectError, ValueError):
    pass


class ChartDomain(SkewSectError, ValueError):
    """Point lies outside the domain of the requested chart."""


class DegenerateChart(SkewSectError, ValueError):
    pass


class DomainViolation(SkewSectError, ValueError):
    pass


class PreconditionViolation(SkewSectError, ValueError):
    pass


class InsufficientPoints(SkewSectError, ValueError):
    pass


class StepLimitExceeded(SkewSectError, RuntimeError):
    pass


class NonTransverse(SkewSectError, RuntimeError):
    pass
