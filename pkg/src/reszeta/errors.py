"""Exception types shared across the package."""


class ResZetaError(Exception):
    """Base class for all errors raised by reszeta."""


# --- series ---------------------------------------------------------------

class VariableCountMismatch(ResZetaError):
    pass


class ZeroExponentVector(ResZetaError):
    pass


class NonUnitSeries(ResZetaError):
    """Series whose constant term is not 1 where a unit is required."""


class AnnihilatingSubstitution(ResZetaError):
    """A substitution sent some factor exponent to the zero vector."""


# --- resolution graphs ----------------------------------------------------

class InvalidProximity(ResZetaError):
    pass


class NonUnimodular(ResZetaError):
    """Internal consistency failure of the proximity data."""


class InvalidPairs(ResZetaError):
    pass


class AgeViolation(ResZetaError):
    pass


class StructureViolation(ResZetaError):
    pass


class OrderViolation(ResZetaError):
    pass


class TargetNotInGraph(ResZetaError):
    pass


class NotMinimal(ResZetaError):
    pass


class NoTargets(ResZetaError):
    pass


# --- reconstruction -------------------------------------------------------

class AmbiguousReconstruction(ResZetaError):
    """Several non-isomorphic configurations realize the input series.

    Carries the candidate witnesses so batch callers can classify instead of
    aborting.
    """

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class InconsistentSeries(ResZetaError):
    """No admissible configuration realizes the input series."""


class UnresolvedCase(ResZetaError):
    """Input escaped every enumerated reconstruction case.

    Carries a diagnostic payload instead of guessing.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotInferable(ResZetaError):
    pass


class UnrealizableProfile(ResZetaError):
    pass


class SelfCheckFailed(ResZetaError):
    """A reconstruction result failed its forward recomputation check."""


# --- cli / search ---------------------------------------------------------

class ConfigError(ResZetaError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class BoundsExceeded(ResZetaError):
    pass
