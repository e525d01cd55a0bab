"""Exception taxonomy shared across the toolkit.

The CLI maps these onto exit codes: ConfigurationError -> 2,
NumericError -> 3, InconclusiveVerdictError -> 4.
"""


class TkzError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(TkzError):
    """Invalid user input: unsupported algebra, malformed config, bad spin."""


class CriticalLevelError(ConfigurationError):
    """Level equals the negative dual Coxeter number."""


class ShapeError(ConfigurationError):
    """Dimension mismatch between operators and state spaces."""


class NumericError(TkzError):
    """Numerical failure: singular solve, ill-conditioned data."""


class IrreducibilityError(NumericError):
    """Casimir is not scalar on the supplied representation."""


class SingularPointError(NumericError):
    """Evaluation requested at a pole or branch point; names the factor."""


class DegenerateConfigurationError(NumericError):
    """Coordinate change is not component-isolated; names the vanishing factor."""


class NonHolomorphicError(NumericError):
    """Indicial data requested for a component that failed the holomorphy check."""


class ProximityError(NumericError):
    """Integration step collapsed near the singular locus."""


class InsufficientDataError(NumericError):
    """Not enough series coefficients for a tail estimate."""


class InconclusiveVerdictError(TkzError):
    """Holomorphy verdict unstable under cutoff increase; raise the cutoff."""


class OutOfDiscWarning(UserWarning):
    """Local solution evaluated outside its estimated disc of validity."""
