"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`NashMixerError`, which itself is a :class:`ValueError` so that callers
validating user input can catch the usual built-in.  The CLI maps the class
name straight into its machine-readable error object.
"""


class NashMixerError(ValueError):
    """Base class for all structured errors."""


class NotHermitian(NashMixerError):
    pass


class NotPositiveDefinite(NashMixerError):
    pass


class DimensionMismatch(NashMixerError):
    pass


class NonFiniteInput(NashMixerError):
    pass


class InvalidState(NashMixerError):
    """Reference state is not a trace-one positive-definite matrix."""


class NotPrimitive(NashMixerError):
    """Stationary subspace of the generator is not one-dimensional."""


class NotFullRank(NashMixerError):
    pass


class NotReversible(NashMixerError):
    """Generator fails detailed balance with respect to the reference state."""


class NegativeTime(NashMixerError):
    pass


class InvalidExponent(NashMixerError):
    pass


class DegenerateObservable(NashMixerError):
    pass


class BeyondCutoff(NashMixerError):
    """Time argument exceeds the validity window of a type II bound."""


class BelowCutoff(NashMixerError):
    """Spectral argument is below the validity window of a type II bound."""


class CutoffViolation(NashMixerError):
    """A type II certificate has nu*C/4 > T where the bound requires otherwise."""


class NotCompletelyPositive(NashMixerError):
    pass


class NotUnital(NashMixerError):
    pass


class InvalidCertificate(NashMixerError):
    pass


class ParseError(NashMixerError):
    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset
