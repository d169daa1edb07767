"""Exception types shared across the lab.

Most errors are precondition violations on pure functions, so everything
derives from ValueError and can be caught broadly by callers that only
care about "the input was bad".
"""


class PrlabError(ValueError):
    """Base class for all lab-specific errors."""


class ReducibleModulus(PrlabError):
    """The candidate field modulus factors over F_2."""


class DegreeMismatch(PrlabError):
    """Modulus degree does not equal the declared field width."""


class SpecMismatch(PrlabError):
    """Operands belong to different field specs."""


class LengthMismatch(PrlabError):
    """Bit-vector operands have different lengths."""


class InvalidProbability(PrlabError):
    """Probability parameter outside [0, 1]."""


class ArityMismatch(PrlabError):
    """Function arity does not match the supplied input length."""


class ArityTooLarge(PrlabError):
    """Arity exceeds the exhaustive/materialization threshold."""


class SupportTooLarge(PrlabError):
    """Junta support exceeds the transform threshold."""


class UncoveredVariable(PrlabError):
    """A monomial variable lies in no block of the partition."""


class ShapeMismatch(PrlabError):
    """Blocked-input shape parameters are inconsistent."""


class OutputTooLong(PrlabError):
    """Requested extractor output length exceeds what the input supports."""


class ParameterOutOfRange(PrlabError):
    """Sampler parameter outside its documented range."""


class Infeasible(PrlabError):
    """Greedy design construction ran out of candidates."""


class BudgetExceeded(PrlabError):
    """An enumeration would exceed the configured budget."""


class SupportMismatch(PrlabError):
    """Two distributions do not share a support universe."""


class InvalidAdversary(PrlabError):
    """An adversary class violates a theorem-style hypothesis it must satisfy."""


class ParseError(PrlabError):
    """A manifest or descriptor failed to parse."""


class UnknownDescriptor(PrlabError):
    """A descriptor references an unknown family or kind."""
