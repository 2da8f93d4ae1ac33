"""Exception hierarchy shared by every module of :mod:`valgraph`."""


class ValgraphError(Exception):
    """Base class for all library errors."""


class SpecInvalid(ValgraphError):
    """A model specification violates its preconditions (e.g. ``-1`` not in ``N``)."""


class PrecisionExhausted(ValgraphError):
    """A truncated or 2-adic computation could not be certified within the precision budget."""


class FactorizationTooLarge(ValgraphError):
    """A rational number has a cofactor beyond the trial-division bound."""


class NotAUnit(ValgraphError):
    pass


class NotEnumerable(ValgraphError):
    pass


class YInN(ValgraphError):
    """``N(y)`` and the objects built from it require ``y`` outside ``N``."""


class WindowInconclusive(ValgraphError):
    """A quantifier over an infinite set held on the window but could not be certified."""


class ConditionsDisagree(ValgraphError):
    """Equivalent characterizations returned different answers (an implementation bug)."""


class TableInconsistent(ValgraphError):
    pass


class VertexMismatch(ValgraphError):
    pass


class BadPresentation(ValgraphError):
    pass


class ClosureEscapesCentralizer(ValgraphError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmptyLevelSet(ValgraphError):
    pass


class HypothesisNotMet(ValgraphError):
    pass


class AffineRuleViolated(ValgraphError):
    pass


class SearchExhausted(ValgraphError):
    pass


class DifferenceSearchExhausted(SearchExhausted):
    pass
