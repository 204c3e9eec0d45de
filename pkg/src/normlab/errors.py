"""Exception hierarchy shared by every normlab module."""


class NormlabError(Exception):
    """Base class for all library errors."""


class DomainExceeded(NormlabError):
    pass


class Overflow(NormlabError):
    pass


class ParseError(NormlabError):
    def __init__(self, position, expected, found, text=""):
        self.position = position
        self.expected = expected
        self.found = found
        self.text = text
        super().__init__(f"at offset {position}: expected {expected}, found {found!r}")


class UnboundParam(ParseError):
    pass


class UnsupportedConstruct(ParseError):
    pass


class SchemaError(NormlabError):
    pass


class BoundaryRoot(NormlabError):
    pass


class NonConvergent(NormlabError):
    pass


class ClusterUnresolved(NormlabError):
    pass


class HypothesisUnchecked(NormlabError):
    pass


class HypothesisFailed(NormlabError):
    pass


class NoStop(NormlabError):
    pass


class BoundViolated(NormlabError):
    pass


class NoUnitPoint(NormlabError):
    pass


class PathTooCloseToZero(NormlabError):
    pass


class QuadratureNonConvergent(NormlabError):
    pass


class PremiseFailed(NormlabError):
    pass


class OmissionFailed(NormlabError):
    pass


class Indeterminate(NormlabError):
    pass


class BracketInvalid(NormlabError):
    pass
