"""Exception hierarchy for kgraphkit."""

from __future__ import annotations


class KGraphError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidKGraph(KGraphError):
    """A skeleton failed validation.

    ``violations`` holds every problem found, not only the first; the
    concrete subclass raised reflects the first violation's kind.
    """

    kind = "Invalid"

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{v.kind}: {v.detail}" for v in self.violations[:10]]
        more = len(self.violations) - len(lines)
        if more > 0:
            lines.append(f"... and {more} more")
        super().__init__("; ".join(lines))


class MalformedSkeleton(InvalidKGraph):
    kind = "Malformed"


class IncompleteSquares(InvalidKGraph):
    kind = "IncompleteSquares"


class AmbiguousSquares(InvalidKGraph):
    kind = "AmbiguousSquares"


class HexagonFailure(InvalidKGraph):
    kind = "HexagonFailure"


class HasSource(InvalidKGraph):
    kind = "HasSource"


VIOLATION_CLASSES = {
    cls.kind: cls
    for cls in (MalformedSkeleton, IncompleteSquares, AmbiguousSquares, HexagonFailure, HasSource)
}


class GraphFileError(KGraphError):
    """Graph description file could not be parsed."""


class NotComposable(KGraphError, ValueError):
    pass


class DegreeOutOfRange(KGraphError, ValueError):
    pass


class ZeroHomomorphism(KGraphError, ValueError):
    pass


class NotAPullbackGraph(KGraphError, ValueError):
    pass


class NotAOneGraph(KGraphError, ValueError):
    pass


class NotSourceMatched(KGraphError, ValueError):
    pass


class PreconditionViolated(KGraphError, ValueError):
    pass


class SeedNotRegular(KGraphError, ValueError):
    pass


class UnsafeDomain(KGraphError):
    """An operator image would need a basis vector outside the truncated basis."""


class NotCycline(KGraphError, ValueError):
    pass


class NonCyclineTerm(KGraphError, ValueError):
    pass
