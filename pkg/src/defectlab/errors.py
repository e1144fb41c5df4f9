"""Exception hierarchy for defectlab.

Every error raised by the package derives from :class:`DefectlabError`, so callers
can catch the whole family with one clause.  A few carry structured payloads:
:class:`RootInBaseFieldError` carries the root it found, and
:class:`InconclusiveCutError` carries the bracketing interval that the boundary
detector could certify before running out of precision.
"""

from __future__ import annotations


class DefectlabError(Exception):
    """Base class for all errors raised by defectlab."""


class MalformedElementError(DefectlabError):
    """An element's coordinates do not lie in the group's slots."""


class GroupMismatchError(DefectlabError):
    """Two objects built over different value groups were combined."""


class NotProperSubgroupError(DefectlabError):
    """A proper convex subgroup was required but the whole group was given."""


class UndefinedComponentError(DefectlabError):
    """The archimedean component of zero was requested."""


class UnrepresentableCutError(DefectlabError):
    """A cut fell outside the representable family (e.g. the whole group as a
    final segment)."""


class EmptySegmentError(DefectlabError):
    """An operation required a nonempty segment."""


class InvalidSegmentError(DefectlabError):
    """A segment violated a precondition (e.g. contains 0, or is not a
    subset of the positive cone) for the requested classification."""


class InsufficientDataError(DefectlabError):
    """Too few approximation steps to carry out the requested inference."""


class PrecisionError(DefectlabError):
    """A truncated series did not carry enough terms for the operation."""


class IndeterminateValuationError(PrecisionError):
    """The valuation of an extension element could not be pinned down from the
    available approximation steps."""


class NotImmediateError(DefectlabError):
    """The extension visibly enlarges the value group or residue field, so it
    is not an immediate (defect) extension."""


class RootInBaseFieldError(DefectlabError):
    """The equation turned out to have a root in the base field; no nontrivial
    extension is generated.  ``root`` holds the base-field root found."""

    def __init__(self, message: str, root=None):
        super().__init__(message)
        self.root = root


class InconclusiveCutError(DefectlabError):
    """The boundary detector did not stabilize within the available precision.
    ``bracket`` is a ``(low, high)`` pair: the boundary is certified to be
    strictly above ``low``; ``high`` is the certified upper end when one
    exists and None when the data ran out before any upper bound could be
    established."""

    def __init__(self, message: str, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class InvalidDistanceError(DefectlabError):
    """A distance cut violated the constraints of the construction it was
    passed to."""


class InvalidCharacteristicError(DefectlabError):
    """Inconsistent characteristic data (e.g. v(p) not positive in a
    mixed-characteristic setup)."""


class SpecFileError(DefectlabError):
    """A run-specification file was malformed."""


class CoherenceError(DefectlabError):
    """Two independently computed characterizations disagreed.  This always
    indicates a bug (or a genuinely inconsistent input), never a normal
    outcome, so it is an error rather than a report field."""
