"""Exception taxonomy shared by all torushms modules.

Every error that library code raises on bad *mathematical* input derives
from TorushmsError, so callers (and the CLI) can distinguish domain
failures from programming bugs.  Input-syntax problems in the CLI use
ParseError, which is deliberately *not* a TorushmsError: the CLI maps
syntax to exit code 1 and domain errors to exit code 2.
"""


class TorushmsError(Exception):
    """Base class for domain errors."""

    #: short machine-readable tag used in CLI error payloads
    kind = "domain"


class ZeroSeries(TorushmsError):
    """Valuation or inversion requested for a series with no terms."""

    kind = "zero-series"


class NonUnit(TorushmsError):
    """A valuation-zero unit was required (e.g. fractional powers,
    point units, local-system eigenvalues) but val != 0."""

    kind = "non-unit"


class NonTransverse(TorushmsError):
    """Two branes share a slope, so their intersection is not transverse.

    Hamiltonian perturbation is out of scope; callers must move one brane.
    """

    kind = "non-transverse"


class MarkerCollision(TorushmsError):
    """A Pin marker sits exactly on an intersection point or on the
    boundary of a triangle arc, making the crossing count ill-defined."""

    kind = "marker-collision"


class DegenerateConfiguration(TorushmsError):
    """Three supports meet in a triple point (or an equivalent
    degeneration), so the triangle count is ill-defined."""

    kind = "degenerate-configuration"


class BadGcd(TorushmsError):
    """A coprimality precondition on (rank, degree) failed."""

    kind = "bad-gcd"


class BadBase(TorushmsError):
    """The base object of a tower construction is not of the admissible
    shape (simple skyscraper or coprime stable bundle)."""

    kind = "bad-base"


class NonElementary(TorushmsError):
    """Surgery requested for slopes with |det| != 1."""

    kind = "non-elementary"


class NullClass(TorushmsError):
    """Surgery output would have zero homology class."""

    kind = "null-class"


class UnanchoredSlope(TorushmsError):
    """A mirror-dictionary map was requested outside the anchored
    generating family, where no normalization is defined."""

    kind = "unanchored-slope"


class ParseError(Exception):
    """CLI input-grammar failure; carries position and expectation info."""

    kind = "parse"

    def __init__(self, message, position=None, expected=None):
        super().__init__(message)
        self.position = position
        self.expected = tuple(expected) if expected else ()
