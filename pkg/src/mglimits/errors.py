"""Exception types shared across the library."""


class MglimitsError(Exception):
    pass


# -- multigraph validation and combinatorics ---------------------------------

class AsymmetricMatrix(MglimitsError):
    """Adjacency matrix differs from its transpose; args carry the first bad (i, j)."""


class OddDiagonal(MglimitsError):
    """A diagonal entry is odd; loops contribute 2 each, so diagonals must be even."""


class DimensionMismatch(MglimitsError):
    pass


class TruncationTooLarge(MglimitsError):
    """An enumeration would exceed the configured size cap."""


class TooLargeForCanonicalization(MglimitsError):
    pass


class LabelCountMismatch(MglimitsError):
    pass


class NonIntegerClassSize(MglimitsError):
    pass


# -- Mobius transforms and parameter tables ----------------------------------

class TruncationExceeded(MglimitsError):
    """A required table entry lies outside the stored truncation."""


class EmptyTruncation(MglimitsError):
    pass


class MixedVertexCounts(MglimitsError):
    pass


class BasisNotClosed(MglimitsError):
    """Zeta inverse failed to invert the zeta matrix on the given basis."""


# -- densities and budgets ---------------------------------------------------

class BudgetExceeded(MglimitsError):
    """An exact computation would exceed the configured work budget."""


class RangeViolation(MglimitsError):
    """A vertex map lands outside the target vertex set."""


# -- multigraphons -----------------------------------------------------------

class WidthsNotNormalized(MglimitsError):
    pass


class DistributionNotNormalized(MglimitsError):
    pass


class AsymmetricKernel(MglimitsError):
    pass


class OddDiagonalMass(MglimitsError):
    """A diagonal multiplicity distribution puts mass on an odd value."""


# -- samplers ----------------------------------------------------------------

class AsymmetricRepresentation(MglimitsError):
    """A functional array representation is not symmetric in its vertex arguments."""


class OddDiagonalRepresentation(MglimitsError):
    pass


class OverlappingSplit(MglimitsError):
    pass


# -- parameters and consistent sequences -------------------------------------

class TableMiss(MglimitsError):
    pass


class NonSymmetricInput(MglimitsError):
    pass


class NegativeMobiusMass(MglimitsError):
    """Mobius transform of the parameter is negative somewhere in the truncation."""


class ResidualTooLarge(MglimitsError):
    """Mobius mass in the truncation leaves too much probability unaccounted."""


class ZeroConditional(MglimitsError):
    pass


# -- file formats ------------------------------------------------------------

class FormatError(MglimitsError):
    """A .mg / .mgw / .ptab file failed to parse."""
