"""Exception types shared across the package."""


class HgxError(Exception):
    """Base class for all package errors."""


class PoleError(HgxError):
    """Gamma or reciprocal-Pochhammer evaluation hit a pole."""


class ShapeError(HgxError):
    """Parameter blocks do not match the declared shape, or the shape
    violates the compatibility constraint p_i + r = p'_i + r'."""


class ResonanceError(HgxError):
    """Local exponents differ by integers, so the generic solution basis
    or connection formula degenerates."""


class ConvergenceError(HgxError):
    """A truncated series shows no numerical decay at the requested point."""


class BranchError(HgxError):
    """Evaluation point lies on a branch cut of a power prefactor."""


class ExactnessError(HgxError):
    """An operation that requires exact rational input received floats."""


class IrreducibleError(HgxError):
    """Reduction step requested on a system with no drop available."""


class AdjacencyError(HgxError):
    """The requested pair of chambers or vertices is not adjacent."""


class GenericityError(HgxError):
    """A middle convolution hit a degenerate kernel; the report carries
    the offending kernel dimensions."""


class NotBraidCase(HgxError):
    """Braid monodromy needs p_i = p_i' for every i and r = r'."""


class NotAdjacentDivisor(HgxError):
    """The divisor does not meet the closure of the vertex region."""


class DegenerateShape(HgxError):
    """A combinatorial construction needs p_i * p_i' != 0 in every slot."""


class NotCommuting(HgxError):
    """Simultaneous spectrum requested for residue matrices that do not
    commute."""


class NotReducible(HgxError):
    """Katz reduction requested in a direction with non-positive
    reduction number."""
