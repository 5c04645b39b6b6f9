"""Exception hierarchy for statemix.

Every domain error raised by the library derives from ``StatemixError`` so the
CLI can map any of them onto a one-line diagnostic and exit code 1.
"""


class StatemixError(Exception):
    """Base class for all statemix domain errors."""


# operator construction / validation

class NotSquare(StatemixError):
    """Input matrix is not square (or not 2-D)."""


class NonFiniteEntries(StatemixError):
    """Input matrix contains NaN or infinite entries."""


class NotHermitian(StatemixError):
    """Deviation from self-adjointness exceeds the tolerance."""


class NotPositive(StatemixError):
    """An eigenvalue lies below the negative tolerance."""


class TraceNotOne(StatemixError):
    """Trace differs from one beyond the tolerance."""


class DimensionMismatch(StatemixError):
    """Operands act on Hilbert spaces of different dimensions."""


class ConvergenceFailure(StatemixError):
    """An iterative numerical routine exhausted its iteration budget."""


# decompositions

class VectorOutsideRange(StatemixError):
    """A chosen vector does not lie in the range of the density operator."""


class IsometryShapeMismatch(StatemixError):
    """Mixing-matrix shape is incompatible with the operator's rank."""


class NotIsometry(StatemixError):
    """Mixing-matrix rows are not orthonormal."""


class InvalidP(StatemixError):
    """Qubit-example parameter outside (0,1) or at the singular point 1/2."""


class DifferentTargets(StatemixError):
    """Two decompositions do not resolve the same density operator."""


# statistical-weight measures

class NotNormalized(StatemixError):
    """Weights are negative or do not sum to one within tolerance."""


class EmptyMeasure(StatemixError):
    """A measure must carry at least one atom of positive weight."""


class BarycentersDiffer(StatemixError):
    """Comparison requires measures with a common barycenter."""


# coin lab

class DegenerateCoins(StatemixError):
    """Coin types share the same bias; classification is impossible."""


class BarycenterMismatch(StatemixError):
    """Coin preparations differ already in their single-toss marginal."""


# equilibrium

class EnergyOutOfRange(StatemixError):
    """Target energy outside the open spectral interval of the Hamiltonian."""


class DegenerateHamiltonian(StatemixError):
    """Hamiltonian proportional to the identity; energy fixes no state."""


# dynamics

class InvalidConfig(StatemixError):
    """Evolution configuration violates its constraints (e.g. dt > tau/10)."""


class StepRejected(StatemixError):
    """Integrator could not preserve positivity even after maximal halving."""


# I/O

class ParseError(StatemixError):
    """Malformed input file (JSON structure, shapes, or field types)."""


class VerificationError(StatemixError):
    """A decomposition failed to reproduce its claimed density operator."""
