"""Exception types raised by the library.

Every domain error derives from :class:`OrbitError` so callers (and the CLI)
can distinguish invalid-input conditions from programming mistakes.
"""


class OrbitError(Exception):
    """Base class for all domain errors."""


class NotAState(OrbitError):
    """Matrix violates a density-matrix invariant (Hermiticity, positivity, trace)."""


class NotADistribution(OrbitError):
    """Vector is not a probability distribution within tolerance."""


class RankExceedsBellSpace(OrbitError):
    """Spectrum has more nonzero eigenvalues than the maximally entangled basis can hold."""


class TooLarge(OrbitError):
    """Problem size exceeds the enumeration cap."""


class IndexMismatch(OrbitError):
    """Tableau shape and spectrum length are incompatible."""


class WrongDimension(OrbitError):
    """Operation requires a specific bipartite dimension."""


class EnergyOutOfRange(OrbitError):
    """Energy lies outside the admissible interval."""


class EnergyMismatch(OrbitError):
    """State energy does not match the requested constraint."""


class NonPositiveTemperature(OrbitError):
    """Temperatures must be strictly positive."""


class MarginalsNotThermal(OrbitError):
    """Reduced states deviate from the expected Gibbs states."""


class EnergyNotConserved(OrbitError):
    """Evolution changed the expected energy."""


class SpectrumMismatch(OrbitError):
    """Two states do not share a spectrum within tolerance."""


class EqualTemperatures(OrbitError):
    """Heat-flow bound diverges when both temperatures coincide."""


class InfeasibleMarginals(OrbitError):
    """Requested marginal pair is not attainable for the given spectrum."""


class InfeasibleEnergy(OrbitError):
    """No marginal pair in the region is compatible with the given energy."""
