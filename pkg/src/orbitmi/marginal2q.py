"""Allowed two-qubit marginal spectra for a fixed joint spectrum.

For two qubits the reduced-state eigenvalue pairs (lambda_a, lambda_b),
each taken as the smaller local eigenvalue, form a convex polygon cut out
by four linear inequalities in the joint spectrum.  An optional expected
energy E (local Hamiltonians diag(0, 1) on both sides) slices the polygon
with a fifth inequality: a marginal pair admits energy E iff
lambda_a + lambda_b <= E <= 2 - (lambda_a + lambda_b).

Axis convention for exports: lambda_a on the y-axis, lambda_b on the x-axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EnergyOutOfRange, InfeasibleEnergy, WrongDimension
from .qcore import Spectrum, as_spectrum

INEQUALITY_SLACK = 1e-12
_POINT_CLIP = 1e-12


def _clip_coordinate(x: float, name: str) -> float:
    if x < -_POINT_CLIP or x > 0.5 + _POINT_CLIP:
        raise ValueError(f"{name}={x} outside [0, 1/2]")
    return min(max(float(x), 0.0), 0.5)


@dataclass(frozen=True)
class MarginalPoint:
    """Smaller local eigenvalues (lambda_a, lambda_b), each in [0, 1/2]."""

    lambda_a: float
    lambda_b: float

    def __post_init__(self):
        object.__setattr__(self, "lambda_a", _clip_coordinate(self.lambda_a, "lambda_a"))
        object.__setattr__(self, "lambda_b", _clip_coordinate(self.lambda_b, "lambda_b"))


@dataclass(frozen=True)
class MarginalRegion:
    """Region of attainable marginal pairs for a fixed 4-point spectrum."""

    spectrum: Spectrum
    energy: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "spectrum", as_spectrum(self.spectrum))
        if len(self.spectrum) != 4:
            raise WrongDimension("marginal region is defined for two qubits (N = 4)")
        if self.energy is not None:
            e = float(self.energy)
            if e < 0.0 or e > 2.0:
                raise EnergyOutOfRange(f"energy {e} outside [0, 2]")
            object.__setattr__(self, "energy", e)


def contains(region: MarginalRegion, point: MarginalPoint) -> bool:
    """Membership test for a marginal pair, with 1e-12 slack on each inequality."""
    l1, l2, l3, l4 = region.spectrum.values
    a, b = point.lambda_a, point.lambda_b
    s = INEQUALITY_SLACK
    if a < l3 + l4 - s:
        return False
    if b < l3 + l4 - s:
        return False
    if a + b < l2 + l3 + 2 * l4 - s:
        return False
    if abs(a - b) > min(l1 - l3, l2 - l4) + s:
        return False
    if region.energy is not None:
        if a + b > min(region.energy, 2.0 - region.energy) + s:
            return False
    return True


def extremal_points(region: MarginalRegion) -> tuple[MarginalPoint, MarginalPoint]:
    """Marginal pairs of the minimally and maximally correlated orbit states.

    The maximum sits at (1/2, 1/2): the maximally correlated construction
    has maximally mixed marginals.  The minimum comes from the unique
    two-qubit eigenvalue arrangement, whose row and column sums give the
    local spectra.
    """
    l1, l2, l3, l4 = region.spectrum.values
    min_point = MarginalPoint(min(l1 + l2, l3 + l4), min(l1 + l3, l2 + l4))
    max_point = MarginalPoint(0.5, 0.5)
    return min_point, max_point


def energy_max_point(region: MarginalRegion) -> MarginalPoint:
    """Location of the maximally correlated marginal pair inside the energy slice.

    Both coordinates equal min(E, 2-E)/2, giving each marginal the binary
    entropy H(E/2).  Raises InfeasibleEnergy when the slice is empty.
    """
    if region.energy is None:
        raise ValueError("region has no energy constraint")
    _, l2, l3, l4 = region.spectrum.values
    budget = min(region.energy, 2.0 - region.energy)
    if l2 + l3 + 2 * l4 > budget + INEQUALITY_SLACK:
        raise InfeasibleEnergy(
            f"no marginal pair of this spectrum is compatible with energy {region.energy}"
        )
    m = budget / 2.0
    return MarginalPoint(m, m)


@dataclass(frozen=True)
class Raster:
    """Boolean membership samples on a square grid over [0, 1/2]^2.

    ``inside[i, j]`` refers to lambda_a = axis[i], lambda_b = axis[j].
    """

    axis: np.ndarray
    inside: np.ndarray
    markers: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["lambda_b,lambda_a,inside"]
        n = self.axis.size
        for i in range(n):
            for j in range(n):
                lines.append(
                    f"{self.axis[j]:.6g},{self.axis[i]:.6g},{int(self.inside[i, j])}"
                )
        return "\n".join(lines) + "\n"

    def markers_json_dict(self) -> dict:
        return {k: [float(v[0]), float(v[1])] for k, v in self.markers.items()}


def rasterize(region: MarginalRegion, grid_n: int) -> Raster:
    """Sample membership on grid_n x grid_n nodes spanning [0, 1/2] inclusive.

    Endpoint nodes are included so that boundary features (the corner at
    (1/2, 1/2), the diagonal for pure spectra) land exactly on samples.
    Markers record the extremal points, plus the energy optimum q when the
    region carries an energy constraint.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    axis = np.linspace(0.0, 0.5, grid_n)
    inside = np.zeros((grid_n, grid_n), dtype=bool)
    for i, a in enumerate(axis):
        for j, b in enumerate(axis):
            inside[i, j] = contains(region, MarginalPoint(a, b))
    min_pt, max_pt = extremal_points(region)
    markers = {
        "min": (min_pt.lambda_a, min_pt.lambda_b),
        "max": (max_pt.lambda_a, max_pt.lambda_b),
    }
    if region.energy is not None:
        q = energy_max_point(region)
        markers["q"] = (q.lambda_a, q.lambda_b)
    return Raster(axis=axis, inside=inside, markers=markers)
