"""Extremal mutual information on unitary orbits of bipartite quantum states."""

from .errors import (
    EnergyMismatch,
    EnergyNotConserved,
    EnergyOutOfRange,
    EqualTemperatures,
    IndexMismatch,
    InfeasibleEnergy,
    InfeasibleMarginals,
    MarginalsNotThermal,
    NonPositiveTemperature,
    NotADistribution,
    NotAState,
    OrbitError,
    RankExceedsBellSpace,
    SpectrumMismatch,
    TooLarge,
    WrongDimension,
)
from .extremize import (
    ClassicalState,
    ExtremalResult,
    Tableau,
    build_rho_max,
    build_rho_min,
    classical_state_qmi,
    delta_i_max_energy,
    delta_i_max_unitary,
    energy_block_unitary,
    enumerate_tableaux,
    extremal_correlations,
    generalized_bell_basis,
    grid_qmi,
    i_max,
    i_min_two_qubit,
    optimize_qmi_weak_energy,
    sample_orbit_qmi,
    strong_energy_unitary,
)
from .marginal2q import (
    MarginalPoint,
    MarginalRegion,
    Raster,
    contains,
    energy_max_point,
    extremal_points,
    rasterize,
)
from .qcore import (
    BipartiteDims,
    DensityMatrix,
    Spectrum,
    binary_entropy,
    haar_unitary,
    majorizes,
    mutual_information,
    partial_trace,
    shannon_entropy,
    spectrum_of,
    von_neumann_entropy,
)
from .thermo import (
    AnomalousHeatBound,
    CollisionTrace,
    HeatFlowReport,
    ThermalScenario,
    bits_to_nats,
    collision_simulate,
    free_energy,
    gibbs_state,
    heat_flow_bound_check,
    max_anomalous_heat,
    nats_to_bits,
    refinery_gain,
    szilard_work,
)

__version__ = "0.1.0"
