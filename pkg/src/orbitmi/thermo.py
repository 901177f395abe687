"""Thermodynamic applications of orbit extremization.

Work extraction from correlated fuel, bounds on anomalous heat flow, and a
repeated-collision model of equilibration.  All quantities here use natural
logarithms (nats, k_B configurable with default 1); values imported from the
bit-based core are converted explicitly via ln 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EnergyNotConserved,
    EqualTemperatures,
    InfeasibleMarginals,
    MarginalsNotThermal,
    NonPositiveTemperature,
    SpectrumMismatch,
    TooLarge,
    WrongDimension,
)
from .extremize import build_rho_min, energy_block_unitary, i_max, i_min_two_qubit
from .marginal2q import MarginalPoint, MarginalRegion, contains
from .qcore import (
    DensityMatrix,
    _state_matrix,
    as_rng,
    as_spectrum,
    entropy_bits,
    mutual_information,
    partial_trace,
    spectrum_of,
    von_neumann_entropy,
)

LN2 = math.log(2.0)

THERMAL_TOL = 1e-8
ENERGY_TOL = 1e-8
SPECTRUM_TOL = 1e-8
BOUND_SLACK = 1e-8


def bits_to_nats(x: float) -> float:
    return x * LN2


def nats_to_bits(x: float) -> float:
    return x / LN2


def _entropy_nats(rho) -> float:
    return von_neumann_entropy(rho) * LN2


def _as_diagonal_hamiltonian(h) -> np.ndarray:
    m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"Hamiltonian must be a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - np.diag(np.diagonal(m)))) > 1e-12 or np.max(np.abs(m.imag)) > 1e-12:
        raise ValueError("Hamiltonian must be real diagonal in the computational basis")
    return np.diag(np.diagonal(m).real).astype(float)


@dataclass(frozen=True)
class ThermalScenario:
    """Local Hamiltonians and temperatures for a two-body experiment."""

    h_a: np.ndarray
    h_b: np.ndarray
    t_a: float
    t_b: float
    k_boltzmann: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "h_a", _as_diagonal_hamiltonian(self.h_a))
        object.__setattr__(self, "h_b", _as_diagonal_hamiltonian(self.h_b))
        if self.t_a <= 0 or self.t_b <= 0:
            raise NonPositiveTemperature(
                f"temperatures must be positive, got {self.t_a}, {self.t_b}"
            )
        if self.k_boltzmann <= 0:
            raise ValueError("k_boltzmann must be positive")

    @property
    def beta_a(self) -> float:
        return 1.0 / (self.k_boltzmann * self.t_a)

    @property
    def beta_b(self) -> float:
        return 1.0 / (self.k_boltzmann * self.t_b)

    def joint_hamiltonian(self) -> np.ndarray:
        d_a = self.h_a.shape[0]
        d_b = self.h_b.shape[0]
        return np.kron(self.h_a, np.eye(d_b)) + np.kron(np.eye(d_a), self.h_b)


def qubit_scenario(t_a: float, t_b: float, gap: float = 1.0, k: float = 1.0) -> ThermalScenario:
    """Two qubits with levels (0, gap) on each side."""
    h = np.diag([0.0, gap])
    return ThermalScenario(h_a=h, h_b=h, t_a=t_a, t_b=t_b, k_boltzmann=k)


def gibbs_state(h, t: float, k: float = 1.0) -> np.ndarray:
    """Thermal state exp(-H/kT)/Z as a diagonal matrix."""
    hm = _as_diagonal_hamiltonian(h)
    if t <= 0:
        raise NonPositiveTemperature(f"temperature must be positive, got {t}")
    e = np.diagonal(hm).copy()
    w = np.exp(-(e - e.min()) / (k * t))
    return np.diag(w / w.sum())


def free_energy(rho, h, t: float, k: float = 1.0) -> float:
    """F[rho] = tr(rho H) - kT S(rho), entropy in nats.

    Minimized over all states by the Gibbs state at (H, T), where it equals
    -kT ln Z.
    """
    m = _state_matrix(rho)
    hm = _as_diagonal_hamiltonian(h)
    if m.shape != hm.shape:
        raise ValueError(f"state shape {m.shape} does not match Hamiltonian {hm.shape}")
    if t <= 0:
        raise NonPositiveTemperature(f"temperature must be positive, got {t}")
    return float(np.real(np.trace(m @ hm))) - k * t * _entropy_nats(m)


def szilard_work(rho: DensityMatrix, t: float, k: float = 1.0) -> float:
    """Work extractable by feeding both marginals to an engine at temperature t.

    kT (ln(d_a d_b) - S(rho_A) - S(rho_B)), entropies in nats.
    """
    s_a = _entropy_nats(partial_trace(rho, "A"))
    s_b = _entropy_nats(partial_trace(rho, "B"))
    return k * t * (math.log(rho.dims.n) - s_a - s_b)


def _i_min_bits(rho: DensityMatrix) -> float:
    lam = spectrum_of(rho)
    if rho.dims.d_a == 2 and rho.dims.d_b == 2:
        return i_min_two_qubit(lam)
    if rho.dims.n > 16:
        raise TooLarge("orbit minimum enumeration capped at 16-dimensional systems")
    return build_rho_min(lam, rho.dims).qmi()


def refinery_gain(rho: DensityMatrix, t: float, k: float = 1.0) -> float:
    """Best extra work from pre-processing correlated fuel with a global unitary.

    kT (I(rho) - I_min) in nats: purity localized into the marginals by
    moving to the least correlated orbit member.  Zero for product states.
    """
    gain = k * t * (mutual_information(rho) - _i_min_bits(rho)) * LN2
    return max(0.0, gain)


def _check_thermal_marginals(rho: DensityMatrix, sc: ThermalScenario) -> None:
    g_a = gibbs_state(sc.h_a, sc.t_a, sc.k_boltzmann)
    g_b = gibbs_state(sc.h_b, sc.t_b, sc.k_boltzmann)
    dev_a = np.max(np.abs(partial_trace(rho, "A") - g_a))
    dev_b = np.max(np.abs(partial_trace(rho, "B") - g_b))
    if dev_a > THERMAL_TOL or dev_b > THERMAL_TOL:
        raise MarginalsNotThermal(
            f"marginal deviation from Gibbs states: A {dev_a:.3g}, B {dev_b:.3g}"
        )


@dataclass(frozen=True)
class HeatFlowReport:
    """Outcome of one energy-conserving interaction between locally thermal bodies."""

    q_a: float
    delta_i: float  # nats
    bound_satisfied: bool
    anomalous: bool
    witness_triggered: bool

    def to_json_dict(self) -> dict:
        return {
            "q_a": self.q_a,
            "delta_i_nats": self.delta_i,
            "bound_satisfied": self.bound_satisfied,
            "anomalous": self.anomalous,
            "witness_triggered": self.witness_triggered,
        }


def heat_flow_bound_check(
    before: DensityMatrix, after: DensityMatrix, sc: ThermalScenario
) -> HeatFlowReport:
    """Check Q_A (beta_A - beta_B) >= Delta I for one evolution.

    Requires thermal marginals before the interaction, conserved expected
    energy, and a shared spectrum (the evolution must be a closed-system
    unitary).  Heat into A is the change of tr(rho_A H_A).
    """
    if before.dims != after.dims:
        raise WrongDimension("before and after states must share dimensions")
    _check_thermal_marginals(before, sc)
    h = sc.joint_hamiltonian()
    e_before = float(np.real(np.trace(before.matrix @ h)))
    e_after = float(np.real(np.trace(after.matrix @ h)))
    if abs(e_before - e_after) > ENERGY_TOL:
        raise EnergyNotConserved(f"energy changed by {e_after - e_before:.3g}")
    lam_before = spectrum_of(before).values
    lam_after = spectrum_of(after).values
    if np.max(np.abs(lam_before - lam_after)) > SPECTRUM_TOL:
        raise SpectrumMismatch("states do not share a spectrum within tolerance")

    q_a = float(
        np.real(np.trace((partial_trace(after, "A") - partial_trace(before, "A")) @ sc.h_a))
    )
    delta_i = (mutual_information(after) - mutual_information(before)) * LN2
    bound_satisfied = q_a * (sc.beta_a - sc.beta_b) >= delta_i - BOUND_SLACK
    anomalous = (sc.t_a <= sc.t_b and q_a < -1e-10) or (sc.t_a > sc.t_b and q_a > 1e-10)
    beta_gap = abs(sc.beta_a - sc.beta_b)
    if beta_gap > 1e-12:
        threshold = math.log(min(before.dims.d_a, before.dims.d_b)) / beta_gap
        witness_triggered = anomalous and abs(q_a) > threshold
    else:
        witness_triggered = False
    return HeatFlowReport(
        q_a=q_a,
        delta_i=delta_i,
        bound_satisfied=bound_satisfied,
        anomalous=anomalous,
        witness_triggered=witness_triggered,
    )


@dataclass(frozen=True)
class AnomalousHeatBound:
    """Upper bound on cold-to-hot heat transfer and the entanglement witness level."""

    max_heat: float
    witness_threshold: float
    qmi_nats: float
    i_min_nats: float
    qmi_source: str  # "state" or "spectrum-worst-case"

    def to_json_dict(self) -> dict:
        return {
            "max_anomalous_heat": self.max_heat,
            "witness_threshold": self.witness_threshold,
            "qmi_nats": self.qmi_nats,
            "i_min_nats": self.i_min_nats,
            "qmi_source": self.qmi_source,
        }


def max_anomalous_heat(initial, sc: ThermalScenario) -> AnomalousHeatBound:
    """Bound anomalous heat by the largest reversible correlation loss.

    |Q_A| <= (I - I_min) / |beta_A - beta_B|, with I taken from the supplied
    state, or from the orbit maximum as worst case when only a spectrum is
    given.  Also reports the heat level above which the initial state must
    have been entangled: ln(min(d_a, d_b)) / |beta_A - beta_B|.
    """
    if sc.h_a.shape != (2, 2) or sc.h_b.shape != (2, 2):
        raise WrongDimension("anomalous heat bound implemented for two qubits")
    beta_gap = abs(sc.beta_a - sc.beta_b)
    if beta_gap < 1e-12:
        raise EqualTemperatures("bound diverges as the temperatures coincide")

    if isinstance(initial, DensityMatrix):
        if initial.dims.d_a != 2 or initial.dims.d_b != 2:
            raise WrongDimension("anomalous heat bound implemented for two qubits")
        _check_thermal_marginals(initial, sc)
        lam = spectrum_of(initial)
        qmi_nats = mutual_information(initial) * LN2
        source = "state"
    else:
        lam = as_spectrum(initial)
        point = MarginalPoint(
            _thermal_smaller_eigenvalue(sc.h_a, sc.t_a, sc.k_boltzmann),
            _thermal_smaller_eigenvalue(sc.h_b, sc.t_b, sc.k_boltzmann),
        )
        if not contains(MarginalRegion(lam), point):
            raise InfeasibleMarginals(
                "no state of this spectrum has the requested thermal marginals"
            )
        qmi_nats = i_max(lam, (2, 2)) * LN2
        source = "spectrum-worst-case"

    i_min_nats = i_min_two_qubit(lam) * LN2
    bound = max(0.0, qmi_nats - i_min_nats) / beta_gap
    threshold = math.log(2.0) / beta_gap
    return AnomalousHeatBound(
        max_heat=bound,
        witness_threshold=threshold,
        qmi_nats=qmi_nats,
        i_min_nats=i_min_nats,
        qmi_source=source,
    )


def _thermal_smaller_eigenvalue(h: np.ndarray, t: float, k: float) -> float:
    return float(np.min(np.diagonal(gibbs_state(h, t, k))).real)


# ---------------------------------------------------------------------------
# Collision model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollisionStep:
    step: int
    s_a: float  # nats
    s_b: float  # nats
    t_a: float  # effective temperature from diagonal populations
    t_b: float
    qmi: float  # nats, after the unitary, before decorrelation
    q_a: float


@dataclass(frozen=True)
class CollisionTrace:
    """Per-collision record of entropies, effective temperatures, and heat."""

    steps: list[CollisionStep] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["step,s_a,s_b,t_a,t_b,qmi,q_a"]
        for rec in self.steps:
            lines.append(
                f"{rec.step},{rec.s_a:.6g},{rec.s_b:.6g},{rec.t_a:.6g},"
                f"{rec.t_b:.6g},{rec.qmi:.6g},{rec.q_a:.6g}"
            )
        return "\n".join(lines) + "\n"


def _effective_temperature(marginal: np.ndarray, h: np.ndarray, k: float) -> float:
    """Temperature matching the diagonal populations of a qubit marginal.

    The marginal need not be Gibbs; this is the effective value implied by
    the population ratio, infinite when populations match.
    """
    p = np.clip(np.diagonal(marginal).real, 1e-300, None)
    gap = h[1, 1] - h[0, 0]
    ratio = p[0] / p[1]
    if ratio <= 1.0:
        return math.inf if ratio == 1.0 else gap / (k * math.log(ratio))
    return gap / (k * math.log(ratio))


UNITARY_CHOICES = ("partial-swap", "random-strong")
DECORRELATION_MODES = ("full-product", "dephase-to-minimal")

_SWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)


def partial_swap_unitary(theta: float) -> np.ndarray:
    """exp(i theta SWAP) = cos(theta) I + i sin(theta) SWAP on two qubits."""
    return math.cos(theta) * np.eye(4, dtype=complex) + 1j * math.sin(theta) * _SWAP


def collision_simulate(
    sc: ThermalScenario,
    n_steps: int,
    unitary: str = "partial-swap",
    mode: str = "full-product",
    theta: float = 0.3,
    rng=0,
) -> CollisionTrace:
    """Repeated two-qubit collisions with a decorrelation step after each.

    Each collision applies an energy-conserving unitary to the current
    joint state, then either rebuilds the product of the new marginals
    (``full-product``) or drops all coherences in the joint energy
    eigenbasis (``dephase-to-minimal``), which leaves a classically
    correlated state; for the unitaries offered here that state is
    minimally correlated on its own orbit.  The trace records entropies
    (nats), effective local temperatures, the pre-decorrelation mutual
    information (nats), and the heat into A, per collision.
    """
    if sc.h_a.shape != (2, 2) or sc.h_b.shape != (2, 2):
        raise WrongDimension("collision model implemented for two qubits")
    if mode not in DECORRELATION_MODES:
        raise ValueError(f"mode must be one of {DECORRELATION_MODES}, got {mode!r}")
    if unitary not in UNITARY_CHOICES:
        raise ValueError(f"unitary must be one of {UNITARY_CHOICES}, got {unitary!r}")
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    gen = as_rng(rng)
    levels = np.diagonal(sc.joint_hamiltonian()).copy()

    if unitary == "partial-swap":
        gap_a = sc.h_a[1, 1] - sc.h_a[0, 0]
        gap_b = sc.h_b[1, 1] - sc.h_b[0, 0]
        if abs(gap_a - gap_b) > 1e-10:
            raise EnergyNotConserved(
                "partial swap conserves energy only for matched level spacings"
            )
        u_fixed = partial_swap_unitary(theta)

    def next_unitary() -> np.ndarray:
        if unitary == "partial-swap":
            return u_fixed
        return energy_block_unitary(levels, gen)

    joint = np.kron(
        gibbs_state(sc.h_a, sc.t_a, sc.k_boltzmann),
        gibbs_state(sc.h_b, sc.t_b, sc.k_boltzmann),
    ).astype(complex)

    def marginals(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        t = m.reshape(2, 2, 2, 2)
        return np.einsum("abcb->ac", t), np.einsum("abac->bc", t)

    def record(step: int, m: np.ndarray, qmi_nats: float, q_a: float) -> CollisionStep:
        rho_a, rho_b = marginals(m)
        return CollisionStep(
            step=step,
            s_a=entropy_bits(np.linalg.eigvalsh(rho_a)) * LN2,
            s_b=entropy_bits(np.linalg.eigvalsh(rho_b)) * LN2,
            t_a=_effective_temperature(rho_a, sc.h_a, sc.k_boltzmann),
            t_b=_effective_temperature(rho_b, sc.h_b, sc.k_boltzmann),
            qmi=qmi_nats,
            q_a=q_a,
        )

    def qmi_nats_of(m: np.ndarray) -> float:
        rho_a, rho_b = marginals(m)
        s_a = entropy_bits(np.linalg.eigvalsh(rho_a))
        s_b = entropy_bits(np.linalg.eigvalsh(rho_b))
        s_ab = entropy_bits(np.linalg.eigvalsh(m))
        return max(0.0, s_a + s_b - s_ab) * LN2

    steps = [record(0, joint, qmi_nats_of(joint), 0.0)]
    for step in range(1, n_steps + 1):
        u = next_unitary()
        rho_a_before, _ = marginals(joint)
        tau = u @ joint @ u.conj().T
        rho_a_after, rho_b_after = marginals(tau)
        q_a = float(np.real(np.trace((rho_a_after - rho_a_before) @ sc.h_a)))
        qmi_nats = qmi_nats_of(tau)
        # Hermitize and renormalize at the decorrelation step: the kron
        # doubles anti-Hermitian and trace errors every collision, which
        # compounds exponentially over hundreds of steps.
        if mode == "full-product":
            clean_a = (rho_a_after + rho_a_after.conj().T) / 2.0
            clean_b = (rho_b_after + rho_b_after.conj().T) / 2.0
            joint = np.kron(
                clean_a / np.trace(clean_a).real, clean_b / np.trace(clean_b).real
            )
        else:
            pops = np.diagonal(tau).real
            joint = np.diag(pops / pops.sum()).astype(complex)
        steps.append(record(step, joint, qmi_nats, q_a))
    return CollisionTrace(steps=steps)
