"""Extremal mutual information on the unitary orbit of a bipartite state.

The orbit of a state is fixed by its spectrum.  The most correlated orbit
member mixes a maximally entangled basis with the eigenvalues as weights;
the least correlated one is classical, with the sorted eigenvalues placed
on a d_a x d_b grid according to one of a small irreducible set of
arrangements (index grids increasing along rows and columns).  Two-qubit
closed forms and energy-constrained variants are provided, together with
Monte-Carlo sampling of the orbit and a derivative-free search over
energy-preserving unitaries.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EnergyMismatch,
    EnergyOutOfRange,
    IndexMismatch,
    RankExceedsBellSpace,
    TooLarge,
    WrongDimension,
)
from .marginal2q import MarginalPoint
from .qcore import (
    BipartiteDims,
    DensityMatrix,
    Spectrum,
    _as_dims,
    as_rng,
    as_spectrum,
    binary_entropy,
    entropy_bits,
    haar_unitaries,
    haar_unitary,
    spectrum_of,
)

ENUMERATION_CAP = 16
_ZERO_EIGENVALUE = 1e-12

# Two-qubit level convention: H_A = H_B = |1><1|, so the joint levels are
# 0, 1, 1, 2 on |00>, |01>, |10>, |11>.
TWO_QUBIT_LEVELS = np.array([0.0, 1.0, 1.0, 2.0])


# ---------------------------------------------------------------------------
# Maximally correlated construction
# ---------------------------------------------------------------------------

def generalized_bell_basis(dims) -> list[np.ndarray]:
    """Orthonormal maximally entangled states on the d x d sub-block, d = min(d_a, d_b).

    Clock-and-shift construction: basis vector (a, b) has components
    omega^(b j) / sqrt(d) on |j>_A |j+a mod d>_B, omega = exp(2 pi i / d).
    Returns d^2 vectors of full length d_a * d_b, ordered by i = a d + b.
    """
    dims = _as_dims(dims)
    d = min(dims.d_a, dims.d_b)
    omega = np.exp(2j * np.pi / d)
    basis = []
    for a in range(d):
        for b in range(d):
            vec = np.zeros(dims.n, dtype=complex)
            for j in range(d):
                vec[j * dims.d_b + (j + a) % d] = omega ** (b * j) / math.sqrt(d)
            basis.append(vec)
    return basis


def build_rho_max(spectrum, dims) -> DensityMatrix:
    """Most correlated orbit member: eigenvalue-weighted maximally entangled basis.

    Only (min(d_a, d_b))^2 basis states exist, so a spectrum with more
    nonzero eigenvalues than that cannot be placed and raises
    RankExceedsBellSpace (only possible when d_a != d_b).
    """
    dims = _as_dims(dims)
    lam = as_spectrum(spectrum)
    if len(lam) != dims.n:
        raise IndexMismatch(f"spectrum length {len(lam)} does not match dims {dims}")
    n_prime = min(dims.d_a, dims.d_b) ** 2
    rank = int(np.sum(lam.values > _ZERO_EIGENVALUE))
    if rank > n_prime:
        raise RankExceedsBellSpace(
            f"spectrum rank {rank} exceeds the {n_prime}-dimensional entangled basis"
        )
    basis = generalized_bell_basis(dims)
    m = np.zeros((dims.n, dims.n), dtype=complex)
    for weight, vec in zip(lam.values[:n_prime], basis):
        if weight > 0.0:
            m += weight * np.outer(vec, vec.conj())
    return DensityMatrix(m, dims)


def i_max(spectrum, dims) -> float:
    """Largest mutual information on the orbit: 2 log2 min(d_a, d_b) - H(spectrum)."""
    dims = _as_dims(dims)
    lam = as_spectrum(spectrum)
    return 2.0 * math.log2(min(dims.d_a, dims.d_b)) - entropy_bits(lam.values)


# ---------------------------------------------------------------------------
# Classical arrangements and the minimally correlated state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tableau:
    """Assignment of spectrum indices 1..N to a d_a x d_b grid.

    Rows and columns must strictly increase, so that placing a
    non-increasing spectrum puts larger eigenvalues up and to the left.
    """

    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(int(v) for v in row) for row in self.grid)
        object.__setattr__(self, "grid", grid)
        rows = len(grid)
        if rows == 0 or any(len(row) != len(grid[0]) for row in grid):
            raise ValueError("grid must be a non-empty rectangle")
        cols = len(grid[0])
        flat = [v for row in grid for v in row]
        if sorted(flat) != list(range(1, rows * cols + 1)):
            raise ValueError("grid must contain each index 1..N exactly once")
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols and grid[r][c] >= grid[r][c + 1]:
                    raise ValueError("row entries must strictly increase")
                if r + 1 < rows and grid[r][c] >= grid[r + 1][c]:
                    raise ValueError("column entries must strictly increase")

    @property
    def d_a(self) -> int:
        return len(self.grid)

    @property
    def d_b(self) -> int:
        return len(self.grid[0])

    @property
    def n(self) -> int:
        return self.d_a * self.d_b

    def transpose(self) -> "Tableau":
        return Tableau(tuple(zip(*self.grid)))


@functools.cache
def _syt_grids(rows: int, cols: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All fillings of a rows x cols rectangle increasing along rows and columns."""
    results = []
    counts = [0] * rows
    grid = [[0] * cols for _ in range(rows)]

    def place(value: int) -> None:
        if value > rows * cols:
            results.append(tuple(tuple(r) for r in grid))
            return
        for r in range(rows):
            c = counts[r]
            if c < cols and (r == 0 or counts[r - 1] > c):
                grid[r][c] = value
                counts[r] += 1
                place(value + 1)
                counts[r] -= 1
                grid[r][c] = 0

    place(1)
    return tuple(sorted(results))


def enumerate_tableaux(dims) -> list[Tableau]:
    """The irreducible candidate arrangements for the orbit minimum.

    All index grids increasing along rows and columns; for square shapes
    each transpose pair collapses to its lexicographically smaller member
    (transposing only swaps the two marginals).  Sizes above 16 cells are
    refused.
    """
    dims = _as_dims(dims)
    if dims.n > ENUMERATION_CAP:
        raise TooLarge(f"enumeration capped at {ENUMERATION_CAP} cells, got {dims.n}")
    grids = _syt_grids(dims.d_a, dims.d_b)
    if dims.d_a == dims.d_b:
        grids = [g for g in grids if g <= tuple(zip(*g))]
    return [Tableau(g) for g in grids]


def grid_qmi(grid, spectrum) -> float:
    """Mutual information of the classical state placing spectrum entries by grid.

    H(row sums) + H(column sums) - H(spectrum), in bits.  ``grid`` is any
    rectangular arrangement of the indices 1..N (not necessarily a valid
    Tableau); this is the raw objective minimized over arrangements.
    Sums use fsum, so equivalent arrangements agree bitwise.
    """
    lam = as_spectrum(spectrum)
    rows = [[lam.values[i - 1] for i in row] for row in grid]
    n_cells = sum(len(r) for r in rows)
    if n_cells != len(lam):
        raise IndexMismatch(f"grid has {n_cells} cells but spectrum has {len(lam)}")
    row_sums = [math.fsum(r) for r in rows]
    col_sums = [math.fsum(col) for col in zip(*rows)]
    return entropy_bits(row_sums) + entropy_bits(col_sums) - entropy_bits(lam.values)


def classical_state_qmi(tableau: Tableau, spectrum) -> float:
    """Mutual information of the classical state defined by a tableau."""
    lam = as_spectrum(spectrum)
    if tableau.n != len(lam):
        raise IndexMismatch(
            f"tableau has {tableau.n} cells but spectrum has {len(lam)} entries"
        )
    return grid_qmi(tableau.grid, lam)


@dataclass(frozen=True)
class ClassicalState:
    """Product-basis-diagonal state defined by a tableau and a spectrum."""

    tableau: Tableau
    spectrum: Spectrum
    basis_a: str = "computational"
    basis_b: str = "computational"

    def qmi(self) -> float:
        return classical_state_qmi(self.tableau, self.spectrum)

    def marginal_a(self) -> np.ndarray:
        """Row sums: the spectrum of the reduced state on A."""
        lam = self.spectrum.values
        return np.array([math.fsum(lam[i - 1] for i in row) for row in self.tableau.grid])

    def marginal_b(self) -> np.ndarray:
        lam = self.spectrum.values
        return np.array(
            [math.fsum(lam[i - 1] for i in col) for col in zip(*self.tableau.grid)]
        )

    def to_density_matrix(self) -> DensityMatrix:
        dims = BipartiteDims(self.tableau.d_a, self.tableau.d_b)
        diag = np.zeros(dims.n)
        for j, row in enumerate(self.tableau.grid):
            for k, idx in enumerate(row):
                diag[j * dims.d_b + k] = self.spectrum.values[idx - 1]
        return DensityMatrix(np.diag(diag), dims)


def build_rho_min(spectrum, dims) -> ClassicalState:
    """Least correlated orbit member: best arrangement from the candidate set.

    Ties break toward the lexicographically smaller grid (the minimizer is
    not unique in general).
    """
    dims = _as_dims(dims)
    lam = as_spectrum(spectrum)
    if len(lam) != dims.n:
        raise IndexMismatch(f"spectrum length {len(lam)} does not match dims {dims}")
    best = None
    best_value = math.inf
    for tab in enumerate_tableaux(dims):
        value = classical_state_qmi(tab, lam)
        if value < best_value:
            best, best_value = tab, value
    return ClassicalState(tableau=best, spectrum=lam)


# ---------------------------------------------------------------------------
# Two-qubit closed forms
# ---------------------------------------------------------------------------

def _require_two_qubits(lam: Spectrum) -> Spectrum:
    if len(lam) != 4:
        raise WrongDimension(f"two-qubit formula needs 4 eigenvalues, got {len(lam)}")
    return lam


def i_min_two_qubit(spectrum) -> float:
    """Closed form for the two-qubit orbit minimum: H(l1+l2) + H(l1+l3) - H(spectrum)."""
    lam = _require_two_qubits(as_spectrum(spectrum))
    l1, l2, l3, _ = lam.values
    return (
        binary_entropy(min(l1 + l2, 1.0))
        + binary_entropy(min(l1 + l3, 1.0))
        - entropy_bits(lam.values)
    )


def delta_i_max_unitary(spectrum) -> float:
    """Largest two-qubit correlation change under any unitary: 2 - H(l1+l2) - H(l1+l3)."""
    lam = _require_two_qubits(as_spectrum(spectrum))
    l1, l2, l3, _ = lam.values
    return 2.0 - binary_entropy(min(l1 + l2, 1.0)) - binary_entropy(min(l1 + l3, 1.0))


def delta_i_max_energy(spectrum, energy: float) -> float:
    """Largest two-qubit correlation change at fixed expected energy.

    2 H(E/2) - H(l1+l2) - H(l1+l3) with levels 0/1 on both qubits, so
    E ranges over [0, 2]; E = 1 recovers the unconstrained formula.
    """
    lam = _require_two_qubits(as_spectrum(spectrum))
    e = float(energy)
    if e < 0.0 or e > 2.0:
        raise EnergyOutOfRange(f"energy {e} outside [0, 2]")
    l1, l2, l3, _ = lam.values
    return (
        2.0 * binary_entropy(e / 2.0)
        - binary_entropy(min(l1 + l2, 1.0))
        - binary_entropy(min(l1 + l3, 1.0))
    )


# ---------------------------------------------------------------------------
# Aggregated result
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremalResult:
    """Both orbit extrema for one spectrum, entropies in bits."""

    spectrum: Spectrum
    dims: BipartiteDims
    i_min: float
    i_max: float
    delta_i_max: float
    minimizer: ClassicalState
    maximizer: DensityMatrix

    def to_json_dict(self, energy: float | None = None) -> dict:
        out = {
            "spectrum": self.spectrum.to_json(),
            "i_min_bits": self.i_min,
            "i_max_bits": self.i_max,
            "delta_i_max_bits": self.delta_i_max,
            "minimizing_tableau": [list(row) for row in self.minimizer.tableau.grid],
        }
        if energy is not None:
            out["energy"] = float(energy)
        return out


def extremal_correlations(spectrum, dims) -> ExtremalResult:
    """Compute both extrema and their achieving states for one spectrum."""
    dims = _as_dims(dims)
    lam = as_spectrum(spectrum)
    minimizer = build_rho_min(lam, dims)
    maximizer = build_rho_max(lam, dims)
    lo = minimizer.qmi()
    hi = i_max(lam, dims)
    return ExtremalResult(
        spectrum=lam,
        dims=dims,
        i_min=lo,
        i_max=hi,
        delta_i_max=hi - lo,
        minimizer=minimizer,
        maximizer=maximizer,
    )


# ---------------------------------------------------------------------------
# Orbit sampling
# ---------------------------------------------------------------------------

def sample_orbit_qmi(spectrum, dims, n_samples: int, rng) -> list[tuple[float, MarginalPoint | None]]:
    """Mutual information (and, for 2x2, the marginal pair) of Haar orbit samples.

    Draws n_samples Haar unitaries U and evaluates U diag(spectrum) U^dag.
    The joint entropy is the spectrum entropy, so only local eigenvalues
    are computed per sample.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    dims = _as_dims(dims)
    lam = as_spectrum(spectrum)
    if len(lam) != dims.n:
        raise IndexMismatch(f"spectrum length {len(lam)} does not match dims {dims}")
    gen = as_rng(rng)
    s_joint = entropy_bits(lam.values)
    two_qubits = dims.d_a == 2 and dims.d_b == 2
    out: list[tuple[float, MarginalPoint | None]] = []
    chunk = 4096
    remaining = n_samples
    while remaining > 0:
        m = min(chunk, remaining)
        remaining -= m
        us = haar_unitaries(dims.n, m, gen)
        taus = (us * lam.values[None, None, :]) @ us.conj().transpose(0, 2, 1)
        t = taus.reshape(m, dims.d_a, dims.d_b, dims.d_a, dims.d_b)
        rho_a = np.einsum("mabcb->mac", t)
        rho_b = np.einsum("mabac->mbc", t)
        ev_a = np.linalg.eigvalsh(rho_a)
        ev_b = np.linalg.eigvalsh(rho_b)
        p_a = np.clip(ev_a, 0.0, 1.0)
        p_b = np.clip(ev_b, 0.0, 1.0)
        s_a = (-p_a * np.log2(np.where(p_a > 0.0, p_a, 1.0))).sum(axis=-1)
        s_b = (-p_b * np.log2(np.where(p_b > 0.0, p_b, 1.0))).sum(axis=-1)
        qmi = np.maximum(0.0, s_a + s_b - s_joint)
        for i in range(m):
            point = (
                MarginalPoint(min(ev_a[i, 0], 0.5), min(ev_b[i, 0], 0.5))
                if two_qubits
                else None
            )
            out.append((float(qmi[i]), point))
    return out


# ---------------------------------------------------------------------------
# Energy-conserving unitaries
# ---------------------------------------------------------------------------

def energy_block_unitary(levels, rng) -> np.ndarray:
    """Haar unitary on each degenerate eigenspace of a diagonal Hamiltonian.

    The result commutes with diag(levels) by construction.
    """
    levels = np.asarray(levels, dtype=float).reshape(-1)
    gen = as_rng(rng)
    n = levels.size
    u = np.zeros((n, n), dtype=complex)
    order = np.argsort(levels, kind="stable")
    start = 0
    while start < n:
        stop = start
        while stop < n and abs(levels[order[stop]] - levels[order[start]]) <= 1e-9:
            stop += 1
        block = order[start:stop]
        u[np.ix_(block, block)] = haar_unitary(block.size, gen)
        start = stop
    return u


def strong_energy_unitary(dims, rng) -> np.ndarray:
    """Random two-qubit unitary commuting with H_A + H_B (levels 0, 1, 1, 2)."""
    dims = _as_dims(dims)
    if dims.d_a != 2 or dims.d_b != 2:
        raise WrongDimension("strong energy-conserving sampling is two-qubit only")
    return energy_block_unitary(TWO_QUBIT_LEVELS, rng)


# ---------------------------------------------------------------------------
# Weak-energy-conserving optimization (numerical cross-check)
# ---------------------------------------------------------------------------

def _unitary_from_params(c: np.ndarray) -> np.ndarray:
    """exp(i C) with C the Hermitian 4x4 built from 16 real parameters."""
    h = np.zeros((4, 4), dtype=complex)
    h[np.diag_indices(4)] = c[:4]
    k = 4
    for i in range(4):
        for j in range(i + 1, 4):
            h[i, j] = c[k] + 1j * c[k + 1]
            h[j, i] = c[k] - 1j * c[k + 1]
            k += 2
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _qmi_of_matrix(tau: np.ndarray, s_joint: float) -> float:
    t = tau.reshape(2, 2, 2, 2)
    rho_a = np.einsum("abcb->ac", t)
    rho_b = np.einsum("abac->bc", t)
    s_a = entropy_bits(np.linalg.eigvalsh(rho_a))
    s_b = entropy_bits(np.linalg.eigvalsh(rho_b))
    return max(0.0, s_a + s_b - s_joint)


# Level pairs used to steer the expected energy; (0, 3) spans the full gap.
_REPAIR_PAIRS = ((0, 3), (0, 1), (1, 3), (0, 2), (2, 3))


def _rotation(i: int, j: int, s: float) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    c_, s_ = math.cos(s), math.sin(s)
    u[i, i] = c_
    u[j, j] = c_
    u[i, j] = -s_
    u[j, i] = s_
    return u


def _repair_energy(tau: np.ndarray, target: float) -> np.ndarray:
    """Rotate a state back onto the energy shell tr(tau H) = target.

    For a rotation by angle s in the (i, j) plane the energy is
    A + B cos(2s) + C sin(2s), so the angle solves in closed form whenever
    the target is within reach of the pair; otherwise the rotation moving
    closest to the target is applied and the next pair continues.
    """
    h = TWO_QUBIT_LEVELS
    for _ in range(4):
        e0 = math.fsum((tau[k, k].real * h[k] for k in range(4)))
        if abs(e0 - target) <= 1e-12:
            return tau
        best_step = None  # (residual, i, j, angle)
        for i, j in _REPAIR_PAIRS:
            gap = h[j] - h[i]
            half = gap * float(np.real(tau[i, i] - tau[j, j])) / 2.0
            a = e0 + half
            b = -half
            c = gap * float(np.real(tau[i, j]))
            radius = math.hypot(b, c)
            if radius < 1e-15:
                continue
            phi = math.atan2(c, b)
            want = target - a
            if abs(want) <= radius:
                delta = math.acos(max(-1.0, min(1.0, want / radius)))
                angles = [0.5 * (phi + delta), 0.5 * (phi - delta)]
                angles = [((s + math.pi / 2) % math.pi) - math.pi / 2 for s in angles]
                angle = min(angles, key=abs)
                best_step = (0.0, i, j, angle)
                break
            # Out of reach: the extreme of the sinusoid nearest the target.
            theta = phi if want > 0 else phi + math.pi
            reach = a + radius if want > 0 else a - radius
            residual = abs(target - reach)
            if best_step is None or residual < best_step[0]:
                best_step = (residual, i, j, ((theta / 2 + math.pi / 2) % math.pi) - math.pi / 2)
        if best_step is None:
            return tau
        _, i, j, angle = best_step
        u = _rotation(i, j, angle)
        tau = u @ tau @ u.conj().T
    return tau


def optimize_qmi_weak_energy(
    rho: DensityMatrix,
    energy: float,
    direction: str,
    budget: int = 10_000,
    rng=0,
    n_restarts: int = 32,
) -> tuple[float, DensityMatrix]:
    """Numerically extremize mutual information over energy-preserving unitaries.

    Random-restart coordinate descent on the 16 generator coefficients of
    U(4) with an annealed quadratic penalty on |tr(U rho U^dag H) - energy|
    (levels 0, 1, 1, 2): exploration starts nearly unconstrained and each
    phase stiffens the penalty, a polish phase refines the best candidate,
    and a closed-form rotation finally lands the state on the energy shell
    to ~1e-12.  ``budget`` caps objective evaluations across restarts.
    This is a cross-check against the closed-form bound, not a replacement.
    """
    if rho.dims.d_a != 2 or rho.dims.d_b != 2:
        raise WrongDimension("weak-energy optimization is two-qubit only")
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
    h = np.diag(TWO_QUBIT_LEVELS)
    e0 = float(np.real(np.trace(rho.matrix @ h)))
    target = float(energy)
    if abs(e0 - target) > 1e-8:
        raise EnergyMismatch(f"state energy {e0} does not match requested {target}")
    sign = 1.0 if direction == "max" else -1.0
    s_joint = entropy_bits(spectrum_of(rho).values)
    gen = as_rng(rng)

    evals = 0
    best = [sign * _qmi_of_matrix(rho.matrix, s_joint), np.zeros(16)]

    def raw(c: np.ndarray):
        u = _unitary_from_params(c)
        tau = u @ rho.matrix @ u.conj().T
        q = _qmi_of_matrix(tau, s_joint)
        viol = abs(float(np.real(np.trace(tau @ h))) - target)
        return q, viol, tau

    def score(c: np.ndarray, mu: float) -> float:
        nonlocal evals
        evals += 1
        q, viol, _ = raw(c)
        tracked = sign * q - 1e6 * viol * viol
        if tracked > best[0]:
            best[0], best[1] = tracked, c.copy()
        return sign * q - mu * viol * viol

    def descend(c: np.ndarray, n_evals: int, mu0: float, mu1: float, step0: float) -> None:
        nonlocal evals
        stop = min(budget, evals + n_evals)
        start = evals
        steps = np.full(16, step0)
        while evals < stop and steps.max() > 1e-8:
            frac = (evals - start) / max(1, n_evals)
            mu = mu0 * (mu1 / mu0) ** min(1.0, frac)
            current = score(c, mu)
            improved = False
            for k in range(16):
                if evals >= stop:
                    break
                for delta in (steps[k], -steps[k]):
                    trial = c.copy()
                    trial[k] += delta
                    s = score(trial, mu)
                    if s > current + 1e-15:
                        c, current = trial, s
                        improved = True
                        while evals < stop:
                            again = c.copy()
                            again[k] += delta
                            s2 = score(again, mu)
                            if s2 > current + 1e-15:
                                c, current = again, s2
                            else:
                                break
                        break
            if not improved:
                steps *= 0.5

    polish = max(200, budget // 6)
    main = budget - polish
    per_restart = max(64, main // max(1, n_restarts))
    for restart in range(n_restarts):
        if evals >= main:
            break
        c0 = np.zeros(16) if restart == 0 else gen.normal(scale=1.0, size=16)
        descend(c0, min(per_restart, main - evals), 10.0, 1e6, 0.5)
    descend(best[1].copy(), budget - evals, 1e7, 1e12, 0.08)

    _, _, tau = raw(best[1])
    tau = _repair_energy(tau, target)
    if abs(float(np.real(np.trace(tau @ h))) - target) > 1e-9:
        tau = rho.matrix  # repair failed; the input is the only sure on-shell state
    result = DensityMatrix(tau, rho.dims)
    return _qmi_of_matrix(result.matrix, s_joint), result
