"""Linear-algebra and information primitives for finite bipartite quantum states.

All entropies returned by this module are in bits (log base 2); the thermo
module converts to nats where thermodynamic conventions require it.
Entropy accumulation uses ``math.fsum`` so that the result depends only on
the multiset of probabilities, never on their ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotADistribution, NotAState

HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-10
TRACE_TOL = 1e-10
DISTRIBUTION_SUM_TOL = 1e-10
ENTRY_TOL = 1e-12
SPECTRUM_SUM_TOL = 1e-12


def as_rng(rng) -> np.random.Generator:
    """Coerce an integer seed (or an existing Generator) into a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class BipartiteDims:
    """Local dimensions (d_a, d_b) of a bipartite system."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if int(self.d_a) != self.d_a or int(self.d_b) != self.d_b:
            raise ValueError("dimensions must be integers")
        if self.d_a < 2 or self.d_b < 2:
            raise ValueError("each local dimension must be at least 2")

    @property
    def n(self) -> int:
        return self.d_a * self.d_b

    @classmethod
    def from_string(cls, text: str) -> "BipartiteDims":
        """Parse a dimension spec such as ``"2x3"``."""
        parts = text.lower().split("x")
        if len(parts) != 2:
            raise ValueError(f"cannot parse dimensions {text!r}; expected e.g. 2x2")
        return cls(int(parts[0]), int(parts[1]))


def _as_dims(dims) -> BipartiteDims:
    if isinstance(dims, BipartiteDims):
        return dims
    return BipartiteDims(*dims)


class Spectrum:
    """A probability vector stored in non-increasing order.

    The spectrum is the unitary-orbit invariant of a density matrix: any
    orbit member shares it.  Construction sorts the entries, clips entries
    in ``[-1e-12, 0)`` to zero, and validates normalization.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.size == 0:
            raise NotADistribution("spectrum is empty")
        if np.min(arr) < -ENTRY_TOL:
            raise NotADistribution(f"entry {np.min(arr)} below zero beyond tolerance")
        if np.max(arr) > 1.0 + ENTRY_TOL:
            raise NotADistribution(f"entry {np.max(arr)} above one beyond tolerance")
        arr = np.clip(arr, 0.0, 1.0)
        total = math.fsum(arr.tolist())
        if abs(total - 1.0) > SPECTRUM_SUM_TOL:
            raise NotADistribution(f"entries sum to {total}, not 1")
        arr = np.sort(arr)[::-1].copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.all(self.values == other.values)
        )

    def __repr__(self) -> str:
        return f"Spectrum({self.values.tolist()})"

    def to_json(self) -> list:
        return [float(v) for v in self.values]


def as_spectrum(values) -> Spectrum:
    """Coerce array-likes into a Spectrum (sorting included)."""
    if isinstance(values, Spectrum):
        return values
    return Spectrum(values)


class DensityMatrix:
    """A validated bipartite density matrix.

    Composite basis convention: index ``i = j * d_b + k`` labels
    ``|j>_A |k>_B``.  Validation enforces Hermiticity, positivity and unit
    trace at the module tolerances and raises :class:`NotAState` otherwise.
    """

    __slots__ = ("matrix", "dims")

    def __init__(self, matrix, dims):
        dims = _as_dims(dims)
        m = np.array(matrix, dtype=complex)
        n = dims.n
        if m.shape != (n, n):
            raise NotAState(f"matrix shape {m.shape} does not match dims {dims}")
        _validate_state_matrix(m)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return self.dims.n

    def to_json_dict(self) -> dict:
        return {
            "d_a": self.dims.d_a,
            "d_b": self.dims.d_b,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityMatrix":
        dims = BipartiteDims(int(data["d_a"]), int(data["d_b"]))
        m = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
        return cls(m, dims)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims.d_a}x{self.dims.d_b})"


def _validate_state_matrix(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotAState(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise NotAState("matrix is not Hermitian within tolerance")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotAState(f"trace is {tr}, not 1 within tolerance")
    w = np.linalg.eigvalsh(m)
    if w.min() < -POSITIVITY_TOL:
        raise NotAState(f"eigenvalue {w.min()} below zero beyond tolerance")


def _state_matrix(rho) -> np.ndarray:
    """Accept either a DensityMatrix or a bare (validated) matrix."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    m = np.asarray(rho, dtype=complex)
    _validate_state_matrix(m)
    return m


def entropy_bits(probs) -> float:
    """Shannon entropy in bits of a nonnegative vector, without validation.

    Entries at or below zero contribute nothing (0 log 0 := 0).  Uses fsum,
    so the value depends only on the multiset of entries.
    """
    total = math.fsum(
        -p * math.log2(p) for p in np.asarray(probs, dtype=float).reshape(-1) if p > 0.0
    )
    return max(0.0, total)


def shannon_entropy(p) -> float:
    """Shannon entropy in bits of a probability vector.

    Raises NotADistribution if entries dip below -1e-12 or the sum strays
    from 1 beyond 1e-10.
    """
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.size == 0:
        raise NotADistribution("empty distribution")
    if arr.min() < -ENTRY_TOL:
        raise NotADistribution(f"entry {arr.min()} below zero beyond tolerance")
    total = math.fsum(arr.tolist())
    if abs(total - 1.0) > DISTRIBUTION_SUM_TOL:
        raise NotADistribution(f"entries sum to {total}, not 1")
    return entropy_bits(arr)


def binary_entropy(x: float) -> float:
    """H(x) in bits for x in [0, 1]; tiny overshoot is clipped."""
    if x < -ENTRY_TOL or x > 1.0 + ENTRY_TOL:
        raise NotADistribution(f"binary argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return entropy_bits((x, 1.0 - x))


def spectrum_of(rho) -> Spectrum:
    """Eigenvalues of a density matrix, sorted non-increasing.

    Eigenvalues in [-1e-10, 0) are clipped to zero and the vector is
    renormalized.  Any state passing the matrix invariants stays within
    the renormalization window: clipping can raise the sum by at most
    n * 1e-10 on top of the 1e-10 trace tolerance.
    """
    m = _state_matrix(rho)
    w = np.linalg.eigvalsh(m)
    w = np.clip(w, 0.0, 1.0)
    total = math.fsum(w.tolist())
    if abs(total - 1.0) >= TRACE_TOL * (1 + w.size):
        raise NotAState(f"eigenvalues sum to {total}, not 1 within tolerance")
    if total != 1.0:
        w = w / total
    return Spectrum(w)


def partial_trace(rho: DensityMatrix, keep: str) -> np.ndarray:
    """Reduced state of subsystem ``keep`` ("A" or "B") as a plain matrix.

    Reduced states are not bipartite, so they are returned as bare
    d_mu x d_mu arrays rather than DensityMatrix instances.
    """
    d_a, d_b = rho.dims.d_a, rho.dims.d_b
    t = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    keep = keep.upper()
    if keep == "A":
        return np.einsum("abcb->ac", t)
    if keep == "B":
        return np.einsum("abac->bc", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits: -tr(rho log2 rho).

    Accepts a DensityMatrix or any matrix satisfying the state invariants.
    """
    m = _state_matrix(rho)
    w = np.linalg.eigvalsh(m)
    return entropy_bits(w)


def _entropy_of_valid_matrix(m: np.ndarray) -> float:
    # Skips invariant checks; for matrices valid by construction.
    return entropy_bits(np.linalg.eigvalsh(m))


def mutual_information(rho: DensityMatrix) -> float:
    """Quantum mutual information S(A) + S(B) - S(AB) in bits, clipped at 0."""
    s_a = _entropy_of_valid_matrix(partial_trace(rho, "A"))
    s_b = _entropy_of_valid_matrix(partial_trace(rho, "B"))
    s_ab = _entropy_of_valid_matrix(rho.matrix)
    return max(0.0, s_a + s_b - s_ab)


def haar_unitary(n: int, rng) -> np.ndarray:
    """One n x n unitary distributed with the Haar measure.

    QR decomposition of a complex Gaussian matrix, with the R diagonal
    phases absorbed so the distribution is exactly Haar.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    gen = as_rng(rng)
    z = (gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.abs(d)
    return q * phases


def haar_unitaries(n: int, count: int, rng) -> np.ndarray:
    """Stack of ``count`` independent Haar unitaries, shape (count, n, n)."""
    gen = as_rng(rng)
    z = (gen.standard_normal((count, n, n)) + 1j * gen.standard_normal((count, n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phases = d / np.abs(d)
    return q * phases[:, None, :]


def _check_distribution(arr: np.ndarray, name: str) -> np.ndarray:
    if arr.min() < -ENTRY_TOL:
        raise NotADistribution(f"{name}: entry {arr.min()} below zero beyond tolerance")
    total = math.fsum(arr.tolist())
    if abs(total - 1.0) > DISTRIBUTION_SUM_TOL:
        raise NotADistribution(f"{name}: entries sum to {total}, not 1")
    return np.clip(arr, 0.0, None)


def majorizes(x, y) -> bool:
    """True iff distribution x majorizes distribution y.

    Both vectors are sorted non-increasing (the shorter is zero-padded) and
    every partial sum of x must dominate the matching partial sum of y,
    with a 1e-10 numerical slack.
    """
    xa = _check_distribution(np.asarray(x, dtype=float).reshape(-1), "x")
    ya = _check_distribution(np.asarray(y, dtype=float).reshape(-1), "y")
    size = max(xa.size, ya.size)
    xa = np.pad(np.sort(xa)[::-1], (0, size - xa.size))
    ya = np.pad(np.sort(ya)[::-1], (0, size - ya.size))
    return bool(np.all(np.cumsum(xa) >= np.cumsum(ya) - DISTRIBUTION_SUM_TOL))
