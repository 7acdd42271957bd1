"""Bipartite density states from block matrices: PPT check and the explicit
separable decomposition carried by a canonical Gram decomposition.

States live on (block index) x (space), block index first.  A block matrix
passing the two-sided positivity test normalizes to a PPT state, because the
index swap is the partial transpose of the first factor; the canonical
decomposition upgrades PPT to an explicit separable form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, InputError
from .linalg import DEFAULT_TOL, Tolerance, adjoint, is_psd, require_square
from .stormer import CanonicalDecomposition, OperatorBlockMatrix

__all__ = [
    "DensityState",
    "SeparableDecomposition",
    "is_ppt",
    "partial_transpose",
    "partial_transpose_matrix",
    "separable_decomposition",
    "separable_state",
    "state_from_block",
]

# Fixed validity bands for density matrices (independent of per-call tolerance).
_HERM_EPS = 1e-10
_TRACE_EPS = 1e-10
_EIG_FLOOR = -1e-9


@dataclass(frozen=True)
class DensityState:
    """Normalized positive matrix on a bipartite space with dims (n, d)."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        n, d = self.dims
        m = require_square(self.matrix, "state matrix")
        if m.shape[0] != n * d:
            raise DimensionError(f"state of dims {self.dims} must be {n * d} x {n * d}")
        scale = 1.0 + float(np.abs(m).max())
        if np.abs(m - adjoint(m)).max() > _HERM_EPS * scale:
            raise DomainError("state matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > _TRACE_EPS * scale:
            raise DomainError("state matrix must have unit trace")
        if np.linalg.eigvalsh(0.5 * (m + adjoint(m)))[0] < _EIG_FLOOR * scale:
            raise DomainError("state matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)


def state_from_block(x: OperatorBlockMatrix, tol: Tolerance = DEFAULT_TOL) -> DensityState:
    """Normalize a PSD block matrix to a density state on (n) x (d)."""
    m = x.assembled()
    if not is_psd(m, tol):
        raise DomainError("block matrix is not PSD; cannot form a state")
    tr = float(np.trace(m).real)
    if tr <= tol.threshold_for(m):
        raise DomainError("block matrix has (numerically) zero trace")
    rho = 0.5 * (m + adjoint(m)) / tr
    return DensityState((x.n, x.d), rho)


def partial_transpose_matrix(m, n: int, d: int, factor: int) -> np.ndarray:
    """Transpose of one tensor factor of a matrix on C^n (x) C^d."""
    a = require_square(m, "bipartite matrix")
    if a.shape[0] != n * d:
        raise DimensionError(f"matrix must be {n * d} x {n * d} for dims ({n}, {d})")
    if factor not in (1, 2):
        raise InputError(f"factor must be 1 or 2, got {factor}")
    t = a.reshape(n, d, n, d)
    if factor == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(n * d, n * d)


def partial_transpose(rho: DensityState, factor: int) -> np.ndarray:
    """Transpose applied to one tensor factor of the state."""
    n, d = rho.dims
    return partial_transpose_matrix(rho.matrix, n, d, factor)


def is_ppt(rho: DensityState, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the partial transpose over the first factor is PSD."""
    return is_psd(partial_transpose(rho, 1), tol)


@dataclass(frozen=True)
class SeparableDecomposition:
    """Convex mixture of product projectors reproducing a state.

    ``factor1[i]`` is a unit vector in C^2 (the block-index factor),
    ``factor2[i]`` a unit vector in C^d; the state is
    sum_i weights[i] |factor1_i><factor1_i| (x) |factor2_i><factor2_i|.
    """

    weights: np.ndarray
    factor1: np.ndarray
    factor2: np.ndarray


def separable_decomposition(dec: CanonicalDecomposition) -> SeparableDecomposition:
    """Separable form of the normalized Gram block of a decomposed pair.

    Each rank-one term alpha^2 Lambda (x) |phi><phi| is a product projector in
    disguise: Lambda = (1 + |lam|^2) |w><w| for the unit vector
    w = (1, conj(lam)) / sqrt(1 + |lam|^2).  Weights are the normalized masses
    alpha_i^2 (1 + |lam_i|^2).
    """
    masses = []
    f1 = []
    f2 = []
    for alpha, lam, phi in zip(dec.alphas, dec.lambdas, dec.phis.T):
        if not np.any(phi):
            continue
        scale = 1.0 + abs(lam) ** 2
        masses.append(alpha**2 * scale)
        f1.append(np.array([1.0, np.conj(lam)]) / np.sqrt(scale))
        f2.append(phi)
    total = float(np.sum(masses))
    if total <= 0.0:
        raise DomainError("decomposition has no mass; cannot normalize")
    return SeparableDecomposition(
        weights=np.array(masses) / total,
        factor1=np.array(f1),
        factor2=np.array(f2),
    )


def separable_state(sep: SeparableDecomposition) -> np.ndarray:
    """Reassemble the density matrix of a separable decomposition."""
    terms = [
        w * np.outer(np.kron(u, v), np.conj(np.kron(u, v)))
        for w, u, v in zip(sep.weights, sep.factor1, sep.factor2)
    ]
    return np.sum(terms, axis=0)
