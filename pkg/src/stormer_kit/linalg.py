"""Dense complex linear algebra: eigendecompositions, pseudoinverses, and
tolerance-based operator predicates.

All routines act on 2-d complex numpy arrays.  Predicates such as
:func:`is_psd` compare eigenvalues against a scale-aware threshold
``abs_eps + rel_eps * (1 + scale)`` so that verdicts are stable across
conditioning and across rescaled inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "DEFAULT_RCOND",
    "DEFAULT_TOL",
    "HermitianEig",
    "Tolerance",
    "adjoint",
    "eig_hermitian",
    "is_contraction",
    "is_hermitian",
    "is_hyponormal",
    "is_normal",
    "is_psd",
    "op_norm",
    "pinv",
    "sqrt_psd",
]

# Default SVD truncation for pseudoinverses (double precision).
DEFAULT_RCOND = 1e-12

# Asymmetry above this relative level is malformed input, not roundoff noise.
_HERMITICITY_REL = 1e-6

# Magnitude below which a component is ignored when fixing eigenvector phases.
_PHASE_CUTOFF = 1e-12


def as_matrix(m) -> np.ndarray:
    """Coerce input to a 2-d complex array with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a nonempty matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    return a


def require_square(m, what: str = "matrix") -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.swapaxes(np.asarray(m), -1, -2))


@dataclass(frozen=True)
class Tolerance:
    """Scale-aware numerical tolerance.

    The effective threshold for a quantity of scale ``s`` is
    ``abs_eps + rel_eps * (1 + s)``; it is monotone in the scale.  Quantities
    that are homogeneous of degree two in the input (such as the
    self-commutator ``T*T - TT*``) are compared against the quadratic variant.
    """

    abs_eps: float = 1e-10
    rel_eps: float = 1e-9

    def __post_init__(self) -> None:
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError("tolerances must be nonnegative")

    def threshold(self, scale: float) -> float:
        return self.abs_eps + self.rel_eps * (1.0 + scale)

    def threshold_for(self, m) -> float:
        return self.threshold(op_norm(m))

    def quadratic_threshold(self, scale: float) -> float:
        return self.abs_eps + self.rel_eps * (1.0 + scale) ** 2


DEFAULT_TOL = Tolerance()


class HermitianEig(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds an
    orthonormal basis in its columns, phase-fixed so that the first
    nonnegligible component of each column is real and positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def op_norm(m) -> float:
    """Largest singular value."""
    a = as_matrix(m)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``||M - M*||`` is below the threshold for M's scale."""
    a = require_square(m)
    return op_norm(a - adjoint(a)) <= tol.threshold_for(a)


def fix_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonnegligible entry is real positive."""
    out = np.array(v, dtype=complex)
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > _PHASE_CUTOFF)
        if nz.size:
            pivot = col[nz[0]]
            out[:, j] = col * (np.conj(pivot) / abs(pivot))
    return out


def eig_hermitian(m) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix with deterministic phases.

    The input is symmetrized as ``(M + M*)/2`` before solving; asymmetry
    beyond ``1e-6 * (1 + ||M||)`` is rejected as malformed rather than
    silently repaired.
    """
    a = require_square(m)
    h = 0.5 * (a + adjoint(a))
    scale = op_norm(h)
    asym = op_norm(a - adjoint(a))
    if asym > _HERMITICITY_REL * (1.0 + scale):
        raise DomainError(
            f"matrix is not Hermitian: asymmetry {asym:.3e} exceeds "
            f"{_HERMITICITY_REL:.0e} * (1 + {scale:.3e})"
        )
    w, v = np.linalg.eigh(h)
    return HermitianEig(w, fix_phases(v))


def is_psd(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff M is Hermitian within tolerance and its minimum eigenvalue
    clears the scale-aware floor."""
    a = require_square(m)
    h = 0.5 * (a + adjoint(a))
    w = np.linalg.eigvalsh(h)
    scale = max(abs(w[0]), abs(w[-1]))
    thr = tol.threshold(scale)
    if op_norm(a - adjoint(a)) > thr:
        return False
    return w[0] >= -thr


def sqrt_psd(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian square root of a PSD matrix, eigenvalues clipped at zero."""
    a = require_square(m)
    if not is_psd(a, tol):
        raise DomainError("matrix is not positive semidefinite within tolerance")
    w, v = eig_hermitian(a)
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ adjoint(v)
    return 0.5 * (s + adjoint(s))


def pinv(m, rcond: float = DEFAULT_RCOND) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values below ``rcond`` times the largest are treated as zero.
    """
    a = as_matrix(m)
    return np.linalg.pinv(a, rcond=rcond)


def is_contraction(t, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the operator norm is at most 1, within tolerance."""
    n = op_norm(t)
    return n <= 1.0 + tol.threshold(n)


def is_normal(t, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff T commutes with its adjoint.

    The self-commutator ``T*T - TT*`` is degree two in T, so it is compared
    against the quadratic threshold for T's scale.
    """
    a = require_square(t)
    c = adjoint(a) @ a - a @ adjoint(a)
    return op_norm(c) <= tol.quadratic_threshold(op_norm(a))


def is_hyponormal(t, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``T*T - TT*`` is PSD, i.e. ``||T* g|| <= ||T g||`` for all g."""
    a = require_square(t)
    c = adjoint(a) @ a - a @ adjoint(a)
    return is_psd(c, tol)
