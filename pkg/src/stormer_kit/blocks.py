"""Positivity of two-block partitioned matrices.

A partition ``[[A, B], [B*, C]]`` with A of size n and C of size k is PSD
exactly when A and C are PSD and ``B = sqrt(A) W sqrt(C)`` for some
contraction W.  On singular A or C the contraction is recovered with
pseudoinverse square roots and the recomposition must still reproduce B
(the range condition).  :func:`psd_oracle` gives the independent
full-eigenvalue verdict the factorization test is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import (
    DEFAULT_RCOND,
    DEFAULT_TOL,
    Tolerance,
    adjoint,
    as_matrix,
    is_contraction,
    is_psd,
    op_norm,
    require_square,
)

__all__ = [
    "ContractionCertificate",
    "Partition2",
    "assemble",
    "psd_oracle",
    "psd_via_contraction",
]


@dataclass(frozen=True)
class Partition2:
    """Blocks of ``[[A, B], [B*, C]]``; A is n x n, C is k x k, B is n x k."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        a = require_square(self.a, "block A")
        c = require_square(self.c, "block C")
        b = as_matrix(self.b)
        if b.shape != (a.shape[0], c.shape[0]):
            raise DimensionError(
                f"block B must be {a.shape[0]} x {c.shape[0]}, got {b.shape}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def k(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True)
class ContractionCertificate:
    """Outcome of the contraction factorization test.

    When ``psd`` is true, ``w`` is a contraction with
    ``sqrt(A) w sqrt(C) = B`` up to ``residual``.
    """

    psd: bool
    w: np.ndarray | None
    residual: float


def assemble(p: Partition2) -> np.ndarray:
    """The (n+k) x (n+k) matrix ``[[A, B], [B*, C]]``."""
    return np.block([[p.a, p.b], [adjoint(p.b), p.c]])


def _sqrt_and_pinv_sqrt(m, rcond: float) -> tuple[np.ndarray, np.ndarray]:
    """Square root of a PSD matrix and the pseudoinverse of that root, with
    one shared rank cutoff at rcond times the top eigenvalue of m.

    Cutting on m's spectrum (not the root's) keeps numerically-zero
    eigenvalues of an exactly singular m out of the inversion: eigh reports
    them at roundoff level, whose square root would survive a cutoff applied
    to the root alone.
    """
    w, v = np.linalg.eigh(0.5 * (m + adjoint(m)))
    w = np.clip(w, 0.0, None)
    cutoff = rcond * w[-1]
    w = np.where(w > cutoff, w, 0.0)
    root = np.sqrt(w)
    inv_root = np.divide(1.0, root, out=np.zeros_like(root), where=root > 0)
    return (v * root) @ adjoint(v), (v * inv_root) @ adjoint(v)


def psd_via_contraction(
    p: Partition2,
    tol: Tolerance = DEFAULT_TOL,
    rcond: float = DEFAULT_RCOND,
) -> ContractionCertificate:
    """Test positivity of the assembled partition by factorizing B.

    The candidate ``W0 = pinv(sqrt(A)) B pinv(sqrt(C))`` certifies positivity
    iff A and C are PSD, the recomposition ``sqrt(A) W0 sqrt(C)`` reproduces B
    within tolerance, and W0 is a contraction.
    """
    if not (is_psd(p.a, tol) and is_psd(p.c, tol)):
        return ContractionCertificate(psd=False, w=None, residual=float("inf"))
    sa, sa_inv = _sqrt_and_pinv_sqrt(p.a, rcond)
    sc, sc_inv = _sqrt_and_pinv_sqrt(p.c, rcond)
    w0 = sa_inv @ p.b @ sc_inv
    residual = op_norm(sa @ w0 @ sc - p.b)
    ok = residual <= tol.threshold_for(p.b) and is_contraction(w0, tol)
    return ContractionCertificate(psd=ok, w=w0 if ok else None, residual=residual)


def psd_oracle(p: Partition2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Full-eigenvalue positivity check of the assembled partition."""
    return is_psd(assemble(p), tol)
