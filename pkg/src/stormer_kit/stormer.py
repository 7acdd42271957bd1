"""Gram blocks of operator pairs and their canonical decomposition.

For a pair (a1, a2) of d x d operators the Gram block is the 2 x 2 operator
matrix [[a1*a1, a1*a2], [a2*a1, a2*a2]], which is always PSD.  The two-sided
positivity condition asks in addition that the index-swapped matrix
[[a1*a1, a2*a1], [a1*a2, a2*a2]] be PSD; on the block-index tensor factor the
swap is exactly a partial transpose.  For invertible a1 the condition holds
iff the ratio operator T = a2 a1^{-1} is normal, and then the Gram block
splits into rank-one terms

    sum_i  alpha_i^2 * [[1, lam_i], [conj(lam_i), |lam_i|^2]]  (x)  |phi_i><phi_i|

where lam_i, e_i are the spectral data of T, alpha_i = ||a1* e_i|| and
phi_i = a1* e_i / alpha_i.  This module computes the test, the spectral
resolution, and the decomposition in both role orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError
from .linalg import (
    DEFAULT_RCOND,
    DEFAULT_TOL,
    Tolerance,
    adjoint,
    as_matrix,
    eig_hermitian,
    fix_phases,
    is_normal,
    is_psd,
    op_norm,
    pinv,
    require_square,
)

__all__ = [
    "CanonicalDecomposition",
    "OperatorBlockMatrix",
    "OperatorPair",
    "RatioOperator",
    "SpectralResolution",
    "canonical_decomposition",
    "contraction_condition",
    "dual_decomposition",
    "gram_block",
    "gram_row_block",
    "gram_vectors",
    "ratio_operator",
    "reconstruct_a2",
    "reconstruct_block",
    "spectral_resolution",
    "stormer_test",
    "swap_block",
]

# Eigenvalues of the ratio operator closer than this (times 1 + scale) are
# treated as one spectral cluster.
_CLUSTER_REL = 1e-8


@dataclass(frozen=True)
class OperatorPair:
    """A pair of d x d operators acting on the same space."""

    a1: np.ndarray
    a2: np.ndarray

    def __post_init__(self) -> None:
        a1 = require_square(self.a1, "a1")
        a2 = require_square(self.a2, "a2")
        if a1.shape != a2.shape:
            raise DimensionError(f"operator shapes differ: {a1.shape} vs {a2.shape}")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def dim(self) -> int:
        return self.a1.shape[0]

    def swapped(self) -> "OperatorPair":
        return OperatorPair(self.a2, self.a1)


@dataclass(frozen=True)
class OperatorBlockMatrix:
    """An n x n array of d x d operator blocks.

    The assembled matrix lives on the tensor product (block index) x (space),
    i.e. entry (i*d + r, j*d + c) of the assembled matrix is blocks[i, j, r, c].
    """

    blocks: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise DimensionError(f"blocks must have shape (n, n, d, d), got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise DomainError("block entries must be finite")
        object.__setattr__(self, "blocks", b)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.shape[2]

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    def assembled(self) -> np.ndarray:
        n, d = self.n, self.d
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)

    @classmethod
    def from_assembled(cls, m, n: int) -> "OperatorBlockMatrix":
        a = require_square(m, "assembled matrix")
        if a.shape[0] % n != 0:
            raise DimensionError(f"size {a.shape[0]} is not divisible by n={n}")
        d = a.shape[0] // n
        return cls(a.reshape(n, d, n, d).transpose(0, 2, 1, 3))


class RatioOperator(NamedTuple):
    """The operator a2 * pinv(a1) with a degeneracy flag for singular a1."""

    matrix: np.ndarray
    degenerate: bool


class SpectralResolution(NamedTuple):
    """Spectral data of a normal operator: T = sum_i lambdas[i] |e_i><e_i|.

    ``vectors`` holds the orthonormal eigenbasis e_i in its columns.
    """

    lambdas: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class CanonicalDecomposition:
    """Rank-one data of a Gram block satisfying the two-sided condition.

    ``alphas[i]`` is ||a1* e_i||, ``phis`` holds the normalized vectors
    a1* e_i / alphas[i] in its columns (a zero column when alphas[i] is below
    threshold), ``lambdas`` and ``es`` are the spectral data of the ratio
    operator.  ``degenerate`` marks a singular a1, for which the
    reconstruction identity is reported but not guaranteed.
    """

    alphas: np.ndarray
    lambdas: np.ndarray
    phis: np.ndarray
    es: np.ndarray
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.es.shape[0]


def gram_block(p: OperatorPair) -> OperatorBlockMatrix:
    """The 2 x 2 block matrix [[a1*a1, a1*a2], [a2*a1, a2*a2]].

    As the Gram matrix of the row (a1, a2) it is always PSD.
    """
    a1h, a2h = adjoint(p.a1), adjoint(p.a2)
    return OperatorBlockMatrix(
        np.array([[a1h @ p.a1, a1h @ p.a2], [a2h @ p.a1, a2h @ p.a2]])
    )


def swap_block(x: OperatorBlockMatrix) -> OperatorBlockMatrix:
    """Index swap blocks[i][j] -> blocks[j][i].

    Involutive; on the assembled matrix it acts as the partial transpose of
    the block-index tensor factor.
    """
    return OperatorBlockMatrix(x.blocks.transpose(1, 0, 2, 3))


def stormer_test(x: OperatorBlockMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff both the assembled block matrix and its index swap are PSD."""
    m = x.assembled()
    if op_norm(m - adjoint(m)) > tol.threshold_for(m):
        raise DomainError("assembled block matrix is not Hermitian within tolerance")
    return is_psd(m, tol) and is_psd(swap_block(x).assembled(), tol)


def gram_vectors(x: OperatorBlockMatrix, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Factor a PSD block matrix into rows with x_ij = sum_k v_i^(k)* v_j^(k).

    Returns an array of shape (r, n, d): row k holds the n operators
    v_1^(k), ..., v_n^(k), each a 1 x d functional stored as a d-vector.
    Obtained from the eigendecomposition of the assembled matrix; eigenvalues
    within tolerance of zero are clipped.
    """
    m = x.assembled()
    if not is_psd(m, tol):
        raise DomainError("block matrix is not PSD; no Gram factorization")
    w, v = eig_hermitian(m)
    w = np.clip(w, 0.0, None)
    keep = np.flatnonzero(w > 0.0)
    rows = []
    for k in keep:
        chunk = np.sqrt(w[k]) * np.conj(v[:, k])
        rows.append(chunk.reshape(x.n, x.d))
    if not rows:
        return np.zeros((0, x.n, x.d), dtype=complex)
    return np.array(rows)


def gram_row_block(row: np.ndarray) -> OperatorBlockMatrix:
    """The rank-one Gram summand of a single factor row.

    ``row`` has shape (n, d); the result has blocks
    x_ij = conj(row_i)^T row_j, one term of the Gram factorization.
    """
    r = np.asarray(row, dtype=complex)
    if r.ndim != 2:
        raise DimensionError(f"row must have shape (n, d), got {r.shape}")
    return OperatorBlockMatrix(np.einsum("ir,jc->ijrc", np.conj(r), r))


def ratio_operator(p: OperatorPair, rcond: float = DEFAULT_RCOND) -> RatioOperator:
    """T = a2 * pinv(a1), flagged degenerate when a1 is numerically singular."""
    sv = np.linalg.svd(p.a1, compute_uv=False)
    degenerate = bool(sv[-1] <= rcond * sv[0])
    return RatioOperator(p.a2 @ pinv(p.a1, rcond), degenerate)


def contraction_condition(
    p: OperatorPair,
    tol: Tolerance = DEFAULT_TOL,
    rcond: float = DEFAULT_RCOND,
    form: str = "printed",
) -> bool:
    """Operator inequality equivalent to positivity of the swapped Gram block.

    The ``printed`` form tests ``a1*a2 |a1|^-2 a2*a1 <= |a2|^2``, i.e. that
    ``pinv(|a1|) a2* a1 pinv(|a2|)`` is a contraction; for invertible a1 this
    is hyponormality (hence normality) of a2 a1^{-1}.  The ``gram`` form swaps
    the middle factors: ``a2*a1 |a1|^-2 a1*a2 <= |a2|^2``, the contraction
    condition of the unswapped Gram block, which holds identically because
    that block is always PSD.  Both are kept so the difference is testable.
    """
    a1h, a2h = adjoint(p.a1), adjoint(p.a2)
    g1 = pinv(a1h @ p.a1, rcond)
    if form == "printed":
        middle = (a1h @ p.a2) @ g1 @ (a2h @ p.a1)
    elif form == "gram":
        middle = (a2h @ p.a1) @ g1 @ (a1h @ p.a2)
    else:
        raise ValueError(f"unknown form {form!r}")
    return is_psd(a2h @ p.a2 - middle, tol)


def spectral_resolution(t, tol: Tolerance = DEFAULT_TOL) -> SpectralResolution:
    """Eigenvalues and an orthonormal eigenbasis of a normal operator.

    Computed from the complex Schur form, which is diagonal for normal input;
    eigenvalues are sorted ascending by (real, imag) and near-coincident ones
    are clustered, with each cluster's basis re-orthonormalized.  Raises for
    input that is not normal within tolerance.
    """
    a = require_square(t)
    if not is_normal(a, tol):
        raise DomainError("operator is not normal within tolerance")
    s, z = scipy.linalg.schur(a, output="complex")
    lam = np.diag(s).copy()
    order = np.lexsort((lam.imag, lam.real))
    lam = lam[order]
    z = np.array(z[:, order])

    gap = _CLUSTER_REL * (1.0 + op_norm(a))
    start = 0
    for stop in range(1, len(lam) + 1):
        if stop == len(lam) or abs(lam[stop] - lam[stop - 1]) > gap:
            if stop - start > 1:
                q, _ = np.linalg.qr(z[:, start:stop])
                z[:, start:stop] = q
            start = stop
    return SpectralResolution(lam, fix_phases(z))


def reconstruct_a2(a1, lambdas, vectors) -> np.ndarray:
    """Rebuild the second operator from spectral data of the ratio operator:
    sum_i lambda_i |e_i><a1* e_i|, with |f><g| z = (g, z) f."""
    a = require_square(a1, "a1")
    lam = np.asarray(lambdas, dtype=complex)
    es = as_matrix(vectors)
    if es.shape[0] != a.shape[0] or es.shape[1] != lam.shape[0]:
        raise DimensionError(
            f"need {a.shape[0]}-vectors, one per eigenvalue; got {es.shape} "
            f"for {lam.shape[0]} eigenvalues"
        )
    g = adjoint(a) @ es
    return np.einsum("i,ri,ci->rc", lam, es, np.conj(g))


def canonical_decomposition(
    p: OperatorPair,
    tol: Tolerance = DEFAULT_TOL,
    rcond: float = DEFAULT_RCOND,
) -> CanonicalDecomposition:
    """Rank-one decomposition of the Gram block of a pair satisfying the
    two-sided positivity condition.

    Raises DomainError when the condition fails, or when a1 is singular and
    the ratio operator is not normal (no decomposition exists then).  A
    singular a1 with normal ratio operator yields a best-effort result with
    the ``degenerate`` flag set.
    """
    if not stormer_test(gram_block(p), tol):
        raise DomainError("two-sided positivity condition not satisfied")
    t, degenerate = ratio_operator(p, rcond)
    if degenerate and not is_normal(t, tol):
        raise DomainError(
            "pair is degenerate and its ratio operator is not normal; "
            "canonical decomposition is undefined"
        )
    lam, es = spectral_resolution(t, tol)
    g = adjoint(p.a1) @ es
    alphas = np.linalg.norm(g, axis=0).real
    cutoff = tol.threshold(op_norm(p.a1))
    phis = np.zeros_like(g)
    for i, alpha in enumerate(alphas):
        if alpha > cutoff:
            phis[:, i] = g[:, i] / alpha
    return CanonicalDecomposition(
        alphas=alphas, lambdas=lam, phis=phis, es=es, degenerate=degenerate
    )


def reconstruct_block(dec: CanonicalDecomposition) -> OperatorBlockMatrix:
    """Reassemble sum_i alphas[i]^2 * Lambda_i (x) |phi_i><phi_i| with
    Lambda_i = [[1, lam_i], [conj(lam_i), |lam_i|^2]]."""
    d = dec.dim
    out = np.zeros((2, 2, d, d), dtype=complex)
    for alpha, lam, phi in zip(dec.alphas, dec.lambdas, dec.phis.T):
        if not np.any(phi):
            continue
        proj = np.outer(phi, np.conj(phi))
        coeff = np.array([[1.0, lam], [np.conj(lam), abs(lam) ** 2]])
        out += (alpha**2) * np.einsum("pq,rc->pqrc", coeff, proj)
    return OperatorBlockMatrix(out)


def dual_decomposition(
    p: OperatorPair,
    tol: Tolerance = DEFAULT_TOL,
    rcond: float = DEFAULT_RCOND,
) -> CanonicalDecomposition:
    """Canonical decomposition with the roles of a1 and a2 exchanged.

    Decomposes the Gram block of (a2, a1); the reconstruction identity then
    holds for the role-swapped block.
    """
    return canonical_decomposition(p.swapped(), tol, rcond)
