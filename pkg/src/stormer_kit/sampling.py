"""Seeded random instances: operator pairs, block matrices, and the search
for a two-sided-positive block with a failing Gram summand.

Every generator takes an explicit ``numpy.random.Generator`` (or seed), so
batch runs are reproducible and parallel trials can derive independent
streams from a root seed.
"""

from __future__ import annotations

import numpy as np

from .linalg import DEFAULT_TOL, Tolerance, adjoint
from .stormer import (
    OperatorBlockMatrix,
    OperatorPair,
    gram_block,
    gram_row_block,
    gram_vectors,
    stormer_test,
    swap_block,
)

__all__ = [
    "find_nontrivial_block",
    "ginibre",
    "haar_unitary",
    "random_near_normal",
    "random_normal_operator",
    "random_partition",
    "random_rank_deficient",
    "random_stormer_block",
    "random_stormer_pair",
    "uniform_disk",
]


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    """Complex Gaussian matrix with iid standard entries (scaled by 1/sqrt 2)."""
    if cols is None:
        cols = rows
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def uniform_disk(
    rng: np.random.Generator, count: int, center: complex = 1.5, radius: float = 1.0
) -> np.ndarray:
    """Points uniform in a complex disk."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    theta = rng.uniform(0.0, 2.0 * np.pi, count)
    return center + r * np.exp(1j * theta)


def random_normal_operator(
    rng: np.random.Generator, d: int, center: complex = 1.5, radius: float = 1.0
) -> np.ndarray:
    """U diag(lam) U* with Haar U and lam uniform in a disk."""
    u = haar_unitary(rng, d)
    lam = uniform_disk(rng, d, center, radius)
    return (u * lam) @ adjoint(u)


def random_stormer_pair(
    rng: np.random.Generator,
    d: int,
    cond_max: float = 1e3,
    center: complex = 1.5,
    radius: float = 1.0,
) -> OperatorPair:
    """Random pair whose Gram block satisfies the two-sided condition.

    a1 is Ginibre, resampled until its condition number is below ``cond_max``;
    a2 = T a1 with T a random normal operator whose eigenvalues are uniform in
    a disk.  The disk default keeps T invertible so the role-swapped
    decomposition is well conditioned too.
    """
    while True:
        a1 = ginibre(rng, d)
        if np.linalg.cond(a1) <= cond_max:
            break
    t = random_normal_operator(rng, d, center, radius)
    return OperatorPair(a1, t @ a1)


def random_stormer_block(
    rng: np.random.Generator,
    n: int,
    d: int,
    boundary: float | None = None,
) -> OperatorBlockMatrix:
    """Random n x n block matrix (d x d blocks) passing the two-sided test.

    Draws a Wishart matrix W = G G* and mixes it with the maximally mixed
    direction until the index-swapped matrix is PSD: since
    swap((1-mu) W + mu c I) has eigenvalues (1-mu) eig(swap W) + mu c with
    c = tr(W)/(nd), the minimal admissible mu is available in closed form.
    ``boundary`` sets the floor of the swapped spectrum as a fraction of c
    (default: uniform in [0, 0.2], spreading samples from the boundary
    inward); the assembled matrix is normalized to trace n*d.
    """
    nd = n * d
    g = ginibre(rng, nd)
    w = g @ adjoint(g)
    w *= nd / np.trace(w).real
    c = 1.0  # tr(w)/(nd) after normalization
    x = OperatorBlockMatrix.from_assembled(w, n)
    m0 = float(np.linalg.eigvalsh(swap_block(x).assembled())[0])
    floor = rng.uniform(0.0, 0.2) * c if boundary is None else boundary * c
    if m0 >= floor:
        return x
    mu = (floor - m0) / (c - m0)
    mixed = (1.0 - mu) * w + mu * np.eye(nd)
    return OperatorBlockMatrix.from_assembled(mixed, n)


def random_rank_deficient(
    rng: np.random.Generator, rows: int, cols: int, rank: int
) -> np.ndarray:
    """Random matrix of the given rank (rank <= min(rows, cols))."""
    return ginibre(rng, rows, rank) @ ginibre(rng, rank, cols)


def random_near_normal(rng: np.random.Generator, d: int, noise: float = 0.0) -> np.ndarray:
    """Normal operator rescaled to norm in [2, 6], plus optional Ginibre noise.

    With noise 0 the result is normal up to roundoff; nonzero noise gives
    candidates for rejection sampling on hyponormality at a controlled
    distance from the normal set.
    """
    t = random_normal_operator(rng, d)
    t *= rng.uniform(2.0, 6.0) / np.linalg.norm(t, 2)
    if noise > 0.0:
        t = t + noise * ginibre(rng, d)
    return t


def random_partition(rng: np.random.Generator, n: int, k: int, kind: str):
    """Random (A, B, C) triples for the two-block positivity test.

    kinds: ``psd`` splits a Wishart matrix (assembled matrix PSD);
    ``inflated`` rescales the off-diagonal block of a PSD split until the
    matrix fails; ``indefinite`` draws Hermitian A, C and generic B;
    ``singular`` zeroes trailing eigenvalues of A first.  Returns blocks, not
    a Partition2, to keep this module decoupled from the blocks module.
    """
    if kind in ("psd", "inflated", "singular"):
        g = ginibre(rng, n + k)
        m = g @ adjoint(g)
        a = m[:n, :n].copy()
        b = m[:n, n:].copy()
        c = m[n:, n:].copy()
        if kind == "inflated":
            b *= rng.uniform(1.5, 3.0)
        elif kind == "singular":
            w, v = np.linalg.eigh(a)
            w[: max(1, n // 2)] = 0.0
            a = (v * w) @ adjoint(v)
        return a, b, c
    if kind == "indefinite":
        ha = ginibre(rng, n)
        hc = ginibre(rng, k)
        return ha + adjoint(ha), ginibre(rng, n, k), hc + adjoint(hc)
    raise ValueError(f"unknown partition kind {kind!r}")


def find_nontrivial_block(
    seed: int = 0,
    d: int = 2,
    max_tries: int = 200,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[OperatorBlockMatrix, np.ndarray, int]:
    """Search for a block matrix passing the two-sided test while one of its
    own Gram summands fails it.

    Candidates are Gram blocks of random pairs; their eigen-factorization
    rows give the summands.  Returns (block, rows, k) where rows[k] is a
    failing summand.  The condition passes for the sum yet can fail for a
    summand exactly when the corresponding factor row is entangled across
    (block index) x (space).
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        pair = random_stormer_pair(rng, d)
        x = gram_block(pair)
        if not stormer_test(x, tol):
            continue
        rows = gram_vectors(x, tol)
        for k in range(rows.shape[0]):
            if not stormer_test(gram_row_block(rows[k]), tol):
                return x, rows, k
    raise RuntimeError(f"no nontrivial instance found in {max_tries} tries")
