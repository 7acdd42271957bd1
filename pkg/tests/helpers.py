"""Shared helpers for the test suite."""

import numpy as np

from stormer_kit import adjoint


def rel_fro(delta, ref) -> float:
    return float(np.linalg.norm(delta) / max(np.linalg.norm(ref), 1e-300))


def hermitize(m) -> np.ndarray:
    return 0.5 * (m + adjoint(m))


def min_eig(m) -> float:
    return float(np.linalg.eigvalsh(hermitize(m))[0])


def cholesky_psd(m, shift: float) -> bool:
    """Independent PSD oracle: Cholesky success of M + shift * I."""
    h = hermitize(np.asarray(m, dtype=complex))
    try:
        np.linalg.cholesky(h + shift * np.eye(h.shape[0]))
        return True
    except np.linalg.LinAlgError:
        return False
