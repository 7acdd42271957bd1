"""Positive maps on matrix algebras and the decomposability test harness.

A map is decomposable when it splits into a completely positive part
phi(x) = sum K x K* plus a co-completely positive part phi(x) = sum L x^T L*.
Decomposable maps send every block matrix passing the two-sided positivity
test to a PSD block matrix; :func:`theorem1_necessity_trial` exercises that
necessity on random instances, and :func:`witness_search` hunts for a
violating instance, which certifies non-decomposability.  The classical
positive non-decomposable map on 3 x 3 matrices is provided as a fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import DEFAULT_TOL, Tolerance, adjoint, as_matrix, require_square
from .sampling import ginibre, random_stormer_block, random_stormer_pair
from .stormer import OperatorBlockMatrix, gram_block, swap_block

__all__ = [
    "NecessityReport",
    "PositiveMap",
    "WitnessResult",
    "apply_map_entrywise",
    "choi_fixture",
    "choi_matrix",
    "identity_map",
    "make_decomposable",
    "map_from_choi",
    "theorem1_necessity_trial",
    "transpose_map",
    "witness_search",
]


@dataclass(frozen=True)
class PositiveMap:
    """A positive map given by Kraus families, a Choi matrix, or by name.

    kinds:
      - ``kraus_cp``:   phi(x) = sum_K K x K*
      - ``kraus_cocp``: phi(x) = sum_L L x^T L*
      - ``sum``:        CP part + co-CP part (decomposable by construction)
      - ``choi_raw``:   phi read off a Choi matrix on (input) x (output)
      - ``named``:      one of ``identity``, ``transpose``, ``choi3``

    Named identity/transpose apply to any square input; all other kinds fix
    the input dimension.
    """

    kind: str
    kraus_cp: tuple = ()
    kraus_cocp: tuple = ()
    choi: np.ndarray | None = None
    name: str | None = None
    input_dim: int | None = field(default=None)

    def __post_init__(self) -> None:
        if self.kind in ("kraus_cp", "kraus_cocp", "sum"):
            ops = tuple(as_matrix(k) for k in self.kraus_cp) + tuple(
                as_matrix(k) for k in self.kraus_cocp
            )
            if not ops:
                raise DimensionError("Kraus representation needs at least one operator")
            shape = ops[0].shape
            if any(o.shape != shape for o in ops):
                raise DimensionError("all Kraus operators must share one l x k shape")
            object.__setattr__(self, "kraus_cp", tuple(as_matrix(k) for k in self.kraus_cp))
            object.__setattr__(self, "kraus_cocp", tuple(as_matrix(k) for k in self.kraus_cocp))
            object.__setattr__(self, "input_dim", shape[1])
        elif self.kind == "choi_raw":
            c = require_square(self.choi, "Choi matrix")
            k = self.input_dim
            if k is None or k < 1 or c.shape[0] % k != 0:
                raise DimensionError("choi_raw needs input_dim dividing the Choi size")
            object.__setattr__(self, "choi", c)
        elif self.kind == "named":
            if self.name not in ("identity", "transpose", "choi3"):
                raise DomainError(f"unknown named map {self.name!r}")
            if self.name == "choi3":
                object.__setattr__(self, "input_dim", 3)
        else:
            raise DomainError(f"unknown map kind {self.kind!r}")

    @property
    def output_dim(self) -> int | None:
        if self.kind in ("kraus_cp", "kraus_cocp", "sum"):
            ops = self.kraus_cp or self.kraus_cocp
            return ops[0].shape[0]
        if self.kind == "choi_raw":
            return self.choi.shape[0] // self.input_dim
        if self.name == "choi3":
            return 3
        return None

    def apply(self, x) -> np.ndarray:
        """Evaluate the map on a square matrix."""
        a = require_square(x, "map argument")
        if self.input_dim is not None and a.shape[0] != self.input_dim:
            raise DimensionError(
                f"map expects {self.input_dim} x {self.input_dim} input, got {a.shape}"
            )
        if self.kind == "named":
            if self.name == "identity":
                return a.copy()
            if self.name == "transpose":
                return a.T.copy()
            return _choi3_apply(a)
        if self.kind == "choi_raw":
            k = self.input_dim
            l = self.output_dim
            c4 = self.choi.reshape(k, l, k, l)
            return np.einsum("ij,irjc->rc", a, c4)
        out = 0.0
        for kr in self.kraus_cp:
            out = out + kr @ a @ adjoint(kr)
        for kr in self.kraus_cocp:
            out = out + kr @ a.T @ adjoint(kr)
        return out


def _choi3_apply(x: np.ndarray) -> np.ndarray:
    """The classical positive non-decomposable map on 3 x 3 matrices:
    diagonal entries (x11+x33, x22+x11, x33+x22), off-diagonal entries
    negated."""
    out = -x.copy()
    out[0, 0] = x[0, 0] + x[2, 2]
    out[1, 1] = x[1, 1] + x[0, 0]
    out[2, 2] = x[2, 2] + x[1, 1]
    return out


def identity_map() -> PositiveMap:
    return PositiveMap(kind="named", name="identity")


def transpose_map() -> PositiveMap:
    return PositiveMap(kind="named", name="transpose")


def choi_fixture() -> PositiveMap:
    """The positive, non-decomposable map on 3 x 3 matrices."""
    return PositiveMap(kind="named", name="choi3")


def make_decomposable(kraus_cp, kraus_cocp) -> PositiveMap:
    """phi(x) = sum K x K* + sum L x^T L*: decomposable by construction."""
    return PositiveMap(kind="sum", kraus_cp=tuple(kraus_cp), kraus_cocp=tuple(kraus_cocp))


def map_from_choi(choi, input_dim: int) -> PositiveMap:
    return PositiveMap(kind="choi_raw", choi=choi, input_dim=input_dim)


def choi_matrix(phi: PositiveMap, input_dim: int | None = None) -> np.ndarray:
    """Choi matrix on (input) x (output): the assembled block matrix of the
    entrywise image of the matrix-unit block matrix."""
    k = input_dim or phi.input_dim
    if k is None:
        raise DimensionError("dimension-agnostic map: pass input_dim explicitly")
    units = np.zeros((k, k, k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            units[i, j, i, j] = 1.0
    return apply_map_entrywise(phi, OperatorBlockMatrix(units)).assembled()


def apply_map_entrywise(phi: PositiveMap, x: OperatorBlockMatrix) -> OperatorBlockMatrix:
    """Apply a map to every block: blocks'[i][j] = phi(blocks[i][j])."""
    if phi.input_dim is not None and x.d != phi.input_dim:
        raise DimensionError(
            f"block dimension {x.d} does not match map input dimension {phi.input_dim}"
        )
    n = x.n
    first = phi.apply(x.blocks[0, 0])
    out = np.zeros((n, n, first.shape[0], first.shape[1]), dtype=complex)
    out[0, 0] = first
    for i in range(n):
        for j in range(n):
            if i == 0 and j == 0:
                continue
            out[i, j] = phi.apply(x.blocks[i, j])
    return OperatorBlockMatrix(out)


@dataclass(frozen=True)
class NecessityReport:
    """Outcome of random necessity trials for one map."""

    trials: int
    violations: int
    worst_min_eig: float
    n: int
    d: int


def _trial_block(rng: np.random.Generator, n: int, d: int) -> OperatorBlockMatrix:
    if n == 2:
        return gram_block(random_stormer_pair(rng, d))
    return random_stormer_block(rng, n, d)


def theorem1_necessity_trial(
    phi: PositiveMap,
    seed: int = 0,
    trials: int = 1000,
    n: int = 2,
    d: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> NecessityReport:
    """Apply a map entrywise to random two-sided-positive block matrices and
    count outputs with an eigenvalue below the PSD floor.

    Decomposable maps must report zero violations; a violation is a
    non-decomposability witness.
    """
    d = d if d is not None else phi.input_dim
    if d is None:
        raise DimensionError("dimension-agnostic map: pass d explicitly")
    rng = np.random.default_rng(seed)
    violations = 0
    worst = np.inf
    for _ in range(trials):
        x = _trial_block(rng, n, d)
        m = apply_map_entrywise(phi, x).assembled()
        w = np.linalg.eigvalsh(0.5 * (m + adjoint(m)))
        scale = max(abs(w[0]), abs(w[-1]))
        if w[0] < -tol.threshold(scale):
            violations += 1
        worst = min(worst, float(w[0]))
    return NecessityReport(
        trials=trials, violations=violations, worst_min_eig=worst, n=n, d=d
    )


@dataclass(frozen=True)
class WitnessResult:
    """A two-sided-positive block matrix whose entrywise image is not PSD."""

    block: OperatorBlockMatrix
    min_eig: float
    evaluations: int
    restart: int


def _boundary_block(w: np.ndarray, n: int, floor: float) -> OperatorBlockMatrix:
    """Mix a trace-(nd) PSD matrix toward the identity until the swapped
    matrix's minimum eigenvalue equals floor (exact, the mix is affine)."""
    nd = w.shape[0]
    x = OperatorBlockMatrix.from_assembled(w, n)
    m0 = float(np.linalg.eigvalsh(swap_block(x).assembled())[0])
    if m0 >= floor:
        return x
    mu = (floor - m0) / (1.0 - m0)
    return OperatorBlockMatrix.from_assembled((1.0 - mu) * w + mu * np.eye(nd), n)


def _image_min_eig(phi: PositiveMap, x: OperatorBlockMatrix) -> tuple[float, float]:
    """Minimum eigenvalue of the entrywise image and the image's scale."""
    m = apply_map_entrywise(phi, x).assembled()
    w = np.linalg.eigvalsh(0.5 * (m + adjoint(m)))
    return float(w[0]), float(max(abs(w[0]), abs(w[-1])))


def witness_search(
    phi: PositiveMap,
    seed: int = 0,
    budget: int = 10**6,
    n: int = 3,
    d: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
    steps_per_restart: int = 600,
) -> WitnessResult | None:
    """Randomized search for a non-decomposability witness.

    Random restarts draw a Gram factor G; the candidate block matrix is
    G G* (trace-normalized) mixed toward the identity just enough to sit on
    the boundary of the two-sided-positive set, where violations live.
    Coordinate-wise hill climbing then perturbs single entries of G,
    re-projecting onto the set each step (the mix parameter is recomputed, so
    both positivity conditions hold by construction) and annealing the
    boundary floor downward.  Returns the best witness whose image minimum
    eigenvalue is below ten PSD floors, or None if the budget is exhausted.

    Deterministic in (seed, budget): restart r uses the stream seeded by
    (seed, r), and ties are broken by restart index.
    """
    d = d if d is not None else phi.input_dim
    if d is None:
        raise DimensionError("dimension-agnostic map: pass d explicitly")
    nd = n * d
    evaluations = 0
    best: WitnessResult | None = None
    floor_start, floor_end = 1e-2, 1e-7
    restart = 0
    while evaluations < budget:
        rng = np.random.default_rng([seed, restart])
        g = ginibre(rng, nd)
        w = g @ adjoint(g)
        w *= nd / np.trace(w).real
        floor = floor_start
        x = _boundary_block(w, n, floor)
        current, scale = _image_min_eig(phi, x)
        evaluations += 1
        sigma = 0.3
        for step in range(steps_per_restart):
            if evaluations >= budget:
                break
            floor = max(floor_end, floor * 0.985)
            i = rng.integers(0, nd)
            j = rng.integers(0, nd)
            g_new = g.copy()
            g_new[i, j] += sigma * (rng.standard_normal() + 1j * rng.standard_normal())
            w_new = g_new @ adjoint(g_new)
            w_new *= nd / np.trace(w_new).real
            x_new = _boundary_block(w_new, n, floor)
            val, val_scale = _image_min_eig(phi, x_new)
            evaluations += 1
            if val < current:
                g, current, scale, x = g_new, val, val_scale, x_new
                sigma = min(sigma * 1.2, 1.0)
            else:
                sigma = max(sigma * 0.97, 1e-3)
        if current < -10.0 * tol.threshold(scale):
            if best is None or current < best.min_eig:
                best = WitnessResult(
                    block=x, min_eig=current, evaluations=evaluations, restart=restart
                )
            return best
        restart += 1
    return best
