"""Resolutions of a density operator into weighted rank-one projectors.

A density operator W of rank r admits, besides its spectral resolution
W = sum_j w_j |psi_j><psi_j|, infinitely many alternative resolutions
W = sum_k w'_k |alpha_k><alpha_k| into non-orthogonal unit vectors from
Ran(W).  For any resolution with exactly r components the weights obey
w'_k = 1 / <alpha_k| W^-1 |alpha_k>, with W^-1 taken on the range.  This
module generates such resolutions (from a chosen range vector, from an
isometry mixing the spectral system, or at random), verifies them, and
compares them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DifferentTargets,
    DimensionMismatch,
    InvalidP,
    IsometryShapeMismatch,
    NotIsometry,
    NotNormalized,
    VectorOutsideRange,
)
from .operators import (
    RANK_CUTOFF_FACTOR,
    StateOperator,
    _eigh_descending,
    canonical_phase,
    dagger,
    max_abs,
    range_restrict,
    validate_state_operator,
)

TOL_WEIGHT_SUM = 1e-10
TOL_UNIT = 1e-10
TOL_RANGE = 1e-9        # projection residual accepted for "lies in Ran(W)"
TOL_RECONSTRUCT = 1e-9
ZERO_COLUMN_TOL = 1e-14  # isometry columns below this squared norm are dropped


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Weighted rank-one resolution of a density operator.

    ``vectors`` holds one unit column per component (phase-fixed); the columns
    need not be mutually orthogonal.  Construction verifies that the weights
    are normalized, the vectors are unit and lie in the range of ``target``,
    and that the components actually reassemble ``target``.
    """

    weights: np.ndarray
    vectors: np.ndarray
    target: StateOperator

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[1] != w.size:
            raise DimensionMismatch(
                f"{w.size} weights against vector block of shape {v.shape}"
            )
        if v.shape[0] != self.target.dim:
            raise DimensionMismatch(
                f"vectors live in dim {v.shape[0]}, target in dim {self.target.dim}"
            )
        if np.any(w <= 0.0) or abs(float(np.sum(w)) - 1.0) > TOL_WEIGHT_SUM:
            raise NotNormalized(
                f"weights must be positive and sum to 1, got sum {float(np.sum(w))!r}"
            )
        norms = np.linalg.norm(v, axis=0)
        if np.max(np.abs(norms - 1.0)) > TOL_UNIT:
            raise NotNormalized("component vectors must be unit norm")
        rr = range_restrict(self.target)
        resid = v - rr.basis @ (dagger(rr.basis) @ v)
        if float(np.max(np.linalg.norm(resid, axis=0))) > TOL_RANGE:
            raise VectorOutsideRange("a component vector leaves Ran(target)")
        if max_abs(rebuild_matrix(w, v) - self.target.matrix) > TOL_RECONSTRUCT:
            raise DifferentTargets("components do not reassemble the target operator")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.weights.size

    @property
    def components(self) -> list[tuple[float, np.ndarray]]:
        return [(float(self.weights[k]), self.vectors[:, k]) for k in range(len(self))]


def rebuild_matrix(weights, vectors) -> np.ndarray:
    """sum_k w_k |alpha_k><alpha_k| as a raw matrix."""
    v = np.asarray(vectors, dtype=complex)
    return (v * np.asarray(weights, dtype=float)) @ dagger(v)


def _assemble(weights, columns, target: StateOperator) -> Decomposition:
    v = np.column_stack([canonical_phase(c) for c in columns])
    return Decomposition(weights=np.asarray(weights, float), vectors=v, target=target)


def spectral_decomposition(w: StateOperator) -> Decomposition:
    """Eigenpair resolution: orthogonal components, one per positive eigenvalue."""
    rr = range_restrict(w)
    lam = w.eigenvalues[: rr.rank]
    return _assemble(lam, [rr.basis[:, j] for j in range(rr.rank)], w)


def _check_in_range(rr, alpha: np.ndarray) -> np.ndarray:
    """Normalize alpha and verify it lies in the spanned range."""
    alpha = np.asarray(alpha, dtype=complex).reshape(-1)
    if alpha.shape[0] != rr.basis.shape[0]:
        raise DimensionMismatch(
            f"vector of length {alpha.shape[0]} against dim {rr.basis.shape[0]}"
        )
    norm = float(np.linalg.norm(alpha))
    if norm < 1e-12:
        raise VectorOutsideRange("zero vector")
    alpha = alpha / norm
    coords = dagger(rr.basis) @ alpha
    residual = float(np.linalg.norm(alpha - rr.basis @ coords))
    if residual > TOL_RANGE:
        raise VectorOutsideRange(
            f"projection residual {residual:.3e} exceeds {TOL_RANGE:.1e}"
        )
    return alpha


def weight_from_vector(w: StateOperator, alpha) -> float:
    """Critical weight 1 / <alpha| W^-1 |alpha> of a range vector.

    This is the largest weight x such that W - x |alpha><alpha| stays positive
    semidefinite; it lies in (0, lambda_max], reaching the top eigenvalue
    exactly when alpha is a top eigenvector.
    """
    rr = range_restrict(w)
    alpha = _check_in_range(rr, alpha)
    coords = dagger(rr.basis) @ alpha
    quad = float(np.real(dagger(coords) @ (rr.inverse @ coords)))
    return 1.0 / quad


def _haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector (complex normal components, normalized)."""
    return canonical_phase(_haar_vector(dim, rng))


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """rows x cols matrix with orthonormal rows, Haar-distributed (cols >= rows)."""
    if cols < rows:
        raise IsometryShapeMismatch(f"need cols >= rows, got {rows}x{cols}")
    z = rng.standard_normal((cols, rows)) + 1j * rng.standard_normal((cols, rows))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))  # fix column phases
    return dagger(q)


def _peel_components(matrix: np.ndarray, rng: np.random.Generator | None):
    """Strip rank-one components off a PSD matrix until nothing remains.

    With ``rng`` given, each component direction is Haar-random in the current
    range; otherwise the remainder is resolved spectrally in one shot.
    """
    comps: list[tuple[float, np.ndarray]] = []
    rem = np.array(matrix, dtype=complex)
    dim = rem.shape[0]
    while True:
        lam, vec = _eigh_descending((rem + dagger(rem)) / 2.0)
        cutoff = dim * RANK_CUTOFF_FACTOR * max(float(lam[0]), 0.0)
        r = int(np.sum(lam > cutoff))
        if r == 0:
            break
        if r == 1 or rng is None:
            comps.extend((float(lam[j]), vec[:, j]) for j in range(r))
            break
        basis = vec[:, :r]
        alpha = basis @ _haar_vector(r, rng)
        coords = dagger(basis) @ alpha
        quad = float(np.real(np.sum(np.abs(coords) ** 2 / lam[:r])))
        wk = 1.0 / quad
        comps.append((wk, alpha))
        rem = rem - wk * np.outer(alpha, alpha.conj())
    return comps


def complete_from_vector(
    w: StateOperator, alpha1, rng: np.random.Generator | None = None
) -> Decomposition:
    """Resolution of W whose first component is a chosen range vector.

    The first weight is the critical weight of ``alpha1``; the PSD remainder
    then has rank exactly rank(W) - 1 and is resolved spectrally (or, with
    ``rng``, by recursively peeling random range vectors), so the result has
    exactly rank(W) components.
    """
    rr = range_restrict(w)
    alpha1 = _check_in_range(rr, alpha1)
    coords = dagger(rr.basis) @ alpha1
    quad = float(np.real(dagger(coords) @ (rr.inverse @ coords)))
    w1 = 1.0 / quad
    if rr.rank == 1:
        return _assemble([1.0], [alpha1], w)
    remainder = w.matrix - w1 * np.outer(alpha1, alpha1.conj())
    rest = _peel_components(remainder, rng)
    weights = [w1] + [c[0] for c in rest]
    columns = [alpha1] + [c[1] for c in rest]
    return _assemble(weights, columns, w)


def isometry_decomposition(w: StateOperator, u) -> Decomposition:
    """Resolution obtained by mixing the spectral system through an isometry.

    For U with orthonormal rows (r x m, r = rank(W), m >= r), the unnormalized
    vectors |abar_k> = sum_j sqrt(w_j) conj(U_jk) |psi_j> satisfy
    sum_k |abar_k><abar_k| = W; components are (<abar_k|abar_k>, abar_k
    normalized), with zero-norm columns dropped.  U = identity recovers the
    spectral resolution; m = r yields a rank(W)-component resolution obeying
    the critical-weight formula; m > r yields more, generally lighter,
    components.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2:
        raise IsometryShapeMismatch(f"mixing matrix must be 2-D, got shape {u.shape}")
    rr = range_restrict(w)
    rows, cols = u.shape
    if rows != rr.rank or cols < rows:
        raise IsometryShapeMismatch(
            f"need shape ({rr.rank}, m>={rr.rank}), got ({rows}, {cols})"
        )
    gram = u @ dagger(u)
    if max_abs(gram - np.eye(rows)) > 1e-10:
        raise NotIsometry(f"rows not orthonormal, max|UU^dagger - I| = {max_abs(gram - np.eye(rows)):.3e}")
    lam = w.eigenvalues[: rr.rank]
    unnormalized = rr.basis @ (np.sqrt(lam)[:, None] * u.conj())
    weights, columns = [], []
    for k in range(cols):
        col = unnormalized[:, k]
        wk = float(np.real(np.vdot(col, col)))
        if wk <= ZERO_COLUMN_TOL:
            continue
        weights.append(wk)
        columns.append(col / np.sqrt(wk))
    return _assemble(weights, columns, w)


def reconstruct(d: Decomposition) -> StateOperator:
    """Reassemble sum_k w_k |alpha_k><alpha_k| and validate it as a state."""
    return validate_state_operator(rebuild_matrix(d.weights, d.vectors))


def park_qubit_example(p: float) -> tuple[Decomposition, Decomposition]:
    """Two distinct resolutions of the qubit operator diag(1-p, p).

    Returns the spectral pair {(1-p, |0>), (p, |1>)} together with the skewed
    pair {(w, |+>), (1-w, |a>)} where a = 1/(1-2p), w = 2p(1-p) and
    |a> = (|+> + a|->)/sqrt(1+a^2).  Both resolve the same operator; at
    p = 1/4 the skewed pair is (3/8, |+>), (5/8, (3|0> - |1>)/sqrt(10)).
    Rejected at p = 1/2 where the skew parameter diverges.
    """
    if not (0.0 < p < 1.0) or p == 0.5:
        raise InvalidP(f"p must lie in (0,1) and differ from 1/2, got {p!r}")
    target = validate_state_operator(np.diag([1.0 - p, p]).astype(complex))
    spectral = spectral_decomposition(target)
    a = 1.0 / (1.0 - 2.0 * p)
    w = 2.0 * p * (1.0 - p)
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    minus = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    skew = (plus + a * minus) / np.sqrt(1.0 + a * a)
    alternative = _assemble([w, 1.0 - w], [plus, skew], target)
    return spectral, alternative


def decompositions_distinct(d1: Decomposition, d2: Decomposition, tol: float = 1e-9) -> bool:
    """True iff the two resolutions of one operator share no component vector.

    Vectors match up to a global phase when |<alpha|beta>| >= 1 - tol.
    """
    if d1.dim != d2.dim:
        raise DifferentTargets("decompositions live in different dimensions")
    if max_abs(d1.target.matrix - d2.target.matrix) > tol:
        raise DifferentTargets("decompositions resolve different operators")
    overlaps = np.abs(dagger(d1.vectors) @ d2.vectors)
    return bool(np.all(overlaps < 1.0 - tol))
