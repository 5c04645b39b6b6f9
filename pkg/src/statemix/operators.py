"""Validated Hermitian operator algebra on finite-dimensional Hilbert spaces.

Carries the three operator kinds used everywhere else: plain Hermitian
observables/Hamiltonians, unit-trace positive state operators (density
operators; idempotent ones are the rank-one projectors), and the restriction
of a state operator to its range, where it is invertible.

Conventions: hbar = 1 and k_B = 1; eigenvalues are reported in descending
order; every stored unit vector has its largest-magnitude component rotated
real-positive, so vector sets compare without global-phase ambiguity.  All
values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFiniteEntries,
    NotHermitian,
    NotPositive,
    NotSquare,
    TraceNotOne,
)

TOL_HERM = 1e-10    # relative hermiticity deviation accepted by make_hermitian
TOL_TRACE = 1e-10   # |Tr - 1| gate for state operators
TOL_PSD = 1e-10     # most negative eigenvalue accepted before cleanup
TOL_EIG = 1e-11     # eigendecomposition residual scale
RANK_CUTOFF_FACTOR = 1e-12  # range cutoff = dim * factor * lambda_max


def as_square_matrix(m) -> np.ndarray:
    """Coerce input to a finite square complex ndarray."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntries("matrix entries must be finite")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    """Max-norm (largest entry magnitude)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_defect(a: np.ndarray) -> float:
    return max_abs(a - dagger(a))


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the largest-magnitude component is real positive."""
    idx = int(np.argmax(np.abs(v)))
    pivot = complex(v[idx])
    mag = abs(pivot)
    if mag == 0.0:
        return np.array(v, copy=True)
    out = v * (pivot.conjugate() / mag)
    out[idx] = mag  # exact, the rotation above only cancels to round-off
    return out


def _lex_key(v: np.ndarray) -> tuple:
    # rounded so that sub-tolerance noise cannot flip the ordering
    return tuple(np.round(np.column_stack([v.real, v.imag]).ravel(), 10).tolist())


def _eigh_descending(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenvalues and phase-fixed orthonormal eigenvectors.

    Within a degenerate cluster columns are reordered lexicographically so the
    output is deterministic.
    """
    try:
        w, v = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:  # iteration cap exceeded in LAPACK
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    for j in range(v.shape[1]):
        v[:, j] = canonical_phase(v[:, j])
    tol_cluster = TOL_EIG * max(1.0, float(np.max(np.abs(w))))
    i, n = 0, w.size
    while i < n:
        j = i + 1
        while j < n and w[j - 1] - w[j] <= tol_cluster:
            j += 1
        if j - i > 1:
            order = sorted(range(i, j), key=lambda c: _lex_key(v[:, c]))
            v[:, i:j] = v[:, order]
        i = j
    return w, v


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues in descending order; orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    def rebuild(self) -> np.ndarray:
        """Reassemble sum_j lambda_j |v_j><v_j| (reconstruction residual oracle)."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Exactly symmetrized self-adjoint matrix.

    ``defect`` records the pre-symmetrization deviation max|M - M^dagger|.
    """

    matrix: np.ndarray
    defect: float = 0.0

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SpectrumCleanup:
    """Corrections applied while validating a state operator."""

    hermiticity_defect: float
    trace_defect: float
    clamped_negative: float


@dataclass(frozen=True, eq=False)
class StateOperator:
    """Unit-trace positive-semidefinite Hermitian operator.

    ``eigenvalues`` are descending, clamped to [0, 1] and renormalized to unit
    sum; ``eigenvectors`` are the matching orthonormal columns (the eigen cache
    is populated eagerly at construction).  Idempotent instances (rho^2 = rho)
    are the rank-one projectors.  Construct through ``validate_state_operator``
    or ``pure_state``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    cleanup: SpectrumCleanup

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigensystem(self) -> EigenSystem:
        return EigenSystem(self.eigenvalues, self.eigenvectors)


@dataclass(frozen=True, eq=False)
class RangeRestriction:
    """A state operator restricted to its range, where it is invertible.

    ``basis`` holds rank orthonormal columns spanning the range; ``restricted``
    and ``inverse`` are the rank x rank matrices of the operator and its
    inverse in that basis (diagonal, since the basis is an eigenbasis).
    """

    rank: int
    basis: np.ndarray
    restricted: np.ndarray
    inverse: np.ndarray


def make_hermitian(m, tol: float = TOL_HERM) -> HermitianOperator:
    """Symmetrize a near-Hermitian matrix, rejecting it beyond ``tol``.

    The deviation is measured relative to the matrix scale:
    max|M - M^dagger| <= tol * max|M|.
    """
    a = as_square_matrix(m)
    defect = hermiticity_defect(a)
    scale = max_abs(a)
    if defect > tol * scale:
        raise NotHermitian(
            f"hermiticity deviation {defect:.3e} exceeds tol {tol:.1e} * scale {scale:.3e}"
        )
    return HermitianOperator(matrix=(a + dagger(a)) / 2.0, defect=defect)


def eig_hermitian(a: HermitianOperator) -> EigenSystem:
    w, v = _eigh_descending(a.matrix)
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def validate_state_operator(m, tol: float = TOL_PSD) -> StateOperator:
    """Validate and clean a candidate density operator.

    Checks hermiticity (relative ``tol``), unit trace and positivity
    (eigenvalues >= -tol); the cached spectrum is clamped into [0, 1] and
    renormalized to unit sum.  The input matrix is kept bit-for-bit (so
    serialization round trips exactly) unless the spectrum corrections are
    material, in which case the matrix is rebuilt from the cleaned spectrum.
    Applied corrections are recorded on the result.
    """
    a = as_square_matrix(m)
    defect = hermiticity_defect(a)
    scale = max_abs(a)
    if defect > tol * scale:
        raise NotHermitian(
            f"hermiticity deviation {defect:.3e} exceeds tol {tol:.1e} * scale {scale:.3e}"
        )
    h = (a + dagger(a)) / 2.0  # bitwise equal to the input when defect == 0
    tr = float(np.trace(h).real)
    trace_defect = abs(tr - 1.0)
    if trace_defect > tol:
        raise TraceNotOne(f"trace {tr!r} differs from 1 by {trace_defect:.3e}")
    w, v = _eigh_descending(h)
    if w[-1] < -tol:
        raise NotPositive(f"most negative eigenvalue {w[-1]:.3e} below -{tol:.1e}")
    clamped_negative = float(-np.sum(np.minimum(w, 0.0)))
    overshoot = float(max(float(w[0]) - 1.0, 0.0))
    lam = np.clip(w, 0.0, 1.0)
    lam = lam / math.fsum(lam.tolist())
    material = max(clamped_negative, overshoot, trace_defect) > 1e-13
    if material:
        matrix = (v * lam) @ dagger(v)
        matrix = (matrix + dagger(matrix)) / 2.0
    else:
        matrix = h
    return StateOperator(
        matrix=matrix,
        eigenvalues=lam,
        eigenvectors=v,
        cleanup=SpectrumCleanup(defect, trace_defect, clamped_negative),
    )


def pure_state(vector) -> StateOperator:
    """Rank-one projector |psi><psi| from a (not necessarily normalized) vector."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.all(np.isfinite(v)):
        raise NonFiniteEntries("pure state requires a finite nonzero vector")
    v = v / norm
    return validate_state_operator(np.outer(v, v.conj()))


def is_idempotent(s: StateOperator, tol: float = TOL_PSD) -> bool:
    """True iff rho^2 = rho within ``tol`` (max-norm), i.e. rho is a projector."""
    m = s.matrix
    return max_abs(m @ m - m) <= tol


def expectation(s: StateOperator, a: HermitianOperator) -> float:
    """Tr(rho A) for an observable A."""
    if s.dim != a.dim:
        raise DimensionMismatch(f"state dim {s.dim} != observable dim {a.dim}")
    val = complex(np.trace(s.matrix @ a.matrix))
    assert abs(val.imag) <= TOL_EIG * max(1.0, abs(val.real)), "nonreal expectation"
    return val.real


def rank_cutoff(s: StateOperator) -> float:
    """Eigenvalue threshold separating the numerical range from the kernel."""
    return s.dim * RANK_CUTOFF_FACTOR * float(s.eigenvalues[0])


def range_restrict(s: StateOperator) -> RangeRestriction:
    """Restrict a state operator to its range; rank >= 1 always since Tr = 1."""
    cutoff = rank_cutoff(s)
    r = int(np.sum(s.eigenvalues > cutoff))
    lam = s.eigenvalues[:r]
    return RangeRestriction(
        rank=r,
        basis=s.eigenvectors[:, :r].copy(),
        restricted=np.diag(lam.astype(complex)),
        inverse=np.diag((1.0 / lam).astype(complex)),
    )
