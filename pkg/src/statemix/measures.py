"""Discrete statistical-weight measures over state operators.

A preparation scheme is described by a normalized measure with finitely many
atoms (weight, state operator).  The canonical form, unique per measure, drops
zero weights, merges equal atoms, and orders the rest; two measures compare
equal exactly when their canonical atom lists coincide.  The barycenter map
sum_i w_i rho_i forgets the atom structure: distinct measures can share one
barycenter, and then no single-shot experiment separates them, which the
sampling helpers here let you verify empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BarycentersDiffer,
    DimensionMismatch,
    EmptyMeasure,
    NotNormalized,
)
from .operators import (
    TOL_EIG,
    HermitianOperator,
    StateOperator,
    dagger,
    expectation,
    max_abs,
    validate_state_operator,
)
from .seeding import as_generator

ATOM_MERGE_TOL = 1e-9  # max-norm separating distinct preparations from noise


@dataclass(frozen=True, eq=False)
class StatisticalWeightMeasure:
    """Canonically resolved discrete measure over state operators."""

    weights: np.ndarray
    states: tuple[StateOperator, ...]

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self) -> int:
        return self.weights.size

    @property
    def atoms(self) -> list[tuple[float, StateOperator]]:
        return [(float(w), s) for w, s in zip(self.weights, self.states)]


def _atom_sort_key(state: StateOperator) -> tuple:
    flat = state.matrix.ravel()
    return tuple(float(x) for pair in zip(flat.real, flat.imag) for x in pair)


def _exact_unit_sum(weights: np.ndarray) -> np.ndarray:
    """Normalize so that math.fsum of the result is exactly 1.0."""
    w = weights / math.fsum(weights.tolist())
    for _ in range(5):
        residual = math.fsum(w.tolist()) - 1.0
        if residual == 0.0:
            break
        w = w.copy()
        w[int(np.argmax(w))] -= residual
    return w


def make_measure(components) -> StatisticalWeightMeasure:
    """Build the canonical measure from (weight, state) pairs.

    Zero weights are dropped, duplicate states (within the merge tolerance)
    merged by weight addition, weights renormalized provided they already sum
    to 1 within 1e-10, and atoms ordered by descending weight with ties broken
    lexicographically on the state-matrix entries.  The construction is a
    fixed point: feeding a measure's own atoms back reproduces it exactly.
    """
    pairs = [(float(w), s) for w, s in components]
    if any(w < 0.0 for w, _ in pairs):
        raise NotNormalized("weights must be nonnegative")
    pairs = [(w, s) for w, s in pairs if w > 0.0]
    if not pairs:
        raise EmptyMeasure("measure needs at least one atom of positive weight")
    dim = pairs[0][1].dim
    if any(s.dim != dim for _, s in pairs):
        raise DimensionMismatch("all atoms must share one Hilbert-space dimension")
    total = math.fsum(w for w, _ in pairs)
    if abs(total - 1.0) > 1e-10:
        raise NotNormalized(f"weights sum to {total!r}, not 1")

    merged: list[tuple[float, StateOperator]] = []
    for w, s in pairs:
        for i, (wm, sm) in enumerate(merged):
            if max_abs(s.matrix - sm.matrix) <= ATOM_MERGE_TOL:
                merged[i] = (wm + w, sm)
                break
        else:
            merged.append((w, s))

    merged.sort(key=lambda atom: (-atom[0], _atom_sort_key(atom[1])))
    weights = _exact_unit_sum(np.array([w for w, _ in merged], dtype=float))
    weights.setflags(write=False)
    return StatisticalWeightMeasure(weights=weights, states=tuple(s for _, s in merged))


def dirac_measure(state: StateOperator) -> StatisticalWeightMeasure:
    return make_measure([(1.0, state)])


def measure_from_decomposition(d) -> StatisticalWeightMeasure:
    """Measure whose atoms are the projectors of a rank-one decomposition."""
    return make_measure(
        [(w, validate_state_operator(np.outer(v, v.conj()))) for w, v in d.components]
    )


def barycenter(mu: StatisticalWeightMeasure) -> StateOperator:
    """The density operator sum_i w_i rho_i reproducing all expectations of mu."""
    m = sum(w * s.matrix for w, s in mu.atoms)
    return validate_state_operator(m)


def measure_expectation(mu: StatisticalWeightMeasure, a: HermitianOperator) -> float:
    """sum_i w_i Tr(rho_i A); equals the barycenter expectation by linearity."""
    if mu.dim != a.dim:
        raise DimensionMismatch(f"measure dim {mu.dim} != observable dim {a.dim}")
    return float(sum(w * expectation(s, a) for w, s in mu.atoms))


def measures_equal(
    m1: StatisticalWeightMeasure, m2: StatisticalWeightMeasure, tol: float = 1e-9
) -> bool:
    """True iff the canonical atom lists match pairwise within ``tol``."""
    if m1.dim != m2.dim or len(m1) != len(m2):
        return False
    for (w1, s1), (w2, s2) in zip(m1.atoms, m2.atoms):
        if abs(w1 - w2) > tol or max_abs(s1.matrix - s2.matrix) > tol:
            return False
    return True


def sample_atom_indices(mu: StatisticalWeightMeasure, n: int, seed) -> np.ndarray:
    """n atom indices drawn with the measure's weights (deterministic per seed)."""
    rng = as_generator(seed)
    return rng.choice(len(mu), size=n, p=mu.weights)


def sample_preparation(mu: StatisticalWeightMeasure, seed) -> StateOperator:
    """One atom drawn with probability equal to its weight."""
    idx = int(sample_atom_indices(mu, 1, seed)[0])
    return mu.states[idx]


def grouped_eigensystem(a: HermitianOperator) -> tuple[np.ndarray, list[np.ndarray]]:
    """Distinct eigenvalues (descending) and the projector onto each eigenspace."""
    from .operators import _eigh_descending

    w, v = _eigh_descending(a.matrix)
    tol = TOL_EIG * max(1.0, float(np.max(np.abs(w))))
    values: list[float] = []
    projectors: list[np.ndarray] = []
    i, n = 0, w.size
    while i < n:
        j = i + 1
        while j < n and w[j - 1] - w[j] <= tol:
            j += 1
        block = v[:, i:j]
        values.append(float(np.mean(w[i:j])))
        projectors.append(block @ dagger(block))
        i = j
    return np.array(values), projectors


def projective_outcome_probabilities(s: StateOperator, a: HermitianOperator):
    """Born probabilities Tr(rho Pi_j) over the eigenspaces of A (descending)."""
    if s.dim != a.dim:
        raise DimensionMismatch(f"state dim {s.dim} != observable dim {a.dim}")
    values, projectors = grouped_eigensystem(a)
    probs = np.array([float(np.trace(s.matrix @ pj).real) for pj in projectors])
    probs = np.clip(probs, 0.0, 1.0)
    total = math.fsum(probs.tolist())
    assert abs(total - 1.0) <= 1e-10, "outcome probabilities must sum to 1"
    return values, probs / total


def sample_projective(s: StateOperator, a: HermitianOperator, seed) -> tuple[float, int]:
    """One projective-measurement draw: (eigenvalue, eigenspace index)."""
    rng = as_generator(seed)
    values, probs = projective_outcome_probabilities(s, a)
    idx = int(rng.choice(values.size, p=probs))
    return float(values[idx]), idx


@dataclass(frozen=True)
class OutcomeRow:
    """One (measure, observable, outcome) cell of a sampling experiment."""

    measure: str
    observable_id: int
    outcome: int
    count: int
    expected_probability: float
    z_score: float


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome statistics of prepare-then-measure runs from two measures."""

    trials: int
    n_observables: int
    max_abs_z: float
    indistinguishable: bool
    rows: tuple[OutcomeRow, ...]


def _random_observable(dim: int, rng: np.random.Generator) -> HermitianOperator:
    from .operators import make_hermitian

    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return make_hermitian((g + dagger(g)) / 2.0)


def _renormalize_row(p: np.ndarray) -> np.ndarray:
    return p / math.fsum(p.tolist())


def _simulate_counts(mu, atom_outcome_probs, trials, rng) -> np.ndarray:
    # draw atoms multinomially, then outcomes multinomially per atom
    n_out = atom_outcome_probs.shape[1]
    atom_counts = rng.multinomial(trials, mu.weights)
    counts = np.zeros(n_out, dtype=np.int64)
    for i, n_i in enumerate(atom_counts):
        if n_i:
            counts += rng.multinomial(int(n_i), _renormalize_row(atom_outcome_probs[i]))
    return counts


def single_shot_indistinguishable(
    m1: StatisticalWeightMeasure,
    m2: StatisticalWeightMeasure,
    trials: int,
    seed,
    n_observables: int = 10,
    z_threshold: float = 4.0,
) -> ComparisonReport:
    """Compare single-shot statistics of two measures with one barycenter.

    For each of ``n_observables`` random observables, simulates ``trials``
    prepare-then-measure runs from each measure and scores every outcome count
    against the exact barycenter probability, z = (count - n p)/sqrt(n p(1-p)).
    Measures with matching barycenters must produce no significant deviation;
    the report flags |z| <= z_threshold across all cells.
    """
    if m1.dim != m2.dim:
        raise DimensionMismatch("measures live in different dimensions")
    b1, b2 = barycenter(m1), barycenter(m2)
    gap = max_abs(b1.matrix - b2.matrix)
    if gap > 1e-9:
        raise BarycentersDiffer(f"barycenters differ by {gap:.3e} in max-norm")
    rng = as_generator(seed)
    rows: list[OutcomeRow] = []
    max_z = 0.0
    for obs_id in range(n_observables):
        a = _random_observable(m1.dim, rng)
        _, exact = projective_outcome_probabilities(b1, a)
        for label, mu in (("a", m1), ("b", m2)):
            atom_probs = np.array(
                [projective_outcome_probabilities(s, a)[1] for s in mu.states]
            )
            counts = _simulate_counts(mu, atom_probs, trials, rng)
            for j, (count, p) in enumerate(zip(counts, exact)):
                p = float(p)
                denom = math.sqrt(trials * p * (1.0 - p)) if 0.0 < p < 1.0 else 0.0
                z = (float(count) - trials * p) / denom if denom > 0.0 else 0.0
                max_z = max(max_z, abs(z))
                rows.append(OutcomeRow(label, obs_id, j, int(count), p, z))
    return ComparisonReport(
        trials=trials,
        n_observables=n_observables,
        max_abs_z=max_z,
        indistinguishable=bool(max_z <= z_threshold),
        rows=tuple(rows),
    )
