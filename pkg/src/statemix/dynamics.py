"""Steepest-entropy-ascent relaxation combined with unitary evolution.

The equation of motion integrated here is

    d rho / dt = -i [H, rho] + D(rho) / tau

where D is the gradient of the entropy -Tr(rho ln rho), taken in the trace
(Hilbert-Schmidt) metric on the range of rho and orthogonally projected
against the constraint gradients {I_R, H_R}, then embedded back with zero
action on the kernel.  That choice of metric makes the flow conserve trace
and energy exactly, never decrease the entropy (dS/dt = ||D||^2 / tau), keep
idempotent states on their unitary orbits, and relax interior states to the
canonical form on their range.  ``dissipative_direction`` isolates the metric
choice so an alternative ascent metric can be swapped in.

Fixed points of the dissipative term are exactly the states with
ln rho_R in span{I_R, H_R}: the (partially) canonical states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateHamiltonian,
    DimensionMismatch,
    EnergyOutOfRange,
    InvalidConfig,
    StepRejected,
)
from .equilibrium import canonical_state, solve_beta, von_neumann_entropy
from .operators import (
    RANK_CUTOFF_FACTOR,
    HermitianOperator,
    StateOperator,
    _eigh_descending,
    dagger,
    expectation,
    make_hermitian,
    max_abs,
    range_restrict,
    validate_state_operator,
)

FLOW_STALL_TOL = 1e-12   # max-norm of d rho / dt below which evolution stops
POSITIVITY_FLOOR = -1e-12
MAX_HALVINGS = 20


@dataclass(frozen=True)
class SeaConfig:
    """Integration parameters; tau = inf disables the dissipative term."""

    tau: float
    dt: float
    t_final: float
    record_every: int = 1

    def __post_init__(self):
        if not (self.tau > 0.0):
            raise InvalidConfig(f"tau must be positive, got {self.tau!r}")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise InvalidConfig(f"dt must be positive and finite, got {self.dt!r}")
        if not (math.isfinite(self.t_final) and self.t_final > 0.0):
            raise InvalidConfig(f"t_final must be positive, got {self.t_final!r}")
        if self.record_every < 1:
            raise InvalidConfig("record_every must be >= 1")
        if math.isfinite(self.tau) and self.dt > self.tau / 10.0:
            raise InvalidConfig(
                f"dt = {self.dt!r} exceeds tau/10 = {self.tau / 10.0!r}"
            )


class DissipativeDirection(NamedTuple):
    """Entropy-ascent direction with its diagnostics.

    ``energy_constrained`` is False when H restricted to the range is
    proportional to the identity there; the energy constraint is then
    degenerate and only the trace constraint is projected out (energy is
    conserved automatically).  ``entropy_production`` is -Tr(D ln rho) =
    ||D||_F^2 >= 0, the entropy rate per unit 1/tau.
    """

    operator: HermitianOperator
    energy_constrained: bool
    entropy_production: float


def _dissipative_core(
    lam: np.ndarray, vec: np.ndarray, h_matrix: np.ndarray
) -> tuple[np.ndarray, bool, float]:
    """D on the range of rho, embedded into the full space (raw arrays)."""
    dim = vec.shape[0]
    cutoff = dim * RANK_CUTOFF_FACTOR * max(float(lam[0]), 0.0)
    r = int(np.sum(lam > cutoff))
    if r <= 1:
        return np.zeros((dim, dim), dtype=complex), False, 0.0
    basis = vec[:, :r]
    lam_r = lam[:r]
    g = -(np.log(lam_r) + 1.0)  # gradient of -Tr(rho ln rho), diagonal on the range
    h_r = dagger(basis) @ h_matrix @ basis
    h_r = (h_r + dagger(h_r)) / 2.0
    tr_h = float(np.trace(h_r).real)
    tr_h2 = float(np.sum(np.abs(h_r) ** 2))
    tr_g = float(np.sum(g))
    centered = tr_h2 - tr_h * tr_h / r
    scale = max(1.0, math.sqrt(tr_h2))
    if centered <= (1e-12 * scale) ** 2:
        # H_R proportional to I_R: drop the degenerate energy constraint
        d_r = np.diag((g - tr_g / r).astype(complex))
        energy_constrained = False
    else:
        tr_hg = float(np.real(np.sum(np.diagonal(h_r) * g)))
        a, b = np.linalg.solve(
            np.array([[r, tr_h], [tr_h, tr_h2]]), np.array([tr_g, tr_hg])
        )
        d_r = np.diag(g.astype(complex)) - a * np.eye(r) - b * h_r
        energy_constrained = True
    production = float(np.sum(np.abs(d_r) ** 2))
    d_full = basis @ d_r @ dagger(basis)
    return (d_full + dagger(d_full)) / 2.0, energy_constrained, production


def dissipative_direction(s: StateOperator, h: HermitianOperator) -> DissipativeDirection:
    """Steepest-entropy-ascent direction of a state under trace/energy constraints.

    Guarantees Tr D = 0, Tr(H D) = 0 and -Tr(D ln rho) = ||D||_F^2 >= 0, with
    D = 0 exactly when ln rho_R lies in span{I_R, H_R} (canonical on the
    range); rank-one states always give D = 0.
    """
    if s.dim != h.dim:
        raise DimensionMismatch(f"state dim {s.dim} != hamiltonian dim {h.dim}")
    d_full, energy_constrained, production = _dissipative_core(
        s.eigenvalues, s.eigenvectors, h.matrix
    )
    return DissipativeDirection(
        operator=HermitianOperator(matrix=d_full),
        energy_constrained=energy_constrained,
        entropy_production=production,
    )


def _support_basis(m: np.ndarray, rank: int) -> np.ndarray | None:
    """Orthonormal basis of the top-``rank`` eigenspace, or None when full rank.

    The dissipative term of every integrator stage is evaluated on the range
    of the state at the start of the (sub)step: the kernel is inert under the
    exact flow, and the off-manifold noise of intermediate stage matrices
    must not be mistaken for genuine population (ln of a spurious eigenvalue
    would kick an idempotent state off its unitary orbit).
    """
    if rank == m.shape[0]:
        return None
    sym = (m + dagger(m)) / 2.0
    _, vec = _eigh_descending(sym)
    return vec[:, :rank].copy()


def _flow(
    m: np.ndarray,
    h_matrix: np.ndarray,
    inv_tau: float,
    support: np.ndarray | None = None,
) -> np.ndarray:
    out = -1j * (h_matrix @ m - m @ h_matrix)
    if inv_tau != 0.0:
        if support is None:
            sym = (m + dagger(m)) / 2.0
            lam, vec = _eigh_descending(sym)
            lam = np.maximum(lam, 0.0)
            d_full, _, _ = _dissipative_core(lam, vec, h_matrix)
        else:
            m_r = dagger(support) @ m @ support
            m_r = (m_r + dagger(m_r)) / 2.0
            h_r = dagger(support) @ h_matrix @ support
            lam, vec = _eigh_descending(m_r)
            lam = np.maximum(lam, 0.0)
            d_r, _, _ = _dissipative_core(lam, vec, (h_r + dagger(h_r)) / 2.0)
            d_full = support @ d_r @ dagger(support)
        out = out + inv_tau * d_full
    return out


def _rk4_step(
    m: np.ndarray,
    dt: float,
    h_matrix: np.ndarray,
    inv_tau: float,
    support: np.ndarray | None,
) -> np.ndarray:
    k1 = _flow(m, h_matrix, inv_tau, support)
    k2 = _flow(m + (dt / 2.0) * k1, h_matrix, inv_tau, support)
    k3 = _flow(m + (dt / 2.0) * k2, h_matrix, inv_tau, support)
    k4 = _flow(m + dt * k3, h_matrix, inv_tau, support)
    return m + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _min_eigenvalue(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((m + dagger(m)) / 2.0)[0])


def _project_rank(m: np.ndarray, rank: int) -> np.ndarray:
    """Zero all but the top-``rank`` eigenvalues and renormalize the trace.

    The exact flow never changes the rank (the dissipative term acts on the
    range, the unitary term preserves spectra), so integrator spill below the
    rank manifold is discarded after every substep; otherwise, a pure state's
    spurious populations would be amplified by the steep entropy gradient.
    Kept eigenvalues are not clamped: a genuine positivity violation must
    stay visible to the step-halving guard.
    """
    if rank == m.shape[0]:
        return m
    lam, vec = _eigh_descending((m + dagger(m)) / 2.0)
    lam[rank:] = 0.0
    lam /= lam.sum()
    return (vec * lam) @ dagger(vec)


def _state_rank(s: StateOperator) -> int:
    cutoff = s.dim * RANK_CUTOFF_FACTOR * float(s.eigenvalues[0])
    return int(np.sum(s.eigenvalues > cutoff))


def _advance(
    m: np.ndarray, dt: float, h_matrix: np.ndarray, inv_tau: float, rank: int
) -> np.ndarray:
    """Advance exactly dt, halving the substep until positivity survives."""
    for halving in range(MAX_HALVINGS + 1):
        n_sub = 2 ** halving
        sub_dt = dt / n_sub
        current = m
        ok = True
        for _ in range(n_sub):
            support = _support_basis(current, rank) if inv_tau != 0.0 else None
            current = _rk4_step(current, sub_dt, h_matrix, inv_tau, support)
            current = _project_rank(current, rank)
            if _min_eigenvalue(current) < POSITIVITY_FLOOR:
                ok = False
                break
        if ok:
            return current
    raise StepRejected(
        f"positivity violated even at dt / 2^{MAX_HALVINGS}"
    )


def sea_step(s: StateOperator, h: HermitianOperator, cfg: SeaConfig) -> StateOperator:
    """One integrator step of length cfg.dt, re-validated."""
    if s.dim != h.dim:
        raise DimensionMismatch(f"state dim {s.dim} != hamiltonian dim {h.dim}")
    inv_tau = 0.0 if math.isinf(cfg.tau) else 1.0 / cfg.tau
    return validate_state_operator(
        _advance(s.matrix, cfg.dt, h.matrix, inv_tau, _state_rank(s))
    )


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded time series of an evolution with its diagnostics."""

    times: np.ndarray
    states: tuple[StateOperator, ...]
    entropy: np.ndarray
    energy: np.ndarray
    trace_error: np.ndarray
    entropy_production: np.ndarray

    @property
    def final(self) -> StateOperator:
        return self.states[-1]

    def __len__(self) -> int:
        return self.times.size


def sea_evolve(rho0: StateOperator, h: HermitianOperator, cfg: SeaConfig) -> Trajectory:
    """Integrate from rho0 until t_final, recording every record_every steps.

    Evolution stops early once the flow stalls (max|d rho/dt| < 1e-12).  A
    StepRejected failure is re-raised with the time stamp attached.
    """
    if rho0.dim != h.dim:
        raise DimensionMismatch(f"state dim {rho0.dim} != hamiltonian dim {h.dim}")
    inv_tau = 0.0 if math.isinf(cfg.tau) else 1.0 / cfg.tau
    rank = _state_rank(rho0)
    n_steps = max(1, math.ceil(cfg.t_final / cfg.dt - 1e-12))

    times: list[float] = []
    states: list[StateOperator] = []

    def record(t: float, state: StateOperator):
        times.append(t)
        states.append(state)

    state = rho0
    record(0.0, state)
    for step in range(1, n_steps + 1):
        t = step * cfg.dt
        try:
            state = validate_state_operator(
                _advance(state.matrix, cfg.dt, h.matrix, inv_tau, rank)
            )
        except StepRejected as exc:
            raise StepRejected(f"{exc} at t = {t!r}") from exc
        is_last = step == n_steps
        stalled = max_abs(_flow(state.matrix, h.matrix, inv_tau)) < FLOW_STALL_TOL
        if step % cfg.record_every == 0 or is_last or stalled:
            record(t, state)
        if stalled:
            break

    entropy = np.array([von_neumann_entropy(s) for s in states])
    energy = np.array([expectation(s, h) for s in states])
    trace_error = np.array([abs(float(np.trace(s.matrix).real) - 1.0) for s in states])
    production = np.array(
        [inv_tau * _dissipative_core(s.eigenvalues, s.eigenvectors, h.matrix)[2]
         for s in states]
    )
    return Trajectory(
        times=np.array(times),
        states=tuple(states),
        entropy=entropy,
        energy=energy,
        trace_error=trace_error,
        entropy_production=production,
    )


def canonical_on_range(state: StateOperator, h: HermitianOperator) -> tuple[float, np.ndarray]:
    """Canonical state on Ran(state) at the state's own energy.

    Returns (beta, matrix).  Degenerate cases (rank one, or H proportional to
    the identity on the range) use beta = 0, where the canonical form is the
    normalized range projector.
    """
    rr = range_restrict(state)
    energy = expectation(state, h)
    if rr.rank == 1:
        return 0.0, rr.basis @ dagger(rr.basis)
    h_r = make_hermitian(dagger(rr.basis) @ h.matrix @ rr.basis, tol=1e-8)
    try:
        beta = solve_beta(h_r, energy)
    except (DegenerateHamiltonian, EnergyOutOfRange):
        beta = 0.0
    target = canonical_state(h_r, beta)
    return beta, rr.basis @ target.matrix @ dagger(rr.basis)


@dataclass(frozen=True)
class AsymptoteReport:
    beta_hat: float
    distance: float
    partially_canonical: bool


def asymptote_check(
    traj: Trajectory, h: HermitianOperator, tol: float = 1e-6
) -> AsymptoteReport:
    """Distance of the final state from the canonical form on its range."""
    final = traj.final
    beta, target = canonical_on_range(final, h)
    distance = max_abs(final.matrix - target)
    return AsymptoteReport(
        beta_hat=beta, distance=distance, partially_canonical=distance <= tol
    )
