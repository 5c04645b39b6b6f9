"""Entropy functionals and canonical (maximum-entropy) states.

Entropy is reported in units of k_B with k_B = 1 and natural logarithms
throughout.  The canonical state exp(-beta H) / Tr[exp(-beta H)] maximizes
-Tr(rho ln rho) among all states of the same mean energy; ``solve_beta``
inverts the strictly decreasing energy(beta) map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ConvergenceFailure,
    DegenerateHamiltonian,
    EnergyOutOfRange,
    NotNormalized,
)
from .operators import (
    HermitianOperator,
    StateOperator,
    _eigh_descending,
    dagger,
    validate_state_operator,
)


def von_neumann_entropy(s: StateOperator) -> float:
    """-sum lambda ln lambda over the spectrum, with 0 ln 0 = 0; in [0, ln dim]."""
    lam = s.eigenvalues[s.eigenvalues > 0.0]
    return max(0.0, float(-np.sum(lam * np.log(lam))))


def shannon_entropy(weights) -> float:
    """-sum w ln w for a normalized weight list, with 0 ln 0 = 0."""
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.size == 0 or np.any(w < 0.0):
        raise NotNormalized("weights must be nonnegative")
    total = math.fsum(w.tolist())
    if abs(total - 1.0) > 1e-10:
        raise NotNormalized(f"weights sum to {total!r}, not 1")
    w = w[w > 0.0]
    return max(0.0, float(-np.sum(w * np.log(w))))


def _boltzmann_weights(lam: np.ndarray, beta: float) -> np.ndarray:
    # max-shift before exponentiation keeps every exponent <= 0
    x = -beta * lam
    x = x - np.max(x)
    p = np.exp(x)
    return p / math.fsum(p.tolist())


def canonical_state(h: HermitianOperator, beta: float) -> StateOperator:
    """exp(-beta H) / Tr[exp(-beta H)], computed in the eigenbasis of H.

    Any finite beta is accepted (beta = 0 gives the maximally mixed state;
    negative beta inverts the populations).
    """
    if not math.isfinite(beta):
        raise EnergyOutOfRange(f"beta must be finite, got {beta!r}")
    lam, vec = _eigh_descending(h.matrix)
    p = _boltzmann_weights(lam, beta)
    return validate_state_operator((vec * p) @ dagger(vec))


def _mean_energy(lam: np.ndarray, beta: float) -> float:
    p = _boltzmann_weights(lam, beta)
    return float(np.dot(p, lam))


def solve_beta(h: HermitianOperator, energy_target: float, tol_rel: float = 1e-10) -> float:
    """Inverse temperature beta with Tr(H canonical_state(H, beta)) = target.

    The target must lie strictly inside (lambda_min, lambda_max); the root is
    bracketed by doubling away from beta = 0 and polished with Brent's method.
    """
    lam, _ = _eigh_descending(h.matrix)
    lmax, lmin = float(lam[0]), float(lam[-1])
    spread = lmax - lmin
    if spread <= 1e-12 * max(1.0, abs(lmax)):
        raise DegenerateHamiltonian("Hamiltonian proportional to identity")
    if not (lmin < energy_target < lmax):
        raise EnergyOutOfRange(
            f"target {energy_target!r} outside open interval ({lmin!r}, {lmax!r})"
        )

    def residual(beta: float) -> float:
        return _mean_energy(lam, beta) - energy_target

    r0 = residual(0.0)
    if r0 == 0.0:
        return 0.0
    edge = 1.0 if r0 > 0.0 else -1.0  # energy(beta) decreases, so hot side is beta > 0
    for _ in range(200):
        if residual(edge) * r0 < 0.0:
            break
        edge *= 2.0
    else:
        raise ConvergenceFailure("failed to bracket beta")
    lo, hi = (0.0, edge) if edge > 0.0 else (edge, 0.0)
    beta = float(brentq(residual, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps,
                        maxiter=200))
    if abs(residual(beta)) > tol_rel * spread:
        raise ConvergenceFailure(
            f"energy residual {residual(beta):.3e} above {tol_rel:.1e} * spread"
        )
    return beta


@dataclass(frozen=True)
class EntropyReport:
    """Entropy accounting of a heterogeneous preparation (k_B units).

    ``barycenter_entropy`` is -Tr(Wbar ln Wbar) of the reduced density
    operator; ``mean_component_entropy`` averages the intrinsic entropies of
    the atoms; ``mixing_shannon`` is the Shannon entropy of the extrinsic
    weights; ``total`` is their sum, the intrinsic-plus-extrinsic uncertainty,
    which brackets the barycenter entropy from above (concavity), while the
    mean component entropy brackets it from below.
    """

    total: float
    barycenter_entropy: float
    mean_component_entropy: float
    mixing_shannon: float


def entropy_report(mu) -> EntropyReport:
    """Populate the entropy accounting for a statistical-weight measure."""
    from .measures import barycenter  # local import to avoid a module cycle

    s_bar = von_neumann_entropy(barycenter(mu))
    s_mean = float(sum(w * von_neumann_entropy(state) for w, state in mu.atoms))
    h_mix = shannon_entropy(mu.weights)
    report = EntropyReport(
        total=s_mean + h_mix,
        barycenter_entropy=s_bar,
        mean_component_entropy=s_mean,
        mixing_shannon=h_mix,
    )
    assert s_bar >= s_mean - 1e-9, "concavity lower bound violated"
    assert s_bar <= s_mean + h_mix + 1e-9, "mixing upper bound violated"
    return report
