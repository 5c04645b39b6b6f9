import math

import numpy as np
import pytest
from conftest import maxdiff, random_hermitian, random_state

from statemix.decomposition import park_qubit_example
from statemix.equilibrium import (
    canonical_state,
    entropy_report,
    shannon_entropy,
    solve_beta,
    von_neumann_entropy,
)
from statemix.errors import DegenerateHamiltonian, EnergyOutOfRange, NotNormalized
from statemix.measures import (
    dirac_measure,
    make_measure,
    measure_from_decomposition,
)
from statemix.operators import expectation, make_hermitian, pure_state, validate_state_operator

H01 = make_hermitian(np.diag([0.0, 1.0]))


def high_precision_spectrum_entropy(weights):
    """Independent oracle: 50-digit evaluation of -sum w ln w."""
    from mpmath import mp, mpf

    with mp.workdps(50):
        total = -sum(mpf(w) * mp.log(mpf(w)) for w in weights if w > 0)
        return float(total)


class TestVonNeumannEntropy:
    def test_pure_state_zero(self):
        # spectrum of a projector carries ~1e-16 rounding eigenvalues
        assert von_neumann_entropy(pure_state([1.0, 2.0j, -0.3])) <= 1e-14

    def test_maximally_mixed(self):
        s = validate_state_operator(np.eye(2) / 2.0)
        assert abs(von_neumann_entropy(s) - math.log(2.0)) <= 1e-12

    def test_qubit_example_against_oracle(self):
        s = validate_state_operator(np.diag([0.75, 0.25]))
        expected = high_precision_spectrum_entropy([0.75, 0.25])
        assert abs(von_neumann_entropy(s) - expected) <= 1e-12

    def test_bounds(self):
        rng = np.random.default_rng(0)
        for dim in (2, 3, 6):
            s = random_state(rng, dim)
            value = von_neumann_entropy(s)
            assert 0.0 <= value <= math.log(dim) + 1e-12


class TestShannonEntropy:
    def test_point_mass(self):
        assert shannon_entropy([1.0]) == 0.0

    def test_fair_coin(self):
        assert abs(shannon_entropy([0.5, 0.5]) - math.log(2.0)) <= 1e-15

    def test_park_weights_against_oracle(self):
        expected = high_precision_spectrum_entropy([0.375, 0.625])
        assert abs(shannon_entropy([0.375, 0.625]) - expected) <= 1e-12

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            shannon_entropy([0.5, 0.6])
        with pytest.raises(NotNormalized):
            shannon_entropy([1.5, -0.5])


class TestCanonicalState:
    def test_infinite_temperature(self):
        rng = np.random.default_rng(1)
        h = random_hermitian(rng, 4)
        s = canonical_state(h, 0.0)
        assert maxdiff(s.matrix, np.eye(4) / 4.0) <= 1e-12

    def test_qubit_at_log3(self):
        s = canonical_state(H01, math.log(3.0))
        assert maxdiff(s.matrix, np.diag([0.75, 0.25])) <= 1e-12

    def test_zero_temperature_limit(self):
        s = canonical_state(H01, 1e3)
        assert maxdiff(s.matrix, np.diag([1.0, 0.0])) <= 1e-9

    def test_negative_beta_inverts_populations(self):
        s = canonical_state(H01, -math.log(3.0))
        assert maxdiff(s.matrix, np.diag([0.25, 0.75])) <= 1e-12

    def test_commutes_with_hamiltonian(self):
        rng = np.random.default_rng(2)
        for beta in (-1.0, 0.3, 2.5):
            h = random_hermitian(rng, 5)
            s = canonical_state(h, beta)
            comm = h.matrix @ s.matrix - s.matrix @ h.matrix
            assert maxdiff(comm, np.zeros((5, 5))) <= 1e-10

    def test_unit_trace(self):
        rng = np.random.default_rng(3)
        h = random_hermitian(rng, 6, scale=3.0)
        for beta in (-2.0, 0.0, 10.0, 500.0):
            s = canonical_state(h, beta)
            assert abs(float(np.trace(s.matrix).real) - 1.0) <= 1e-12


class TestSolveBeta:
    def test_symmetric_target(self):
        assert solve_beta(H01, 0.5) == 0.0

    def test_quarter_target(self):
        assert abs(solve_beta(H01, 0.25) - math.log(3.0)) <= 1e-8

    def test_out_of_range(self):
        with pytest.raises(EnergyOutOfRange):
            solve_beta(H01, 1.5)
        with pytest.raises(EnergyOutOfRange):
            solve_beta(H01, 0.0)

    def test_degenerate_hamiltonian(self):
        with pytest.raises(DegenerateHamiltonian):
            solve_beta(make_hermitian(2.0 * np.eye(3)), 2.0)

    def test_roundtrip_identity(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            dim = int(rng.integers(2, 6))
            h = random_hermitian(rng, dim)
            beta = float(rng.uniform(-3.0, 3.0))
            energy = expectation(canonical_state(h, beta), h)
            assert abs(solve_beta(h, energy) - beta) <= 1e-8

    def test_energy_strictly_decreasing(self):
        rng = np.random.default_rng(5)
        h = random_hermitian(rng, 4)
        betas = np.linspace(-4.0, 4.0, 33)
        energies = [expectation(canonical_state(h, b), h) for b in betas]
        assert np.all(np.diff(energies) < 0.0)

    def test_max_entropy_dominance(self):
        rng = np.random.default_rng(6)
        h = make_hermitian(np.diag([0.0, 1.0, 2.0]))
        for _ in range(100):
            rho = random_state(rng, 3)
            energy = expectation(rho, h)
            ceiling = von_neumann_entropy(canonical_state(h, solve_beta(h, energy)))
            assert von_neumann_entropy(rho) <= ceiling + 1e-9


class TestEntropyReport:
    def test_dirac_at_pure_state(self):
        report = entropy_report(dirac_measure(pure_state([1.0, 1.0j])))
        assert report.total <= 1e-14
        assert report.barycenter_entropy <= 1e-12
        assert report.mean_component_entropy <= 1e-14
        assert report.mixing_shannon == 0.0

    def test_orthogonal_pure_atoms_saturate_the_bound(self):
        mu = make_measure([(0.5, pure_state([1.0, 0.0])), (0.5, pure_state([0.0, 1.0]))])
        report = entropy_report(mu)
        assert abs(report.barycenter_entropy - math.log(2.0)) <= 1e-12
        assert report.mean_component_entropy <= 1e-12
        assert abs(report.mixing_shannon - math.log(2.0)) <= 1e-15
        assert abs(report.total - report.barycenter_entropy) <= 1e-12

    def test_park_alternative_measure(self):
        _, alternative = park_qubit_example(0.25)
        mu = measure_from_decomposition(alternative)
        report = entropy_report(mu)
        assert abs(report.barycenter_entropy
                   - high_precision_spectrum_entropy([0.75, 0.25])) <= 1e-6
        assert abs(report.mixing_shannon
                   - high_precision_spectrum_entropy([0.375, 0.625])) <= 1e-6
        assert report.mean_component_entropy <= 1e-12
        # non-orthogonal atoms: the upper bound is strict
        assert report.barycenter_entropy < report.total - 1e-3

    def test_concavity_bracket_random_measures(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            dim = int(rng.integers(2, 5))
            n_atoms = int(rng.integers(1, 5))
            raw = rng.dirichlet(np.ones(n_atoms))
            mu = make_measure([(raw[i], random_state(rng, dim)) for i in range(n_atoms)])
            report = entropy_report(mu)
            assert report.barycenter_entropy >= report.mean_component_entropy - 1e-9
            assert report.barycenter_entropy <= report.total + 1e-9
