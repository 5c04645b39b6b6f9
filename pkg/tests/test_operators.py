import numpy as np
import pytest
from conftest import maxdiff, random_hermitian, random_state

from statemix.errors import (
    DimensionMismatch,
    NonFiniteEntries,
    NotHermitian,
    NotPositive,
    NotSquare,
    TraceNotOne,
)
from statemix.operators import (
    EigenSystem,
    eig_hermitian,
    expectation,
    is_idempotent,
    make_hermitian,
    pure_state,
    range_restrict,
    validate_state_operator,
)

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


class TestMakeHermitian:
    def test_real_diagonal_unchanged(self):
        h = make_hermitian(np.diag([1.0, 2.0]))
        assert maxdiff(h.matrix, np.diag([1.0, 2.0])) == 0.0
        assert h.defect == 0.0

    def test_pauli_y_accepted(self):
        h = make_hermitian(PAULI_Y)
        assert maxdiff(h.matrix, PAULI_Y) == 0.0

    def test_upper_triangular_rejected(self):
        with pytest.raises(NotHermitian):
            make_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]), tol=1e-10)

    def test_small_defect_symmetrized(self):
        m = np.array([[1.0, 0.5 + 1e-13j], [0.5 - 3e-13j, 2.0]])
        h = make_hermitian(m)
        assert h.defect > 0.0
        assert maxdiff(h.matrix, h.matrix.conj().T) == 0.0

    def test_not_square(self):
        with pytest.raises(NotSquare):
            make_hermitian(np.ones((2, 3)))

    def test_non_finite(self):
        with pytest.raises(NonFiniteEntries):
            make_hermitian(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestEigHermitian:
    def test_qubit_diag(self):
        es = eig_hermitian(make_hermitian(np.diag([0.75, 0.25])))
        assert np.allclose(es.eigenvalues, [0.75, 0.25], atol=0)
        assert abs(abs(es.eigenvectors[0, 0]) - 1.0) < 1e-14
        assert abs(abs(es.eigenvectors[1, 1]) - 1.0) < 1e-14

    def test_degenerate_identity_reconstructs(self):
        es = eig_hermitian(make_hermitian(np.eye(2)))
        assert np.allclose(es.eigenvalues, [1.0, 1.0])
        assert maxdiff(es.rebuild(), np.eye(2)) <= 1e-11

    def test_random_5x5_reconstruction(self):
        rng = np.random.default_rng(5)
        a = random_hermitian(rng, 5)
        es = eig_hermitian(a)
        assert maxdiff(es.rebuild(), a.matrix) <= 1e-10

    @pytest.mark.parametrize("dim", [2, 3, 4, 8, 16])
    def test_reconstruction_and_orthonormality(self, dim):
        rng = np.random.default_rng(100 + dim)
        for _ in range(10):
            a = random_hermitian(rng, dim)
            es = eig_hermitian(a)
            scale = max(1.0, np.max(np.abs(a.matrix)))
            assert maxdiff(es.rebuild(), a.matrix) <= 1e-10 * scale
            v = es.eigenvectors
            assert maxdiff(v.conj().T @ v, np.eye(dim)) <= 1e-11
            assert np.all(np.diff(es.eigenvalues) <= 1e-12)

    def test_phase_convention(self):
        rng = np.random.default_rng(7)
        a = random_hermitian(rng, 4)
        v = eig_hermitian(a).eigenvectors
        for j in range(4):
            pivot = v[np.argmax(np.abs(v[:, j])), j]
            assert pivot.imag == 0.0 and pivot.real > 0.0


class TestValidateStateOperator:
    def test_maximally_mixed(self):
        s = validate_state_operator(np.diag([0.5, 0.5]))
        assert np.allclose(s.eigenvalues, [0.5, 0.5])

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(NotPositive):
            validate_state_operator(np.diag([1.2, -0.2]))

    def test_qubit_example_valid_not_idempotent(self):
        s = validate_state_operator(np.diag([0.75, 0.25]))
        assert not is_idempotent(s)

    def test_trace_not_one(self):
        with pytest.raises(TraceNotOne):
            validate_state_operator(np.diag([0.6, 0.6]))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            validate_state_operator(np.array([[0.5, 0.3], [0.0, 0.5]]))

    def test_roundoff_cleanup(self):
        s = validate_state_operator(np.diag([1.0 + 5e-11, -5e-11]))
        assert s.cleanup.clamped_negative > 0.0
        assert s.eigenvalues[-1] == 0.0
        assert abs(sum(s.eigenvalues) - 1.0) <= 1e-15

    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_spectrum_in_unit_interval(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(20):
            s = random_state(rng, dim)
            assert np.all(s.eigenvalues >= 0.0)
            assert np.all(s.eigenvalues <= 1.0)
            assert abs(float(np.sum(s.eigenvalues)) - 1.0) <= 1e-10


class TestIsIdempotent:
    def test_projector(self):
        assert is_idempotent(pure_state([1.0, 0.0]))

    def test_qubit_mixture(self):
        assert not is_idempotent(validate_state_operator(np.diag([0.75, 0.25])))

    def test_mixed_identity(self):
        assert not is_idempotent(validate_state_operator(np.eye(3) / 3.0))


class TestExpectation:
    def test_traceless_observable(self):
        s = validate_state_operator(np.eye(2) / 2.0)
        z = make_hermitian(np.diag([1.0, -1.0]))
        assert abs(expectation(s, z)) <= 1e-15

    def test_qubit_population(self):
        s = validate_state_operator(np.diag([0.75, 0.25]))
        a = make_hermitian(np.diag([0.0, 1.0]))
        assert abs(expectation(s, a) - 0.25) <= 1e-14

    def test_projector_on_own_state(self):
        psi = pure_state(np.array([1.0, 1.0j]) / np.sqrt(2.0))
        assert abs(expectation(psi, make_hermitian(psi.matrix)) - 1.0) <= 1e-12

    def test_identity_normalization(self):
        rng = np.random.default_rng(11)
        for dim in (2, 3, 6):
            s = random_state(rng, dim)
            assert abs(expectation(s, make_hermitian(np.eye(dim))) - 1.0) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            expectation(validate_state_operator(np.eye(2) / 2), make_hermitian(np.eye(3)))


class TestRangeRestrict:
    def test_full_rank_qubit(self):
        rr = range_restrict(validate_state_operator(np.diag([0.75, 0.25])))
        assert rr.rank == 2
        assert maxdiff(rr.inverse, np.diag([4.0 / 3.0, 4.0])) <= 1e-12

    def test_pure(self):
        rr = range_restrict(pure_state([1.0, 0.0]))
        assert rr.rank == 1
        assert maxdiff(rr.inverse, [[1.0]]) <= 1e-12

    def test_rank_deficient(self):
        rr = range_restrict(validate_state_operator(np.diag([0.5, 0.5, 0.0])))
        assert rr.rank == 2
        # basis spans the first two coordinates only
        assert np.max(np.abs(rr.basis[2, :])) <= 1e-12

    @pytest.mark.parametrize("dim,rank", [(3, 2), (4, 4), (6, 3)])
    def test_inverse_property(self, dim, rank):
        rng = np.random.default_rng(dim * 10 + rank)
        s = random_state(rng, dim, rank)
        rr = range_restrict(s)
        assert rr.rank == rank
        assert maxdiff(rr.inverse @ rr.restricted, np.eye(rank)) <= 1e-9


def test_idempotent_iff_zero_entropy():
    from statemix.equilibrium import von_neumann_entropy

    rng = np.random.default_rng(42)
    states = [pure_state(rng.standard_normal(4) + 1j * rng.standard_normal(4))
              for _ in range(5)]
    states += [random_state(rng, 4) for _ in range(5)]
    for s in states:
        assert is_idempotent(s, 1e-10) == (von_neumann_entropy(s) <= 1e-9)


def test_eigensystem_type():
    es = eig_hermitian(make_hermitian(np.diag([2.0, 1.0])))
    assert isinstance(es, EigenSystem)
    assert es.dim == 2
