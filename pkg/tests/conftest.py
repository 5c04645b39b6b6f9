"""Shared helpers for the test suite."""

import numpy as np

from statemix.operators import make_hermitian, validate_state_operator


def random_state(rng, dim, rank=None):
    """Random density operator (Wishart construction), optionally rank-deficient."""
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return validate_state_operator(m / np.trace(m).real)


def random_hermitian(rng, dim, scale=1.0):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return make_hermitian(scale * (g + g.conj().T) / 2.0)


def maxdiff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
