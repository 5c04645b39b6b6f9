"""Biased-coin preparation lab: intrinsic vs extrinsic probability.

Two coin types carry intrinsic head probabilities p_a and p_b; a slot machine
hands out type A with extrinsic probability w.  A single toss per coin only
ever reveals the blended marginal w p_a + (1-w) p_b, so differently-built
boxes with the same marginal are indistinguishable; repeated tosses of the
same coin separate the types and expose the trick.  Everything here is
classical i.i.d. Bernoulli sampling with exact Bayes post-processing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .errors import BarycenterMismatch, DegenerateCoins
from .seeding import as_generator

MARGINAL_MATCH_TOL = 1e-12
LLR_TIE_FLOOR = 1e-12  # per-coin log-likelihood ratios below this are exact ties


@dataclass(frozen=True)
class CoinPreparation:
    """Coin-box description: intrinsic biases p_a, p_b and extrinsic weight w."""

    p_a: float
    p_b: float
    w: float

    def __post_init__(self):
        for name in ("p_a", "p_b", "w"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    @property
    def single_toss_marginal(self) -> float:
        """Head probability of one toss of one coin from the box: w p_a + (1-w) p_b."""
        return self.w * self.p_a + (1.0 - self.w) * self.p_b


@dataclass(frozen=True)
class TossRecord:
    """Toss history of one coin; ``true_type`` is the hidden label, for scoring."""

    coin_index: int
    true_type: str  # "A" | "B"
    outcomes: tuple[bool, ...]  # True = head


@dataclass(frozen=True, eq=False)
class TossBatch:
    """Vectorized toss histories for a batch of coins."""

    is_type_a: np.ndarray  # (n,) bool
    outcomes: np.ndarray   # (n, k) bool, True = head

    @property
    def n_coins(self) -> int:
        return self.is_type_a.size

    @property
    def k(self) -> int:
        return self.outcomes.shape[1]

    @property
    def heads(self) -> np.ndarray:
        return self.outcomes.sum(axis=1)

    def records(self):
        for i in range(self.n_coins):
            yield TossRecord(
                coin_index=i,
                true_type="A" if self.is_type_a[i] else "B",
                outcomes=tuple(bool(x) for x in self.outcomes[i]),
            )


def simulate_tosses(prep: CoinPreparation, k: int, n_coins: int, seed) -> TossBatch:
    """Hand out n_coins coins and toss each one k times."""
    if k < 1 or n_coins < 1:
        raise ValueError("k and n_coins must be >= 1")
    rng = as_generator(seed)
    is_a = rng.random(n_coins) < prep.w
    p_heads = np.where(is_a, prep.p_a, prep.p_b)
    outcomes = rng.random((n_coins, k)) < p_heads[:, None]
    return TossBatch(is_type_a=is_a, outcomes=outcomes)


def single_toss_frequency(prep: CoinPreparation, n_coins: int, seed) -> tuple[float, float]:
    """Empirical head frequency over one toss per coin, with binomial stderr."""
    batch = simulate_tosses(prep, 1, n_coins, seed)
    p_hat = float(batch.heads.mean())
    stderr = math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n_coins)
    return p_hat, stderr


def posterior_type_a(prep: CoinPreparation, heads, k: int) -> np.ndarray:
    """Exact Bayes posterior P(type A | h heads in k tosses) with prior w."""
    h = np.asarray(heads, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        # binomial coefficients cancel in the ratio; logpmf handles p in {0,1}
        log_a = binom.logpmf(h, k, prep.p_a) + np.log(prep.w)
        log_b = binom.logpmf(h, k, prep.p_b) + np.log(1.0 - prep.w)
        denom = np.logaddexp(log_a, log_b)
        out = np.exp(log_a - denom)
    return np.where(np.isneginf(denom), 0.5, out)


@dataclass(frozen=True, eq=False)
class ClassificationResult:
    """Per-coin Bayes classification against the hidden type labels."""

    accuracy: float
    k: int
    heads: np.ndarray
    posterior_a: np.ndarray
    decision_a: np.ndarray  # bool, True = classified as type A
    is_type_a: np.ndarray   # bool, hidden truth

    @property
    def per_coin(self) -> list[tuple[float, str, str]]:
        return [
            (float(p), "A" if d else "B", "A" if t else "B")
            for p, d, t in zip(self.posterior_a, self.decision_a, self.is_type_a)
        ]


def classify_heads(prep: CoinPreparation, heads, k: int, is_type_a) -> ClassificationResult:
    """Score head counts with the exact Bayes rule (posterior ties go to A)."""
    heads = np.asarray(heads)
    posterior = posterior_type_a(prep, heads, k)
    decision = posterior >= 0.5
    accuracy = float(np.mean(decision == np.asarray(is_type_a)))
    return ClassificationResult(
        accuracy=accuracy,
        k=k,
        heads=heads,
        posterior_a=posterior,
        decision_a=decision,
        is_type_a=np.asarray(is_type_a),
    )


def repeated_toss_classify(
    prep: CoinPreparation, k: int, n_coins: int, seed
) -> ClassificationResult:
    """Toss each coin k times and classify its type by exact Bayes.

    Raises DegenerateCoins when p_a = p_b, where no number of tosses can beat
    the prior.
    """
    if prep.p_a == prep.p_b:
        raise DegenerateCoins("p_a = p_b: repeated tosses carry no type information")
    batch = simulate_tosses(prep, k, n_coins, seed)
    return classify_heads(prep, batch.heads, k, batch.is_type_a)


def _mixture_pmf(prep: CoinPreparation, k: int) -> np.ndarray:
    """Head-count pmf over {0..k} for one coin drawn from the box."""
    h = np.arange(k + 1)
    return prep.w * binom.pmf(h, k, prep.p_a) + (1.0 - prep.w) * binom.pmf(h, k, prep.p_b)


@dataclass(frozen=True, eq=False)
class DistinguishResult:
    """Model-comparison verdict between two equal-marginal coin boxes."""

    statistic: float        # total log-likelihood ratio, first model over second
    p_value_proxy: float    # bootstrap fraction of resampled statistics <= 0
    decision: str           # "first" | "second" | "inconclusive"
    per_coin_llr: np.ndarray


def distinguish_boxes(
    prep_mixed: CoinPreparation,
    prep_fair: CoinPreparation,
    k: int,
    n_coins: int,
    seed,
    bootstrap: int = 1000,
) -> DistinguishResult:
    """Try to tell which box generated the data, from k tosses per coin.

    Both boxes must share the single-toss marginal; data is generated from
    ``prep_mixed``.  Per-coin head counts are scored by the log-likelihood
    ratio of the two mixture-of-binomials models; significance comes from a
    seeded bootstrap over coins.  At k = 1 the two head-count distributions
    coincide and the verdict stays inconclusive; for larger k the verdict
    settles on the generating box as k * n_coins grows.
    """
    gap = abs(prep_mixed.single_toss_marginal - prep_fair.single_toss_marginal)
    if gap > MARGINAL_MATCH_TOL:
        raise BarycenterMismatch(f"single-toss marginals differ by {gap:.3e}")
    rng = as_generator(seed)
    batch = simulate_tosses(prep_mixed, k, n_coins, rng)
    heads = batch.heads
    pmf_first = np.clip(_mixture_pmf(prep_mixed, k), 1e-300, None)
    pmf_second = np.clip(_mixture_pmf(prep_fair, k), 1e-300, None)
    llr = np.log(pmf_first[heads]) - np.log(pmf_second[heads])
    llr = np.where(np.abs(llr) < LLR_TIE_FLOOR, 0.0, llr)
    statistic = float(llr.sum())

    if np.all(llr == 0.0):
        return DistinguishResult(0.0, 1.0, "inconclusive", llr)
    sums = np.empty(bootstrap)
    for b in range(bootstrap):
        sums[b] = llr[rng.integers(0, n_coins, size=n_coins)].sum()
    p_neg = (1.0 + float(np.sum(sums <= 0.0))) / (bootstrap + 1.0)
    p_pos = (1.0 + float(np.sum(sums >= 0.0))) / (bootstrap + 1.0)
    if statistic > 0.0 and p_neg < 0.05:
        decision = "first"
    elif statistic < 0.0 and p_pos < 0.05:
        decision = "second"
    else:
        decision = "inconclusive"
    return DistinguishResult(statistic, p_neg, decision, llr)
