import numpy as np
import pytest

from statemix.coins import (
    CoinPreparation,
    classify_heads,
    distinguish_boxes,
    posterior_type_a,
    repeated_toss_classify,
    simulate_tosses,
    single_toss_frequency,
)
from statemix.errors import BarycenterMismatch, DegenerateCoins

PAPER_PREP = CoinPreparation(p_a=1.0 / 3.0, p_b=2.0 / 3.0, w=0.5)


class TestCoinPreparation:
    def test_marginal(self):
        assert abs(PAPER_PREP.single_toss_marginal - 0.5) <= 1e-15

    @pytest.mark.parametrize("bad", [-0.1, 1.1])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            CoinPreparation(p_a=bad, p_b=0.5, w=0.5)


class TestSingleToss:
    def test_paper_preparation(self):
        p_hat, stderr = single_toss_frequency(PAPER_PREP, 100_000, seed=0)
        assert abs(p_hat - 0.5) <= 3.0 * stderr

    def test_homogeneous_coins(self):
        prep = CoinPreparation(p_a=0.3, p_b=0.3, w=0.8)
        p_hat, stderr = single_toss_frequency(prep, 50_000, seed=1)
        assert abs(p_hat - 0.3) <= 3.0 * stderr

    def test_deterministic_types(self):
        prep = CoinPreparation(p_a=0.0, p_b=1.0, w=0.3)
        p_hat, stderr = single_toss_frequency(prep, 100_000, seed=2)
        assert abs(p_hat - 0.7) <= 3.0 * stderr

    @pytest.mark.parametrize(
        "pa,pb,w", [(0.2, 0.9, 0.4), (0.5, 0.1, 0.7), (0.0, 1.0, 0.5), (0.6, 0.6, 0.2)]
    )
    def test_marginal_grid(self, pa, pb, w):
        prep = CoinPreparation(p_a=pa, p_b=pb, w=w)
        n = 100_000
        p_hat, _ = single_toss_frequency(prep, n, seed=hash((pa, pb, w)) % 2**32)
        expected = prep.single_toss_marginal
        sigma = max(np.sqrt(expected * (1.0 - expected) / n), 1e-12)
        assert abs(p_hat - expected) <= 4.0 * sigma


class TestPosterior:
    def test_single_toss_values(self):
        # head: (1/2)(1/3) / [(1/2)(1/3) + (1/2)(2/3)] = 1/3; tail: 2/3
        post = posterior_type_a(PAPER_PREP, np.array([1, 0]), k=1)
        assert abs(post[0] - 1.0 / 3.0) <= 1e-12
        assert abs(post[1] - 2.0 / 3.0) <= 1e-12

    def test_extreme_bias(self):
        prep = CoinPreparation(p_a=0.0, p_b=1.0, w=0.5)
        post = posterior_type_a(prep, np.array([0, 3]), k=3)
        assert post[0] == 1.0
        assert post[1] == 0.0


class TestRepeatedTossClassify:
    def test_single_toss_accuracy_two_thirds(self):
        n = 20_000
        result = repeated_toss_classify(PAPER_PREP, 1, n, seed=3)
        sigma = np.sqrt((2.0 / 3.0) * (1.0 / 3.0) / n)
        assert abs(result.accuracy - 2.0 / 3.0) <= 4.0 * sigma

    def test_many_tosses_reveal_the_type(self):
        result = repeated_toss_classify(PAPER_PREP, 200, 5_000, seed=4)
        assert result.accuracy >= 0.999

    def test_degenerate_coins(self):
        with pytest.raises(DegenerateCoins):
            repeated_toss_classify(CoinPreparation(0.4, 0.4, 0.5), 5, 100, seed=5)

    def test_accuracy_monotone_in_k_common_random_numbers(self):
        ks = [1, 2, 5, 10, 50]
        batch = simulate_tosses(PAPER_PREP, max(ks), 20_000, seed=6)
        accuracies = []
        for k in ks:
            heads = batch.outcomes[:, :k].sum(axis=1)
            accuracies.append(
                classify_heads(PAPER_PREP, heads, k, batch.is_type_a).accuracy
            )
        for lo, hi in zip(accuracies, accuracies[1:]):
            assert hi >= lo - 0.01

    def test_per_coin_records(self):
        result = repeated_toss_classify(PAPER_PREP, 3, 50, seed=7)
        rows = result.per_coin
        assert len(rows) == 50
        posterior, decision, truth = rows[0]
        assert 0.0 <= posterior <= 1.0
        assert decision in ("A", "B") and truth in ("A", "B")


class TestReproducibility:
    def test_identical_seeds_identical_records(self):
        b1 = simulate_tosses(PAPER_PREP, 10, 1_000, seed=8)
        b2 = simulate_tosses(PAPER_PREP, 10, 1_000, seed=8)
        assert np.array_equal(b1.is_type_a, b2.is_type_a)
        assert np.array_equal(b1.outcomes, b2.outcomes)

    def test_different_seeds_differ(self):
        b1 = simulate_tosses(PAPER_PREP, 10, 1_000, seed=8)
        b2 = simulate_tosses(PAPER_PREP, 10, 1_000, seed=9)
        assert not np.array_equal(b1.outcomes, b2.outcomes)

    def test_toss_record_view(self):
        batch = simulate_tosses(PAPER_PREP, 4, 5, seed=10)
        records = list(batch.records())
        assert len(records) == 5
        assert len(records[0].outcomes) == 4


class TestDistinguishBoxes:
    FAIR = CoinPreparation(p_a=0.5, p_b=0.5, w=0.5)

    def test_single_toss_inconclusive(self):
        result = distinguish_boxes(PAPER_PREP, self.FAIR, 1, 50_000, seed=11)
        assert result.statistic == 0.0
        assert result.decision == "inconclusive"

    def test_repeated_tosses_select_the_mixture(self):
        result = distinguish_boxes(PAPER_PREP, self.FAIR, 20, 10_000, seed=12)
        assert result.statistic > 0.0
        assert result.decision == "first"
        assert result.p_value_proxy < 0.01

    def test_box_against_itself(self):
        result = distinguish_boxes(PAPER_PREP, PAPER_PREP, 20, 5_000, seed=13)
        assert result.statistic == 0.0
        assert result.decision == "inconclusive"

    def test_marginal_mismatch(self):
        with pytest.raises(BarycenterMismatch):
            distinguish_boxes(PAPER_PREP, CoinPreparation(0.6, 0.6, 0.5), 5, 100, seed=14)

    def test_data_from_fair_box_selects_fair(self):
        # generate from the homogeneous box; mixture model must lose
        result = distinguish_boxes(self.FAIR, PAPER_PREP, 20, 10_000, seed=15)
        assert result.statistic > 0.0  # first argument generates and wins
        assert result.decision == "first"
