import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synthcorpus import chain_models

from topicflow.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidZetaError,
    TooFewEpochsError,
)
from topicflow.hdp import EpochModel, Topic
from topicflow.relatedness import (
    MEASURES,
    EmpiricalCdf,
    bhattacharyya_coefficient,
    bhattacharyya_distance,
    build_graph,
    empirical_cdf,
    kl_divergence,
    prune,
)


def naive_bc(p, q):
    """Independent plain-Python oracle."""
    return sum(math.sqrt(a * b) for a, b in zip(p, q))


def naive_kld(p, q, clamp=1e-12):
    qc = [max(b, clamp) for b in q]
    s = sum(qc)
    qc = [b / s for b in qc]
    return sum(a * math.log(a / b) for a, b in zip(p, qc) if a > 0)


def random_simplex_pairs(n, dim, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield rng.dirichlet(np.ones(dim)), rng.dirichlet(np.ones(dim))


class TestBhattacharyya:
    def test_identity(self):
        p = np.array([0.2, 0.3, 0.5])
        assert bhattacharyya_coefficient(p, p) == pytest.approx(1.0, abs=1e-12)

    def test_worked_constant(self):
        # oracle: sqrt(.45) + sqrt(.05), frozen
        assert bhattacharyya_coefficient([0.5, 0.5], [0.9, 0.1]) == pytest.approx(
            0.8944271909999159, abs=1e-9
        )

    def test_disjoint_supports(self):
        assert bhattacharyya_coefficient([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_symmetry_exact(self):
        for p, q in random_simplex_pairs(200, 20, seed=1):
            assert bhattacharyya_coefficient(p, q) == bhattacharyya_coefficient(q, p)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            bhattacharyya_coefficient([0.5, 0.5], [1.0])

    def test_distance_relation(self):
        for p, q in random_simplex_pairs(100, 10, seed=2):
            bc = bhattacharyya_coefficient(p, q)
            bhd = bhattacharyya_distance(p, q)
            assert bhd >= 0
            assert (bc == pytest.approx(1.0, abs=1e-12)) == (bhd == pytest.approx(0.0, abs=1e-9))


class TestKld:
    def test_self_divergence_zero(self):
        p = np.array([0.25, 0.25, 0.5])
        assert kl_divergence(p, p) == pytest.approx(0.0, abs=1e-9)

    def test_worked_constant_forward(self):
        assert kl_divergence([0.5, 0.5], [0.9, 0.1]) == pytest.approx(
            0.5108256237659907, abs=1e-9
        )

    def test_worked_constant_reverse_shows_asymmetry(self):
        assert kl_divergence([0.9, 0.1], [0.5, 0.5]) == pytest.approx(
            0.3680642071684971, abs=1e-9
        )

    def test_matches_naive_oracle(self):
        for p, q in random_simplex_pairs(300, 30, seed=3):
            assert kl_divergence(p, q) == pytest.approx(naive_kld(p, q), abs=1e-12)

    def test_gibbs_inequality(self):
        for p, q in random_simplex_pairs(1000, 20, seed=4):
            kld = kl_divergence(p, q)
            assert kld >= 0
            if kld < 1e-9:
                assert np.abs(p - q).max() < 1e-6

    def test_clamp_handles_zeros_in_q(self):
        val = kl_divergence([0.5, 0.5], [1.0, 0.0])
        assert math.isfinite(val) and val > 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            kl_divergence([1.0], [0.5, 0.5])

    @given(
        st.lists(st.floats(min_value=0.01, max_value=10), min_size=2, max_size=20),
        st.lists(st.floats(min_value=0.01, max_value=10), min_size=2, max_size=20),
    )
    @settings(max_examples=100, deadline=None)
    def test_nonnegative_on_arbitrary_simplex_points(self, raw_p, raw_q):
        n = min(len(raw_p), len(raw_q))
        p = np.array(raw_p[:n]) / sum(raw_p[:n])
        q = np.array(raw_q[:n]) / sum(raw_q[:n])
        assert kl_divergence(p, q) >= 0


class TestEmpiricalCdf:
    def test_order_statistic_quantile(self):
        cdf = empirical_cdf([1.0, 2.0, 3.0, 4.0])
        assert cdf.quantile(0.5) == 2.0

    def test_zeta_zero_sentinel(self):
        cdf = empirical_cdf([5.0, 6.0])
        assert cdf.quantile(0.0) == -math.inf

    def test_zeta_one_is_max(self):
        cdf = empirical_cdf([3.0, 9.0, 7.0])
        assert cdf.quantile(1.0) == 9.0

    def test_step_function_values(self):
        cdf = empirical_cdf([1.0, 2.0, 3.0, 4.0])
        assert cdf(0.5) == 0.0
        assert cdf(1.0) == 0.25
        assert cdf(2.5) == 0.5
        assert cdf(4.0) == 1.0
        assert cdf(9.0) == 1.0

    def test_monotone_right_continuous(self):
        rng = np.random.default_rng(5)
        values = rng.exponential(size=50)
        cdf = empirical_cdf(values)
        xs = np.sort(np.concatenate([values, rng.uniform(0, values.max(), 100)]))
        fs = [cdf(x) for x in xs]
        assert all(b >= a for a, b in zip(fs, fs[1:]))
        assert all(0.0 <= f <= 1.0 for f in fs)
        # the step happens at the datum itself: F includes its own point
        for v in values:
            assert cdf(v) - cdf(v - 1e-9) >= 1 / len(values) - 1e-12

    def test_quantile_matches_smallest_value_with_f_at_least_zeta(self):
        rng = np.random.default_rng(6)
        values = list(rng.uniform(size=25))
        cdf = empirical_cdf(values)
        for zeta in rng.uniform(0.01, 1.0, size=40):
            q = cdf.quantile(zeta)
            assert cdf(q) >= zeta
            below = [v for v in values if v < q]
            if below:
                assert cdf(max(below)) < zeta

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            EmpiricalCdf([])

    def test_invalid_zeta(self):
        cdf = empirical_cdf([1.0])
        with pytest.raises(InvalidZetaError):
            cdf.quantile(1.5)


def hand_models(dists_by_epoch):
    """EpochModels straight from hand-built distributions."""
    models = []
    for epoch, dists in enumerate(dists_by_epoch):
        topics = [
            Topic(
                epoch=epoch,
                id=i,
                term_dist=np.asarray(d, dtype=float),
                mass=1.0 / len(dists),
                token_count=100,
            )
            for i, d in enumerate(dists)
        ]
        models.append(EpochModel(epoch=epoch, topics=topics, log_likelihood_trace=[]))
    return models


def smoothed(d, eps=1e-6):
    arr = np.asarray(d, dtype=float) + eps
    return arr / arr.sum()


class TestBuildGraph:
    def test_complete_bipartite_counts(self):
        models = hand_models(
            [
                [smoothed([1, 0, 0, 0]), smoothed([0, 1, 0, 0])],
                [smoothed([0, 0, 1, 0]), smoothed([0, 0, 0, 1]), smoothed([1, 1, 0, 0])],
            ]
        )
        graph = build_graph(models, "bhattacharyya")
        assert len(graph.edges) == 6
        assert len(graph.nodes) == 5

    def test_three_epochs_no_skipping(self):
        models = hand_models(
            [
                [smoothed([1, 0]), smoothed([0, 1])],
                [smoothed([1, 0]), smoothed([0, 1])],
                [smoothed([1, 0]), smoothed([0, 1])],
            ]
        )
        graph = build_graph(models, "kld_forward")
        assert len(graph.edges) == 8
        for e in graph.edges:
            assert e.dst.epoch == e.src.epoch + 1

    def test_relatedness_fields_consistent(self):
        slices, models, _ = chain_models(n_epochs=3, seed=11)
        for measure in MEASURES:
            graph = build_graph(models, measure)
            for e in graph.edges:
                assert 0.0 < e.relatedness <= 1.0 + 1e-12
                if measure == "bhattacharyya":
                    assert e.relatedness == e.raw_weight
                else:
                    assert e.relatedness == pytest.approx(
                        math.exp(-e.raw_weight), abs=1e-12
                    )

    def test_too_few_epochs(self):
        models = hand_models([[smoothed([1, 0])]])
        with pytest.raises(TooFewEpochsError):
            build_graph(models, "bhattacharyya")

    def test_unknown_measure(self):
        models = hand_models([[smoothed([1, 0])], [smoothed([0, 1])]])
        with pytest.raises(ValueError):
            build_graph(models, "cosine")


class TestPrune:
    def make_graph(self, relatednesses):
        models = hand_models(
            [
                [smoothed([1, 0, 0, 0])] * len(relatednesses),
                [smoothed([0, 0, 1, 0])],
            ]
        )
        graph = build_graph(models, "bhattacharyya")
        # swap in controlled relatedness values, preserving structure
        from dataclasses import replace

        edges = tuple(
            replace(e, relatedness=r, raw_weight=r)
            for e, r in zip(graph.edges, relatednesses)
        )
        return replace(graph, edges=edges, cdf=EmpiricalCdf(relatednesses))

    def test_zeta_zero_keeps_all(self):
        graph = self.make_graph([0.1, 0.2, 0.3, 0.4])
        pruned = prune(graph, 0.0)
        assert all(e.surviving for e in pruned.edges)
        assert pruned.zeta == 0.0 and pruned.pruned

    def test_hand_quantile_case(self):
        graph = self.make_graph([0.1, 0.2, 0.3, 0.4])
        pruned = prune(graph, 0.5)
        survivors = sorted(e.relatedness for e in pruned.surviving_edges())
        assert survivors == [0.2, 0.3, 0.4]

    def test_monotone_nesting(self):
        rng = np.random.default_rng(7)
        graph = self.make_graph(list(rng.uniform(size=12)))
        prev = None
        for zeta in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
            surviving = {e.key for e in prune(graph, zeta).surviving_edges()}
            if prev is not None:
                assert surviving <= prev
            prev = surviving

    def test_non_destructive_and_repeatable(self):
        graph = self.make_graph([0.1, 0.2, 0.3, 0.4])
        tight = prune(graph, 0.9)
        loose = prune(tight, 0.0)
        assert len(loose.surviving_edges()) == 4
        assert len(tight.edges) == 4  # full edge set retained

    def test_invalid_zeta(self):
        graph = self.make_graph([0.5, 0.6])
        with pytest.raises(InvalidZetaError):
            prune(graph, -0.1)
