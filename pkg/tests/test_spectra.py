from __future__ import annotations

import random

import numpy as np
import pytest

from termnet.corpus import Resolution
from termnet.lexicon import TermClass
from termnet.netgraph import ProximityGraph
from termnet.spectra import (
    SpectraError,
    adjacency_matrix,
    component_subgraph,
    component_terms,
    pca,
    pca_of_matrix,
)


def prox_graph(n, edges, classes=None):
    terms = [f"t{i:02d}" for i in range(n)]
    classes = classes or [TermClass.DRUG] * n
    return ProximityGraph(
        terms=terms, classes=classes, resolution=Resolution.WEEK, edges=dict(edges)
    )


def random_symmetric(rng, n):
    a = np.array([[rng.random() for _ in range(n)] for _ in range(n)])
    a = (a + a.T) / 2
    np.fill_diagonal(a, 1.0)
    return a


class TestPcaOfMatrix:
    def test_identical_rows_give_zero_spectrum(self):
        a = np.tile(np.array([0.2, 0.5, 0.9, 0.1]), (6, 1))
        eigenvalues, _, _ = pca_of_matrix(a, 2)
        assert np.all(np.abs(eigenvalues) <= 1e-12)

    def test_rank_one_centered_matrix(self):
        # Rows are m + s_i * 1, symmetric by construction: exactly one
        # non-trivial direction survives centering.
        s = np.array([0.1, 0.4, 0.9, 0.3, 0.7])
        a = s[:, None] + s[None, :]
        eigenvalues, _, _ = pca_of_matrix(a, 2)
        assert np.sum(eigenvalues > 1e-9) == 1

    def test_eigenvalue_sum_equals_total_column_variance(self):
        rng = random.Random(1)
        a = random_symmetric(rng, 20)
        eigenvalues, _, _ = pca_of_matrix(a, 20)
        col_var = a.var(axis=0, ddof=1).sum()
        assert np.sum(eigenvalues) == pytest.approx(col_var, rel=1e-9)

    def test_full_reconstruction(self):
        rng = random.Random(2)
        a = random_symmetric(rng, 20)
        _, scores, components = pca_of_matrix(a, 20)
        centered = a - a.mean(axis=0, keepdims=True)
        assert np.allclose(scores @ components.T, centered, atol=1e-6)

    def test_eigenvalues_nonincreasing_and_nonnegative(self):
        rng = random.Random(3)
        a = random_symmetric(rng, 15)
        eigenvalues, _, _ = pca_of_matrix(a, 5)
        assert np.all(np.diff(eigenvalues) <= 1e-12)
        assert np.all(eigenvalues >= -1e-9)

    def test_score_orthogonality(self):
        rng = random.Random(4)
        a = random_symmetric(rng, 18)
        _, scores, _ = pca_of_matrix(a, 6)
        gram = scores.T @ scores
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) < 1e-8

    def test_sign_convention_deterministic(self):
        rng = random.Random(5)
        a = random_symmetric(rng, 12)
        _, s1, c1 = pca_of_matrix(a.copy(), 4)
        _, s2, c2 = pca_of_matrix(a.copy(), 4)
        assert np.array_equal(s1, s2)
        assert np.array_equal(c1, c2)
        for col in range(c1.shape[1]):
            lead = np.argmax(np.abs(c1[:, col]))
            assert c1[lead, col] > 0

    def test_bad_component_counts_rejected(self):
        a = np.eye(4)
        with pytest.raises(SpectraError):
            pca_of_matrix(a, 0)
        with pytest.raises(SpectraError):
            pca_of_matrix(a, 5)


class TestPcaOnGraph:
    def test_adjacency_has_unit_diagonal(self):
        g = prox_graph(3, {(0, 1): 0.5})
        a = adjacency_matrix(g)
        assert np.array_equal(np.diag(a), np.ones(3))
        assert a[0, 1] == a[1, 0] == 0.5

    def test_two_term_graph_is_rank_one(self):
        g = prox_graph(2, {(0, 1): 0.5})
        res = pca(g, 1)
        assert np.sum(res.eigenvalues > 1e-9) == 1

    def test_correlations_bounded(self):
        rng = random.Random(8)
        edges = {
            (i, j): rng.random()
            for i in range(10)
            for j in range(i + 1, 10)
            if rng.random() < 0.4
        }
        g = prox_graph(10, edges)
        res = pca(g, 4)
        assert np.all(res.correlations <= 1.0 + 1e-9)
        assert np.all(res.correlations >= -1.0 - 1e-9)

    def test_requires_two_terms(self):
        g = prox_graph(1, {})
        with pytest.raises(SpectraError):
            pca(g, 1)

    def test_report_json_round_trip(self, tmp_path):
        import json

        g = prox_graph(4, {(0, 1): 0.9, (2, 3): 0.8})
        res = pca(g, 2)
        out = tmp_path / "pca.json"
        res.write_json(out)
        data = json.loads(out.read_text())
        assert data["n_components"] == 2
        assert len(data["eigenvalues"]) == 4
        assert len(data["terms"]) == 4
        assert all(len(t["correlations"]) == 2 for t in data["terms"])


class TestComponentTerms:
    def block_graph(self):
        # Two tight blocks with no cross edges; the leading component
        # separates them with opposite correlation signs.
        edges = {}
        for i in range(3):
            for j in range(i + 1, 3):
                edges[(i, j)] = 0.9
        for i in range(3, 6):
            for j in range(i + 1, 6):
                edges[(i, j)] = 0.9
        return prox_graph(6, edges)

    def test_blocks_separate(self):
        res = pca(self.block_graph(), 2)
        correlated, anticorrelated = component_terms(res, 0, tau=0.5)
        got_pos = {t for t, _ in correlated}
        got_neg = {t for t, _ in anticorrelated}
        block_a = {"t00", "t01", "t02"}
        block_b = {"t03", "t04", "t05"}
        assert got_pos in (block_a, block_b)
        assert got_neg in (block_a, block_b)
        assert got_pos != got_neg

    def test_tau_one_usually_empty(self):
        res = pca(self.block_graph(), 2)
        correlated, anticorrelated = component_terms(res, 0, tau=1.0)
        for term, c in correlated:
            assert c >= 1.0 - 1e-12
        for term, c in anticorrelated:
            assert c <= -1.0 + 1e-12

    def test_ranked_by_absolute_correlation(self):
        rng = random.Random(11)
        edges = {
            (i, j): rng.random()
            for i in range(12)
            for j in range(i + 1, 12)
            if rng.random() < 0.5
        }
        res = pca(prox_graph(12, edges), 3)
        correlated, anticorrelated = component_terms(res, 1, tau=0.1)
        mags = [abs(c) for _, c in correlated]
        assert mags == sorted(mags, reverse=True)
        mags = [abs(c) for _, c in anticorrelated]
        assert mags == sorted(mags, reverse=True)

    def test_component_out_of_range(self):
        res = pca(self.block_graph(), 2)
        with pytest.raises(SpectraError):
            component_terms(res, 5)
        with pytest.raises(SpectraError):
            component_terms(res, 0, tau=0.0)


class TestComponentSubgraph:
    def test_threshold_filters_edges(self):
        g = prox_graph(4, {(0, 1): 0.9, (1, 2): 0.04, (2, 3): 0.5})
        sub = component_subgraph(g, {"t00", "t01", "t02"}, min_weight=0.05)
        pairs = {(sub.terms[i], sub.terms[j]) for (i, j) in sub.edges}
        assert pairs == {("t00", "t01")}

    def test_unknown_term_named(self):
        g = prox_graph(2, {(0, 1): 0.5})
        with pytest.raises(SpectraError, match="missingterm"):
            component_subgraph(g, {"t00", "missingterm"})
