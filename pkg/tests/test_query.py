from __future__ import annotations

import random

import pytest

from termnet.closure import metric_closure, proximity_closure
from termnet.corpus import Resolution
from termnet.lexicon import TermClass
from termnet.netgraph import ProximityGraph, distance_from_proximity
from termnet.query import Phi, QueryError, QuerySpec, run_query

from oracles import exhaustive_query


def prox_graph(n, edges):
    terms = [f"t{i:02d}" for i in range(n)]
    classes = [TermClass.DRUG] * n
    return ProximityGraph(terms=terms, classes=classes, resolution=Resolution.WEEK, edges=dict(edges))


def random_graph(rng, n=30, density=0.3):
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                edges[(i, j)] = rng.uniform(0.01, 1.0)
    return prox_graph(n, edges)


class TestBasics:
    def test_single_term_query_is_neighbor_ranking(self):
        g = prox_graph(4, {(0, 1): 0.9, (0, 2): 0.4, (0, 3): 0.02})
        answers = run_query(g, QuerySpec.make({"t00"}, phi="min", alpha=0.05))
        assert answers.entries == [("t01", pytest.approx(0.9)), ("t02", pytest.approx(0.4))]

    def test_isolated_term_with_min_empties_answers(self):
        g = prox_graph(4, {(0, 1): 0.9})  # t03 isolated
        answers = run_query(g, QuerySpec.make({"t00", "t03"}, phi="min", alpha=0.01))
        assert answers.entries == []

    def test_query_terms_never_in_answers(self):
        g = prox_graph(4, {(0, 1): 0.9, (1, 2): 0.8, (0, 2): 0.5})
        answers = run_query(g, QuerySpec.make({"t00", "t01"}, phi="max", alpha=0.0))
        assert "t00" not in answers.terms()
        assert "t01" not in answers.terms()

    def test_absent_edges_score_zero(self):
        g = prox_graph(3, {(0, 1): 0.9})
        answers = run_query(g, QuerySpec.make({"t00"}, phi="min", alpha=0.0))
        assert ("t02", 0.0) in answers.entries

    def test_unknown_term_named_in_error(self):
        g = prox_graph(2, {(0, 1): 0.5})
        with pytest.raises(QueryError, match="nope"):
            run_query(g, QuerySpec.make({"nope"}))

    def test_empty_query_rejected(self):
        with pytest.raises(QueryError, match="empty"):
            QuerySpec.make(set())

    def test_alpha_out_of_range_rejected(self):
        with pytest.raises(QueryError, match="alpha"):
            QuerySpec.make({"t00"}, alpha=1.5)

    def test_phi_parsing(self):
        assert Phi.parse("MIN") is Phi.MIN
        with pytest.raises(QueryError):
            Phi.parse("median")


class TestOracleEquivalence:
    def test_all_phi_and_alpha_grid(self):
        rng = random.Random(55)
        for trial in range(30):
            g = random_graph(rng)
            q_size = rng.randrange(1, 4)
            q = set(rng.sample(g.terms, q_size))
            for phi in ("min", "max", "avg"):
                for alpha in (0.0, 0.05, 0.5, 1.0):
                    got = run_query(g, QuerySpec.make(q, phi=phi, alpha=alpha)).entries
                    want = exhaustive_query(g.terms, g.weight, q, phi, alpha)
                    assert len(got) == len(want), f"trial {trial} phi={phi} alpha={alpha}"
                    for (gt, gs), (wt, ws) in zip(got, want):
                        assert gt == wt
                        assert gs == pytest.approx(ws, abs=1e-12)

    def test_phi_ordering_min_avg_max(self):
        rng = random.Random(56)
        for _ in range(20):
            g = random_graph(rng)
            q = set(rng.sample(g.terms, 3))
            by_phi = {
                phi: dict(run_query(g, QuerySpec.make(q, phi=phi, alpha=0.0)).entries)
                for phi in ("min", "max", "avg")
            }
            for term in by_phi["min"]:
                assert by_phi["min"][term] <= by_phi["avg"][term] + 1e-12
                assert by_phi["avg"][term] <= by_phi["max"][term] + 1e-12

    def test_alpha_nesting(self):
        rng = random.Random(57)
        for _ in range(20):
            g = random_graph(rng)
            q = set(rng.sample(g.terms, 2))
            previous = None
            for alpha in (0.0, 0.05, 0.5, 1.0):
                current = set(run_query(g, QuerySpec.make(q, phi="avg", alpha=alpha)).terms())
                if previous is not None:
                    assert current <= previous
                previous = current

    def test_closure_dominance(self):
        rng = random.Random(58)
        for _ in range(10):
            g = random_graph(rng, n=20)
            closed = proximity_closure(metric_closure(distance_from_proximity(g)))
            q = set(rng.sample(g.terms, 2))
            direct_scores = dict(run_query(g, QuerySpec.make(q, phi="min", alpha=0.0)).entries)
            closed_scores = dict(run_query(closed, QuerySpec.make(q, phi="min", alpha=0.0)).entries)
            for term, score in direct_scores.items():
                assert closed_scores[term] >= score - 1e-12


class TestClosedGraphQueries:
    def test_two_hop_neighbor_surfaces_on_closed_graph(self):
        g = prox_graph(3, {(0, 1): 0.5, (1, 2): 0.5})
        spec_direct = QuerySpec.make({"t00"}, phi="min", alpha=0.1)
        spec_closed = QuerySpec.make({"t00"}, phi="min", alpha=0.1, graph="closed")
        direct = run_query(g, spec_direct)
        closed_graph = proximity_closure(metric_closure(distance_from_proximity(g)))
        closed = run_query(closed_graph, spec_closed)
        assert "t02" not in direct.terms()
        assert "t02" in closed.terms()
