from __future__ import annotations

import random

import pytest

from termnet.cooccur import CooccurrenceMatrix
from termnet.corpus import Resolution
from termnet.lexicon import TermClass
from termnet.netgraph import (
    GraphError,
    ProximityGraph,
    distance_from_proximity,
    distance_to_proximity,
    induced_subgraph,
    proximity_from_counts,
    proximity_to_distance,
    read_network_tsv,
    write_graphml,
    write_network_tsv,
)


def counts_matrix(terms, diag, pairs, resolution=Resolution.WEEK):
    classes = [TermClass.DRUG if i % 2 == 0 else TermClass.SYMPTOM for i in range(len(terms))]
    return CooccurrenceMatrix(
        terms=list(terms), classes=classes, resolution=resolution, diag=list(diag), pairs=dict(pairs)
    )


def random_counts(rng, n_terms=12, n_windows=80):
    """Counts built from random window sets, so invariants hold by construction."""
    terms = [f"t{i:02d}" for i in range(n_terms)]
    windows = [set() for _ in range(n_windows)]
    for w in windows:
        for i in range(n_terms):
            if rng.random() < 0.25:
                w.add(i)
    diag = [sum(1 for w in windows if i in w) for i in range(n_terms)]
    pairs = {}
    for i in range(n_terms):
        for j in range(i + 1, n_terms):
            r = sum(1 for w in windows if i in w and j in w)
            if r:
                pairs[(i, j)] = r
    return counts_matrix(terms, diag, pairs), windows


class TestProximity:
    def test_perfect_cooccurrence_gives_one(self):
        m = counts_matrix(["a", "b"], [12, 12], {(0, 1): 12})
        p = proximity_from_counts(m, sigma=10)
        assert p.weight("a", "b") == 1.0

    def test_support_rule_zeroes_weak_union(self):
        # union = 6 + 5 - 2 = 9 < 10, so the pair is dropped despite co-occurring
        m = counts_matrix(["a", "b"], [6, 5], {(0, 1): 2})
        p = proximity_from_counts(m, sigma=10)
        assert p.weight("a", "b") == 0.0
        assert p.edges == {}

    def test_jaccard_arithmetic(self):
        m = counts_matrix(["a", "b"], [20, 10], {(0, 1): 10})
        p = proximity_from_counts(m, sigma=10)
        assert p.weight("a", "b") == pytest.approx(10 / 20)

    def test_self_proximity_is_implicitly_one(self):
        m = counts_matrix(["a", "b"], [15, 15], {(0, 1): 5})
        p = proximity_from_counts(m)
        assert p.weight("a", "a") == 1.0
        assert all(i != j for (i, j) in p.edges)

    def test_sigma_configurable(self):
        m = counts_matrix(["a", "b"], [6, 5], {(0, 1): 2})
        p = proximity_from_counts(m, sigma=5)
        assert p.weight("a", "b") == pytest.approx(2 / 9)

    def test_sigma_below_one_rejected(self):
        m = counts_matrix(["a", "b"], [6, 5], {(0, 1): 2})
        with pytest.raises(GraphError):
            proximity_from_counts(m, sigma=0)

    def test_zero_count_pairs_have_no_edge(self):
        m = counts_matrix(["a", "b", "c"], [30, 30, 30], {(0, 1): 15})
        p = proximity_from_counts(m)
        assert p.weight("a", "c") == 0.0
        assert p.weight("b", "c") == 0.0

    def test_support_soundness(self):
        rng = random.Random(4)
        m, _ = random_counts(rng)
        p = proximity_from_counts(m, sigma=10)
        for (i, j) in p.edges:
            union = m.diag[i] + m.diag[j] - m.pairs[(i, j)]
            assert union >= 10
            assert p.supports[(i, j)] == union

    def test_scale_invariance(self):
        rng = random.Random(6)
        m, _ = random_counts(rng)
        scaled = counts_matrix(
            m.terms,
            [d * 3 for d in m.diag],
            {ij: r * 3 for ij, r in m.pairs.items()},
        )
        p1 = proximity_from_counts(m, sigma=1)
        p2 = proximity_from_counts(scaled, sigma=1)
        assert set(p1.edges) == set(p2.edges)
        for ij, w in p1.edges.items():
            assert p2.edges[ij] == pytest.approx(w, abs=1e-12)


class TestDistanceMap:
    def test_p_one_maps_to_zero(self):
        assert proximity_to_distance(1.0) == 0.0

    def test_p_half_maps_to_one(self):
        assert proximity_to_distance(0.5) == pytest.approx(1.0)

    def test_small_p(self):
        assert proximity_to_distance(0.05) == pytest.approx(19.0)

    def test_round_trip_identity(self):
        rng = random.Random(12)
        for _ in range(1000):
            p = rng.uniform(1e-6, 1.0)
            assert distance_to_proximity(proximity_to_distance(p)) == pytest.approx(p, abs=1e-12)

    def test_strictly_decreasing(self):
        rng = random.Random(3)
        samples = sorted(rng.uniform(1e-6, 1.0) for _ in range(100))
        dists = [proximity_to_distance(p) for p in samples]
        assert all(a > b for a, b in zip(dists, dists[1:]))

    def test_graph_map_and_absent_edges(self):
        m = counts_matrix(["a", "b", "c"], [20, 20, 20], {(0, 1): 10})
        p = proximity_from_counts(m)
        d = distance_from_proximity(p)
        assert d.distance("a", "b") == pytest.approx(1.0 / p.weight("a", "b") - 1.0)
        assert d.distance("a", "c") is None  # no edge: conceptually infinite
        assert d.distance("a", "a") == 0.0
        assert set(d.edges) == set(p.edges)


class TestExports:
    def graph(self):
        m = counts_matrix(["a", "b", "c d"], [20, 20, 20], {(0, 1): 10, (1, 2): 20})
        return proximity_from_counts(m)

    def test_edge_tsv_round_trip(self, tmp_path):
        g = self.graph()
        path = tmp_path / "net.tsv"
        write_network_tsv(g, path)
        prox, dist = read_network_tsv(path)
        assert prox.terms == g.terms
        assert prox.classes == g.classes
        assert set(prox.edges) == set(g.edges)
        for ij, p in g.edges.items():
            assert prox.edges[ij] == pytest.approx(p, abs=1e-6)
            assert dist.edges[ij] == pytest.approx(1 / p - 1, abs=1e-6)

    def test_tsv_has_four_columns_and_header(self, tmp_path):
        path = tmp_path / "net.tsv"
        write_network_tsv(self.graph(), path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# resolution\t")
        data = [l for l in lines if not l.startswith("#")]
        assert data[0] == "term_i\tterm_j\tp_ij\td_ij"
        assert all(len(l.split("\t")) == 4 for l in data)

    def test_graphml_wellformed_with_attributes(self, tmp_path):
        import xml.etree.ElementTree as ET

        path = tmp_path / "net.graphml"
        write_graphml(self.graph(), path)
        root = ET.parse(path).getroot()
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        nodes = root.findall(".//g:node", ns)
        edges = root.findall(".//g:edge", ns)
        assert len(nodes) == 3
        assert len(edges) == 2
        node_classes = {n.get("id"): n.find("g:data", ns).text for n in nodes}
        assert node_classes["a"] == "drug"
        keys = {d.get("key") for e in edges for d in e.findall("g:data", ns)}
        assert keys == {"p", "d", "support"}

    def test_exports_deterministic(self, tmp_path):
        g = self.graph()
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_network_tsv(g, a)
        write_network_tsv(g, b)
        assert a.read_bytes() == b.read_bytes()
        ga, gb = tmp_path / "a.graphml", tmp_path / "b.graphml"
        write_graphml(g, ga)
        write_graphml(g, gb)
        assert ga.read_bytes() == gb.read_bytes()


class TestInducedSubgraph:
    def test_min_weight_zero_keeps_everything(self):
        g = TestExports().graph()
        sub = induced_subgraph(g, set(g.terms), min_weight=0.0)
        assert set(sub.terms) == set(g.terms)
        assert len(sub.edges) == len(g.edges)

    def test_min_weight_above_max_gives_edgeless(self):
        g = TestExports().graph()
        sub = induced_subgraph(g, set(g.terms), min_weight=1.1)
        assert sub.edges == {}
        assert sub.terms == sorted(g.terms)

    def test_matches_linear_scan_filter(self):
        rng = random.Random(9)
        m, _ = random_counts(rng)
        g = proximity_from_counts(m, sigma=1)
        keep = set(g.terms[::2])
        sub = induced_subgraph(g, keep, min_weight=0.1)
        expected = set()
        for (i, j), p in g.edges.items():
            if g.terms[i] in keep and g.terms[j] in keep and p >= 0.1:
                expected.add((g.terms[i], g.terms[j], round(p, 9)))
        got = {(sub.terms[i], sub.terms[j], round(p, 9)) for (i, j), p in sub.edges.items()}
        assert got == expected

    def test_unknown_term_error_names_it(self):
        g = TestExports().graph()
        with pytest.raises(GraphError, match="nosuchterm"):
            induced_subgraph(g, {"a", "nosuchterm"})
