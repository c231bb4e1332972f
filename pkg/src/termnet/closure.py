"""Metric closure of the distance graph and pair rankings.

The closure replaces every distance with the length of the shortest path,
computed by one Dijkstra run per source over the sparse graph. Pairs whose
direct distance exceeds their closed distance break transitivity: they are
strongly associated through indirect paths but only weakly observed
directly. Such semi-metric pairs are ranked by the direct/closed distance
ratio, with pairs lacking any direct edge placed in a dedicated top tier
ordered by closed proximity.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Resolution
from .lexicon import TermClass
from .netgraph import DistanceGraph, EXPORT_DECIMALS, ProximityGraph, distance_to_proximity


class ClosureError(Exception):
    pass


@dataclass
class ClosedDistanceGraph:
    """All-pairs shortest-path lengths; inf marks unreachable pairs."""

    terms: list[str]
    classes: list[TermClass]
    resolution: Resolution
    dmatrix: np.ndarray
    components: list[int]

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}

    def distance(self, term_i: str, term_j: str) -> float:
        return float(self.dmatrix[self.index[term_i], self.index[term_j]])

    def write_tsv(self, path: str | Path) -> None:
        """Full-matrix TSV of closed distances for pairs inside a component."""
        dp = EXPORT_DECIMALS
        n = len(self.terms)
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write(f"# resolution\t{self.resolution.value}\n")
            for term, tc, comp in zip(self.terms, self.classes, self.components):
                fh.write(f"# term\t{term}\t{tc.value}\t{comp}\n")
            fh.write("term_i\tterm_j\td_closed\n")
            for i in range(n):
                for j in range(i + 1, n):
                    d = self.dmatrix[i, j]
                    if math.isfinite(d):
                        fh.write(f"{self.terms[i]}\t{self.terms[j]}\t{d:.{dp}f}\n")


@dataclass
class ClosedProximityGraph:
    """Proximity view of the closure: p = 1/(d+1), zero when unreachable."""

    terms: list[str]
    classes: list[TermClass]
    resolution: Resolution
    pmatrix: np.ndarray

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}

    def weight(self, term_i: str, term_j: str) -> float:
        return float(self.pmatrix[self.index[term_i], self.index[term_j]])

    def weight_by_index(self, i: int, j: int) -> float:
        return float(self.pmatrix[i, j])


def _adjacency(dist: DistanceGraph) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in dist.terms]
    for (i, j), d in dist.edges.items():
        adj[i].append((j, d))
        adj[j].append((i, d))
    return adj


def _dijkstra(adj: list[list[tuple[int, float]]], source: int, out: np.ndarray) -> None:
    # Plain-list working array: scalar indexing into numpy rows is far
    # slower inside this loop.
    dist = [math.inf] * len(adj)
    dist[source] = 0.0
    heap = [(0.0, source)]
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        d, u = pop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                push(heap, (nd, v))
    out[:] = dist


def _component_labels(n: int, adj: list[list[tuple[int, float]]]) -> list[int]:
    labels = [-1] * n
    label = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = label
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if labels[v] == -1:
                    labels[v] = label
                    stack.append(v)
        label += 1
    return labels


def metric_closure(dist: DistanceGraph) -> ClosedDistanceGraph:
    """Shortest-path length between every pair, one Dijkstra per source."""
    n = len(dist.terms)
    adj = _adjacency(dist)
    dmatrix = np.full((n, n), np.inf)
    for source in range(n):
        _dijkstra(adj, source, dmatrix[source])
    return ClosedDistanceGraph(
        terms=list(dist.terms),
        classes=list(dist.classes),
        resolution=dist.resolution,
        dmatrix=dmatrix,
        components=_component_labels(n, adj),
    )


def proximity_closure(closed: ClosedDistanceGraph) -> ClosedProximityGraph:
    """Invert the distance map on the closure; unreachable pairs get p = 0."""
    with np.errstate(divide="ignore"):
        pmatrix = 1.0 / (closed.dmatrix + 1.0)
    pmatrix[~np.isfinite(closed.dmatrix)] = 0.0
    return ClosedProximityGraph(
        terms=list(closed.terms),
        classes=list(closed.classes),
        resolution=closed.resolution,
        pmatrix=pmatrix,
    )


ClassFilter = tuple[set[TermClass], set[TermClass]]

ANY_CLASS: ClassFilter = (set(TermClass), set(TermClass))


def _pair_orientation(
    term_a: str, class_a: TermClass, term_b: str, class_b: TermClass, class_filter: ClassFilter
) -> tuple[str, TermClass, str, TermClass] | None:
    """Orient a qualifying pair (first-set term first); None if filtered out."""
    first, second = class_filter
    fwd = class_a in first and class_b in second
    rev = class_b in first and class_a in second
    if fwd and rev:
        if term_b < term_a:
            return term_b, class_b, term_a, class_a
        return term_a, class_a, term_b, class_b
    if fwd:
        return term_a, class_a, term_b, class_b
    if rev:
        return term_b, class_b, term_a, class_a
    return None


@dataclass(frozen=True)
class DirectPair:
    term_i: str
    term_j: str
    class_i: TermClass
    class_j: TermClass
    p: float


def top_direct_pairs(
    graph: ProximityGraph, class_filter: ClassFilter = ANY_CLASS, k: int = 25
) -> list[DirectPair]:
    """Strongest direct edges between the two class groups, by proximity."""
    if k <= 0:
        return []
    rows: list[DirectPair] = []
    for (i, j), p in graph.edges.items():
        oriented = _pair_orientation(
            graph.terms[i], graph.classes[i], graph.terms[j], graph.classes[j], class_filter
        )
        if oriented is None:
            continue
        ti, ci, tj, cj = oriented
        rows.append(DirectPair(ti, tj, ci, cj, p))
    rows.sort(key=lambda r: (-r.p, r.term_i, r.term_j))
    return rows[:k]


@dataclass(frozen=True)
class SemiMetricPair:
    """A pair whose shortest path undercuts (or replaces) its direct edge.

    ratio = d_direct / d_closed for pairs with a direct edge; None when no
    direct edge exists, in which case the pair sits in the indirect tier.
    """

    term_i: str
    term_j: str
    class_i: TermClass
    class_j: TermClass
    d_direct: float | None
    d_closed: float
    ratio: float | None
    p_closed: float

    @property
    def indirect(self) -> bool:
        return self.ratio is None


def rank_semimetric_pairs(
    dist: DistanceGraph,
    closed: ClosedDistanceGraph,
    class_filter: ClassFilter = ANY_CLASS,
    k: int = 25,
    absent_edge_distance: float | None = None,
) -> list[SemiMetricPair]:
    """Rank pairs by how strongly their shortest path beats the direct edge.

    Pairs with no direct edge but a finite closed distance rank above every
    finite-ratio pair, ordered by closed proximity. Passing
    absent_edge_distance instead treats missing edges as that distance and
    folds everything into a single ratio ranking.
    """
    if dist.terms != closed.terms:
        raise ClosureError("distance graph and closure cover different term sets")
    if k <= 0:
        return []
    n = len(dist.terms)
    indirect: list[SemiMetricPair] = []
    ratios: list[SemiMetricPair] = []
    for i in range(n):
        for j in range(i + 1, n):
            d_closed = float(closed.dmatrix[i, j])
            if not math.isfinite(d_closed):
                continue
            oriented = _pair_orientation(
                dist.terms[i], dist.classes[i], dist.terms[j], dist.classes[j], class_filter
            )
            if oriented is None:
                continue
            ti, ci, tj, cj = oriented
            p_closed = distance_to_proximity(d_closed)
            d_direct = dist.edges.get((i, j))
            if d_direct is None and absent_edge_distance is not None:
                d_direct = absent_edge_distance
            if d_direct is None:
                indirect.append(
                    SemiMetricPair(ti, tj, ci, cj, None, d_closed, None, p_closed)
                )
                continue
            if d_closed > 0.0:
                ratio = d_direct / d_closed
            else:
                # Zero-length path: a positive direct edge is maximally
                # semi-metric; a zero direct edge is exactly metric.
                ratio = math.inf if d_direct > 0.0 else 1.0
            ratios.append(SemiMetricPair(ti, tj, ci, cj, d_direct, d_closed, ratio, p_closed))
    indirect.sort(key=lambda r: (-r.p_closed, r.term_i, r.term_j))
    ratios.sort(key=lambda r: (-r.ratio, r.term_i, r.term_j))  # type: ignore[operator]
    return (indirect + ratios)[:k]


def write_semimetric_tsv(rows: list[SemiMetricPair], path: str | Path) -> None:
    """TSV ranking; indirect-tier rows carry INDIRECT instead of a ratio."""
    dp = EXPORT_DECIMALS
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("term_i\tterm_j\tclass_i\tclass_j\td_direct\td_closed\tratio\tp_closed\n")
        for r in rows:
            d_direct = "" if r.d_direct is None else f"{r.d_direct:.{dp}f}"
            if r.ratio is None:
                ratio = "INDIRECT"
            elif math.isinf(r.ratio):
                ratio = "INF"
            else:
                ratio = f"{r.ratio:.{dp}f}"
            fh.write(
                f"{r.term_i}\t{r.term_j}\t{r.class_i.value}\t{r.class_j.value}\t"
                f"{d_direct}\t{r.d_closed:.{dp}f}\t{ratio}\t{r.p_closed:.{dp}f}\n"
            )


def read_closure_tsv(path: str | Path) -> ClosedDistanceGraph:
    """Inverse of ClosedDistanceGraph.write_tsv."""
    terms: list[str] = []
    classes: list[TermClass] = []
    components: list[int] = []
    resolution: Resolution | None = None
    entries: list[tuple[str, str, float]] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# resolution\t"):
                resolution = Resolution.parse(line.split("\t")[1])
            elif line.startswith("# term\t"):
                _, term, tc, comp = line.split("\t")
                terms.append(term)
                classes.append(TermClass.parse(tc))
                components.append(int(comp))
            elif line.startswith("term_i\t"):
                continue
            else:
                ti, tj, d = line.split("\t")
                entries.append((ti, tj, float(d)))
    if resolution is None:
        raise ClosureError(f"missing resolution header in {path}")
    index = {t: i for i, t in enumerate(terms)}
    n = len(terms)
    dmatrix = np.full((n, n), np.inf)
    np.fill_diagonal(dmatrix, 0.0)
    for ti, tj, d in entries:
        i, j = index[ti], index[tj]
        dmatrix[i, j] = d
        dmatrix[j, i] = d
    return ClosedDistanceGraph(
        terms=terms, classes=classes, resolution=resolution, dmatrix=dmatrix, components=components
    )


def write_direct_pairs_tsv(rows: list[DirectPair], path: str | Path) -> None:
    dp = EXPORT_DECIMALS
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("term_i\tterm_j\tclass_i\tclass_j\tp\n")
        for r in rows:
            fh.write(f"{r.term_i}\t{r.term_j}\t{r.class_i.value}\t{r.class_j.value}\t{r.p:.{dp}f}\n")
