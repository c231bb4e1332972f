"""Proximity and distance graphs over co-mentioned terms.

Proximity is the windowed Jaccard ratio r_ij / (r_ii + r_jj - r_ij): the
probability that two terms share a window given that either occurs. Edges
whose window-union count falls below a support threshold are dropped. The
isomorphic distance graph maps each weight through d = 1/p - 1, which is
strictly decreasing on (0, 1], so shortest paths order by association.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .cooccur import CooccurrenceMatrix
from .corpus import Resolution
from .lexicon import TermClass


class GraphError(Exception):
    pass


DEFAULT_SUPPORT = 10
EXPORT_DECIMALS = 6


@dataclass
class ProximityGraph:
    """Sparse symmetric term graph with weights in (0, 1].

    Self-proximity is implicitly 1 and never stored or exported. supports
    holds the window-union count behind each edge when the graph was built
    from counts; graphs read back from an edge list lack it.
    """

    terms: list[str]
    classes: list[TermClass]
    resolution: Resolution
    sigma: int = DEFAULT_SUPPORT
    edges: dict[tuple[int, int], float] = field(default_factory=dict)
    supports: dict[tuple[int, int], int] | None = None

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}

    def weight(self, term_i: str, term_j: str) -> float:
        i, j = self.index[term_i], self.index[term_j]
        return self.weight_by_index(i, j)

    def weight_by_index(self, i: int, j: int) -> float:
        if i == j:
            return 1.0
        if i > j:
            i, j = j, i
        return self.edges.get((i, j), 0.0)

    def neighbors(self, term: str) -> list[tuple[str, float]]:
        i = self.index[term]
        out = []
        for (a, b), p in self.edges.items():
            if a == i:
                out.append((self.terms[b], p))
            elif b == i:
                out.append((self.terms[a], p))
        out.sort(key=lambda tp: (-tp[1], tp[0]))
        return out


@dataclass
class DistanceGraph:
    """Isomorphic image of a proximity graph under d = 1/p - 1.

    An absent edge means zero proximity (conceptually infinite distance);
    d = 0 holds exactly when p = 1. Self-distance is 0.
    """

    terms: list[str]
    classes: list[TermClass]
    resolution: Resolution
    edges: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}

    def distance(self, term_i: str, term_j: str) -> float | None:
        i, j = self.index[term_i], self.index[term_j]
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return self.edges.get((i, j))


def proximity_from_counts(counts: CooccurrenceMatrix, sigma: int = DEFAULT_SUPPORT) -> ProximityGraph:
    """Jaccard proximity with a minimum window-union support of `sigma`.

    p_ij = r_ij / (r_ii + r_jj - r_ij); the pair is dropped when the union
    count is below sigma or when the terms never co-occur.
    """
    if sigma < 1:
        raise GraphError(f"support threshold must be >= 1, got {sigma}")
    edges: dict[tuple[int, int], float] = {}
    supports: dict[tuple[int, int], int] = {}
    for (i, j), r_ij in counts.pairs.items():
        if r_ij <= 0:
            continue
        union = counts.diag[i] + counts.diag[j] - r_ij
        if union < sigma or union <= 0:
            continue
        edges[(i, j)] = r_ij / union
        supports[(i, j)] = union
    return ProximityGraph(
        terms=list(counts.terms),
        classes=list(counts.classes),
        resolution=counts.resolution,
        sigma=sigma,
        edges=edges,
        supports=supports,
    )


def proximity_to_distance(p: float) -> float:
    return 1.0 / p - 1.0


def distance_to_proximity(d: float) -> float:
    return 1.0 / (d + 1.0)


def distance_from_proximity(graph: ProximityGraph) -> DistanceGraph:
    """Map every present edge through d = 1/p - 1."""
    return DistanceGraph(
        terms=list(graph.terms),
        classes=list(graph.classes),
        resolution=graph.resolution,
        edges={ij: proximity_to_distance(p) for ij, p in graph.edges.items()},
    )


def write_network_tsv(graph: ProximityGraph, path: str | Path) -> None:
    """Edge-list TSV with a header block naming terms, classes, resolution,
    and the support threshold. Weights are rounded to 6 decimals."""
    dp = EXPORT_DECIMALS
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"# resolution\t{graph.resolution.value}\n")
        fh.write(f"# sigma\t{graph.sigma}\n")
        for term, tc in zip(graph.terms, graph.classes):
            fh.write(f"# term\t{term}\t{tc.value}\n")
        fh.write("term_i\tterm_j\tp_ij\td_ij\n")
        for (i, j) in sorted(graph.edges):
            p = graph.edges[(i, j)]
            d = proximity_to_distance(p)
            fh.write(f"{graph.terms[i]}\t{graph.terms[j]}\t{p:.{dp}f}\t{d:.{dp}f}\n")


def read_network_tsv(path: str | Path) -> tuple[ProximityGraph, DistanceGraph]:
    terms: list[str] = []
    classes: list[TermClass] = []
    resolution: Resolution | None = None
    sigma = DEFAULT_SUPPORT
    p_edges: dict[tuple[int, int], float] = {}
    d_edges: dict[tuple[int, int], float] = {}
    index: dict[str, int] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# resolution\t"):
                resolution = Resolution.parse(line.split("\t")[1])
            elif line.startswith("# sigma\t"):
                sigma = int(line.split("\t")[1])
            elif line.startswith("# term\t"):
                _, term, tc = line.split("\t")
                index[term] = len(terms)
                terms.append(term)
                classes.append(TermClass.parse(tc))
            elif line.startswith("term_i\t"):
                continue
            else:
                ti, tj, p, d = line.split("\t")
                ij = (index[ti], index[tj])
                p_edges[ij] = float(p)
                d_edges[ij] = float(d)
    if resolution is None:
        raise GraphError(f"missing resolution header in {path}")
    prox = ProximityGraph(terms=terms, classes=classes, resolution=resolution, sigma=sigma, edges=p_edges)
    dist = DistanceGraph(terms=list(terms), classes=list(classes), resolution=resolution, edges=d_edges)
    return prox, dist


def write_graphml(graph: ProximityGraph, path: str | Path) -> None:
    """GraphML with a class attribute per node and p, d, support per edge."""
    dp = EXPORT_DECIMALS
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="class" for="node" attr.name="class" attr.type="string"/>',
        '  <key id="p" for="edge" attr.name="p" attr.type="double"/>',
        '  <key id="d" for="edge" attr.name="d" attr.type="double"/>',
        '  <key id="support" for="edge" attr.name="support" attr.type="long"/>',
        '  <graph edgedefault="undirected">',
    ]
    for term, tc in zip(graph.terms, graph.classes):
        lines.append(f"    <node id={quoteattr(term)}>")
        lines.append(f'      <data key="class">{escape(tc.value)}</data>')
        lines.append("    </node>")
    for (i, j) in sorted(graph.edges):
        p = graph.edges[(i, j)]
        d = proximity_to_distance(p)
        lines.append(f"    <edge source={quoteattr(graph.terms[i])} target={quoteattr(graph.terms[j])}>")
        lines.append(f'      <data key="p">{p:.{dp}f}</data>')
        lines.append(f'      <data key="d">{d:.{dp}f}</data>')
        if graph.supports is not None:
            lines.append(f'      <data key="support">{graph.supports[(i, j)]}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def induced_subgraph(graph: ProximityGraph, terms: set[str], min_weight: float = 0.05) -> ProximityGraph:
    """Subgraph on `terms` keeping edges with p >= min_weight."""
    unknown = sorted(t for t in terms if t not in graph.index)
    if unknown:
        raise GraphError(f"unknown term(s): {', '.join(unknown)}")
    keep = sorted(terms)
    new_index = {t: i for i, t in enumerate(keep)}
    old_index = [graph.index[t] for t in keep]
    old_to_new = {o: n for n, o in enumerate(old_index)}
    edges: dict[tuple[int, int], float] = {}
    supports: dict[tuple[int, int], int] | None = {} if graph.supports is not None else None
    for (i, j), p in graph.edges.items():
        if i in old_to_new and j in old_to_new and p >= min_weight:
            a, b = old_to_new[i], old_to_new[j]
            if a > b:
                a, b = b, a
            edges[(a, b)] = p
            if supports is not None:
                supports[(a, b)] = graph.supports[(i, j)]  # type: ignore[index]
    return ProximityGraph(
        terms=keep,
        classes=[graph.classes[o] for o in old_index],
        resolution=graph.resolution,
        sigma=graph.sigma,
        edges=edges,
        supports=supports,
    )
