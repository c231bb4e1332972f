"""Pipeline stages connecting the library to the artifact store.

Each stage reads verified upstream artifacts, computes, and writes its
products (delimited data plus report figures) back into the store. Stages
are pure functions of the store contents, so reruns are reproducible.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import viz
from .closure import (
    ClassFilter,
    metric_closure,
    proximity_closure,
    rank_semimetric_pairs,
    read_closure_tsv,
    top_direct_pairs,
    write_direct_pairs_tsv,
    write_semimetric_tsv,
)
from .cooccur import CooccurrenceMatrix, build_cooccurrence
from .corpus import Resolution, load_corpus, write_corpus
from .lexicon import (
    TaggedCorpus,
    TermClass,
    TermCount,
    load_lexicon,
    load_stoplist,
    read_matches,
    tag_corpus,
)
from .netgraph import (
    ProximityGraph,
    distance_from_proximity,
    induced_subgraph,
    proximity_from_counts,
    write_graphml,
    write_network_tsv,
)
from .query import GraphChoice, QuerySpec, run_query
from .spectra import PcaResult, pca
from .store import ArtifactStore, PipelineConfig

DEFAULT_CLASS_FILTER: ClassFilter = (
    {TermClass.DRUG, TermClass.NATURAL_PRODUCT},
    {TermClass.SYMPTOM},
)


def open_store(config: PipelineConfig) -> ArtifactStore:
    config.validate()
    return ArtifactStore(config.store_dir, config)


def _target(store: ArtifactStore, name: str, resolution: Resolution | None, suffix: str) -> Path:
    path = store.path_for(name, resolution, suffix)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def stage_ingest(config: PipelineConfig) -> dict:
    """Load and normalize the corpus; write it plus the load report."""
    store = open_store(config)
    timelines, report = load_corpus(config.corpus)
    corpus_path = _target(store, "corpus", None, ".ndjson")
    write_corpus(timelines, corpus_path)
    store.put_file("corpus", corpus_path)
    store.put("load_report", report.to_json(), suffix=".json")
    return report.to_dict()


def load_store_corpus(store: ArtifactStore):
    timelines, _ = load_corpus(store.get("corpus"))
    return timelines


def build_lexicon(config: PipelineConfig):
    stop = load_stoplist(config.stoplist) if config.stoplist else set()
    return load_lexicon(config.dictionaries, stoplist=stop, cannabis_path=config.cannabis)


def stage_tag(config: PipelineConfig) -> dict:
    store = open_store(config)
    timelines = load_store_corpus(store)
    lexicon = build_lexicon(config)
    tagged = tag_corpus(lexicon, timelines)

    matches_path = _target(store, "matches", None, ".ndjson")
    tagged.write_matches(matches_path)
    store.put_file("matches", matches_path)
    counts_path = _target(store, "term_counts", None, ".tsv")
    tagged.write_term_counts(counts_path)
    store.put_file("term_counts", counts_path)
    return {
        "posts_with_matches": len(tagged.matches),
        "terms_matched": len(tagged.term_counts),
        "total_matches": sum(tc.count for tc in tagged.term_counts),
    }


def load_tagged(store: ArtifactStore) -> TaggedCorpus:
    timelines = load_store_corpus(store)
    matches = read_matches(store.get("matches"))
    counts: dict[tuple[str, TermClass], int] = {}
    for ms in matches.values():
        for m in ms:
            counts[(m.term, m.term_class)] = counts.get((m.term, m.term_class), 0) + 1
    table = [
        TermCount(term, tc, n)
        for (term, tc), n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0][0]))
    ]
    return TaggedCorpus(timelines=timelines, matches=matches, term_counts=table)


def stage_build(config: PipelineConfig) -> dict:
    """Co-occurrence counts plus proximity/distance edge lists per resolution."""
    store = open_store(config)
    tagged = load_tagged(store)
    summary = {}
    for resolution in config.resolutions:
        counts = build_cooccurrence(tagged, resolution)
        counts.check_invariants()
        counts_path = _target(store, "cooccur", resolution, ".tsv")
        counts.write_tsv(counts_path)
        store.put_file("cooccur", counts_path, resolution)

        graph = proximity_from_counts(counts, sigma=config.sigma)
        net_path = _target(store, "network", resolution, ".tsv")
        write_network_tsv(graph, net_path)
        store.put_file("network", net_path, resolution)
        summary[resolution.value] = {"terms": len(counts.terms), "edges": len(graph.edges)}
    return summary


def load_counts(store: ArtifactStore, resolution: Resolution) -> CooccurrenceMatrix:
    return CooccurrenceMatrix.read_tsv(store.get("cooccur", resolution))


def load_proximity(store: ArtifactStore, config: PipelineConfig, resolution: Resolution) -> ProximityGraph:
    """Rebuild the proximity graph from stored counts at full precision."""
    return proximity_from_counts(load_counts(store, resolution), sigma=config.sigma)


def stage_closure(config: PipelineConfig, resolutions: tuple[Resolution, ...] | None = None) -> dict:
    store = open_store(config)
    summary = {}
    for resolution in resolutions or config.resolutions:
        graph = load_proximity(store, config, resolution)
        closed = metric_closure(distance_from_proximity(graph))
        path = _target(store, "closure", resolution, ".tsv")
        closed.write_tsv(path)
        store.put_file("closure", path, resolution)
        summary[resolution.value] = {"components": len(set(closed.components))}
    return summary


def parse_class_filter(classes_a: str | None, classes_b: str | None) -> ClassFilter:
    def parse_side(raw: str | None, default: set[TermClass]) -> set[TermClass]:
        if raw is None:
            return default
        if raw.strip().lower() in ("any", "*"):
            return set(TermClass)
        return {TermClass.parse(part) for part in raw.split(",") if part.strip()}

    return (
        parse_side(classes_a, DEFAULT_CLASS_FILTER[0]),
        parse_side(classes_b, DEFAULT_CLASS_FILTER[1]),
    )


def stage_rank_direct(
    config: PipelineConfig,
    resolution: Resolution,
    k: int = 25,
    class_filter: ClassFilter | None = None,
) -> tuple[list, Path]:
    store = open_store(config)
    graph = load_proximity(store, config, resolution)
    rows = top_direct_pairs(graph, class_filter or DEFAULT_CLASS_FILTER, k=k)
    tsv_path = _target(store, "rank_direct", resolution, ".tsv")
    write_direct_pairs_tsv(rows, tsv_path)
    store.put_file("rank_direct", tsv_path, resolution)
    fig_path = _target(store, "rank_direct", resolution, ".png")
    viz.plot_top_pairs(rows, fig_path, title=f"Top direct pairs ({resolution.value})")
    store.put_file("rank_direct_fig", fig_path, resolution)
    return rows, tsv_path


def stage_rank_semimetric(
    config: PipelineConfig,
    resolution: Resolution,
    k: int = 25,
    class_filter: ClassFilter | None = None,
    absent_edge_distance: float | None = None,
) -> tuple[list, Path]:
    store = open_store(config)
    graph = load_proximity(store, config, resolution)
    dist = distance_from_proximity(graph)
    closed = read_closure_tsv(store.get("closure", resolution))
    rows = rank_semimetric_pairs(
        dist,
        closed,
        class_filter or DEFAULT_CLASS_FILTER,
        k=k,
        absent_edge_distance=absent_edge_distance,
    )
    tsv_path = _target(store, "rank_semimetric", resolution, ".tsv")
    write_semimetric_tsv(rows, tsv_path)
    store.put_file("rank_semimetric", tsv_path, resolution)
    fig_path = _target(store, "rank_semimetric", resolution, ".png")
    viz.plot_semimetric_pairs(rows, fig_path)
    store.put_file("rank_semimetric_fig", fig_path, resolution)
    return rows, tsv_path


def stage_pca(
    config: PipelineConfig,
    resolution: Resolution,
    n_components: int | None = None,
) -> tuple[PcaResult, Path]:
    store = open_store(config)
    graph = load_proximity(store, config, resolution)
    n = n_components or config.pca_components
    n = min(n, len(graph.terms))
    result = pca(graph, n)
    json_path = _target(store, "pca", resolution, ".json")
    result.write_json(json_path)
    store.put_file("pca", json_path, resolution)

    spectrum_path = _target(store, "pca_spectrum", resolution, ".png")
    viz.plot_pca_spectrum(result.eigenvalues, spectrum_path)
    store.put_file("pca_spectrum_fig", spectrum_path, resolution)
    if result.n_components >= 2:
        biplot_path = _target(store, "pca_biplot", resolution, ".png")
        viz.plot_pca_biplot(result, biplot_path)
        store.put_file("pca_biplot_fig", biplot_path, resolution)
    return result, json_path


def stage_export(
    config: PipelineConfig,
    resolution: Resolution,
    min_weight: float = 0.05,
    terms: set[str] | None = None,
    layout_seed: int = 7,
) -> dict:
    """GraphML plus a rendered network figure; optionally an induced subgraph."""
    store = open_store(config)
    graph = load_proximity(store, config, resolution)
    out: dict[str, str] = {}

    graphml_path = _target(store, "network", resolution, ".graphml")
    write_graphml(graph, graphml_path)
    store.put_file("graphml", graphml_path, resolution)
    out["graphml"] = str(graphml_path)

    fig_path = _target(store, "network", resolution, ".png")
    viz.plot_network(graph, fig_path, min_weight=min_weight, seed=layout_seed)
    store.put_file("network_fig", fig_path, resolution)
    out["figure"] = str(fig_path)

    if terms:
        sub = induced_subgraph(graph, terms, min_weight=min_weight)
        sub_graphml = _target(store, "subgraph", resolution, ".graphml")
        write_graphml(sub, sub_graphml)
        store.put_file("subgraph", sub_graphml, resolution)
        out["subgraph_graphml"] = str(sub_graphml)
        sub_tsv = _target(store, "subgraph", resolution, ".tsv")
        write_network_tsv(sub, sub_tsv)
        store.put_file("subgraph_tsv", sub_tsv, resolution)
        out["subgraph_tsv"] = str(sub_tsv)
        sub_fig = _target(store, "subgraph", resolution, ".png")
        viz.plot_network(sub, sub_fig, min_weight=0.0, seed=layout_seed)
        store.put_file("subgraph_fig", sub_fig, resolution)
        out["subgraph_figure"] = str(sub_fig)
    return out


def run_store_query(
    config: PipelineConfig,
    terms: list[str],
    phi: str = "min",
    alpha: float | None = None,
    graph_choice: str = "direct",
    resolution: Resolution | None = None,
) -> dict:
    """Query over a prepared store; response mirrors the HTTP payload."""
    store = open_store(config)
    resolution = resolution or config.resolutions[0]
    spec = QuerySpec.make(
        terms,
        phi=phi,
        alpha=config.alpha if alpha is None else alpha,
        graph=graph_choice,
    )
    direct = load_proximity(store, config, resolution)
    if spec.graph_choice is GraphChoice.CLOSED:
        closed = read_closure_tsv(store.get("closure", resolution))
        graph = proximity_closure(closed)
    else:
        graph = direct
    answers = run_query(graph, spec)
    class_of = {t: tc.value for t, tc in zip(direct.terms, direct.classes)}
    return {
        "answers": [
            {"term": t, "class": class_of.get(t, ""), "score": round(s, 9)}
            for t, s in answers.entries
        ],
        "graph_meta": {
            "resolution": resolution.value,
            "graph": spec.graph_choice.value,
            "phi": spec.phi.value,
            "alpha": spec.alpha,
            "terms": len(graph.terms),
            "sigma": config.sigma,
        },
    }
