"""Command line pipeline driver.

Stages write into the artifact store configured by a key-value config
file; failures print a machine-readable JSON error to stderr and exit
nonzero.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import pipeline
from .closure import ClosureError
from .cooccur import CooccurError
from .corpus import CorpusError, Resolution
from .lexicon import LexiconError, TermClass
from .netgraph import GraphError
from .query import QueryError
from .spectra import SpectraError
from .store import PipelineConfig, StoreError
from .synth import PlantSpec, generate_synthetic_corpus, vocab_for_scale

_DOMAIN_ERRORS = (
    StoreError,
    CorpusError,
    LexiconError,
    CooccurError,
    GraphError,
    ClosureError,
    SpectraError,
    QueryError,
)


def fail(code: str, message: str, **extra) -> None:
    payload = {"error": {"code": code, "message": message, **extra}}
    click.echo(json.dumps(payload, sort_keys=True), err=True)
    sys.exit(2)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StoreError as exc:
            extra = {"stage": exc.stage} if exc.stage else {}
            fail("missing_artifact" if exc.stage else "store_error", str(exc), **extra)
        except _DOMAIN_ERRORS as exc:
            fail(type(exc).__name__.removesuffix("Error").lower() + "_error", str(exc))

    return wrapper


config_option = click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Pipeline config file (key = value format).",
)

resolution_option = click.option(
    "--resolution",
    "resolution",
    default=None,
    help="Resolution to operate on (day/week/month); defaults to the first configured one.",
)


def load_config(config_path: Path) -> PipelineConfig:
    return PipelineConfig.from_file(config_path)


def pick_resolution(config: PipelineConfig, raw: str | None) -> Resolution:
    if raw is None:
        return config.resolutions[0]
    resolution = Resolution.parse(raw)
    if resolution not in config.resolutions:
        raise StoreError(
            f"resolution {resolution.value!r} is not configured (have: "
            f"{', '.join(r.value for r in config.resolutions)})"
        )
    return resolution


@click.group()
@click.version_option(package_name="termnet")
def main():
    """Build and explore co-mention term networks from post corpora."""


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--users", default=100, show_default=True)
@click.option("--posts", default=5000, show_default=True)
@click.option("--vocab", "vocab_size", default=50, show_default=True)
@click.option("--pairs", default=3, show_default=True, help="Planted drug-symptom pairs.")
@click.option("--chains", default=2, show_default=True, help="Planted indirect chains.")
@click.option("--co-rate", default=0.9, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--resolutions", default="day,week", show_default=True)
@guarded
def synth(out_dir, users, posts, vocab_size, pairs, chains, co_rate, seed, resolutions):
    """Generate a synthetic corpus project with planted associations."""
    out_dir.mkdir(parents=True, exist_ok=True)
    vocab = vocab_for_scale(vocab_size)
    by_class: dict[TermClass, list[str]] = {tc: [] for tc in TermClass}
    for term, tc in vocab:
        by_class[tc].append(term)

    drugs = by_class[TermClass.DRUG]
    symptoms = by_class[TermClass.SYMPTOM]
    if pairs + chains > len(symptoms) or 2 * chains + pairs > len(drugs):
        fail("synth_error", "vocab too small for the requested planted structure")
    planted_pairs = tuple(
        (drugs[i], symptoms[i], co_rate) for i in range(pairs)
    )
    planted_chains = tuple(
        (drugs[pairs + 2 * i], drugs[pairs + 2 * i + 1], symptoms[pairs + i])
        for i in range(chains)
    )
    spec = PlantSpec(
        n_users=users,
        n_posts=posts,
        vocab=tuple(vocab),
        planted_pairs=planted_pairs,
        planted_chains=planted_chains,
        seed=seed,
    )
    timelines, ledger = generate_synthetic_corpus(spec)

    from .corpus import write_corpus

    write_corpus(timelines, out_dir / "corpus.ndjson")
    dicts_dir = out_dir / "dicts"
    dicts_dir.mkdir(exist_ok=True)
    file_of = {
        TermClass.DRUG: "drugs.tsv",
        TermClass.SYMPTOM: "symptoms.tsv",
        TermClass.NATURAL_PRODUCT: "natural_products.tsv",
    }
    for tc, fname in file_of.items():
        (dicts_dir / fname).write_text(
            "".join(f"{t}\n" for t in sorted(by_class[tc])), encoding="utf-8"
        )
    (out_dir / "stoplist.txt").write_text("", encoding="utf-8")
    ledger.write_json(out_dir / "ground_truth.json")

    config_text = "\n".join(
        [
            "# generated synthetic project",
            "corpus = corpus.ndjson",
            "dict.drug = dicts/drugs.tsv",
            "dict.symptom = dicts/symptoms.tsv",
            "dict.natural_product = dicts/natural_products.tsv",
            "stoplist = stoplist.txt",
            f"resolutions = {resolutions}",
            "sigma = 10",
            "pca_components = 10",
            "alpha = 0.05",
            "store = store",
            "",
        ]
    )
    (out_dir / "termnet.cfg").write_text(config_text, encoding="utf-8")
    click.echo(
        json.dumps(
            {
                "config": str(out_dir / "termnet.cfg"),
                "corpus": str(out_dir / "corpus.ndjson"),
                "ground_truth": str(out_dir / "ground_truth.json"),
                "planted_pairs": [[a, b] for a, b, _ in planted_pairs],
                "planted_chains": [list(c) for c in planted_chains],
            },
            indent=2,
            sort_keys=True,
        )
    )


@main.command()
@config_option
@guarded
def ingest(config_path):
    """Load, validate, and normalize the corpus into the store."""
    report = pipeline.stage_ingest(load_config(config_path))
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command()
@config_option
@guarded
def tag(config_path):
    """Tag the stored corpus with dictionary matches."""
    summary = pipeline.stage_tag(load_config(config_path))
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@config_option
@guarded
def build(config_path):
    """Build co-occurrence counts and proximity/distance networks."""
    summary = pipeline.stage_build(load_config(config_path))
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@config_option
@resolution_option
@guarded
def closure(config_path, resolution):
    """Compute all-pairs shortest-path closures."""
    config = load_config(config_path)
    resolutions = (pick_resolution(config, resolution),) if resolution else None
    summary = pipeline.stage_closure(config, resolutions)
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


def _echo_tsv(path: Path) -> None:
    click.echo(path.read_text(encoding="utf-8"), nl=False)


@main.command("rank-direct")
@config_option
@resolution_option
@click.option("-k", "top_k", default=25, show_default=True)
@click.option("--classes-a", default=None, help="Comma list for one side (default drug,natural_product).")
@click.option("--classes-b", default=None, help="Comma list for the other side (default symptom).")
@guarded
def rank_direct(config_path, resolution, top_k, classes_a, classes_b):
    """Rank the strongest direct pairs between two class groups."""
    config = load_config(config_path)
    res = pick_resolution(config, resolution)
    class_filter = pipeline.parse_class_filter(classes_a, classes_b)
    _, tsv_path = pipeline.stage_rank_direct(config, res, k=top_k, class_filter=class_filter)
    _echo_tsv(tsv_path)


@main.command("rank-semimetric")
@config_option
@resolution_option
@click.option("-k", "top_k", default=25, show_default=True)
@click.option("--classes-a", default=None)
@click.option("--classes-b", default=None)
@click.option(
    "--absent-edge-distance",
    default=None,
    type=float,
    help="Treat missing direct edges as this distance instead of using the indirect tier.",
)
@guarded
def rank_semimetric(config_path, resolution, top_k, classes_a, classes_b, absent_edge_distance):
    """Rank pairs whose indirect paths beat their direct association."""
    config = load_config(config_path)
    res = pick_resolution(config, resolution)
    class_filter = pipeline.parse_class_filter(classes_a, classes_b)
    _, tsv_path = pipeline.stage_rank_semimetric(
        config, res, k=top_k, class_filter=class_filter, absent_edge_distance=absent_edge_distance
    )
    _echo_tsv(tsv_path)


@main.command()
@config_option
@resolution_option
@click.option("--components", default=None, type=int)
@guarded
def pca(config_path, resolution, components):
    """Spectral decomposition of the proximity adjacency matrix."""
    config = load_config(config_path)
    res = pick_resolution(config, resolution)
    result, json_path = pipeline.stage_pca(config, res, n_components=components)
    click.echo(
        json.dumps(
            {
                "report": str(json_path),
                "eigenvalues_head": [round(float(v), 6) for v in result.eigenvalues[:10]],
            },
            indent=2,
            sort_keys=True,
        )
    )


@main.command()
@config_option
@resolution_option
@click.option("--terms", required=True, help="Comma-separated query terms.")
@click.option("--phi", default="min", show_default=True, type=click.Choice(["min", "max", "avg"]))
@click.option("--alpha", default=None, type=float)
@click.option("--graph", "graph_choice", default="direct", show_default=True, type=click.Choice(["direct", "closed"]))
@guarded
def query(config_path, resolution, terms, phi, alpha, graph_choice):
    """Rank terms by aggregated proximity to a query set."""
    config = load_config(config_path)
    res = pick_resolution(config, resolution)
    response = pipeline.run_store_query(
        config,
        [t.strip() for t in terms.split(",") if t.strip()],
        phi=phi,
        alpha=alpha,
        graph_choice=graph_choice,
        resolution=res,
    )
    click.echo(json.dumps(response, indent=2, sort_keys=True))


@main.command()
@config_option
@resolution_option
@click.option("--min-weight", default=0.05, show_default=True)
@click.option("--terms", default=None, help="Optional comma list: also export this induced subgraph.")
@click.option("--layout-seed", default=7, show_default=True)
@guarded
def export(config_path, resolution, min_weight, terms, layout_seed):
    """Write GraphML and rendered network figures."""
    config = load_config(config_path)
    res = pick_resolution(config, resolution)
    term_set = {t.strip() for t in terms.split(",") if t.strip()} if terms else None
    out = pipeline.stage_export(config, res, min_weight=min_weight, terms=term_set, layout_seed=layout_seed)
    click.echo(json.dumps(out, indent=2, sort_keys=True))


@main.command()
@config_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True)
@guarded
def serve(config_path, host, port):
    """Serve the prepared store over HTTP for the explorer UI."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
