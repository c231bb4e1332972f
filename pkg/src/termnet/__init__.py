"""Co-mention knowledge networks from timestamped post corpora."""

from .corpus import (
    CorpusError,
    LoadReport,
    Post,
    Resolution,
    Timeline,
    WindowKey,
    bucketize,
    load_corpus,
)
from .lexicon import (
    Lexicon,
    LexiconError,
    TagMatch,
    TaggedCorpus,
    TermClass,
    load_lexicon,
    tag_corpus,
    tag_post,
)
from .cooccur import CooccurrenceMatrix, build_cooccurrence, merge
from .netgraph import (
    DistanceGraph,
    ProximityGraph,
    distance_from_proximity,
    proximity_from_counts,
)
from .closure import (
    ClosedDistanceGraph,
    ClosedProximityGraph,
    metric_closure,
    proximity_closure,
    rank_semimetric_pairs,
    top_direct_pairs,
)
from .spectra import PcaResult, component_subgraph, component_terms, pca
from .query import AnswerSet, GraphChoice, Phi, QuerySpec, run_query
from .synth import PlantSpec, SyntheticLedger, generate_synthetic_corpus

__version__ = "0.1.0"

__all__ = [
    "AnswerSet",
    "ClosedDistanceGraph",
    "ClosedProximityGraph",
    "CooccurrenceMatrix",
    "CorpusError",
    "DistanceGraph",
    "GraphChoice",
    "Lexicon",
    "LexiconError",
    "LoadReport",
    "PcaResult",
    "Phi",
    "PlantSpec",
    "Post",
    "ProximityGraph",
    "QuerySpec",
    "Resolution",
    "SyntheticLedger",
    "TagMatch",
    "TaggedCorpus",
    "TermClass",
    "Timeline",
    "WindowKey",
    "bucketize",
    "build_cooccurrence",
    "component_subgraph",
    "component_terms",
    "distance_from_proximity",
    "generate_synthetic_corpus",
    "load_corpus",
    "load_lexicon",
    "merge",
    "metric_closure",
    "pca",
    "proximity_closure",
    "proximity_from_counts",
    "rank_semimetric_pairs",
    "run_query",
    "tag_corpus",
    "tag_post",
    "top_direct_pairs",
]
