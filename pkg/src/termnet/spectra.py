"""Spectral decomposition of the proximity adjacency matrix.

A dense adjacency with unit diagonal is column mean-centered and the
covariance eigendecomposed. Term groupings emerge as sets of terms whose
adjacency rows correlate strongly (or anti-correlate) with a component's
score vector; their induced subgraph exposes the module's internal edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lexicon import TermClass
from .netgraph import GraphError, ProximityGraph, induced_subgraph


class SpectraError(Exception):
    pass


@dataclass
class PcaResult:
    """Eigenvalues (full spectrum, non-increasing), per-term scores on the
    retained components, and per-term/component Pearson correlations
    between adjacency rows and score vectors."""

    terms: list[str]
    classes: list[TermClass]
    eigenvalues: np.ndarray
    scores: np.ndarray           # (n_terms, n_components)
    correlations: np.ndarray     # (n_terms, n_components)
    n_components: int

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [round(float(v), 12) for v in self.eigenvalues],
            "n_components": self.n_components,
            "terms": [
                {
                    "term": t,
                    "class": tc.value,
                    "correlations": [round(float(c), 9) for c in self.correlations[i]],
                }
                for i, (t, tc) in enumerate(zip(self.terms, self.classes))
            ],
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")


def adjacency_matrix(graph: ProximityGraph) -> np.ndarray:
    """Dense symmetric adjacency with self-proximity 1 on the diagonal."""
    n = len(graph.terms)
    a = np.zeros((n, n))
    for (i, j), p in graph.edges.items():
        a[i, j] = p
        a[j, i] = p
    np.fill_diagonal(a, 1.0)
    return a


def pca_of_matrix(a: np.ndarray, n_components: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigendecomposition of the covariance of the column-centered matrix.

    Returns (eigenvalues desc, scores, components) where scores are the
    centered rows projected onto the retained eigenvectors. Each
    component's sign is fixed so its largest-magnitude loading is positive.
    """
    n_rows, n_cols = a.shape
    if n_components <= 0:
        raise SpectraError(f"n_components must be positive, got {n_components}")
    if n_components > n_cols:
        raise SpectraError(f"n_components={n_components} exceeds variable count {n_cols}")
    centered = a - a.mean(axis=0, keepdims=True)
    denom = max(n_rows - 1, 1)
    cov = centered.T @ centered / denom
    eigenvalues, vectors = np.linalg.eigh(cov)
    if not np.all(np.isfinite(eigenvalues)):
        raise SpectraError("eigendecomposition did not converge to finite eigenvalues")
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]
    for c in range(vectors.shape[1]):
        lead = np.argmax(np.abs(vectors[:, c]))
        if vectors[lead, c] < 0:
            vectors[:, c] = -vectors[:, c]
    scores = centered @ vectors[:, :n_components]
    return eigenvalues, scores, vectors[:, :n_components]


def _pearson_columns(rows: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """Pearson correlation of every row of `rows` with every score column.
    Zero-variance rows or columns yield correlation 0."""
    rc = rows - rows.mean(axis=1, keepdims=True)
    sc = scores - scores.mean(axis=0, keepdims=True)
    row_norm = np.linalg.norm(rc, axis=1)
    col_norm = np.linalg.norm(sc, axis=0)
    denom = np.outer(row_norm, col_norm)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = (rc @ sc) / denom
    corr[~np.isfinite(corr)] = 0.0
    return np.clip(corr, -1.0, 1.0)


def pca(graph: ProximityGraph, n_components: int) -> PcaResult:
    """Principal components of the proximity adjacency matrix."""
    if len(graph.terms) < 2:
        raise SpectraError("need at least 2 terms for a spectral decomposition")
    a = adjacency_matrix(graph)
    eigenvalues, scores, _ = pca_of_matrix(a, n_components)
    correlations = _pearson_columns(a, scores)
    return PcaResult(
        terms=list(graph.terms),
        classes=list(graph.classes),
        eigenvalues=eigenvalues,
        scores=scores,
        correlations=correlations,
        n_components=n_components,
    )


def component_terms(
    result: PcaResult, component: int, tau: float = 0.5
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """Terms correlated (>= tau) and anti-correlated (<= -tau) with one
    component, each ranked by absolute correlation."""
    if not 0.0 < tau <= 1.0:
        raise SpectraError(f"correlation threshold must be in (0, 1], got {tau}")
    if not 0 <= component < result.n_components:
        raise SpectraError(f"component {component} out of range (retained: {result.n_components})")
    col = result.correlations[:, component]
    correlated = [(t, float(c)) for t, c in zip(result.terms, col) if c >= tau]
    anticorrelated = [(t, float(c)) for t, c in zip(result.terms, col) if c <= -tau]
    correlated.sort(key=lambda tc: (-abs(tc[1]), tc[0]))
    anticorrelated.sort(key=lambda tc: (-abs(tc[1]), tc[0]))
    return correlated, anticorrelated


def component_subgraph(graph: ProximityGraph, terms: set[str], min_weight: float = 0.05) -> ProximityGraph:
    """Induced subgraph of a component's terms, dropping edges below
    min_weight; unknown terms are fatal and named."""
    try:
        return induced_subgraph(graph, terms, min_weight)
    except GraphError as exc:
        raise SpectraError(str(exc)) from exc
