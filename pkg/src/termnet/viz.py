"""Report figures rendered next to the delimited exports.

All figures are deterministic for a fixed store: layouts are seeded, fonts
and sizes fixed, and no timestamps are embedded.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .closure import DirectPair, SemiMetricPair
from .lexicon import TermClass
from .netgraph import ProximityGraph
from .spectra import PcaResult

CLASS_COLORS = {
    TermClass.DRUG: "#1f77b4",
    TermClass.SYMPTOM: "#d62728",
    TermClass.NATURAL_PRODUCT: "#2ca02c",
}

_SAVE = dict(dpi=150, bbox_inches="tight")


def _finish(fig, path: Path) -> Path:
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return path


def plot_top_pairs(rows: list[DirectPair], path: str | Path, title: str = "Top direct pairs") -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, max(2.0, 0.32 * len(rows) + 1)))
    if rows:
        labels = [f"{r.term_i} - {r.term_j}" for r in rows][::-1]
        values = [r.p for r in rows][::-1]
        colors = [CLASS_COLORS[r.class_i] for r in rows][::-1]
        ax.barh(range(len(rows)), values, color=colors)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlabel("proximity")
    ax.set_title(title)
    return _finish(fig, path)


def plot_semimetric_pairs(rows: list[SemiMetricPair], path: str | Path) -> Path:
    path = Path(path)
    indirect = [r for r in rows if r.indirect]
    finite = [r for r in rows if not r.indirect]
    fig, axes = plt.subplots(
        1, 2, figsize=(11, max(2.0, 0.32 * max(len(indirect), len(finite), 1) + 1))
    )
    ax = axes[0]
    if indirect:
        labels = [f"{r.term_i} - {r.term_j}" for r in indirect][::-1]
        ax.barh(range(len(indirect)), [r.p_closed for r in indirect][::-1], color="#9467bd")
        ax.set_yticks(range(len(indirect)))
        ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlabel("closed proximity")
    ax.set_title("No direct edge (indirect tier)")
    ax = axes[1]
    if finite:
        labels = [f"{r.term_i} - {r.term_j}" for r in finite][::-1]
        values = [min(r.ratio, 1e6) for r in finite][::-1]
        ax.barh(range(len(finite)), values, color="#8c564b")
        ax.set_yticks(range(len(finite)))
        ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlabel("direct / closed distance ratio")
    ax.set_title("Direct edges undercut by paths")
    fig.tight_layout()
    return _finish(fig, path)


def plot_pca_spectrum(eigenvalues: np.ndarray, path: str | Path, max_components: int = 50) -> Path:
    path = Path(path)
    values = np.asarray(eigenvalues)[:max_components]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(range(1, len(values) + 1), values, marker="o", markersize=3, lw=1)
    ax.set_xlabel("component")
    ax.set_ylabel("eigenvalue")
    ax.set_title("Spectrum of the proximity adjacency covariance")
    return _finish(fig, path)


def plot_pca_biplot(
    result: PcaResult,
    path: str | Path,
    comp_x: int = 0,
    comp_y: int = 1,
    tau: float = 0.5,
    max_labels: int = 30,
) -> Path:
    """Term correlations with two components; strong terms annotated."""
    path = Path(path)
    xs = result.correlations[:, comp_x]
    ys = result.correlations[:, comp_y]
    colors = [CLASS_COLORS[tc] for tc in result.classes]
    fig, ax = plt.subplots(figsize=(7, 7))
    ax.scatter(xs, ys, s=14, c=colors, alpha=0.75, linewidths=0)
    strength = np.abs(ys)
    for idx in np.argsort(-strength)[:max_labels]:
        if abs(ys[idx]) >= tau or abs(xs[idx]) >= tau:
            ax.annotate(result.terms[idx], (xs[idx], ys[idx]), fontsize=7)
    ax.axhline(0, color="grey", lw=0.5)
    ax.axvline(0, color="grey", lw=0.5)
    ax.set_xlabel(f"correlation with component {comp_x + 1}")
    ax.set_ylabel(f"correlation with component {comp_y + 1}")
    ax.set_title("Term correlation biplot")
    return _finish(fig, path)


def spring_layout(n: int, edges: dict[tuple[int, int], float], seed: int = 7, iterations: int = 80) -> np.ndarray:
    """Seeded force-directed layout; identical inputs give identical output."""
    rng = np.random.RandomState(seed)
    pos = rng.uniform(-1.0, 1.0, size=(n, 2))
    if n <= 1 or not edges:
        return pos
    k = 1.0 / np.sqrt(n)
    idx_i = np.array([i for i, _ in edges])
    idx_j = np.array([j for _, j in edges])
    weights = np.array(list(edges.values()))
    for it in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist2 = (delta**2).sum(axis=-1) + 1e-9
        repulse = k * k / dist2
        np.fill_diagonal(repulse, 0.0)
        disp = (delta * repulse[:, :, None]).sum(axis=1)
        edge_vec = pos[idx_i] - pos[idx_j]
        edge_len = np.sqrt((edge_vec**2).sum(axis=1)) + 1e-9
        pull = (edge_len / k) * weights
        unit = edge_vec / edge_len[:, None]
        np.add.at(disp, idx_i, -unit * pull[:, None])
        np.add.at(disp, idx_j, unit * pull[:, None])
        length = np.sqrt((disp**2).sum(axis=1, keepdims=True)) + 1e-9
        step = 0.1 * (1.0 - it / iterations)
        pos = pos + disp / length * np.minimum(length, step)
    return pos


def plot_network(
    graph: ProximityGraph,
    path: str | Path,
    min_weight: float = 0.05,
    seed: int = 7,
    label_top: int = 40,
) -> Path:
    """Force-directed view of the graph, edges filtered at min_weight."""
    path = Path(path)
    edges = {ij: p for ij, p in graph.edges.items() if p >= min_weight}
    degree = [0] * len(graph.terms)
    for i, j in edges:
        degree[i] += 1
        degree[j] += 1
    pos = spring_layout(len(graph.terms), edges, seed=seed)
    fig, ax = plt.subplots(figsize=(9, 9))
    for (i, j), p in sorted(edges.items()):
        ax.plot(
            [pos[i, 0], pos[j, 0]],
            [pos[i, 1], pos[j, 1]],
            color="grey",
            alpha=min(1.0, 0.15 + 0.85 * p),
            lw=0.5 + 1.5 * p,
            zorder=1,
        )
    visible = [i for i in range(len(graph.terms)) if degree[i] > 0]
    if visible:
        ax.scatter(
            [pos[i, 0] for i in visible],
            [pos[i, 1] for i in visible],
            s=[12 + 4 * degree[i] for i in visible],
            c=[CLASS_COLORS[graph.classes[i]] for i in visible],
            zorder=2,
            linewidths=0,
        )
        for i in sorted(visible, key=lambda i: -degree[i])[:label_top]:
            ax.annotate(graph.terms[i], (pos[i, 0], pos[i, 1]), fontsize=6, zorder=3)
    ax.set_axis_off()
    ax.set_title(f"Proximity network ({graph.resolution.value}, p >= {min_weight:g})")
    return _finish(fig, path)
