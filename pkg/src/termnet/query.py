"""Set queries over a proximity graph or its closure.

Given a query set Q, every other term is scored by aggregating its
proximity to the members of Q with min, max, or avg; absent edges count as
zero proximity. Terms scoring at or above the threshold alpha form the
answer set, ranked by score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .closure import ClosedProximityGraph
from .netgraph import ProximityGraph


class QueryError(Exception):
    pass


class Phi(Enum):
    MIN = "min"
    MAX = "max"
    AVG = "avg"

    @classmethod
    def parse(cls, value: str) -> "Phi":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise QueryError(f"unknown aggregation {value!r} (expected min, max, or avg)") from None


class GraphChoice(Enum):
    DIRECT = "direct"
    CLOSED = "closed"

    @classmethod
    def parse(cls, value: str) -> "GraphChoice":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise QueryError(f"unknown graph choice {value!r} (expected direct or closed)") from None


DEFAULT_ALPHA = 0.05

AnyProximityGraph = Union[ProximityGraph, ClosedProximityGraph]


@dataclass(frozen=True)
class QuerySpec:
    terms: frozenset[str]
    phi: Phi = Phi.MIN
    alpha: float = DEFAULT_ALPHA
    graph_choice: GraphChoice = GraphChoice.DIRECT

    def __post_init__(self):
        if not self.terms:
            raise QueryError("query set is empty")
        if not 0.0 <= self.alpha <= 1.0:
            raise QueryError(f"alpha must lie in [0, 1], got {self.alpha}")

    @classmethod
    def make(cls, terms, phi="min", alpha=DEFAULT_ALPHA, graph="direct") -> "QuerySpec":
        return cls(
            terms=frozenset(terms),
            phi=phi if isinstance(phi, Phi) else Phi.parse(phi),
            alpha=float(alpha),
            graph_choice=graph if isinstance(graph, GraphChoice) else GraphChoice.parse(graph),
        )


@dataclass
class AnswerSet:
    """Ranked (term, score) entries; query terms never appear."""

    entries: list[tuple[str, float]] = field(default_factory=list)

    def terms(self) -> list[str]:
        return [t for t, _ in self.entries]


_AGGREGATE = {Phi.MIN: min, Phi.MAX: max, Phi.AVG: lambda vals: sum(vals) / len(vals)}


def run_query(graph: AnyProximityGraph, spec: QuerySpec) -> AnswerSet:
    """Score every non-query term against Q and keep those >= alpha.

    Entries are sorted by score descending, lexicographic tie-break.
    """
    unknown = sorted(t for t in spec.terms if t not in graph.index)
    if unknown:
        raise QueryError(f"unknown query term(s): {', '.join(unknown)}")
    q_indices = [graph.index[t] for t in sorted(spec.terms)]
    aggregate = _AGGREGATE[spec.phi]
    entries: list[tuple[str, float]] = []
    for j, term in enumerate(graph.terms):
        if j in q_indices:
            continue
        score = aggregate([graph.weight_by_index(j, qi) for qi in q_indices])
        if score >= spec.alpha:
            entries.append((term, score))
    entries.sort(key=lambda ts: (-ts[1], ts[0]))
    return AnswerSet(entries=entries)
