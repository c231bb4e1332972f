"""Symmetric window co-occurrence counts over matched terms.

An entry counts the number of per-user calendar windows in which both
terms occur at least once; the diagonal counts windows containing the term
at all. Presence within a window is binary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .corpus import Resolution, bucketize
from .lexicon import TaggedCorpus, TermClass


class CooccurError(Exception):
    pass


@dataclass
class CooccurrenceMatrix:
    """Sparse symmetric co-occurrence counts.

    terms: sorted canonical terms; classes: parallel class list;
    diag[i]: windows containing term i; pair counts keyed by (i, j), i < j,
    zero entries omitted. bucket_keys tracks window provenance so merges
    can refuse double counting; it is in-memory only, never serialized.
    """

    terms: list[str]
    classes: list[TermClass]
    resolution: Resolution
    diag: list[int]
    pairs: dict[tuple[int, int], int] = field(default_factory=dict)
    bucket_keys: set[tuple[str, str]] | None = None

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}

    def count(self, term_i: str, term_j: str) -> int:
        i, j = self.index[term_i], self.index[term_j]
        if i == j:
            return self.diag[i]
        if i > j:
            i, j = j, i
        return self.pairs.get((i, j), 0)

    def check_invariants(self) -> None:
        for (i, j), r in self.pairs.items():
            if r < 0 or r > min(self.diag[i], self.diag[j]):
                raise CooccurError(
                    f"pair count out of bounds: r({self.terms[i]},{self.terms[j]})={r}, "
                    f"diag=({self.diag[i]},{self.diag[j]})"
                )
        if any(d < 0 for d in self.diag):
            raise CooccurError("negative diagonal count")

    def write_tsv(self, path: str | Path) -> None:
        """Upper-triangle TSV with a header block carrying the term list,
        classes, resolution, and diagonal counts."""
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write(f"# resolution\t{self.resolution.value}\n")
            for term, tc, d in zip(self.terms, self.classes, self.diag):
                fh.write(f"# term\t{term}\t{tc.value}\t{d}\n")
            fh.write("term_i\tterm_j\tr_ij\n")
            for (i, j) in sorted(self.pairs):
                fh.write(f"{self.terms[i]}\t{self.terms[j]}\t{self.pairs[(i, j)]}\n")

    @classmethod
    def read_tsv(cls, path: str | Path) -> "CooccurrenceMatrix":
        terms: list[str] = []
        classes: list[TermClass] = []
        diag: list[int] = []
        resolution: Resolution | None = None
        pairs: dict[tuple[int, int], int] = {}
        index: dict[str, int] = {}
        with Path(path).open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("# resolution\t"):
                    resolution = Resolution.parse(line.split("\t")[1])
                elif line.startswith("# term\t"):
                    _, term, tc, d = line.split("\t")
                    index[term] = len(terms)
                    terms.append(term)
                    classes.append(TermClass.parse(tc))
                    diag.append(int(d))
                elif line.startswith("term_i\t"):
                    continue
                else:
                    ti, tj, r = line.split("\t")
                    pairs[(index[ti], index[tj])] = int(r)
        if resolution is None:
            raise CooccurError(f"missing resolution header in {path}")
        return cls(terms=terms, classes=classes, resolution=resolution, diag=diag, pairs=pairs)


def build_cooccurrence(tagged: TaggedCorpus, resolution: Resolution) -> CooccurrenceMatrix:
    """Count per-window term presence across all user timelines.

    Terms never matched anywhere are excluded. Multiple mentions of a term
    inside one window count once.
    """
    classes = tagged.classes
    terms = sorted(classes)
    index = {t: i for i, t in enumerate(terms)}
    diag = [0] * len(terms)
    pairs: dict[tuple[int, int], int] = {}
    bucket_keys: set[tuple[str, str]] = set()

    for tl in tagged.timelines:
        for key, post_ids in bucketize(tl, resolution).items():
            present: set[int] = set()
            for pid in post_ids:
                for m in tagged.matches_for(pid):
                    present.add(index[m.term])
            if not present:
                continue
            bucket_keys.add((key.user_id, key.period_id))
            for i in present:
                diag[i] += 1
            for i, j in combinations(sorted(present), 2):
                pairs[(i, j)] = pairs.get((i, j), 0) + 1

    return CooccurrenceMatrix(
        terms=terms,
        classes=[classes[t] for t in terms],
        resolution=resolution,
        diag=diag,
        pairs=pairs,
        bucket_keys=bucket_keys,
    )


def merge(partials: list[CooccurrenceMatrix]) -> CooccurrenceMatrix:
    """Entrywise sum of partial matrices over the union term set.

    Partials must share a resolution and must cover disjoint (user, period)
    buckets; overlapping provenance would double count and is fatal.
    """
    if not partials:
        raise CooccurError("nothing to merge")
    resolution = partials[0].resolution
    if any(p.resolution is not resolution for p in partials):
        raise CooccurError("cannot merge matrices at different resolutions")
    if any(p.bucket_keys is None for p in partials):
        raise CooccurError("cannot verify bucket provenance: a partial lacks bucket_keys")
    seen: set[tuple[str, str]] = set()
    for p in partials:
        overlap = seen & p.bucket_keys  # type: ignore[operator]
        if overlap:
            sample = sorted(overlap)[0]
            raise CooccurError(f"overlapping bucket provenance (e.g. user={sample[0]} period={sample[1]})")
        seen |= p.bucket_keys  # type: ignore[arg-type]

    class_by_term: dict[str, TermClass] = {}
    for p in partials:
        for term, tc in zip(p.terms, p.classes):
            if class_by_term.setdefault(term, tc) is not tc:
                raise CooccurError(f"term {term!r} carries two classes across partials")
    terms = sorted(class_by_term)
    index = {t: i for i, t in enumerate(terms)}
    diag = [0] * len(terms)
    pairs: dict[tuple[int, int], int] = {}
    for p in partials:
        remap = [index[t] for t in p.terms]
        for old_i, d in enumerate(p.diag):
            diag[remap[old_i]] += d
        for (old_i, old_j), r in p.pairs.items():
            i, j = remap[old_i], remap[old_j]
            if i > j:
                i, j = j, i
            pairs[(i, j)] = pairs.get((i, j), 0) + r

    return CooccurrenceMatrix(
        terms=terms,
        classes=[class_by_term[t] for t in terms],
        resolution=resolution,
        diag=diag,
        pairs=pairs,
        bucket_keys=seen,
    )
