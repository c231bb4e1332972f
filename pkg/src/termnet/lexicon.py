"""Class-labeled term dictionaries and multi-word dictionary tagging.

Dictionaries map surface forms (possibly multi-word) to canonical terms in
one of three classes. Tagging runs a token-level multi-pattern automaton
over post text plus caption hashtags; overlapping candidate matches are
resolved longest-first, ties to the leftmost.
"""

from __future__ import annotations

import json
import re
import warnings
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .corpus import Timeline


class LexiconError(Exception):
    """Fatal dictionary problem (conflicting surface forms, bad file)."""


class TermClass(Enum):
    DRUG = "drug"
    SYMPTOM = "symptom"
    NATURAL_PRODUCT = "natural_product"

    @classmethod
    def parse(cls, value: str) -> "TermClass":
        v = value.strip().lower()
        for tc in cls:
            if tc.value == v or tc.name.lower() == v:
                return tc
        raise LexiconError(f"unknown term class {value!r}")


# A token is a run of word characters, allowing internal apostrophes and
# hyphens ("john's", "st-johns"). '#' and other punctuation split tokens,
# so the text after a hashtag mark forms a single token.
_TOKEN_RE = re.compile(r"\w+(?:['’-]\w+)*", re.UNICODE)


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Lowercased tokens with their half-open char spans in `text`."""
    return [(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def normalize_surface(surface: str) -> tuple[str, ...]:
    """Token tuple for a dictionary surface form; empty if no tokens remain."""
    return tuple(tok for tok, _, _ in tokenize(surface))


def build_tagging_text(text: str, caption_tags: tuple[str, ...] | list[str] = ()) -> str:
    """Text that tagging operates on: the post body with caption hashtags
    appended as a trailer so their matches carry valid char spans."""
    tags = [t for t in caption_tags if t]
    if not tags:
        return text
    return text + "\n" + " ".join("#" + t for t in tags)


@dataclass(frozen=True)
class TagMatch:
    post_id: str
    term: str
    term_class: TermClass
    start: int
    end: int

    def to_dict(self) -> dict:
        return {
            "post_id": self.post_id,
            "term": self.term,
            "class": self.term_class.value,
            "start": self.start,
            "end": self.end,
        }


@dataclass
class Lexicon:
    """Surface form -> (canonical term, class) plus a canonical stoplist."""

    entries: dict[str, tuple[str, TermClass]] = field(default_factory=dict)
    stoplist: set[str] = field(default_factory=set)
    _automaton: "TokenAutomaton | None" = field(default=None, repr=False, compare=False)

    def add(self, surface: str, canonical: str, term_class: TermClass) -> None:
        tokens = normalize_surface(surface)
        if not tokens:
            raise LexiconError(f"surface form {surface!r} is empty after normalization")
        key = " ".join(tokens)
        canonical = canonical.strip().lower()
        if not canonical:
            raise LexiconError(f"canonical for surface {surface!r} is empty")
        existing = self.entries.get(key)
        if existing is not None and existing != (canonical, term_class):
            raise LexiconError(
                f"surface form {key!r} maps to both "
                f"({existing[0]!r}, {existing[1].value}) and ({canonical!r}, {term_class.value})"
            )
        self.entries[key] = (canonical, term_class)
        self._automaton = None

    def class_of(self, canonical: str) -> TermClass | None:
        for canon, tc in self.entries.values():
            if canon == canonical:
                return tc
        return None

    @property
    def automaton(self) -> "TokenAutomaton":
        if self._automaton is None:
            self._automaton = TokenAutomaton(self)
        return self._automaton


def load_dictionary_file(path: str | Path) -> list[tuple[str, str]]:
    """Read `surface<TAB>canonical` lines; canonical defaults to the surface."""
    path = Path(path)
    if not path.is_file():
        raise LexiconError(f"dictionary file not readable: {path}")
    rows: list[tuple[str, str]] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            surface, canonical = line.split("\t", 1)
            canonical = canonical.strip() or surface
        else:
            surface, canonical = line, line
        rows.append((surface.strip(), canonical.strip()))
    if not rows:
        warnings.warn(f"dictionary file {path} is empty", stacklevel=2)
    return rows


CANNABIS_CANONICAL = "cannabis"


def load_lexicon(
    paths: dict[TermClass, str | Path],
    stoplist: set[str] | None = None,
    cannabis_path: str | Path | None = None,
) -> Lexicon:
    """Load per-class dictionary files into one lexicon.

    Entries from the cannabis file are all mapped to the canonical term
    "cannabis" and treated as natural products, whatever their surface.
    Conflicting surface forms across files are fatal.
    """
    lex = Lexicon(stoplist={s.strip().lower() for s in (stoplist or set()) if s.strip()})
    for term_class in sorted(paths, key=lambda tc: tc.value):
        for surface, canonical in load_dictionary_file(paths[term_class]):
            lex.add(surface, canonical, term_class)
    if cannabis_path is not None:
        for surface, _ in load_dictionary_file(cannabis_path):
            lex.add(surface, CANNABIS_CANONICAL, TermClass.NATURAL_PRODUCT)
    return lex


def load_stoplist(path: str | Path) -> set[str]:
    """One canonical term per line; blank lines and # comments skipped."""
    path = Path(path)
    if not path.is_file():
        raise LexiconError(f"stoplist file not readable: {path}")
    out = set()
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip().lower()
        if line and not line.startswith("#"):
            out.add(line)
    return out


class TokenAutomaton:
    """Aho-Corasick automaton over token sequences.

    States form a trie of surface token tuples with failure links; one pass
    over a post's token stream yields every dictionary candidate. Stoplisted
    canonicals are excluded at build time, so they can never match.
    """

    def __init__(self, lexicon: Lexicon):
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        # outputs[state] -> list of (token_length, canonical, class)
        self._outputs: list[list[tuple[int, str, TermClass]]] = [[]]
        for key in sorted(lexicon.entries):
            canonical, term_class = lexicon.entries[key]
            if canonical in lexicon.stoplist:
                continue
            self._insert(tuple(key.split(" ")), canonical, term_class)
        self._link_failures()

    def _insert(self, tokens: tuple[str, ...], canonical: str, term_class: TermClass) -> None:
        state = 0
        for tok in tokens:
            nxt = self._goto[state].get(tok)
            if nxt is None:
                nxt = len(self._goto)
                self._goto[state][tok] = nxt
                self._goto.append({})
                self._fail.append(0)
                self._outputs.append([])
            state = nxt
        self._outputs[state].append((len(tokens), canonical, term_class))

    def _link_failures(self) -> None:
        queue: deque[int] = deque()
        for state in self._goto[0].values():
            self._fail[state] = 0
            queue.append(state)
        while queue:
            state = queue.popleft()
            for tok, nxt in self._goto[state].items():
                fail = self._fail[state]
                while fail and tok not in self._goto[fail]:
                    fail = self._fail[fail]
                self._fail[nxt] = self._goto[fail].get(tok, 0)
                self._outputs[nxt].extend(self._outputs[self._fail[nxt]])
                queue.append(nxt)

    def candidates(self, tokens: list[str]) -> list[tuple[int, int, str, TermClass]]:
        """All dictionary matches over a token stream.

        Returns (start_token, end_token, canonical, class) with a half-open
        token index span.
        """
        out: list[tuple[int, int, str, TermClass]] = []
        state = 0
        for i, tok in enumerate(tokens):
            while state and tok not in self._goto[state]:
                state = self._fail[state]
            state = self._goto[state].get(tok, 0)
            for length, canonical, term_class in self._outputs[state]:
                out.append((i - length + 1, i + 1, canonical, term_class))
        return out


def select_longest(
    candidates: list[tuple[int, int, str, TermClass]],
) -> list[tuple[int, int, str, TermClass]]:
    """Resolve overlapping candidates: longest token span wins, ties go to
    the leftmost. Every rejected candidate overlaps a kept one at least as
    long. Returned matches are non-overlapping, in text order."""
    kept: list[tuple[int, int, str, TermClass]] = []
    occupied: set[int] = set()
    for cand in sorted(candidates, key=lambda c: (-(c[1] - c[0]), c[0])):
        span = range(cand[0], cand[1])
        if any(i in occupied for i in span):
            continue
        occupied.update(span)
        kept.append(cand)
    kept.sort(key=lambda c: c[0])
    return kept


def tag_post(
    lexicon: Lexicon,
    text: str,
    caption_tags: tuple[str, ...] | list[str] = (),
    post_id: str = "",
) -> list[TagMatch]:
    """Tag one post; spans index into build_tagging_text(text, caption_tags)."""
    tagging_text = build_tagging_text(text, tuple(caption_tags))
    spans = tokenize(tagging_text)
    tokens = [tok for tok, _, _ in spans]
    selected = select_longest(lexicon.automaton.candidates(tokens))
    return [
        TagMatch(post_id, canonical, term_class, spans[s][1], spans[e - 1][2])
        for s, e, canonical, term_class in selected
    ]


@dataclass(frozen=True)
class TermCount:
    term: str
    term_class: TermClass
    count: int


@dataclass
class TaggedCorpus:
    """Timelines with their dictionary matches and per-term match totals."""

    timelines: list[Timeline]
    matches: dict[str, list[TagMatch]]
    term_counts: list[TermCount]

    @property
    def classes(self) -> dict[str, TermClass]:
        return {tc.term: tc.term_class for tc in self.term_counts}

    def matches_for(self, post_id: str) -> list[TagMatch]:
        return self.matches.get(post_id, [])

    def write_matches(self, path: str | Path) -> None:
        """Newline-delimited {post_id, term, class, start, end} records."""
        with Path(path).open("w", encoding="utf-8") as fh:
            for post_id in sorted(self.matches):
                for m in self.matches[post_id]:
                    fh.write(json.dumps(m.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")

    def write_term_counts(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write("term\tclass\tcount\n")
            for tc in self.term_counts:
                fh.write(f"{tc.term}\t{tc.term_class.value}\t{tc.count}\n")


def tag_corpus(lexicon: Lexicon, timelines: list[Timeline]) -> TaggedCorpus:
    """Tag every post; counts are per match occurrence, not per post."""
    matches: dict[str, list[TagMatch]] = {}
    counts: dict[tuple[str, TermClass], int] = {}
    for tl in timelines:
        for post in tl.posts:
            found = tag_post(lexicon, post.text, post.caption_tags, post_id=post.post_id)
            if found:
                matches[post.post_id] = found
                for m in found:
                    counts[(m.term, m.term_class)] = counts.get((m.term, m.term_class), 0) + 1
    table = [
        TermCount(term, term_class, n)
        for (term, term_class), n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0][0]))
    ]
    return TaggedCorpus(timelines=timelines, matches=matches, term_counts=table)


def read_matches(path: str | Path) -> dict[str, list[TagMatch]]:
    """Inverse of TaggedCorpus.write_matches."""
    matches: dict[str, list[TagMatch]] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            m = TagMatch(
                post_id=obj["post_id"],
                term=obj["term"],
                term_class=TermClass.parse(obj["class"]),
                start=int(obj["start"]),
                end=int(obj["end"]),
            )
            matches.setdefault(m.post_id, []).append(m)
    return matches
