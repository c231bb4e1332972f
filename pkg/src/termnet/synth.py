"""Synthetic corpora with planted term associations.

The generator plants two kinds of signal into an otherwise random corpus:
pairs that co-occur in a controlled fraction of their windows, and chains
a-b-c where both legs co-occur but the endpoints never share a window.
Chains exercise indirect-association detection: the endpoints acquire a
short two-hop path but no direct edge. Planted terms never appear in
background posts, and every planted window gets its own (user, day) cell,
so the planted counts are exact at day, week, and month resolution.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .corpus import CorpusError, Post, Timeline
from .lexicon import TermClass

BASE_DATE = datetime(2014, 1, 6, tzinfo=timezone.utc)
# Reused users get planted windows at least this many days apart, which
# keeps them in distinct day, week, and month buckets.
WINDOW_SPACING_DAYS = 35


@dataclass(frozen=True)
class PlantSpec:
    n_users: int
    n_posts: int
    vocab: tuple[tuple[str, TermClass], ...]
    planted_pairs: tuple[tuple[str, str, float], ...] = ()
    planted_chains: tuple[tuple[str, str, str], ...] = ()
    seed: int = 0
    windows_per_pair: int = 24


@dataclass
class PairTruth:
    term_a: str
    term_b: str
    co_rate: float
    co_windows: list[tuple[str, str]] = field(default_factory=list)
    solo_a: list[tuple[str, str]] = field(default_factory=list)
    solo_b: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class ChainTruth:
    term_a: str
    term_b: str
    term_c: str
    ab_windows: list[tuple[str, str]] = field(default_factory=list)
    bc_windows: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class SyntheticLedger:
    """Ground truth for a generated corpus: injected mention counts and the
    exact (user, day) windows behind every planted association."""

    term_mentions: dict[str, int] = field(default_factory=dict)
    pairs: list[PairTruth] = field(default_factory=list)
    chains: list[ChainTruth] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "term_mentions": dict(sorted(self.term_mentions.items())),
            "pairs": [
                {
                    "term_a": p.term_a,
                    "term_b": p.term_b,
                    "co_rate": p.co_rate,
                    "co_windows": [list(w) for w in p.co_windows],
                    "solo_a": [list(w) for w in p.solo_a],
                    "solo_b": [list(w) for w in p.solo_b],
                }
                for p in self.pairs
            ],
            "chains": [
                {
                    "term_a": c.term_a,
                    "term_b": c.term_b,
                    "term_c": c.term_c,
                    "ab_windows": [list(w) for w in c.ab_windows],
                    "bc_windows": [list(w) for w in c.bc_windows],
                }
                for c in self.chains
            ],
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")


def _validate(spec: PlantSpec) -> None:
    vocab_terms = {t for t, _ in spec.vocab}
    if len(vocab_terms) != len(spec.vocab):
        raise CorpusError("vocab contains duplicate terms")
    for a, b, rate in spec.planted_pairs:
        if not 0.0 <= rate <= 1.0:
            raise CorpusError(f"co_rate for pair ({a}, {b}) must lie in [0, 1], got {rate}")
        if a == b:
            raise CorpusError(f"planted pair ({a}, {b}) repeats a term")
        for t in (a, b):
            if t not in vocab_terms:
                raise CorpusError(f"planted term {t!r} is not in the vocab")
    for a, b, c in spec.planted_chains:
        if len({a, b, c}) != 3:
            raise CorpusError(f"planted chain ({a}, {b}, {c}) repeats a term")
        for t in (a, b, c):
            if t not in vocab_terms:
                raise CorpusError(f"planted term {t!r} is not in the vocab")

    pair_keys = [frozenset((a, b)) for a, b, _ in spec.planted_pairs]
    if len(set(pair_keys)) != len(pair_keys):
        raise CorpusError("the same pair is planted twice")

    co_planted: dict[frozenset, str] = {}
    for a, b, rate in spec.planted_pairs:
        if rate > 0:
            co_planted[frozenset((a, b))] = f"pair ({a}, {b}) at co_rate {rate}"
    for a, b, c in spec.planted_chains:
        co_planted.setdefault(frozenset((a, b)), f"chain ({a}, {b}, {c}) leg {a}-{b}")
        co_planted.setdefault(frozenset((b, c)), f"chain ({a}, {b}, {c}) leg {b}-{c}")

    forbidden: dict[frozenset, str] = {}
    for a, b, c in spec.planted_chains:
        forbidden[frozenset((a, c))] = f"chain ({a}, {b}, {c}) forbids {a}-{c} co-occurrence"
    for a, b, rate in spec.planted_pairs:
        if rate == 0.0:
            forbidden[frozenset((a, b))] = f"pair ({a}, {b}) at co_rate 0 forbids co-occurrence"

    for key, why_forbidden in forbidden.items():
        if key in co_planted:
            raise CorpusError(f"inconsistent plant spec: {why_forbidden}, but {co_planted[key]} requires it")

    if spec.n_users < 1:
        raise CorpusError("need at least one user")
    planted_posts = len(spec.planted_pairs) * spec.windows_per_pair + len(
        spec.planted_chains
    ) * 2 * spec.windows_per_pair
    if spec.n_posts < planted_posts:
        raise CorpusError(
            f"n_posts={spec.n_posts} is below the {planted_posts} posts needed for planted windows"
        )


class _Emitter:
    def __init__(self, spec: PlantSpec):
        self.posts_by_user: dict[str, list[Post]] = {}
        self.serial = 0
        self.window_serial = 0
        self.users = [f"u{i:05d}" for i in range(1, spec.n_users + 1)]
        self.ledger = SyntheticLedger()

    def next_window(self) -> tuple[str, datetime]:
        """A fresh (user, day) cell no other planted window occupies."""
        idx = self.window_serial
        self.window_serial += 1
        user = self.users[idx % len(self.users)]
        day = BASE_DATE + timedelta(days=(idx // len(self.users)) * WINDOW_SPACING_DAYS)
        return user, day

    def emit(self, user: str, when: datetime, text: str, terms: list[str], tags: tuple[str, ...] = ()) -> None:
        self.serial += 1
        post = Post(
            post_id=f"p{self.serial:07d}",
            user_id=user,
            timestamp=when,
            text=text,
            caption_tags=tags,
        )
        self.posts_by_user.setdefault(user, []).append(post)
        for t in terms:
            self.ledger.term_mentions[t] = self.ledger.term_mentions.get(t, 0) + 1


def generate_synthetic_corpus(spec: PlantSpec) -> tuple[list[Timeline], SyntheticLedger]:
    """Deterministic corpus with the requested planted structure."""
    _validate(spec)
    rng = random.Random(spec.seed)
    em = _Emitter(spec)
    k = spec.windows_per_pair

    for a, b, rate in spec.planted_pairs:
        truth = PairTruth(a, b, rate)
        n_co = round(rate * k)
        n_solo = k - n_co
        for _ in range(n_co):
            user, day = em.next_window()
            when = day.replace(hour=12)
            em.emit(user, when, f"been taking {a} along with {b} lately", [a, b])
            truth.co_windows.append((user, day.strftime("%Y-%m-%d")))
        for s in range(n_solo):
            user, day = em.next_window()
            when = day.replace(hour=12)
            term = a if s % 2 == 0 else b
            em.emit(user, when, f"another day with {term}", [term])
            (truth.solo_a if s % 2 == 0 else truth.solo_b).append((user, day.strftime("%Y-%m-%d")))
        em.ledger.pairs.append(truth)

    for a, b, c in spec.planted_chains:
        truth = ChainTruth(a, b, c)
        for _ in range(k):
            user, day = em.next_window()
            when = day.replace(hour=12)
            em.emit(user, when, f"started {a} while still on {b}", [a, b])
            truth.ab_windows.append((user, day.strftime("%Y-%m-%d")))
        for _ in range(k):
            user, day = em.next_window()
            when = day.replace(hour=12)
            em.emit(user, when, f"my {c} got worse since {b}", [b, c])
            truth.bc_windows.append((user, day.strftime("%Y-%m-%d")))
        em.ledger.chains.append(truth)

    planted_terms = {t for a, b, _ in spec.planted_pairs for t in (a, b)}
    planted_terms |= {t for chain in spec.planted_chains for t in chain}
    background = [t for t, _ in spec.vocab if t not in planted_terms]

    n_background = spec.n_posts - em.serial
    for _ in range(n_background):
        user = em.users[rng.randrange(len(em.users))]
        when = BASE_DATE + timedelta(days=rng.randrange(365), seconds=rng.randrange(86400))
        if background and rng.random() < 0.2 and len(background) >= 2:
            t1, t2 = rng.sample(background, 2)
            em.emit(user, when, f"not sure if {t1} helps with {t2}", [t1, t2])
        elif background:
            term = background[rng.randrange(len(background))]
            if rng.random() < 0.3 and " " not in term:
                em.emit(user, when, "posting about this again", [term], tags=(term,))
            else:
                em.emit(user, when, f"thinking about {term} today", [term])
        else:
            em.emit(user, when, "nothing to report today", [])

    timelines = [Timeline(user_id=uid, posts=posts) for uid, posts in sorted(em.posts_by_user.items())]
    for tl in timelines:
        tl.sort()
    return timelines, em.ledger


def vocab_for_scale(n_terms: int) -> list[tuple[str, TermClass]]:
    """Synthetic vocabulary split roughly 60/30/10 across drug, symptom,
    and natural-product classes."""
    vocab: list[tuple[str, TermClass]] = []
    for i in range(n_terms):
        if i % 10 < 6:
            vocab.append((f"drug{i:04d}", TermClass.DRUG))
        elif i % 10 < 9:
            vocab.append((f"symp{i:04d}", TermClass.SYMPTOM))
        else:
            vocab.append((f"herb{i:04d}", TermClass.NATURAL_PRODUCT))
    return vocab
