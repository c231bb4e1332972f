from __future__ import annotations

import pytest

from termnet.corpus import CorpusError, Resolution, bucketize
from termnet.lexicon import TermClass
from termnet.synth import PlantSpec, generate_synthetic_corpus, vocab_for_scale


def small_vocab():
    return (
        ("druga", TermClass.DRUG),
        ("drugb", TermClass.DRUG),
        ("drugc", TermClass.DRUG),
        ("sympx", TermClass.SYMPTOM),
        ("sympy", TermClass.SYMPTOM),
        ("herbz", TermClass.NATURAL_PRODUCT),
    )


def windows_with_terms(timelines, resolution):
    """Brute-force (user, period) -> set of planted vocab terms, scanning text."""
    vocab = {t for t, _ in small_vocab()} | {t for t, _ in vocab_for_scale(60)}
    windows = {}
    for tl in timelines:
        for key, post_ids in bucketize(tl, resolution).items():
            posts = {p.post_id: p for p in tl.posts}
            present = set()
            for pid in post_ids:
                text = posts[pid].text.lower()
                for tag in posts[pid].caption_tags:
                    text += " " + tag.lower()
                for term in vocab:
                    if term in text:
                        present.add(term)
            if present:
                windows[(key.user_id, key.period_id)] = present
    return windows


class TestPlantedPairs:
    def test_co_rate_one_forces_joint_windows(self):
        spec = PlantSpec(
            n_users=30, n_posts=120, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 1.0),), seed=1,
        )
        timelines, _ = generate_synthetic_corpus(spec)
        for res in Resolution:
            for present in windows_with_terms(timelines, res).values():
                if "druga" in present:
                    assert "sympx" in present
                if "sympx" in present:
                    assert "druga" in present

    def test_co_rate_zero_means_no_shared_windows(self):
        spec = PlantSpec(
            n_users=30, n_posts=120, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 0.0),), seed=1,
        )
        timelines, _ = generate_synthetic_corpus(spec)
        for res in Resolution:
            for present in windows_with_terms(timelines, res).values():
                assert not {"druga", "sympx"} <= present

    def test_fractional_co_rate_honored_exactly(self):
        spec = PlantSpec(
            n_users=30, n_posts=120, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 0.5),), seed=3, windows_per_pair=24,
        )
        timelines, ledger = generate_synthetic_corpus(spec)
        windows = windows_with_terms(timelines, Resolution.DAY)
        both = sum(1 for p in windows.values() if {"druga", "sympx"} <= p)
        either = sum(1 for p in windows.values() if p & {"druga", "sympx"})
        assert both == 12
        assert either == 24
        assert len(ledger.pairs[0].co_windows) == 12

    def test_ledger_windows_match_brute_force_scan(self):
        spec = PlantSpec(
            n_users=20, n_posts=80, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 0.75),), seed=9,
        )
        timelines, ledger = generate_synthetic_corpus(spec)
        windows = windows_with_terms(timelines, Resolution.DAY)
        observed = {w for w, p in windows.items() if {"druga", "sympx"} <= p}
        assert observed == set(ledger.pairs[0].co_windows)


class TestPlantedChains:
    def test_chain_legs_present_endpoints_never_joint(self):
        spec = PlantSpec(
            n_users=40, n_posts=200, vocab=small_vocab(),
            planted_chains=(("druga", "drugb", "sympx"),), seed=2,
        )
        timelines, _ = generate_synthetic_corpus(spec)
        for res in Resolution:
            ab = bc = ac = 0
            for present in windows_with_terms(timelines, res).values():
                if {"druga", "drugb"} <= present:
                    ab += 1
                if {"drugb", "sympx"} <= present:
                    bc += 1
                if {"druga", "sympx"} <= present:
                    ac += 1
            assert ab >= 1
            assert bc >= 1
            assert ac == 0


class TestSpecValidation:
    def test_chain_contradicting_pair_is_fatal(self):
        spec = PlantSpec(
            n_users=10, n_posts=500, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 0.8),),
            planted_chains=(("druga", "drugb", "sympx"),),
            seed=0,
        )
        with pytest.raises(CorpusError, match="inconsistent"):
            generate_synthetic_corpus(spec)

    def test_zero_rate_pair_conflicts_with_chain_leg(self):
        spec = PlantSpec(
            n_users=10, n_posts=500, vocab=small_vocab(),
            planted_pairs=(("druga", "drugb", 0.0),),
            planted_chains=(("druga", "drugb", "sympx"),),
            seed=0,
        )
        with pytest.raises(CorpusError, match="inconsistent"):
            generate_synthetic_corpus(spec)

    def test_bad_co_rate_rejected(self):
        spec = PlantSpec(
            n_users=10, n_posts=100, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 1.2),), seed=0,
        )
        with pytest.raises(CorpusError, match="co_rate"):
            generate_synthetic_corpus(spec)

    def test_unknown_term_rejected(self):
        spec = PlantSpec(
            n_users=10, n_posts=100, vocab=small_vocab(),
            planted_pairs=(("nope", "sympx", 0.5),), seed=0,
        )
        with pytest.raises(CorpusError, match="vocab"):
            generate_synthetic_corpus(spec)

    def test_too_few_posts_rejected(self):
        spec = PlantSpec(
            n_users=10, n_posts=10, vocab=small_vocab(),
            planted_pairs=(("druga", "sympx", 0.5),), seed=0,
        )
        with pytest.raises(CorpusError, match="posts"):
            generate_synthetic_corpus(spec)


class TestDeterminism:
    def test_same_seed_same_corpus(self):
        spec = PlantSpec(
            n_users=15, n_posts=300, vocab=tuple(vocab_for_scale(30)),
            planted_pairs=(("drug0000", "symp0006", 0.9),), seed=42,
        )
        a, _ = generate_synthetic_corpus(spec)
        b, _ = generate_synthetic_corpus(spec)
        flat_a = [(t.user_id, p.post_id, p.timestamp, p.text, p.caption_tags) for t in a for p in t.posts]
        flat_b = [(t.user_id, p.post_id, p.timestamp, p.text, p.caption_tags) for t in b for p in t.posts]
        assert flat_a == flat_b

    def test_post_budget_respected(self):
        spec = PlantSpec(n_users=15, n_posts=300, vocab=tuple(vocab_for_scale(30)), seed=1)
        timelines, _ = generate_synthetic_corpus(spec)
        assert sum(len(t.posts) for t in timelines) == 300
