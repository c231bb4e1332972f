from __future__ import annotations

import json

import pytest

from termnet.corpus import Resolution
from termnet.lexicon import TermClass
from termnet.store import ArtifactStore, PipelineConfig, StoreError


def write_inputs(base):
    (base / "corpus.ndjson").write_text(
        json.dumps(
            {"post_id": "p1", "user_id": "u1", "timestamp": "2015-01-01T00:00:00Z", "text": "druga"}
        )
        + "\n"
    )
    (base / "drugs.tsv").write_text("druga\n")
    (base / "symptoms.tsv").write_text("sympx\n")
    return base


def config_for(base, **overrides) -> PipelineConfig:
    kwargs = dict(
        corpus=base / "corpus.ndjson",
        dictionaries={
            TermClass.DRUG: base / "drugs.tsv",
            TermClass.SYMPTOM: base / "symptoms.tsv",
        },
        resolutions=(Resolution.DAY,),
        store_dir=base / "store",
    )
    kwargs.update(overrides)
    return PipelineConfig(**kwargs)


class TestConfigFile:
    def test_parse_key_value_format(self, tmp_path):
        write_inputs(tmp_path)
        cfg_text = "\n".join(
            [
                "# comment",
                "corpus = corpus.ndjson",
                "dict.drug = drugs.tsv",
                "dict.symptom = symptoms.tsv",
                "resolutions = day, week",
                "sigma = 5",
                "pca_components = 4",
                "alpha = 0.1",
                "store = mystore",
            ]
        )
        (tmp_path / "pipeline.cfg").write_text(cfg_text)
        cfg = PipelineConfig.from_file(tmp_path / "pipeline.cfg")
        assert cfg.corpus == (tmp_path / "corpus.ndjson").resolve()
        assert cfg.resolutions == (Resolution.DAY, Resolution.WEEK)
        assert cfg.sigma == 5
        assert cfg.pca_components == 4
        assert cfg.alpha == 0.1
        assert cfg.store_dir.name == "mystore"
        cfg.validate()

    def test_missing_corpus_key_fatal(self, tmp_path):
        (tmp_path / "bad.cfg").write_text("sigma = 10\ndict.drug = d.tsv\n")
        with pytest.raises(StoreError, match="corpus"):
            PipelineConfig.from_file(tmp_path / "bad.cfg")

    def test_bad_line_fatal(self, tmp_path):
        (tmp_path / "bad.cfg").write_text("corpus corpus.ndjson\n")
        with pytest.raises(StoreError, match="key = value"):
            PipelineConfig.from_file(tmp_path / "bad.cfg")

    def test_validate_rejects_missing_paths(self, tmp_path):
        cfg = config_for(tmp_path)  # input files never written
        with pytest.raises(StoreError, match="do not exist"):
            cfg.validate()

    def test_content_hash_ignores_paths_but_not_content(self, tmp_path):
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        a = write_inputs(tmp_path / "a")
        b = write_inputs(tmp_path / "b")
        cfg_a = config_for(a)
        cfg_b = config_for(b)
        assert cfg_a.content_hash() == cfg_b.content_hash()
        (b / "drugs.tsv").write_text("druga\ndrugb\n")
        assert cfg_a.content_hash() != config_for(b).content_hash()

    def test_content_hash_tracks_parameters(self, tmp_path):
        base = write_inputs(tmp_path)
        assert config_for(base).content_hash() != config_for(base, sigma=3).content_hash()


def make_dirs(tmp_path):
    base = tmp_path / "proj"
    base.mkdir()
    return write_inputs(base)


class TestArtifactStore:
    def test_put_get_round_trip(self, tmp_path):
        base = make_dirs(tmp_path)
        store = ArtifactStore(base / "store", config_for(base))
        store.put("term_counts", "term\tclass\tcount\n", suffix=".tsv")
        path = store.get("term_counts")
        assert path.read_text() == "term\tclass\tcount\n"

    def test_missing_artifact_names_stage(self, tmp_path):
        base = make_dirs(tmp_path)
        store = ArtifactStore(base / "store", config_for(base))
        with pytest.raises(StoreError, match="build") as err:
            store.get("cooccur", Resolution.DAY)
        assert err.value.stage == "build"

    def test_tampered_artifact_detected(self, tmp_path):
        base = make_dirs(tmp_path)
        store = ArtifactStore(base / "store", config_for(base))
        path = store.put("term_counts", "original\n", suffix=".tsv")
        path.write_text("tampered\n")
        with pytest.raises(StoreError, match="hash"):
            store.get("term_counts")

    def test_config_change_invalidates_artifacts(self, tmp_path):
        base = make_dirs(tmp_path)
        store = ArtifactStore(base / "store", config_for(base))
        store.put("term_counts", "v1\n", suffix=".tsv")
        # Same store dir, different sigma: stale artifacts are dropped.
        store2 = ArtifactStore(base / "store", config_for(base, sigma=3))
        assert not store2.has("term_counts")
        with pytest.raises(StoreError):
            store2.get("term_counts")

    def test_reopen_without_config_reads_existing(self, tmp_path):
        base = make_dirs(tmp_path)
        store = ArtifactStore(base / "store", config_for(base))
        store.put("term_counts", "data\n", suffix=".tsv")
        reopened = ArtifactStore(base / "store")
        assert reopened.get("term_counts").read_text() == "data\n"

    def test_open_nonexistent_store_fatal(self, tmp_path):
        with pytest.raises(StoreError, match="ingest"):
            ArtifactStore(tmp_path / "nope")

    def test_resolution_keys_are_scoped(self, tmp_path):
        base = make_dirs(tmp_path)
        store = ArtifactStore(base / "store", config_for(base))
        store.put("cooccur", "day data\n", Resolution.DAY)
        store.put("cooccur", "week data\n", Resolution.WEEK)
        assert store.get("cooccur", Resolution.DAY).read_text() == "day data\n"
        assert store.get("cooccur", Resolution.WEEK).read_text() == "week data\n"
