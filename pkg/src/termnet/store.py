"""Pipeline configuration and the on-disk artifact store.

The store keeps every pipeline product under one directory, keyed by
resolution, with a manifest recording each artifact's content hash and the
hash of the configuration that produced it. Reads verify both, so stale or
foreign artifacts fail loudly instead of silently feeding later stages.
The config hash covers the parameters and the *content* of the input
files, not their paths, so identical inputs give identical stores.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Resolution
from .lexicon import TermClass


class StoreError(Exception):
    """Missing, corrupt, or foreign artifact."""

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


DEFAULT_RESOLUTIONS = (Resolution.WEEK,)


@dataclass
class PipelineConfig:
    corpus: Path
    dictionaries: dict[TermClass, Path]
    cannabis: Path | None = None
    stoplist: Path | None = None
    resolutions: tuple[Resolution, ...] = DEFAULT_RESOLUTIONS
    sigma: int = 10
    pca_components: int = 10
    alpha: float = 0.05
    store_dir: Path = Path("store")

    def validate(self) -> None:
        if not self.resolutions:
            raise StoreError("config lists no resolutions")
        missing = []
        if not self.corpus.is_file():
            missing.append(str(self.corpus))
        for path in self.dictionaries.values():
            if not path.is_file():
                missing.append(str(path))
        for path in (self.cannabis, self.stoplist):
            if path is not None and not path.is_file():
                missing.append(str(path))
        if missing:
            raise StoreError(f"configured path(s) do not exist: {', '.join(sorted(missing))}")

    def content_hash(self) -> str:
        """Hash of parameters plus input file contents (path-independent)."""
        payload = {
            "sigma": self.sigma,
            "pca_components": self.pca_components,
            "alpha": self.alpha,
            "resolutions": [r.value for r in self.resolutions],
            "corpus": _sha256_file(self.corpus),
            "dictionaries": {
                tc.value: _sha256_file(p) for tc, p in sorted(self.dictionaries.items(), key=lambda kv: kv[0].value)
            },
            "cannabis": _sha256_file(self.cannabis) if self.cannabis else None,
            "stoplist": _sha256_file(self.stoplist) if self.stoplist else None,
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """Parse the key-value config format; paths resolve relative to it."""
        path = Path(path)
        if not path.is_file():
            raise StoreError(f"config file not found: {path}")
        base = path.parent
        values: dict[str, str] = {}
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise StoreError(f"bad config line (expected key = value): {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()

        def path_of(key: str) -> Path | None:
            return (base / values[key]).resolve() if key in values else None

        corpus = path_of("corpus")
        if corpus is None:
            raise StoreError("config is missing the corpus key")
        dictionaries = {}
        for tc in TermClass:
            p = path_of(f"dict.{tc.value}")
            if p is not None:
                dictionaries[tc] = p
        if not dictionaries:
            raise StoreError("config names no dictionaries (dict.<class> keys)")
        resolutions = tuple(
            Resolution.parse(part)
            for part in values.get("resolutions", "week").split(",")
            if part.strip()
        )
        return cls(
            corpus=corpus,
            dictionaries=dictionaries,
            cannabis=path_of("dict.cannabis"),
            stoplist=path_of("stoplist"),
            resolutions=resolutions,
            sigma=int(values.get("sigma", "10")),
            pca_components=int(values.get("pca_components", "10")),
            alpha=float(values.get("alpha", "0.05")),
            store_dir=path_of("store") or (base / "store").resolve(),
        )


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# Artifact name -> producing stage, used for actionable missing-artifact errors.
STAGE_OF = {
    "corpus": "ingest",
    "load_report": "ingest",
    "matches": "tag",
    "term_counts": "tag",
    "cooccur": "build",
    "network": "build",
    "closure": "closure",
    "rank_direct": "rank-direct",
    "rank_semimetric": "rank-semimetric",
    "pca": "pca",
    "graphml": "export",
}


class ArtifactStore:
    """Directory of pipeline artifacts with hash-verified reads."""

    def __init__(self, root: str | Path, config: PipelineConfig | None = None):
        self.root = Path(root)
        self._manifest: dict[str, dict] = {}
        self.config_hash: str | None = None
        if config is not None:
            self.root.mkdir(parents=True, exist_ok=True)
            self.config_hash = config.content_hash()
            self._write_config_snapshot(config)
            if self.manifest_path.exists():
                self._load_manifest()
                self._drop_stale_entries()
        elif self.manifest_path.exists():
            self._load_manifest()
            snapshot = json.loads((self.root / "config.json").read_text())
            self.config_hash = snapshot["config_hash"]
        else:
            raise StoreError(f"no artifact store at {self.root} (run ingest first)", stage="ingest")

    # -- manifest bookkeeping ------------------------------------------------

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    def _load_manifest(self) -> None:
        self._manifest = json.loads(self.manifest_path.read_text())

    def _save_manifest(self) -> None:
        self.manifest_path.write_text(json.dumps(self._manifest, indent=2, sort_keys=True))

    def _write_config_snapshot(self, config: PipelineConfig) -> None:
        snapshot = {
            "config_hash": self.config_hash,
            "sigma": config.sigma,
            "pca_components": config.pca_components,
            "alpha": config.alpha,
            "resolutions": [r.value for r in config.resolutions],
        }
        (self.root / "config.json").write_text(json.dumps(snapshot, indent=2, sort_keys=True))

    def _drop_stale_entries(self) -> None:
        """Forget artifacts produced under a different configuration."""
        stale = [name for name, meta in self._manifest.items() if meta["config_hash"] != self.config_hash]
        for name in stale:
            self._manifest.pop(name)
        if stale:
            self._save_manifest()

    def snapshot(self) -> dict:
        return json.loads((self.root / "config.json").read_text())

    # -- artifact naming -----------------------------------------------------

    @staticmethod
    def key(name: str, resolution: Resolution | None = None) -> str:
        return f"{resolution.value}/{name}" if resolution else name

    def path_for(self, name: str, resolution: Resolution | None = None, suffix: str = "") -> Path:
        rel = Path(resolution.value) / f"{name}{suffix}" if resolution else Path(f"{name}{suffix}")
        return self.root / rel

    # -- write / read --------------------------------------------------------

    def put(self, name: str, data: bytes | str, resolution: Resolution | None = None, suffix: str = ".tsv") -> Path:
        if isinstance(data, str):
            data = data.encode("utf-8")
        path = self.path_for(name, resolution, suffix)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        self._manifest[self.key(name, resolution)] = {
            "path": str(path.relative_to(self.root)),
            "sha256": _sha256_bytes(data),
            "config_hash": self.config_hash,
        }
        self._save_manifest()
        return path

    def put_file(self, name: str, path: Path, resolution: Resolution | None = None) -> None:
        """Register a file already written at its store path (figures)."""
        self._manifest[self.key(name, resolution)] = {
            "path": str(path.relative_to(self.root)),
            "sha256": _sha256_file(path),
            "config_hash": self.config_hash,
        }
        self._save_manifest()

    def get(self, name: str, resolution: Resolution | None = None) -> Path:
        """Verified path of an artifact; missing ones name their stage."""
        key = self.key(name, resolution)
        meta = self._manifest.get(key)
        base = name.split("/")[-1]
        stage = STAGE_OF.get(base, base)
        if meta is None:
            raise StoreError(
                f"artifact {key!r} is missing; run the {stage!r} stage first", stage=stage
            )
        path = self.root / meta["path"]
        if not path.is_file():
            raise StoreError(f"artifact file vanished: {path}", stage=stage)
        if _sha256_file(path) != meta["sha256"]:
            raise StoreError(f"artifact {key!r} failed its content hash check", stage=stage)
        if meta["config_hash"] != self.config_hash:
            raise StoreError(
                f"artifact {key!r} was produced under a different configuration; rerun {stage!r}",
                stage=stage,
            )
        return path

    def has(self, name: str, resolution: Resolution | None = None) -> bool:
        return self.key(name, resolution) in self._manifest
