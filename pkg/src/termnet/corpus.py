"""Loading, validation, and calendar-window bucketing of user post timelines.

The input corpus is newline-delimited JSON, one post per line. Posts are
grouped into per-user timelines and bucketed into calendar-aligned UTC
windows at day, week, or month resolution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path


class CorpusError(Exception):
    """Fatal problem with a corpus file (unreadable path, bad format)."""


REQUIRED_FIELDS = ("post_id", "user_id", "timestamp", "text")


class Resolution(Enum):
    """Calendar granularity of a co-mention window."""

    DAY = "day"
    WEEK = "week"
    MONTH = "month"

    @classmethod
    def parse(cls, value: str) -> "Resolution":
        try:
            return cls(value.strip().lower())
        except ValueError:
            valid = ", ".join(r.value for r in cls)
            raise CorpusError(f"unknown resolution {value!r} (expected one of: {valid})") from None

    def period_id(self, ts: datetime) -> str:
        """Canonical period label for a UTC instant at this resolution.

        Day -> "YYYY-MM-DD", Week -> ISO week "YYYY-Www" (week-numbering
        year, which differs from the calendar year near year boundaries),
        Month -> "YYYY-MM".
        """
        ts = ts.astimezone(timezone.utc)
        if self is Resolution.DAY:
            return ts.strftime("%Y-%m-%d")
        if self is Resolution.WEEK:
            iso = ts.isocalendar()
            return f"{iso[0]:04d}-W{iso[1]:02d}"
        return ts.strftime("%Y-%m")


@dataclass(frozen=True)
class Post:
    post_id: str
    user_id: str
    timestamp: datetime
    text: str
    caption_tags: tuple[str, ...] = ()


@dataclass
class Timeline:
    """All posts of one user, sorted ascending by (timestamp, post_id)."""

    user_id: str
    posts: list[Post]

    def sort(self) -> None:
        self.posts.sort(key=lambda p: (p.timestamp, p.post_id))


@dataclass(frozen=True)
class WindowKey:
    user_id: str
    resolution: Resolution
    period_id: str


@dataclass
class LoadReport:
    """Summary of one corpus load: counts plus per-line record errors."""

    records: int = 0
    users: int = 0
    malformed: int = 0
    duplicates: int = 0
    naive_timestamps: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "users": self.users,
            "malformed": self.malformed,
            "duplicates": self.duplicates,
            "naive_timestamps": self.naive_timestamps,
            "errors": [{"line": line, "reason": reason} for line, reason in self.errors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def parse_timestamp(raw: str) -> tuple[datetime, bool]:
    """Parse an RFC 3339 timestamp; returns (UTC instant, was_naive).

    Timestamps without a zone offset are interpreted as UTC and flagged.
    """
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc), True
    return ts.astimezone(timezone.utc), False


def parse_post_record(obj: dict) -> tuple[Post, bool]:
    """Build a Post from a decoded JSON record; returns (post, naive_ts)."""
    missing = [f for f in REQUIRED_FIELDS if f not in obj]
    if missing:
        raise ValueError(f"missing required field(s): {', '.join(missing)}")
    ts, naive = parse_timestamp(str(obj["timestamp"]))
    tags = obj.get("tags") or []
    if not isinstance(tags, list):
        raise ValueError("tags must be an array of strings")
    post = Post(
        post_id=str(obj["post_id"]),
        user_id=str(obj["user_id"]),
        timestamp=ts,
        text=str(obj["text"]),
        caption_tags=tuple(str(t).lstrip("#") for t in tags),
    )
    return post, naive


def load_corpus(path: str | Path) -> tuple[list[Timeline], LoadReport]:
    """Load a newline-delimited JSON corpus into per-user timelines.

    Malformed lines are counted and recorded in the report with their line
    number; they never abort the load. Duplicate post_ids keep the first
    occurrence. An unreadable path is fatal.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"corpus path not readable: {path}")

    report = LoadReport()
    by_user: dict[str, list[Post]] = {}
    seen_ids: set[str] = set()

    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            report.records += 1
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise ValueError("record is not a JSON object")
                post, naive = parse_post_record(obj)
            except (ValueError, json.JSONDecodeError) as exc:
                report.malformed += 1
                report.errors.append((line_no, str(exc)))
                continue
            if post.post_id in seen_ids:
                report.duplicates += 1
                continue
            seen_ids.add(post.post_id)
            if naive:
                report.naive_timestamps += 1
            by_user.setdefault(post.user_id, []).append(post)

    timelines = [Timeline(user_id=uid, posts=posts) for uid, posts in sorted(by_user.items())]
    for tl in timelines:
        tl.sort()
    report.users = len(timelines)
    return timelines, report


def write_corpus(timelines: list[Timeline], path: str | Path) -> None:
    """Serialize timelines back to the newline-delimited input format."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for tl in sorted(timelines, key=lambda t: t.user_id):
            for post in tl.posts:
                rec = {
                    "post_id": post.post_id,
                    "user_id": post.user_id,
                    "timestamp": post.timestamp.astimezone(timezone.utc).isoformat().replace("+00:00", "Z"),
                    "text": post.text,
                }
                if post.caption_tags:
                    rec["tags"] = list(post.caption_tags)
                fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")


def bucketize(timeline: Timeline, resolution: Resolution) -> dict[WindowKey, set[str]]:
    """Partition a timeline's post ids into calendar windows.

    Every post lands in exactly one bucket per resolution; the bucket sets
    are disjoint and cover the timeline.
    """
    buckets: dict[WindowKey, set[str]] = {}
    for post in timeline.posts:
        key = WindowKey(timeline.user_id, resolution, resolution.period_id(post.timestamp))
        buckets.setdefault(key, set()).add(post.post_id)
    return buckets


def serialize_buckets(buckets: dict[WindowKey, set[str]]) -> str:
    """Deterministic text form of a bucket map, for equality checks."""
    lines = []
    for key in sorted(buckets, key=lambda k: (k.user_id, k.resolution.value, k.period_id)):
        ids = ",".join(sorted(buckets[key]))
        lines.append(f"{key.user_id}\t{key.resolution.value}\t{key.period_id}\t{ids}")
    return "\n".join(lines) + "\n"
