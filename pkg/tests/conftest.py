from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from termnet.corpus import Post, Timeline
from termnet.lexicon import Lexicon, TermClass


def make_post(post_id: str, user_id: str, ts: str, text: str = "", tags: tuple[str, ...] = ()) -> Post:
    stamp = datetime.fromisoformat(ts)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return Post(post_id=post_id, user_id=user_id, timestamp=stamp, text=text, caption_tags=tags)


def make_timeline(user_id: str, posts: list[Post]) -> Timeline:
    tl = Timeline(user_id=user_id, posts=list(posts))
    tl.sort()
    return tl


@pytest.fixture
def demo_lexicon() -> Lexicon:
    lex = Lexicon(stoplist={"depression"})
    for surface, canonical in [
        ("fluoxetine", "fluoxetine"),
        ("prozac", "fluoxetine"),
        ("citalopram", "citalopram"),
        ("celexa", "citalopram"),
        ("sertraline", "sertraline"),
        ("zoloft", "sertraline"),
        ("metformin", "metformin"),
    ]:
        lex.add(surface, canonical, TermClass.DRUG)
    for surface, canonical in [
        ("anxiety", "anxiety"),
        ("anorexia", "anorexia"),
        ("insomnia", "insomnia"),
        ("pain", "pain"),
        ("headache", "headache"),
        ("depression", "depression"),
        ("heart failure", "heart failure"),
    ]:
        lex.add(surface, canonical, TermClass.SYMPTOM)
    for surface, canonical in [
        ("ginger", "ginger"),
        ("st john's wort", "st john's wort"),
        ("wort", "wort"),
    ]:
        lex.add(surface, canonical, TermClass.NATURAL_PRODUCT)
    for surface in ["cannabis", "marijuana", "hashish", "420"]:
        lex.add(surface, "cannabis", TermClass.NATURAL_PRODUCT)
    return lex


def write_corpus_file(path: Path, records: list[dict]) -> Path:
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    return path
