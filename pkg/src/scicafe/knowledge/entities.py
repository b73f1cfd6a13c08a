"""Gazetteer-driven entity recognition and repository-backed annotation.

Recognition is a longest-match, left-to-right, case-insensitive scan; a
match must sit on word boundaries (no mid-word hits) and produces
non-overlapping mentions. The gazetteer is plain data, so a better
recognizer can be swapped in by swapping the file.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping


@dataclass(frozen=True)
class EntityMention:
    surface: str  # canonical gazetteer surface
    type: str
    start: int
    end: int  # [start, end) offsets into the original text
    uri: str | None = None


@dataclass(frozen=True)
class AnnotatedText:
    text: str
    mentions: tuple[EntityMention, ...]

    def links(self) -> list[tuple[tuple[int, int], str]]:
        return [((m.start, m.end), m.uri) for m in self.mentions if m.uri]


def load_gazetteer(path: str | Path) -> dict[str, str]:
    """Read ``surface<TAB>type`` lines into a mapping."""
    entries: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>type'")
        surface, type_ = line.split("\t", 1)
        surface, type_ = surface.strip(), type_.strip()
        if not surface or not type_:
            raise ValueError(f"{path}:{lineno}: empty surface or type")
        entries[surface] = type_
    return entries


def recognize_entities(text: str, gazetteer: Mapping[str, str]) -> list[EntityMention]:
    if not gazetteer:
        return []
    by_lower: dict[str, tuple[str, str]] = {}
    for surface, type_ in gazetteer.items():
        if not surface:
            raise ValueError("gazetteer surfaces must be non-empty")
        by_lower[surface.lower()] = (surface, type_)
    # longest first so the first hit at a position is the longest one
    candidates = sorted(by_lower, key=len, reverse=True)
    lowered = text.lower()
    mentions: list[EntityMention] = []
    i = 0
    while i < len(text):
        matched = None
        for candidate in candidates:
            end = i + len(candidate)
            if lowered.startswith(candidate, i) and _on_boundaries(text, i, end):
                matched = candidate
                break
        if matched is None:
            i += 1
            continue
        surface, type_ = by_lower[matched]
        mentions.append(EntityMention(surface=surface, type=type_, start=i, end=i + len(matched)))
        i += len(matched)
    return mentions


def annotate(text: str, gazetteer: Mapping[str, str], repo_client=None) -> AnnotatedText:
    """Recognize mentions and link them through the repository client.

    The input text passes through byte-identical; links live in the side
    list of mentions. Each distinct surface is looked up once; misses leave
    the uri absent.
    """
    mentions = recognize_entities(text, gazetteer)
    uris: dict[str, str | None] = {}
    if repo_client is not None:
        for surface in dict.fromkeys(m.surface for m in mentions):
            uris[surface] = repo_client.lookup(surface)
    linked = tuple(
        replace(m, uri=uris.get(m.surface)) if uris.get(m.surface) else m
        for m in mentions
    )
    return AnnotatedText(text=text, mentions=linked)


def _on_boundaries(text: str, start: int, end: int) -> bool:
    if start > 0 and text[start - 1].isalnum() and text[start].isalnum():
        return False
    if end < len(text) and text[end].isalnum() and text[end - 1].isalnum():
        return False
    return True
