"""The fixed tokenizer shared by every text-analytics function.

Rules, in order: lowercase, split on non-alphanumerics, drop tokens shorter
than two characters, drop stopwords (shipped English + Italian lists).
Deterministic and idempotent: tokenizing a joined token stream returns the
same tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    words: set[str] = set()
    for name in ("stopwords_en.txt", "stopwords_it.txt"):
        text = resources.files("scicafe.knowledge").joinpath("data", name).read_text("utf-8")
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)


def tokenize(text: str) -> list[str]:
    stop = stopwords()
    return [
        token
        for token in (m.group(0).lower() for m in _TOKEN.finditer(text))
        if len(token) >= 2 and token not in stop
    ]


@dataclass(frozen=True)
class Document:
    id: str
    text: str

    @property
    def tokens(self) -> list[str]:
        return tokenize(self.text)
