"""Text normalization: scrubbed log text -> token sequence ready for embedding."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .records import TS_TOKEN, URL_TOKEN

# Placeholders survive untouched; everything else splits on any non-alphanumeric
# character, which also breaks identifiers on "_" and ".".
_TOKEN_RE = re.compile(r"<TS>|<URL>|[A-Za-z0-9]+")

_PLACEHOLDERS = {TS_TOKEN, URL_TOKEN}


@lru_cache(maxsize=None)
def load_stopwords(path: str | None = None) -> frozenset[str]:
    if path is None:
        text = resources.files("logevo.data").joinpath("stopwords.txt").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def _undouble(tok: str) -> str:
    # Porter-style: collapse a doubled final consonant, except l/s/z.
    if len(tok) >= 2 and tok[-1] == tok[-2] and tok[-1] not in "aeioulsz":
        return tok[:-1]
    return tok


def _stem_once(tok: str) -> str:
    if tok.endswith("es") and len(tok) - 2 >= 3:
        tok = tok[:-2]
    elif tok.endswith("s") and not tok.endswith("ss") and len(tok) - 1 >= 3:
        tok = tok[:-1]
    if tok.endswith("ing") and len(tok) - 3 >= 3:
        tok = _undouble(tok[:-3])
    elif tok.endswith("ed") and len(tok) - 2 >= 3:
        tok = _undouble(tok[:-2])
    return tok


def stem(tok: str) -> str:
    """Rule-based suffix normalizer, iterated to a fixed point."""
    while True:
        out = _stem_once(tok)
        if out == tok:
            return out
        tok = out


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple[str, ...]
    source_id: str

    def __len__(self) -> int:
        return len(self.tokens)


def normalize(
    text: str,
    source_id: str = "",
    stopwords: frozenset[str] | None = None,
    keep_placeholders: bool = True,
) -> TokenSeq:
    """Tokenize, lowercase, suffix-normalize, and drop stopwords.

    Stemming runs before the stopword filter so stems that collapse onto a
    stopword ("doing" -> "do") are still removed, which keeps normalize
    idempotent on its own output.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    out = []
    for raw in _TOKEN_RE.findall(text):
        if raw in _PLACEHOLDERS:
            if keep_placeholders:
                out.append(raw)
            continue
        tok = stem(raw.lower())
        if tok and tok not in stopwords:
            out.append(tok)
    return TokenSeq(tuple(out), source_id)
