"""Tokenization, vocabulary and hashed n-gram feature ids."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1

_NON_WORD = re.compile(r"[^\w]+|_+")


def preprocess(text: str) -> list[str]:
    """Lowercase, replace punctuation with spaces, split on whitespace."""
    return _NON_WORD.sub(" ", text.lower()).split()


@lru_cache(maxsize=1 << 18)
def fnv1a_64(s: str) -> int:
    h = FNV_OFFSET
    for byte in s.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & _MASK
    return h


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})

    def __len__(self) -> int:
        return len(self.words)

    def get(self, word: str) -> int | None:
        return self._index.get(word)

    @classmethod
    def build(cls, token_lists: Iterable[Sequence[str]], min_count: int = 1) -> "Vocabulary":
        """Words with at least ``min_count`` occurrences, most frequent first
        (ties alphabetical)."""
        counts = Counter(t for toks in token_lists for t in toks)
        kept = sorted((w for w, c in counts.items() if c >= min_count), key=lambda w: (-counts[w], w))
        return cls(tuple(kept))


def char_ngrams(word: str, minn: int, maxn: int) -> list[str]:
    padded = f"<{word}>"
    out = []
    for n in range(minn, maxn + 1):
        for i in range(len(padded) - n + 1):
            out.append(padded[i:i + n])
    return out


def featurize(
    tokens: Sequence[str] | str,
    word_ngram: int,
    bucket_count: int,
    vocabulary: Vocabulary,
    minn: int = 0,
    maxn: int = 0,
) -> list[int]:
    """Feature ids: in-vocabulary unigram ids, then hashed word n-grams.

    Word n-grams of order 2..``word_ngram`` (and character n-grams when
    ``minn > 0``) hash with 64-bit FNV-1a into
    ``[len(vocabulary), len(vocabulary) + bucket_count)``. Out-of-vocabulary
    unigrams are dropped.
    """
    if isinstance(tokens, str):
        tokens = preprocess(tokens)
    v = len(vocabulary)
    ids = [i for i in (vocabulary.get(t) for t in tokens) if i is not None]
    for n in range(2, word_ngram + 1):
        for k in range(len(tokens) - n + 1):
            ids.append(v + fnv1a_64(" ".join(tokens[k:k + n])) % bucket_count)
    if minn > 0:
        for t in tokens:
            for g in char_ngrams(t, minn, maxn):
                ids.append(v + fnv1a_64(g) % bucket_count)
    return ids
