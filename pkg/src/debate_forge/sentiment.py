"""Rule-based sentence valence and speech-level polarity.

Sentence scores come from a valence lexicon with negation, booster and
exclamation rules, squashed into (-1, 1). A speech is Positive, Negative or
Neutral by the sign of the sum of its sentence scores.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable

from .corpus import Corpus, Polarity
from .textrank import split_sentences

_TOKEN = re.compile(r"[^\W_]+(?:['-][^\W_]+)*")


@dataclass(frozen=True)
class SentimentConfig:
    negation_scale: float = 0.74
    negation_window: int = 3
    booster_window: int = 2
    exclamation_bonus: float = 0.292
    alpha: float = 15.0


@dataclass(frozen=True)
class SentimentLexicon:
    entries: dict[str, float]
    boosters: dict[str, float] = field(default_factory=dict)
    negators: frozenset[str] = frozenset()

    def __post_init__(self):
        for tok, v in self.entries.items():
            if tok != tok.lower():
                raise ValueError(f"lexicon token must be lowercase: {tok!r}")
            if not math.isfinite(v):
                raise ValueError(f"non-finite valence for {tok!r}")


def parse_lexicon(text: str, source: str = "<lexicon>") -> SentimentLexicon:
    """Parse the TSV lexicon format.

    ``token<TAB>valence`` lines, then optional ``#boosters`` (token<TAB>
    increment) and ``#negators`` (one token per line) sections. Other lines
    starting with ``#`` are comments.
    """
    sections = {"entries": {}, "boosters": {}, "negators": set()}
    current = "entries"
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = line[1:].strip().lower()
            if header in ("boosters", "negators"):
                current = header
            continue
        if current == "negators":
            sections["negators"].add(line.split("\t")[0].strip().lower())
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ValueError(f"{source}:{lineno}: expected token<TAB>value")
        tok = parts[0].strip().lower()
        try:
            value = float(parts[1])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: bad number {parts[1]!r}") from None
        if tok in sections[current]:
            raise ValueError(f"{source}:{lineno}: duplicate token {tok!r}")
        sections[current][tok] = value
    return SentimentLexicon(sections["entries"], sections["boosters"], frozenset(sections["negators"]))


def load_lexicon(path: str | Path | None = None) -> SentimentLexicon:
    if path is None:
        text = resources.files("debate_forge").joinpath("data/lexicon.tsv").read_text(encoding="utf-8")
        return parse_lexicon(text, "lexicon.tsv")
    return parse_lexicon(Path(path).read_text(encoding="utf-8"), str(path))


def tokenize(sentence: str) -> list[str]:
    return _TOKEN.findall(sentence.lower().replace("’", "'"))


def normalize(total: float, alpha: float = 15.0) -> float:
    return total / math.sqrt(total * total + alpha)


def score_sentence(sentence: str, lexicon: SentimentLexicon, cfg: SentimentConfig = SentimentConfig()) -> float:
    tokens = tokenize(sentence)
    total = 0.0
    for i, tok in enumerate(tokens):
        valence = lexicon.entries.get(tok)
        if valence is None:
            continue
        sign = math.copysign(1.0, valence) if valence else 0.0
        for j in range(max(0, i - cfg.booster_window), i):
            inc = lexicon.boosters.get(tokens[j])
            if inc is not None:
                valence += sign * inc
        if any(t in lexicon.negators for t in tokens[max(0, i - cfg.negation_window):i]):
            valence *= -cfg.negation_scale
        total += valence
    if total != 0.0 and sentence.rstrip().endswith("!"):
        total += math.copysign(cfg.exclamation_bonus, total)
    if total == 0.0:
        return 0.0
    return normalize(total, cfg.alpha)


def polarity_of(scores: Iterable[float]) -> Polarity:
    """Sign of the exactly-rounded sum, so sentence order never matters."""
    total = math.fsum(scores)
    if total > 0:
        return Polarity.POSITIVE
    if total < 0:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


def classify_speech(text: str, lexicon: SentimentLexicon, cfg: SentimentConfig = SentimentConfig()) -> Polarity:
    return polarity_of(score_sentence(s, lexicon, cfg) for s in split_sentences(text))


def annotate_corpus(corpus: Corpus, lexicon: SentimentLexicon, cfg: SentimentConfig = SentimentConfig()) -> Corpus:
    debates = []
    for d in corpus.debates:
        speeches = tuple(replace(s, polarity=classify_speech(s.text, lexicon, cfg)) for s in d.speeches)
        debates.append(replace(d, speeches=speeches))
    return corpus.replace_debates(debates)


def polarity_report(corpus: Corpus) -> dict[str, int]:
    """Counts of Positive/Negative/Neutral speeches plus the total."""
    counts = {"Positive": 0, "Negative": 0, "Neutral": 0}
    total = 0
    for _, s in corpus.iter_speeches():
        total += 1
        if s.polarity.value in counts:
            counts[s.polarity.value] += 1
    counts["Total"] = total
    return counts
