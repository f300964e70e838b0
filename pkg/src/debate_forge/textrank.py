"""Graph-ranking summaries and keywords for debates.

Sentences (or tokens) become nodes of a weighted undirected graph; weighted
PageRank scores pick the summary sentences and keywords.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy import sparse

from . import kernels
from .corpus import Corpus

DEFAULT_ABBREVIATIONS = frozenset(
    {"shri", "smt", "dr", "hon", "no", "rs", "mr", "mrs", "ms", "prof", "kum", "st", "sh", "nos", "vs"}
)

_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*\s+(?=[\"'(\[]?[A-Z])")
_PARAGRAPH = re.compile(r"\n\s*\n")
_WORD = re.compile(r"[^\W_]+")
_ALPHA = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True)
class RankConfig:
    damping: float = 0.85
    epsilon: float = 1e-6
    max_iterations: int = 100
    summary_ratio: float = 0.2
    keyword_ratio: float = 0.05
    cooccurrence_window: int = 2
    # floor on the keyword count so short debates still get a usable list
    min_keywords: int = 5

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        for name in ("summary_ratio", "keyword_ratio"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.cooccurrence_window < 2:
            raise ValueError("cooccurrence_window must be >= 2")
        if self.min_keywords < 0:
            raise ValueError("min_keywords must be >= 0")


@dataclass
class RankedGraph:
    """Weighted undirected graph; ``weights`` is a symmetric dense matrix."""

    nodes: list[Hashable]
    weights: np.ndarray
    scores: np.ndarray | None = None
    iterations: int = 0
    converged: bool = field(default=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        n = len(self.nodes)
        if w.shape != (n, n):
            raise ValueError(f"weights must be {n}x{n}, got {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("edge weights must be finite and non-negative")
        if np.any(np.diag(w) != 0):
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be symmetric")
        self.weights = w

    @classmethod
    def from_edges(cls, nodes: Sequence[Hashable], edges: Iterable[tuple[int, int, float]]) -> "RankedGraph":
        w = np.zeros((len(nodes), len(nodes)))
        for i, j, weight in edges:
            w[i, j] += weight
            w[j, i] += weight
        return cls(list(nodes), w)


@lru_cache(maxsize=8)
def _read_stopwords(path: str | None) -> frozenset[str]:
    if path is None:
        text = resources.files("debate_forge").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.split("\n"):
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopwords from a one-token-per-line file; the packaged list by default."""
    return _read_stopwords(None if path is None else str(path))


def split_sentences(text: str, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split at ``.``/``!``/``?`` followed by whitespace and a capital letter.

    A period after a listed abbreviation or a single-letter initial is not a
    boundary. Blank lines are hard boundaries. Internal whitespace of each
    sentence is collapsed to single spaces.
    """
    abbrev = {a.lower().rstrip(".") for a in abbreviations}
    out = []
    for para in _PARAGRAPH.split(text):
        start = 0
        for m in _BOUNDARY.finditer(para):
            if para[m.start()] == ".":
                prev = re.search(r"(\S+)$", para[start:m.start()])
                word = prev.group(1).lstrip("\"'([") if prev else ""
                if word.lower() in abbrev or (len(word) == 1 and word.isupper()):
                    continue
            out.append(para[start:m.end()])
            start = m.end()
        out.append(para[start:])
    return [s for s in (" ".join(p.split()) for p in out) if s]


def sentence_tokens(sentence: str, stopwords: frozenset[str] | None = None) -> list[str]:
    stop = load_stopwords() if stopwords is None else stopwords
    return [t for t in (w.lower() for w in _WORD.findall(sentence)) if t not in stop]


def sentence_similarity(a: Sequence[str], b: Sequence[str]) -> float:
    """Shared-token overlap normalized by log sentence lengths.

    ``a`` and ``b`` are token lists (lowercased, stopwords removed). Returns 0
    when either has fewer than two tokens.
    """
    if len(a) < 2 or len(b) < 2:
        return 0.0
    shared = len(set(a) & set(b))
    return shared / (math.log(len(a)) + math.log(len(b)))


def similarity_matrix(token_lists: Sequence[Sequence[str]]) -> np.ndarray:
    """All-pairs :func:`sentence_similarity` with a zero diagonal."""
    n = len(token_lists)
    if n == 0:
        return np.zeros((0, 0))
    vocab: dict[str, int] = {}
    rows, cols = [], []
    for i, toks in enumerate(token_lists):
        for t in set(toks):
            rows.append(i)
            cols.append(vocab.setdefault(t, len(vocab)))
    inc = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, max(len(vocab), 1)))
    shared = (inc @ inc.T).toarray()
    lengths = np.array([len(t) for t in token_lists], dtype=np.float64)
    valid = lengths >= 2
    logs = np.log(np.where(valid, lengths, 1.0))
    denom = logs[:, None] + logs[None, :]
    sim = np.zeros((n, n))
    mask = valid[:, None] & valid[None, :]
    sim[mask] = shared[mask] / denom[mask]
    np.fill_diagonal(sim, 0.0)
    return sim


def rank_nodes(graph: RankedGraph, cfg: RankConfig | None = None) -> RankedGraph:
    """Weighted PageRank over ``graph``; returns a copy carrying the scores."""
    cfg = cfg or RankConfig()
    n = len(graph.nodes)
    if n == 0:
        raise ValueError("graph has no nodes")
    w = graph.weights
    out_weight = w.sum(axis=1)
    safe = np.where(out_weight > 0, out_weight, 1.0)
    # trans[i, j] = w[j, i] / out_weight[j]
    trans = np.ascontiguousarray((w / safe[:, None]).T)
    # stop on a bound for the distance to the fixed point (delta * d / (1 - d)
    # for a contraction by d) rather than on the raw step
    d = float(cfg.damping)
    step_tol = float(cfg.epsilon) * (1.0 - d) / d if d > 0 else float(cfg.epsilon)
    scores, iterations = kernels.pagerank(trans, d, step_tol, int(cfg.max_iterations))
    residual = np.max(np.abs((1 - d) + d * trans @ scores - scores))
    converged = iterations < cfg.max_iterations or residual < step_tol
    return RankedGraph(list(graph.nodes), w, scores=np.asarray(scores), iterations=int(iterations), converged=bool(converged))


def summarize(text: str, cfg: RankConfig | None = None, stopwords: frozenset[str] | None = None) -> str:
    """Top-ranked sentences, re-emitted in document order, one per line."""
    cfg = cfg or RankConfig()
    sentences = split_sentences(text)
    if not sentences:
        return ""
    stop = load_stopwords() if stopwords is None else stopwords
    tokens = [sentence_tokens(s, stop) for s in sentences]
    graph = rank_nodes(RankedGraph(list(range(len(sentences))), similarity_matrix(tokens)), cfg)
    k = math.ceil(cfg.summary_ratio * len(sentences))
    order = sorted(range(len(sentences)), key=lambda i: (-graph.scores[i], i))
    chosen = sorted(order[:k])
    return "\n".join(sentences[i] for i in chosen)


def keyword_graph(tokens: Sequence[str], window: int) -> RankedGraph:
    """Co-occurrence graph: tokens within ``window`` positions share an edge
    whose weight counts the co-occurrences."""
    nodes = sorted(set(tokens))
    index = {t: i for i, t in enumerate(nodes)}
    w = np.zeros((len(nodes), len(nodes)))
    for i, tok in enumerate(tokens):
        for j in range(i + 1, min(i + window, len(tokens))):
            a, b = index[tok], index[tokens[j]]
            if a != b:
                w[a, b] += 1.0
                w[b, a] += 1.0
    return RankedGraph(nodes, w)


def extract_keywords(text: str, cfg: RankConfig | None = None, stopwords: frozenset[str] | None = None) -> list[str]:
    """Ranked keywords, then any multiword phrases they form in the text.

    Single tokens come first, by descending score with lexicographic ties;
    runs of adjacent top tokens (separated only by whitespace) follow as
    keyphrases in first-occurrence order.
    """
    cfg = cfg or RankConfig()
    stop = load_stopwords() if stopwords is None else stopwords
    matches = [(m.group().lower(), m.start(), m.end()) for m in _ALPHA.finditer(text)]
    filtered = [t for t, _, _ in matches if t not in stop and len(t) > 1]
    if not filtered:
        return []
    graph = rank_nodes(keyword_graph(filtered, cfg.cooccurrence_window), cfg)
    n_unique = len(graph.nodes)
    k = max(math.ceil(cfg.keyword_ratio * n_unique), min(cfg.min_keywords, n_unique))
    ranked = sorted(range(n_unique), key=lambda i: (-graph.scores[i], graph.nodes[i]))
    top = [graph.nodes[i] for i in ranked[:k]]
    top_set = set(top)

    phrases: list[str] = []
    run: list[str] = []
    prev_end = None
    for tok, start, end in matches + [("", len(text), len(text))]:
        joined = prev_end is not None and text[prev_end:start].isspace()
        if tok in top_set and (not run or joined):
            run.append(tok)
        else:
            if len(run) > 1:
                phrase = " ".join(run)
                if phrase not in phrases:
                    phrases.append(phrase)
            run = [tok] if tok in top_set else []
        prev_end = end
    return top + phrases


def debate_text(debate) -> str:
    return "\n\n".join(s.text for s in debate.speeches)


def enrich_corpus(
    corpus: Corpus,
    cfg: RankConfig | None = None,
    debate_id: str | None = None,
    stopwords: frozenset[str] | None = None,
) -> Corpus:
    """Fill ``keywords`` and ``summary`` for every debate (or just one)."""
    cfg = cfg or RankConfig()
    if debate_id is not None and debate_id not in {d.id for d in corpus.debates}:
        raise KeyError(f"unknown debate {debate_id}")
    out = []
    for d in corpus.debates:
        if debate_id is None or d.id == debate_id:
            text = debate_text(d)
            d = replace(d, keywords=tuple(extract_keywords(text, cfg, stopwords)), summary=summarize(text, cfg, stopwords))
        out.append(d)
    return corpus.replace_debates(out)
