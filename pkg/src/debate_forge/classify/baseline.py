"""TF-IDF features with a linear hinge-loss classifier (one-vs-rest SGD)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import kernels
from .features import preprocess
from .model import TrainingError


def ngrams(tokens: Sequence[str], max_n: int = 2) -> list[str]:
    out = list(tokens)
    for n in range(2, max_n + 1):
        out.extend(" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
    return out


def smooth_idf(n_docs: int, df: np.ndarray | int) -> np.ndarray | float:
    """``ln((1 + N) / (1 + df)) + 1``; strictly positive for df <= N."""
    return np.log((1.0 + n_docs) / (1.0 + np.asarray(df, dtype=np.float64))) + 1.0


@dataclass
class TfidfVectorizer:
    terms: tuple[str, ...]
    idf: np.ndarray
    max_n: int = 2

    @classmethod
    def fit(cls, texts: Sequence[str], max_n: int = 2) -> "TfidfVectorizer":
        df: Counter[str] = Counter()
        for t in texts:
            df.update(set(ngrams(preprocess(t), max_n)))
        terms = tuple(sorted(df))
        idf = smooth_idf(len(texts), np.array([df[t] for t in terms]))
        return cls(terms, np.asarray(idf, dtype=np.float64), max_n)

    def transform(self, texts: Sequence[str]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """L2-normalized TF-IDF rows in CSR form ``(indptr, indices, data)``."""
        index = {t: i for i, t in enumerate(self.terms)}
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for text in texts:
            counts = Counter(g for g in ngrams(preprocess(text), self.max_n) if g in index)
            cols = sorted(index[g] for g in counts)
            vals = np.array([counts[self.terms[c]] * self.idf[c] for c in cols], dtype=np.float64)
            norm = math.sqrt(float(vals @ vals)) if len(vals) else 0.0
            if norm > 0:
                vals /= norm
            indices.extend(cols)
            data.extend(vals.tolist())
            indptr.append(len(indices))
        return (np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64), np.array(data, dtype=np.float64))


@dataclass
class HingeModel:
    labels: list[str]
    vectorizer: TfidfVectorizer
    weights: np.ndarray  # (n_labels, n_terms)
    bias: np.ndarray  # (n_labels,)
    alpha: float = 1e-4
    epochs: int = 10
    seed: int = 42

    def decision(self, text: str) -> np.ndarray:
        indptr, indices, data = self.vectorizer.transform([text])
        return self.weights[:, indices] @ data + self.bias

    def predict_label(self, text: str) -> str:
        return self.labels[int(np.argmax(self.decision(text)))]


def train_baseline(docs: Sequence, *, alpha: float = 1e-4, epochs: int = 10, seed: int = 42) -> HingeModel:
    """One hinge-loss linear model per label against the rest.

    Step size follows ``1 / (alpha * (t0 + t))`` with ``t0`` set from the
    typical weight scale ``sqrt(1 / sqrt(alpha))``.
    """
    labels = sorted({d.label for d in docs})
    if len(labels) < 2:
        raise TrainingError(f"need at least two labels, got {labels}")
    texts = [d.text for d in docs]
    vec = TfidfVectorizer.fit(texts)
    indptr, indices, data = vec.transform(texts)
    typw = math.sqrt(1.0 / math.sqrt(alpha))
    t0 = 1.0 / (alpha * typw)
    weights = np.zeros((len(labels), len(vec.terms)))
    bias = np.zeros(len(labels))
    for ci, lab in enumerate(labels):
        y = np.array([1.0 if d.label == lab else -1.0 for d in docs])
        rng = np.random.default_rng([seed, ci])
        w = np.zeros(len(vec.terms))
        b, t = 0.0, 1.0
        for _ in range(epochs):
            order = rng.permutation(len(docs)).astype(np.int64)
            b, t = kernels.hinge_sgd(indptr, indices, data, y, order, w, b, alpha, t0, t)
        weights[ci] = w
        bias[ci] = b
    return HingeModel(labels, vec, weights, bias, alpha, epochs, seed)
