"""Hashed n-gram embedding classifier trained with SGD.

A document is the mean of its feature embeddings; a linear output layer
with softmax, or hierarchical softmax over a Huffman tree of the labels,
turns it into label probabilities.

The embedding table nominally has ``vocab + bucket_count`` rows. Only rows
touched by training data are stored; every row's initial value is a pure
function of ``(seed, row id)``, so rows never seen in training are
regenerated on demand at prediction time and the model behaves exactly as
if the full table had been allocated.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .. import kernels
from .features import Vocabulary, featurize, preprocess

log = logging.getLogger(__name__)

SOFTMAX = "softmax"
HIERARCHICAL_SOFTMAX = "hierarchical_softmax"
LOSSES = (SOFTMAX, HIERARCHICAL_SOFTMAX)


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.8
    dim: int = 100
    word_ngram: int = 2
    epochs: int = 100
    loss: str = HIERARCHICAL_SOFTMAX
    bucket_count: int = 2**21
    min_token_count: int = 1
    seed: int = 42
    # character n-gram lengths; 0 disables
    minn: int = 0
    maxn: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.word_ngram < 1:
            raise ValueError("word_ngram must be >= 1")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}, got {self.loss!r}")
        if self.minn < 0 or (self.minn and self.maxn < self.minn):
            raise ValueError("character n-gram range must satisfy 0 < minn <= maxn")


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix(x: np.ndarray) -> np.ndarray:
    z = x + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def init_rows(global_ids: np.ndarray, dim: int, seed: int) -> np.ndarray:
    """Uniform(-1/dim, 1/dim) rows, each a pure function of (seed, row id)."""
    ids = np.asarray(global_ids, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _splitmix(np.array([seed & (2**64 - 1)], dtype=np.uint64))[0]
        counters = ids[:, None] * np.uint64(dim) + np.arange(dim, dtype=np.uint64)[None, :]
        z = _splitmix(counters ^ key)
    u = (z >> np.uint64(11)).astype(np.float64) * (1.0 / 2**53)
    return (2.0 * u - 1.0) / dim


@dataclass(frozen=True)
class HuffmanTree:
    """Root-to-leaf paths: internal-node indices and branch codes per label."""

    paths: tuple[tuple[int, ...], ...]
    codes: tuple[tuple[int, ...], ...]

    @property
    def n_internal(self) -> int:
        return max(len(self.paths) - 1, 0)

    @classmethod
    def build(cls, counts: Sequence[int]) -> "HuffmanTree":
        n = len(counts)
        if n < 2:
            raise ValueError("need at least two labels")
        heap = [(int(c), i) for i, c in enumerate(counts)]
        heapq.heapify(heap)
        parent = [-1] * (2 * n - 1)
        code = [0] * (2 * n - 1)
        nxt = n
        while len(heap) > 1:
            ca, a = heapq.heappop(heap)
            cb, b = heapq.heappop(heap)
            parent[a] = parent[b] = nxt
            code[b] = 1
            heapq.heappush(heap, (ca + cb, nxt))
            nxt += 1
        paths, codes = [], []
        for leaf in range(n):
            nodes, bits = [], []
            node = leaf
            while parent[node] != -1:
                nodes.append(parent[node] - n)
                bits.append(code[node])
                node = parent[node]
            paths.append(tuple(reversed(nodes)))
            codes.append(tuple(reversed(bits)))
        return cls(tuple(paths), tuple(codes))

    def flat(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ptr = np.zeros(len(self.paths) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(p) for p in self.paths])
        nodes = np.array([x for p in self.paths for x in p], dtype=np.int64)
        codes = np.array([x for c in self.codes for x in c], dtype=np.int64)
        return ptr, nodes, codes


@dataclass
class LinearEmbedModel:
    labels: list[str]
    label_counts: list[int]
    vocab: Vocabulary
    cfg: TrainConfig
    row_ids: np.ndarray  # sorted global feature ids that own a trained row
    emb: np.ndarray  # (len(row_ids), dim)
    out: np.ndarray  # (n_labels, dim) or (n_labels - 1, dim) for hierarchical softmax
    train_loss: list[float] = field(default_factory=list)

    @property
    def tree(self) -> HuffmanTree | None:
        if self.cfg.loss != HIERARCHICAL_SOFTMAX:
            return None
        return HuffmanTree.build(self.label_counts)

    def features(self, text: str) -> list[int]:
        c = self.cfg
        return featurize(preprocess(text), c.word_ngram, c.bucket_count, self.vocab, c.minn, c.maxn)

    def hidden(self, feature_ids: Sequence[int]) -> np.ndarray | None:
        if not feature_ids:
            return None
        ids = np.asarray(feature_ids, dtype=np.int64)
        pos = np.searchsorted(self.row_ids, ids)
        pos_clipped = np.minimum(pos, len(self.row_ids) - 1)
        known = (pos < len(self.row_ids)) & (self.row_ids[pos_clipped] == ids) if len(self.row_ids) else np.zeros(len(ids), bool)
        rows = np.empty((len(ids), self.cfg.dim))
        rows[known] = self.emb[pos_clipped[known]]
        if not known.all():
            rows[~known] = init_rows(ids[~known], self.cfg.dim, self.cfg.seed)
        return rows.mean(axis=0)

    def proba_from_hidden(self, h: np.ndarray) -> np.ndarray:
        return output_proba(self.out, h, self.tree)

    def predict_proba(self, text: str) -> np.ndarray:
        h = self.hidden(self.features(text))
        if h is None:
            log.warning("no usable features after preprocessing; returning uniform distribution")
            return np.full(len(self.labels), 1.0 / len(self.labels))
        return self.proba_from_hidden(h)

    def predict_label(self, text: str) -> str:
        return self.labels[int(np.argmax(self.predict_proba(text)))]


def output_proba(out: np.ndarray, h: np.ndarray, tree: HuffmanTree | None) -> np.ndarray:
    if tree is None:
        logits = out @ h
        p = np.exp(logits - logits.max())
        return p / p.sum()
    f = 1.0 / (1.0 + np.exp(-(out @ h)))
    probs = np.ones(len(tree.paths))
    for leaf, (nodes, codes) in enumerate(zip(tree.paths, tree.codes)):
        for node, bit in zip(nodes, codes):
            probs[leaf] *= f[node] if bit else 1.0 - f[node]
    return probs


def predict(model: LinearEmbedModel, text: str) -> tuple[str, dict[str, float]]:
    """Most probable label and the full distribution."""
    p = model.predict_proba(text)
    return model.labels[int(np.argmax(p))], {lab: float(x) for lab, x in zip(model.labels, p)}


@dataclass
class _Prepared:
    doc_ptr: np.ndarray
    doc_rows: np.ndarray
    row_ids: np.ndarray
    n_features: int


def _prepare(feature_lists: Sequence[Sequence[int]]) -> _Prepared:
    flat = np.fromiter((f for fl in feature_lists for f in fl), dtype=np.int64)
    ptr = np.zeros(len(feature_lists) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(fl) for fl in feature_lists])
    row_ids, local = np.unique(flat, return_inverse=True)
    return _Prepared(ptr, local.astype(np.int64).ravel(), row_ids, int(flat.size))


def train(
    docs: Sequence,
    cfg: TrainConfig = TrainConfig(),
    *,
    on_epoch: Callable[[int, float], None] | None = None,
) -> LinearEmbedModel:
    """Fit a model on ``docs`` (objects with ``text`` and ``label``).

    Single-threaded and deterministic for a given config and seed. The
    learning rate decays linearly to zero over all feature-token updates.
    ``train_loss`` records the mean negative log-likelihood of each epoch.
    """
    labels = sorted({d.label for d in docs})
    if len(labels) < 2:
        raise TrainingError(f"need at least two labels, got {labels}")
    index = {lab: i for i, lab in enumerate(labels)}
    counts = [sum(1 for d in docs if d.label == lab) for lab in labels]
    tokens = [preprocess(d.text) for d in docs]
    vocab = Vocabulary.build(tokens, cfg.min_token_count)
    feats = [featurize(t, cfg.word_ngram, cfg.bucket_count, vocab, cfg.minn, cfg.maxn) for t in tokens]
    prep = _prepare(feats)
    if prep.n_features == 0:
        raise TrainingError("training documents produced no features")

    emb = init_rows(prep.row_ids, cfg.dim, cfg.seed)
    targets = np.array([index[d.label] for d in docs], dtype=np.int64)
    use_hs = cfg.loss == HIERARCHICAL_SOFTMAX
    if use_hs:
        tree = HuffmanTree.build(counts)
        path_ptr, path_nodes, path_codes = tree.flat()
        out = np.zeros((tree.n_internal, cfg.dim))
    else:
        path_ptr = np.zeros(1, dtype=np.int64)
        path_nodes = np.zeros(0, dtype=np.int64)
        path_codes = np.zeros(0, dtype=np.int64)
        out = np.zeros((len(labels), cfg.dim))

    rng = np.random.default_rng(cfg.seed)
    total = float(cfg.epochs * prep.n_features)
    processed = 0.0
    losses: list[float] = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(docs)).astype(np.int64)
        loss, seen, processed = kernels.sgd_epoch(
            emb, out, prep.doc_ptr, prep.doc_rows, targets, order, float(cfg.learning_rate),
            float(processed), total, use_hs, path_ptr, path_nodes, path_codes,
        )
        mean = loss / max(seen, 1)
        if not math.isfinite(mean) or not np.all(np.isfinite(out)):
            raise TrainingError(
                f"non-finite loss at epoch {epoch + 1}: loss={mean}, "
                f"lr={cfg.learning_rate * (1 - processed / total):.4g}, "
                f"non-finite parameters: emb {int(np.sum(~np.isfinite(emb)))}/{emb.size}, "
                f"out {int(np.sum(~np.isfinite(out)))}/{out.size}"
            )
        losses.append(float(mean))
        if on_epoch is not None:
            on_epoch(epoch + 1, float(mean))

    return LinearEmbedModel(
        labels=labels,
        label_counts=counts,
        vocab=vocab,
        cfg=cfg,
        row_ids=prep.row_ids,
        emb=emb,
        out=out,
        train_loss=losses,
    )


def loss_and_grad(
    emb: np.ndarray, out: np.ndarray, rows: Sequence[int], target: int, tree: HuffmanTree | None = None
) -> tuple[float, np.ndarray, np.ndarray]:
    """Negative log-likelihood of one document and its exact gradients.

    Returns ``(loss, d_emb, d_out)`` with gradients shaped like ``emb`` and
    ``out``. Independent of the SGD kernels; used to check them.
    """
    rows = np.asarray(rows, dtype=np.int64)
    n = len(rows)
    h = emb[rows].mean(axis=0)
    d_out = np.zeros_like(out)
    if tree is None:
        logits = out @ h
        p = np.exp(logits - logits.max())
        p /= p.sum()
        loss = -math.log(p[target])
        delta = p.copy()
        delta[target] -= 1.0
        d_out += np.outer(delta, h)
        d_h = delta @ out
    else:
        loss = 0.0
        d_h = np.zeros_like(h)
        for node, bit in zip(tree.paths[target], tree.codes[target]):
            f = 1.0 / (1.0 + math.exp(-(out[node] @ h)))
            loss -= math.log(f if bit else 1.0 - f)
            g = f - bit
            d_out[node] += g * h
            d_h += g * out[node]
    d_emb = np.zeros_like(emb)
    np.add.at(d_emb, rows, d_h / n)
    return loss, d_emb, d_out


def config_dict(cfg: TrainConfig) -> dict:
    return asdict(cfg)
