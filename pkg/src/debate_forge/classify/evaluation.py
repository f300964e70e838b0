"""Datasets, stratified 8:2 splits, accuracy reports, one-vs-rest training
and the epoch sweep."""

from __future__ import annotations

import json
import logging
import math
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from ..corpus import CATEGORIES, Category, Corpus
from .model import SOFTMAX, TrainConfig, train

log = logging.getLogger(__name__)

YES, NO = "yes", "no"


@dataclass(frozen=True)
class LabeledDoc:
    text: str
    label: str


@dataclass(frozen=True)
class AnnotatedDoc:
    text: str
    stance: str | None = None
    categories: frozenset[str] = frozenset()
    doc_id: str = ""

    def to_record(self) -> dict:
        return {
            "id": self.doc_id,
            "text": self.text,
            "stance": self.stance,
            "categories": [c.value for c in CATEGORIES if c.value in self.categories],
        }


def load_dataset(path: str | Path) -> list[AnnotatedDoc]:
    """JSON Lines of ``{text, stance, categories[]}`` (``id`` optional)."""
    docs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            cats = frozenset(Category(c).value for c in rec.get("categories") or ())
            text = str(rec["text"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"{path}:{lineno}: malformed record: {exc}") from exc
        if not text.strip():
            raise ValueError(f"{path}:{lineno}: empty text")
        docs.append(AnnotatedDoc(text, rec.get("stance"), cats, str(rec.get("id", lineno))))
    return docs


def save_dataset(docs: Iterable[AnnotatedDoc], path: str | Path) -> None:
    body = "".join(json.dumps(d.to_record(), sort_keys=True, ensure_ascii=False) + "\n" for d in docs)
    Path(path).write_text(body, encoding="utf-8")


def docs_from_corpus(corpus: Corpus) -> list[AnnotatedDoc]:
    """Speeches carrying a stance or at least one category."""
    out = []
    for d, s in corpus.iter_speeches():
        if s.stance is None and not s.categories:
            continue
        out.append(
            AnnotatedDoc(
                s.text,
                s.stance.value if s.stance else None,
                frozenset(c.value for c in s.categories),
                f"{d.id}#{s.order_index}",
            )
        )
    return out


def stance_docs(docs: Iterable[AnnotatedDoc]) -> list[LabeledDoc]:
    return [LabeledDoc(d.text, d.stance) for d in docs if d.stance is not None]


def category_docs(docs: Iterable[AnnotatedDoc], category: str) -> list[LabeledDoc]:
    return [LabeledDoc(d.text, YES if category in d.categories else NO) for d in docs]


def category_signature(doc: AnnotatedDoc) -> str:
    return "+".join(c.value for c in CATEGORIES if c.value in doc.categories) or "-"


def split_train_test(
    docs: Sequence,
    ratio: float = 0.8,
    seed: int = 42,
    key: Callable[[object], Hashable] = lambda d: d.label,
):
    """Seeded stratified split.

    Within each stratum (by ``key``) a seeded permutation puts the first
    ``floor(ratio * n)`` documents in train and the rest in test. Strata
    with fewer than two documents go entirely to train. Both halves keep
    the input order.
    """
    if len(docs) < 5:
        raise ValueError(f"need at least 5 documents to split, got {len(docs)}")
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must be in (0, 1)")
    rng = np.random.default_rng(seed)
    strata: dict[Hashable, list[int]] = defaultdict(list)
    for i, d in enumerate(docs):
        strata[key(d)].append(i)
    train_idx: list[int] = []
    for label in sorted(strata, key=str):
        idx = strata[label]
        if len(idx) < 2:
            log.warning("stratum %r has %d document(s); all go to train", label, len(idx))
            train_idx.extend(idx)
            continue
        perm = rng.permutation(len(idx))
        n_train = math.floor(ratio * len(idx) + 1e-9)
        train_idx.extend(idx[p] for p in perm[:n_train])
    in_train = set(train_idx)
    train = [d for i, d in enumerate(docs) if i in in_train]
    test = [d for i, d in enumerate(docs) if i not in in_train]
    return train, test


@dataclass
class EvalReport:
    accuracy: float
    n_test: int
    correct: int
    confusion: dict[tuple[str, str], int] = field(default_factory=dict)


def evaluate(model, test_docs: Sequence[LabeledDoc]) -> EvalReport:
    """Exact-match accuracy plus (true, predicted) confusion counts."""
    if not test_docs:
        raise ValueError("empty test set")
    confusion: Counter[tuple[str, str]] = Counter()
    for d in test_docs:
        confusion[(d.label, model.predict_label(d.text))] += 1
    correct = sum(n for (t, p), n in confusion.items() if t == p)
    return EvalReport(correct / len(test_docs), len(test_docs), correct, dict(sorted(confusion.items())))


def ovr_label_counts(docs: Sequence[AnnotatedDoc]) -> dict[str, tuple[int, int]]:
    """(positives, negatives) per category."""
    return {
        c.value: (sum(c.value in d.categories for d in docs), sum(c.value not in d.categories for d in docs))
        for c in CATEGORIES
    }


def train_ovr(
    docs: Sequence[AnnotatedDoc],
    cfg: TrainConfig = TrainConfig(),
    *,
    trainer: Callable | None = None,
    jobs: int = 1,
) -> dict[str, object]:
    """One binary model per category (docs with it vs the rest).

    Categories without positives or without negatives are skipped with a
    warning. Models use plain softmax. ``trainer`` defaults to the embedding
    classifier; with ``jobs > 1`` categories train concurrently, which does
    not change any model.
    """
    trainer = trainer or (lambda ds: train(ds, replace(cfg, loss=SOFTMAX)))
    todo = []
    for c, (pos, neg) in ovr_label_counts(docs).items():
        if pos == 0 or neg == 0:
            log.warning("skipping %s: %d positive / %d negative documents", c, pos, neg)
            continue
        todo.append(c)
    datasets = [category_docs(docs, c) for c in todo]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            models = list(pool.map(trainer, datasets))
    else:
        models = [trainer(ds) for ds in datasets]
    return dict(zip(todo, models))


def evaluate_ovr(models: Mapping[str, object], docs: Sequence[AnnotatedDoc]) -> dict[str, EvalReport]:
    return {c: evaluate(m, category_docs(docs, c)) for c, m in models.items()}


def epoch_sweep(
    docs: Sequence[LabeledDoc],
    cfg: TrainConfig,
    epoch_list: Sequence[int],
    *,
    ratio: float = 0.8,
) -> list[tuple[int, float]]:
    """Test accuracy for each epoch count, all on one seeded split."""
    if not epoch_list:
        raise ValueError("epoch_list is empty")
    if list(epoch_list) != sorted(epoch_list):
        raise ValueError("epoch_list must be ascending")
    train_docs, test_docs = split_train_test(docs, ratio, cfg.seed)
    return [(e, evaluate(train(train_docs, replace(cfg, epochs=e)), test_docs).accuracy) for e in epoch_list]
