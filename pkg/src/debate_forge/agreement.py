"""Two-annotator agreement: Cohen's kappa and raw percent agreement."""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .corpus import CATEGORIES, Category

log = logging.getLogger(__name__)

STANCE_ROW = "Stance"


@dataclass(frozen=True)
class LabelPair:
    item_id: Hashable
    label_a: Hashable
    label_b: Hashable


@dataclass(frozen=True)
class CategoryAgreement:
    kappa: float
    raw_agreement: float
    n_items: int


def _check(pairs: Sequence[LabelPair]) -> None:
    if not pairs:
        raise ValueError("agreement is undefined for zero items")


def raw_agreement(pairs: Sequence[LabelPair]) -> float:
    """Fraction of items on which both annotators chose the same label."""
    _check(pairs)
    return sum(p.label_a == p.label_b for p in pairs) / len(pairs)


def cohen_kappa(pairs: Sequence[LabelPair]) -> float:
    """Chance-corrected agreement ``(p_o - p_e) / (1 - p_e)``.

    ``p_e`` multiplies each annotator's marginal label frequencies. When both
    annotators used one and the same label throughout (``p_e == 1``) the
    statistic is undefined; 1.0 is returned and a warning logged.
    """
    _check(pairs)
    n = len(pairs)
    p_o = raw_agreement(pairs)
    count_a = Counter(p.label_a for p in pairs)
    count_b = Counter(p.label_b for p in pairs)
    # integer numerator keeps p_e exact for the degenerate-case test
    p_e_num = sum(count_a[c] * count_b.get(c, 0) for c in count_a)
    if p_e_num == n * n:
        log.warning("kappa undefined: both annotators used a single identical label; returning 1.0")
        return 1.0
    p_e = p_e_num / (n * n)
    return (p_o - p_e) / (1.0 - p_e)


@dataclass(frozen=True)
class Annotation:
    speech_id: str
    annotator: str
    stance: str | None
    categories: frozenset[str]


def load_annotations(path: str | Path) -> list[Annotation]:
    """Read ``{speech_id, annotator, stance, categories[]}`` JSON Lines."""
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            cats = frozenset(Category(c).value for c in rec.get("categories", ()))
            out.append(Annotation(str(rec["speech_id"]), str(rec["annotator"]), rec.get("stance"), cats))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"{path}:{lineno}: malformed annotation: {exc}") from exc
    return out


def pairs_from_annotations(annotations: Iterable[Annotation]) -> dict[str, list[LabelPair]]:
    """Per-category binary (present/absent) pairs, plus stance pairs.

    Items need exactly two distinct annotators; annotators are ordered by
    name. Items with one annotation are skipped with a warning.
    """
    by_item: dict[str, dict[str, Annotation]] = defaultdict(dict)
    for a in annotations:
        if a.annotator in by_item[a.speech_id]:
            raise ValueError(f"duplicate annotation by {a.annotator} for {a.speech_id}")
        by_item[a.speech_id][a.annotator] = a
    out: dict[str, list[LabelPair]] = {c.value: [] for c in CATEGORIES}
    out[STANCE_ROW] = []
    skipped = 0
    for item in sorted(by_item):
        anns = by_item[item]
        if len(anns) == 1:
            skipped += 1
            continue
        if len(anns) > 2:
            raise ValueError(f"{item}: {len(anns)} annotators; only two are supported")
        a, b = (anns[k] for k in sorted(anns))
        for c in CATEGORIES:
            out[c.value].append(LabelPair(item, c.value in a.categories, c.value in b.categories))
        if a.stance is not None and b.stance is not None:
            out[STANCE_ROW].append(LabelPair(item, a.stance, b.stance))
    if skipped:
        log.warning("skipped %d items with a single annotation", skipped)
    return out


def agreement_report(pairs_by_category: Mapping[str, Sequence[LabelPair]]) -> dict[str, CategoryAgreement]:
    """Kappa, raw agreement and item count for each category row."""
    report = {}
    for name, pairs in pairs_by_category.items():
        if not pairs:
            raise ValueError(f"no label pairs for {name}")
        report[name] = CategoryAgreement(cohen_kappa(pairs), raw_agreement(pairs), len(pairs))
    return report
