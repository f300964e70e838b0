"""Result tables as aligned plain text or TSV."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import CATEGORIES, CATEGORY_DISPLAY, Category, CorpusStats


@dataclass
class Table:
    title: str
    headers: list[str]
    rows: list[list[str]]

    def to_tsv(self) -> str:
        lines = ["\t".join(self.headers)] + ["\t".join(r) for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        widths = [len(h) for h in self.headers]
        for r in self.rows:
            widths = [max(w, len(c)) for w, c in zip(widths, r)]

        def fmt(cells):
            return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

        rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
        out = [self.title, rule, fmt(self.headers), rule] + [fmt(r) for r in self.rows] + [rule]
        return "\n".join(out) + "\n"

    def render(self, tsv: bool = False) -> str:
        return self.to_tsv() if tsv else self.to_text()


def num(x: float) -> str:
    return f"{x:.4f}"


def _display(name: str) -> str:
    try:
        return CATEGORY_DISPLAY[Category(name)]
    except ValueError:
        return name


def dataset_table(stats: CorpusStats) -> Table:
    return Table(
        "Corpus size",
        ["Item", "Count"],
        [
            ["Sessions", str(stats.session_count)],
            ["Debates", str(stats.debate_count)],
            ["Speeches", str(stats.speech_count)],
            ["Words", str(stats.word_count)],
        ],
    )


def debate_type_table(stats: CorpusStats) -> Table:
    rows = [[name, str(n)] for name, n in stats.debate_type_histogram.items()]
    return Table("Debate types", ["Debate Type", "Occurrence Count"], rows)


def annotation_table(stats: CorpusStats) -> Table:
    h = stats.annotation_histogram
    rows = [[_display(c.value), str(h.get(c.value, 0))] for c in CATEGORIES]
    rows += [["For", str(h.get("For", 0))], ["Against", str(h.get("Against", 0))]]
    return Table("Annotated speeches", ["Categories", "Count"], rows)


def polarity_table(hist: Mapping[str, int]) -> Table:
    rows = [[k, str(hist.get(k, 0))] for k in ("Positive", "Negative", "Neutral", "Total")]
    return Table("Sentiment polarity of speeches", ["Category", "Count"], rows)


def agreement_table(report: Mapping[str, object]) -> Table:
    rows = [
        [_display(name), num(r.kappa), num(r.raw_agreement), str(r.n_items)]
        for name, r in report.items()
    ]
    return Table("Inter-annotator agreement", ["Category", "Cohen's Kappa", "Raw Agreement", "Items"], rows)


MODEL_COLUMNS = ("ngram-embed", "tfidf-svm")

# row order of the per-category accuracy table
TASK2_ROWS = (Category.CALL_FOR_ACTION, Category.ISSUE, Category.BLAME, Category.APPRECIATE)


def task1_table(accuracy: Mapping[str, float]) -> Table:
    cols = [c for c in MODEL_COLUMNS if c in accuracy]
    return Table(
        "Accuracy, stance classification",
        ["Task/Metric", *cols],
        [["For/Against", *(num(accuracy[c]) for c in cols)]],
    )


def task2_table(accuracy: Mapping[str, Mapping[str, float]]) -> Table:
    """``accuracy[column][category]`` -> per-category accuracy table."""
    cols = [c for c in MODEL_COLUMNS if c in accuracy]
    rows = []
    for cat in TASK2_ROWS:
        if any(cat.value in accuracy[c] for c in cols):
            rows.append([cat.display, *(num(accuracy[c][cat.value]) if cat.value in accuracy[c] else "-" for c in cols)])
    return Table("Accuracy, purpose categories (one vs rest)", ["Task 2/Metric", *cols], rows)


def sweep_table(rows: Sequence[tuple[int, float]], label: str) -> Table:
    return Table(f"Accuracy by epochs ({label})", ["Epochs", "Accuracy"], [[str(e), num(a)] for e, a in rows])
