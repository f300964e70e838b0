"""Synthetic annotated speeches with disjoint per-label trigger words.

Label frequencies follow a 1201-speech annotated set, so the classifiers
can be exercised at realistic proportions without real annotations.
"""

from __future__ import annotations

import numpy as np

from .evaluation import AnnotatedDoc

ANNOTATED_TOTAL = 1201
LABEL_COUNTS = {
    "Issue": 589,
    "Blame": 147,
    "Appreciate": 522,
    "CallForAction": 930,
    "For": 919,
    "Against": 282,
}

FILLER = (
    "house member minister bill session state district people scheme village farmer road water "
    "budget report committee sector policy year crore rupees national rural urban public plan "
    "department project area health education school hospital railway station power land "
    "government country madam chairman sir today point time matter question number level process "
    "system law amendment clause provision section order statement data office board authority "
    "region city town market price income tax bank loan credit interest"
).split()

TRIGGERS = {
    "For": "support endorse welcome favour backing commend".split(),
    "Against": "oppose reject withdraw condemn objection disapprove".split(),
    "Issue": "shortage crisis grievance hardship problem distress".split(),
    "Blame": "negligence failed mismanagement irresponsible lapse betrayal".split(),
    "Appreciate": "appreciate congratulate laudable praiseworthy thank achievement".split(),
    "CallForAction": "urge request demand allocate expedite direct".split(),
}


def make_synthetic_dataset(n: int = ANNOTATED_TOTAL, seed: int = 42, triggers_per_label: int = 3) -> list[AnnotatedDoc]:
    """``n`` documents with label counts scaled from the 1201-speech totals.

    Each document mixes 20-40 filler words with ``triggers_per_label``
    trigger words for its stance and for each of its categories, so every
    label is linearly separable by unigrams.
    """
    rng = np.random.default_rng(seed)
    scale = n / ANNOTATED_TOTAL
    counts = {k: int(round(v * scale)) for k, v in LABEL_COUNTS.items()}
    n_for = counts["For"]
    stance_perm = rng.permutation(n)
    stance = np.empty(n, dtype=object)
    stance[stance_perm[:n_for]] = "For"
    stance[stance_perm[n_for:]] = "Against"
    cats: list[set[str]] = [set() for _ in range(n)]
    for c in ("Issue", "Blame", "Appreciate", "CallForAction"):
        for i in rng.choice(n, size=min(counts[c], n), replace=False):
            cats[i].add(c)

    docs = []
    for i in range(n):
        words = list(rng.choice(FILLER, size=int(rng.integers(20, 41))))
        for label in [stance[i], *sorted(cats[i])]:
            words.extend(rng.choice(TRIGGERS[label], size=triggers_per_label))
        words = [words[j] for j in rng.permutation(len(words))]
        text = " ".join(words)
        docs.append(AnnotatedDoc(text[0].upper() + text[1:] + ".", str(stance[i]), frozenset(cats[i]), f"syn-{i + 1:05d}"))
    return docs
