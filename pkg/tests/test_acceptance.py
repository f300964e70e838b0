"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (visible without ``-s``) and then asserts. Running this file directly
prints the eight lines without pytest.
"""

from __future__ import annotations

import contextlib
import io
import json
import math
import random
import subprocess
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from debate_forge.agreement import LabelPair, cohen_kappa  # noqa: E402
from debate_forge.classify import (  # noqa: E402
    HIERARCHICAL_SOFTMAX,
    SOFTMAX,
    HuffmanTree,
    TrainConfig,
    evaluate,
    evaluate_ovr,
    make_synthetic_dataset,
    split_train_test,
    stance_docs,
    train,
    train_ovr,
)
from debate_forge.classify.evaluation import category_signature  # noqa: E402
from debate_forge.classify.model import loss_and_grad  # noqa: E402
from debate_forge.cli import main  # noqa: E402
from debate_forge.corpus import load_corpus  # noqa: E402
from debate_forge.ingest import HeadingLexicon, IngestManifest, RawSessionFile, ingest, parse_session  # noqa: E402
from debate_forge.sentiment import SentimentLexicon, classify_speech, load_lexicon, polarity_of, score_sentence  # noqa: E402
from debate_forge.textrank import RankConfig, RankedGraph, rank_nodes  # noqa: E402

from oracles import power_iteration, sign_of_sum  # noqa: E402

FIXTURES = HERE / "fixtures"
TRANSCRIPTS = FIXTURES / "transcripts"


class Outcome:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failures.append(what)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = "; ".join(self.failures if self.failures else self.notes)
        return f"{status} criterion {self.number}: {self.title} ({detail})"


def _report(outcome: Outcome, capsys=None) -> None:
    ctx = capsys.disabled() if capsys is not None else contextlib.nullcontext()
    with ctx:
        print("\n" + outcome.line())
    assert outcome.passed, outcome.line()


def _cli(*argv) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([str(a) for a in argv])
    return code, buf.getvalue()


def _dir_bytes(path: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


# -- 1


def criterion_1(tmp: Path) -> Outcome:
    o = Outcome(1, "parser fidelity on the 3-file fixture corpus")
    expected = json.loads((TRANSCRIPTS / "expected.json").read_text(encoding="utf-8"))
    lexicon = HeadingLexicon.load()
    start = time.perf_counter()
    errors = 0
    for name, exp in expected.items():
        path = TRANSCRIPTS / name
        ps = parse_session(RawSessionFile(path, path.read_text(encoding="utf-8")), lexicon)
        got_debates = {(seg.debate_type_name, seg.heading_line, seg.topic) for seg, _ in ps.debates}
        want_debates = {(d["type"], d["heading_line"], d["topic"]) for d in exp["debates"]}
        got_turns = {(i, t.speaker_name, t.line, t.speech_text) for i, (_, turns) in enumerate(ps.debates) for t in turns}
        want_turns = {(i, *t) for i, d in enumerate(exp["debates"]) for t in d["turns"]}
        errors += len(got_debates ^ want_debates) + len(got_turns ^ want_turns)
        errors += sum(getattr(ps.header, k) != v for k, v in exp["header"].items())
    manifest = IngestManifest.load(FIXTURES / "manifest_3.jsonl")
    ingest(manifest, tmp / "one")
    ingest(manifest, tmp / "two")
    elapsed = time.perf_counter() - start
    o.check(errors == 0, f"{errors} boundary errors")
    o.check(_dir_bytes(tmp / "one") == _dir_bytes(tmp / "two"), "corpus files differ between runs")
    o.check(elapsed < 1.0, f"took {elapsed:.2f} s")
    o.note(f"0 boundary errors, identical output, {elapsed:.3f} s")
    return o


# -- 2


def _pairs(a, b):
    return [LabelPair(i, x, y) for i, (x, y) in enumerate(zip(a, b))]


def criterion_2() -> Outcome:
    o = Outcome(2, "Cohen's kappa oracle")
    k = cohen_kappa(_pairs(["yes"] * 5 + ["no"] * 5, ["yes"] * 4 + ["no", "yes"] + ["no"] * 4))
    o.check(abs(k - 0.6) < 1e-12, f"4/1/1/4 kappa {k!r}")
    rng = random.Random(2)
    alphabet = list("abcdef")
    for _ in range(100):
        labels = [rng.choice(alphabet[: rng.randint(1, 6)]) for _ in range(rng.randint(1, 50))]
        kk = cohen_kappa(_pairs(labels, labels))
        if kk != 1.0:
            o.check(False, f"kappa(x, x) = {kk}")
            break
    worst = 0.0
    for _ in range(100):
        n = rng.randint(2, 60)
        a = [rng.choice(alphabet) for _ in range(n)]
        b = [rng.choice(alphabet) for _ in range(n)]
        image = alphabet[:]
        rng.shuffle(image)
        f = dict(zip(alphabet, image))
        ka, kb = cohen_kappa(_pairs(a, b)), cohen_kappa(_pairs([f[x] for x in a], [f[x] for x in b]))
        worst = max(worst, abs(ka - kb) if not (math.isnan(ka) and math.isnan(kb)) else 0.0)
    o.check(worst <= 1e-12, f"relabeling changed kappa by {worst:g}")
    o.note(f"kappa={k:.15f}, identity x100, bijection x100 (max diff {worst:.1e})")
    return o


# -- 3

GRAPHS = {
    "single node": (1, []),
    "symmetric pair": (2, [(0, 1, 1.0)]),
    "weighted path": (3, [(0, 1, 2.0), (1, 2, 0.5)]),
}


def criterion_3() -> Outcome:
    o = Outcome(3, "TextRank against an independent power iteration")
    cfg = RankConfig(epsilon=1e-6)
    worst_err, worst_scale, max_iter = 0.0, 0.0, 0
    for name, (n, edges) in GRAPHS.items():
        g = rank_nodes(RankedGraph.from_edges(list(range(n)), edges), cfg)
        ref = np.asarray(power_iteration(n, edges))
        worst_err = max(worst_err, float(np.max(np.abs(g.scores - ref))))
        max_iter = max(max_iter, g.iterations)
        o.check(g.converged and g.iterations < 100, f"{name}: {g.iterations} iterations")
        for c in (1e-3, 7.5, 1e4):
            scaled = rank_nodes(RankedGraph.from_edges(list(range(n)), [(a, b, w * c) for a, b, w in edges]), cfg)
            worst_scale = max(worst_scale, float(np.max(np.abs(scaled.scores - g.scores))))
    o.check(worst_err <= 1e-6, f"oracle gap {worst_err:.2e}")
    o.check(worst_scale <= 1e-9, f"scale gap {worst_scale:.2e}")
    o.note(f"oracle gap {worst_err:.1e}, scale gap {worst_scale:.1e}, max {max_iter} iterations")
    return o


# -- 4


def criterion_4() -> Outcome:
    o = Outcome(4, "sentence and speech sentiment")
    tiny = SentimentLexicon({"good": 1.9}, {}, frozenset({"not"}))
    pos, neg = score_sentence("good", tiny), score_sentence("not good", tiny)
    o.check(abs(pos - 0.4404) <= 1e-4, f"'good' scored {pos:.6f}")
    o.check(abs(neg + 0.3412) <= 1e-4, f"'not good' scored {neg:.6f}")
    rng = random.Random(4)
    mismatches = 0
    for _ in range(1000):
        scores = [rng.choice([0.0, rng.uniform(-1, 1), round(rng.uniform(-1, 1), 1)]) for _ in range(rng.randint(0, 12))]
        if rng.random() < 0.1 and scores:
            scores.append(-math.fsum(scores))
        mismatches += polarity_of(scores).value != sign_of_sum(scores)
    o.check(mismatches == 0, f"{mismatches}/1000 oracle mismatches")
    lex = load_lexicon()
    vocab = sorted(lex.entries)[:200] + ["the", "house", "water", "not", "very", "minister"]
    flips = 0
    for _ in range(200):
        sents = [" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8))).capitalize() + rng.choice(".!?")
                 for _ in range(rng.randint(1, 6))]
        shuffled = sents[:]
        rng.shuffle(shuffled)
        flips += classify_speech(" ".join(sents), lex) is not classify_speech(" ".join(shuffled), lex)
    o.check(flips == 0, f"{flips}/200 reorderings changed polarity")
    o.note(f"good={pos:.4f}, not good={neg:.4f}, 1000 oracle lists, 200 reorderings")
    return o


# -- 5


def _gradient_rel_error() -> float:
    rng = np.random.default_rng(5)
    worst = 0.0
    for tree, n_out in ((None, 3), (HuffmanTree.build([5, 3, 2]), 2)):
        emb = rng.normal(scale=0.5, size=(6, 4))
        out = rng.normal(scale=0.5, size=(n_out, 4))
        for rows, y in (([0, 1, 2], 0), ([2, 3], 1), ([4, 5, 5, 1], 2)):
            _, g_emb, g_out = loss_and_grad(emb, out, rows, y, tree)
            for param, grad in ((emb, g_emb), (out, g_out)):
                num = np.zeros_like(param)
                for idx in np.ndindex(param.shape):
                    old = param[idx]
                    param[idx] = old + 1e-5
                    up = loss_and_grad(emb, out, rows, y, tree)[0]
                    param[idx] = old - 1e-5
                    down = loss_and_grad(emb, out, rows, y, tree)[0]
                    param[idx] = old
                    num[idx] = (up - down) / 2e-5
                denom = max(np.linalg.norm(num) + np.linalg.norm(grad), 1e-12)
                worst = max(worst, float(np.linalg.norm(num - grad) / denom))
    return worst


def criterion_5() -> Outcome:
    o = Outcome(5, "classifier on the synthetic separable corpus")
    start = time.perf_counter()
    cfg = TrainConfig(seed=42)
    docs = make_synthetic_dataset(1201, seed=42)
    tr, te = split_train_test(stance_docs(docs), 0.8, cfg.seed)
    # binary tasks default to plain softmax; the tabled loss is checked too
    task1 = {loss: evaluate(train(tr, replace(cfg, loss=loss)), te).accuracy for loss in (SOFTMAX, HIERARCHICAL_SOFTMAX)}
    for loss, acc in task1.items():
        o.check(acc >= 0.95, f"Task 1 ({loss}) accuracy {acc:.4f}")
    ctr, cte = split_train_test(docs, 0.8, cfg.seed, key=category_signature)
    task2 = {c: r.accuracy for c, r in evaluate_ovr(train_ovr(ctr, cfg), cte).items()}
    o.check(len(task2) == 4, f"only {sorted(task2)} trained")
    for c, acc in task2.items():
        o.check(acc >= 0.90, f"{c} accuracy {acc:.4f}")
    elapsed = time.perf_counter() - start
    grad = _gradient_rel_error()
    o.check(grad < 1e-3, f"gradient relative error {grad:.2e}")
    o.check(elapsed < 60.0, f"train+eval took {elapsed:.1f} s")
    ovr = ", ".join(f"{c}={a:.3f}" for c, a in task2.items())
    t1 = ", ".join(f"{a:.3f}" for a in task1.values())
    o.note(f"Task 1={t1} (softmax, hs), {ovr}, grad err {grad:.1e}, {elapsed:.1f} s")
    return o


# -- 6


def criterion_6(tmp: Path) -> Outcome:
    o = Outcome(6, "every CLI subcommand is deterministic")
    ann = FIXTURES / "annotations.jsonl"

    def run_all(root: Path) -> dict[str, object]:
        root.mkdir()
        arts: dict[str, object] = {}
        steps = {
            "synth": ["synth", "--out", root / "syn.jsonl", "-n", 300],
            "ingest": ["ingest", "--manifest", FIXTURES / "manifest_3.jsonl", "--out", root / "c",
                       "--members", FIXTURES / "members.jsonl", "--report", root / "report.json"],
            "stats": ["stats", root / "c"],
            "summarize": ["summarize", root / "c", "--out", root / "c-sum"],
            "sentiment": ["sentiment", root / "c-sum", "--out", root / "c-sent"],
            "agreement": ["agreement", "--annotations", ann],
            "train": ["train", root / "syn.jsonl", "--task", "categories", "--epochs", 10,
                      "--model-out", root / "m.bin", "--test-out", root / "test.jsonl"],
            "evaluate": ["evaluate", "--model", root / "m.bin", "--test", root / "test.jsonl"],
            "sweep": ["sweep", root / "syn.jsonl", "--epochs", "2,4"],
        }
        for name, argv in steps.items():
            code, out = _cli(*argv)
            if code != 0:
                o.check(False, f"{name} exited {code}")
            arts[f"{name}:stdout"] = out.replace(str(root), "<root>")
        for sub in ("c", "c-sum", "c-sent"):
            arts[sub] = _dir_bytes(root / sub)
        for f in ("syn.jsonl", "report.json", "m.bin", "test.jsonl"):
            arts[f] = (root / f).read_bytes()
        return arts

    a, b = run_all(tmp / "a"), run_all(tmp / "b")
    differ = sorted(k for k in a if a[k] != b[k])
    o.check(not differ, f"differ: {', '.join(differ)}")
    o.note(f"{sum(k.endswith(':stdout') for k in a)} subcommands, {len(a)} artifacts identical")
    return o


# -- 7


def criterion_7(tmp: Path) -> Outcome:
    o = Outcome(7, "epoch sweep report")
    syn = tmp / "syn.jsonl"
    _cli("synth", "--out", syn)
    code, out = _cli("sweep", syn, "--epochs", "5,10,25,50,100", "--tsv")
    o.check(code == 0, f"sweep exited {code}")
    lines = out.strip().splitlines()
    o.check(lines[:1] == ["Epochs\tAccuracy"], f"header {lines[:1]}")
    rows = [tuple(line.split("\t")) for line in lines[1:]]
    o.check([r[0] for r in rows] == ["5", "10", "25", "50", "100"], f"rows {rows}")
    acc = {int(e): float(a) for e, a in rows}
    if 5 in acc and 100 in acc:
        o.check(acc[100] >= acc[5] - 0.02, f"acc(100)={acc[100]} < acc(5)={acc[5]} - 0.02")
    o.note(", ".join(f"{e}:{a:.3f}" for e, a in acc.items()))
    return o


# -- 8


def criterion_8(tmp: Path) -> Outcome:
    o = Outcome(8, "ingest, summarize, sentiment, stats end to end")
    cmd = [sys.executable, "-m", "debate_forge.cli"]
    corpus = tmp / "corpus"
    steps = [
        ["ingest", "--manifest", FIXTURES / "manifest_3.jsonl", "--out", corpus],
        ["summarize", corpus, "--in-place"],
        ["sentiment", corpus, "--in-place"],
        ["stats", corpus],
    ]
    start = time.perf_counter()
    for argv in steps:
        proc = subprocess.run(cmd + [str(a) for a in argv], capture_output=True, text=True)
        o.check(proc.returncode == 0, f"{argv[0]} exited {proc.returncode}: {proc.stderr.strip()[-200:]}")
    elapsed = time.perf_counter() - start
    c = load_corpus(corpus)
    speeches = [s for _, s in c.iter_speeches()]
    o.check(len(c.debates) > 0 and all(d.keywords and d.summary for d in c.debates), "debate without keywords/summary")
    o.check(len(speeches) > 0 and all(s.polarity is not None for s in speeches), "speech without polarity")
    o.check(elapsed < 10.0, f"took {elapsed:.1f} s")
    o.note(f"{len(c.debates)} debates, {len(speeches)} speeches filled, {elapsed:.1f} s")
    return o


# -- pytest entry points


def test_criterion_1(tmp_path, capsys):
    _report(criterion_1(tmp_path), capsys)


def test_criterion_2(capsys):
    _report(criterion_2(), capsys)


def test_criterion_3(capsys):
    _report(criterion_3(), capsys)


def test_criterion_4(capsys):
    _report(criterion_4(), capsys)


def test_criterion_5(capsys):
    _report(criterion_5(), capsys)


def test_criterion_6(tmp_path, capsys):
    _report(criterion_6(tmp_path), capsys)


def test_criterion_7(tmp_path, capsys):
    _report(criterion_7(tmp_path), capsys)


def test_criterion_8(tmp_path, capsys):
    _report(criterion_8(tmp_path), capsys)


if __name__ == "__main__":
    import tempfile

    outcomes = []
    with tempfile.TemporaryDirectory() as d:
        root = Path(d)
        for n, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4,
                                criterion_5, criterion_6, criterion_7, criterion_8], start=1):
            args = (root / f"c{n}",) if fn.__code__.co_argcount else ()
            for a in args:
                a.mkdir()
            outcomes.append(fn(*args))
            print(outcomes[-1].line(), flush=True)
    sys.exit(0 if all(x.passed for x in outcomes) else 1)
