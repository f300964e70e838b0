from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debate_forge.corpus import Corpus, Debate, Member, Polarity, SpeechTurn
from debate_forge.sentiment import (
    SentimentConfig,
    SentimentLexicon,
    annotate_corpus,
    classify_speech,
    load_lexicon,
    parse_lexicon,
    polarity_of,
    polarity_report,
    score_sentence,
)
from debate_forge.textrank import split_sentences

from oracles import sign_of_sum, vader_normalize

TINY = SentimentLexicon({"good": 1.9, "bad": -2.5, "help": 1.7}, {"very": 0.293}, frozenset({"not", "never"}))
LEX = load_lexicon()


def test_no_hits_is_zero():
    assert score_sentence("The house met at eleven.", TINY) == 0.0
    assert score_sentence("", TINY) == 0.0


def test_hand_computed_examples():
    assert score_sentence("good", TINY) == pytest.approx(0.4404, abs=1e-4)
    assert score_sentence("not good", TINY) == pytest.approx(-0.3412, abs=1e-4)
    assert score_sentence("good", TINY) == pytest.approx(vader_normalize(1.9), abs=1e-15)
    assert score_sentence("not good", TINY) == pytest.approx(vader_normalize(-1.9 * 0.74), abs=1e-15)


def test_negation_window_is_three():
    assert score_sentence("not a b good", TINY) < 0
    assert score_sentence("not a b c good", TINY) > 0


def test_booster_and_exclamation():
    assert score_sentence("very good", TINY) == pytest.approx(vader_normalize(1.9 + 0.293))
    assert score_sentence("very bad", TINY) == pytest.approx(vader_normalize(-2.5 - 0.293))
    assert score_sentence("very x good", TINY) == pytest.approx(vader_normalize(1.9 + 0.293))
    assert score_sentence("very x y good", TINY) == pytest.approx(vader_normalize(1.9))
    assert score_sentence("good!", TINY) == pytest.approx(vader_normalize(1.9 + 0.292))
    assert score_sentence("bad!", TINY) == pytest.approx(vader_normalize(-2.5 - 0.292))
    # the bonus needs a nonzero sum
    assert score_sentence("nothing here!", TINY) == 0.0


def test_constants_are_configurable():
    cfg = SentimentConfig(negation_scale=0.5, alpha=4.0)
    assert score_sentence("not good", TINY, cfg) == pytest.approx(vader_normalize(-0.95, 4.0))


def test_classify_examples():
    assert classify_speech("", LEX) is Polarity.NEUTRAL
    assert polarity_of([0.5, -0.2, -0.4]) is Polarity.NEGATIVE
    assert polarity_of([]) is Polarity.NEUTRAL
    assert polarity_of([0.25, -0.25]) is Polarity.NEUTRAL


def test_parse_lexicon_sections_and_errors():
    lex = parse_lexicon("# comment\nGood\t1.5\n#boosters\nreally\t0.3\n#negators\nnot\nno\n")
    assert lex.entries == {"good": 1.5} and lex.boosters == {"really": 0.3} and lex.negators == {"not", "no"}
    with pytest.raises(ValueError, match=":1:"):
        parse_lexicon("good 1.5\n")
    with pytest.raises(ValueError, match="duplicate"):
        parse_lexicon("good\t1\ngood\t2\n")
    with pytest.raises(ValueError, match="bad number"):
        parse_lexicon("good\tx\n")


def test_packaged_lexicon_size():
    assert 150 <= len(LEX.entries) <= 300
    assert LEX.negators and LEX.boosters


_words = st.sampled_from(sorted(LEX.entries)[:60] + sorted(LEX.boosters)[:5] + sorted(LEX.negators)[:5]
                         + ["the", "house", "bill", "state", "water", "minister"])


@settings(max_examples=200, deadline=None)
@given(st.lists(_words, max_size=50), st.booleans())
def test_score_bounds(words, bang):
    s = " ".join(words) + ("!" if bang else ".")
    v = score_sentence(s, LEX)
    assert -1.0 < v < 1.0


_sentence = st.builds(lambda ws, end: (" ".join(ws)).capitalize() + end,
                      st.lists(_words, min_size=1, max_size=12), st.sampled_from([".", "!", "?"]))


@settings(max_examples=150, deadline=None)
@given(st.lists(_sentence, min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_reordering_invariance(sentences, rnd):
    base = classify_speech(" ".join(sentences), LEX)
    shuffled = list(sentences)
    rnd.shuffle(shuffled)
    assert classify_speech(" ".join(shuffled), LEX) is base


@settings(max_examples=150, deadline=None)
@given(st.lists(_sentence, min_size=1, max_size=8), st.sampled_from([" ", "\n\n"]))
def test_doubling_never_flips(sentences, sep):
    text = " ".join(sentences)
    a, b = classify_speech(text, LEX), classify_speech(text + sep + text, LEX)
    assert {a, b} != {Polarity.POSITIVE, Polarity.NEGATIVE}
    assert a is b


def _score_lists(rng: random.Random, n: int):
    for k in range(n):
        m = rng.randint(0, 10)
        scores = [rng.choice([0.0, round(rng.uniform(-0.99, 0.99), rng.choice([1, 2, 4, 12]))]) for _ in range(m)]
        if k % 5 == 0 and scores:
            scores += [-x for x in scores]  # exact zero sums
            rng.shuffle(scores)
        yield scores


def test_sum_and_sign_oracle_1000():
    rng = random.Random(20160429)
    for scores in _score_lists(rng, 1000):
        assert polarity_of(scores).value == sign_of_sum(scores)


def test_fifty_speech_oracle():
    rng = random.Random(5)
    vocab = sorted(LEX.entries) + ["the", "state", "water", "not", "very"]
    for _ in range(50):
        sents = [" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 9))).capitalize() + rng.choice(".!?")
                 for _ in range(rng.randint(1, 6))]
        text = " ".join(sents)
        expected = sign_of_sum([score_sentence(s, LEX) for s in split_sentences(text)])
        assert classify_speech(text, LEX).value == expected


def _corpus(texts):
    return Corpus(members=(Member("mem-000001", "A"),),
                  debates=(Debate("deb-000001", speeches=tuple(SpeechTurn(i + 1, "mem-000001", t) for i, t in enumerate(texts))),))


def test_polarity_report_counts():
    assert polarity_report(Corpus()) == {"Positive": 0, "Negative": 0, "Neutral": 0, "Total": 0}
    c = annotate_corpus(_corpus(["This is good.", "This is bad.", "The house met."]), TINY)
    assert [s.polarity for _, s in c.iter_speeches()] == [Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL]
    assert polarity_report(c) == {"Positive": 1, "Negative": 1, "Neutral": 1, "Total": 3}


@settings(max_examples=30, deadline=None)
@given(st.lists(_sentence, min_size=0, max_size=10), st.randoms(use_true_random=False))
def test_report_permutation_invariant(texts, rnd):
    a = polarity_report(annotate_corpus(_corpus(texts), LEX))
    rnd.shuffle(texts)
    b = polarity_report(annotate_corpus(_corpus(texts), LEX))
    assert a == b
    assert a["Positive"] + a["Negative"] + a["Neutral"] == a["Total"] == len(texts)
