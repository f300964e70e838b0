from __future__ import annotations

import json
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debate_forge.corpus import (
    COLLECTION_FILES,
    Corpus,
    CorpusError,
    Debate,
    Member,
    Polarity,
    SpeechTurn,
    corpus_stats,
    load_corpus,
    make_id,
    normalize_name,
    save_corpus,
    validate_corpus,
)

from conftest import small_corpus



def test_fixture_corpus_is_valid(corpus):
    assert validate_corpus(corpus) == []


def test_empty_corpus_is_valid():
    assert validate_corpus(Corpus()) == []


def test_unknown_member_is_reported_once(corpus):
    bad = replace(corpus.debates[1], speeches=(SpeechTurn(1, "mem-999999", "Hello there."),))
    found = validate_corpus(corpus.replace_debates([corpus.debates[0], bad, corpus.debates[2]]))
    assert len(found) == 1
    assert "deb-000002" in found[0].path and "mem-999999" in found[0].message


def test_unknown_debate_reference(corpus):
    s = replace(corpus.sessions[1], debates=(("dt-000001", ("deb-000042",)),))
    found = validate_corpus(replace(corpus, sessions=(corpus.sessions[0], s)))
    assert [v.message for v in found] == ["unknown debate deb-000042"]


def test_order_index_gap(corpus):
    d = corpus.debates[0]
    d = replace(d, speeches=(d.speeches[0], replace(d.speeches[1], order_index=5)))
    found = validate_corpus(corpus.replace_debates([d, *corpus.debates[1:]]))
    assert len(found) == 1 and "order_index" in found[0].path


def test_empty_corpus_writes_five_files(tmp_path):
    save_corpus(Corpus(), tmp_path)
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(COLLECTION_FILES.values())
    assert all(p.read_text() == "" for p in tmp_path.iterdir())


def test_round_trip(tmp_path, corpus):
    save_corpus(corpus, tmp_path / "a")
    again = load_corpus(tmp_path / "a")
    assert again == corpus
    save_corpus(again, tmp_path / "b")
    for name in COLLECTION_FILES.values():
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_serialization_is_sorted_keys(tmp_path, corpus):
    save_corpus(corpus, tmp_path)
    for line in (tmp_path / "sessions.jsonl").read_text().splitlines():
        rec = json.loads(line)
        assert list(rec) == sorted(rec)
        assert set(rec) == {"_id", "englishDate", "indianDate", "houseName", "secretaryGeneralName", "debates"}


def test_duplicate_session_id(tmp_path, corpus):
    save_corpus(corpus, tmp_path)
    path = tmp_path / "sessions.jsonl"
    first = path.read_text().splitlines()[0]
    path.write_text(first + "\n" + first + "\n")
    with pytest.raises(CorpusError, match="duplicate id ses-000001") as err:
        load_corpus(tmp_path)
    assert err.value.line == 2


def test_malformed_record_reports_line(tmp_path, corpus):
    save_corpus(corpus, tmp_path)
    path = tmp_path / "debates.jsonl"
    path.write_text(path.read_text() + "{not json\n")
    with pytest.raises(CorpusError) as err:
        load_corpus(tmp_path)
    assert err.value.line == 4


def test_missing_directory(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "nope")


def test_stats_empty():
    s = corpus_stats(Corpus())
    assert (s.session_count, s.debate_count, s.speech_count, s.word_count) == (0, 0, 0, 0)


def test_stats_word_arithmetic():
    c = Corpus(
        members=(Member("mem-000001", "A"),),
        debates=(Debate("deb-000001", speeches=(SpeechTurn(1, "mem-000001", "a b"), SpeechTurn(2, "mem-000001", "c"))),),
    )
    s = corpus_stats(c)
    assert (s.word_count, s.speech_count) == (3, 2)


def test_stats_match_line_count_oracle(tmp_path, corpus):
    # independent count straight from the JSONL files
    save_corpus(corpus, tmp_path)
    lines = {k: [json.loads(x) for x in (tmp_path / v).read_text().splitlines()] for k, v in COLLECTION_FILES.items()}
    speeches = [sp for d in lines["debates"] for sp in d["speeches"]]
    s = corpus_stats(load_corpus(tmp_path))
    assert s.session_count == len(lines["sessions"])
    assert s.debate_count == len(lines["debates"])
    assert s.speech_count == len(speeches)
    assert s.word_count == sum(len(sp["text"].split()) for sp in speeches)
    assert s.polarity_histogram == {
        p: sum(sp["polarity"] == p for sp in speeches) for p in ("Positive", "Negative", "Neutral", "Unset")
    }
    assert s.annotation_histogram["For"] == 2 and s.annotation_histogram["Blame"] == 1
    assert s.debate_type_histogram == {"Submission Members": 2, "Government Bills": 1}


def test_stats_permutation_invariant(corpus):
    rng = random.Random(7)
    base = corpus_stats(corpus)
    for _ in range(5):
        debates = list(corpus.debates)
        rng.shuffle(debates)
        sessions = list(corpus.sessions)
        rng.shuffle(sessions)
        shuffled = replace(corpus, debates=tuple(debates), sessions=tuple(sessions))
        assert corpus_stats(shuffled) == base


def test_make_id_and_normalize():
    assert make_id("debates", 7) == "deb-000007"
    assert normalize_name("  Dharambir   Singh,SHRI ") == normalize_name("dharambir singh,shri")


_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=40).filter(str.strip)


@st.composite
def corpora(draw):
    n_members = draw(st.integers(1, 4))
    members = tuple(Member(make_id("members", i + 1), f"Member {i}", draw(st.sampled_from(["", "Lok Sabha"])))
                    for i in range(n_members))
    debates = []
    for k in range(draw(st.integers(0, 4))):
        n = draw(st.integers(0, 3))
        speeches = tuple(
            SpeechTurn(j + 1, members[draw(st.integers(0, n_members - 1))].id, draw(_text),
                       draw(st.sampled_from(list(Polarity))))
            for j in range(n)
        )
        kws = tuple(draw(st.lists(st.sampled_from(["water", "state", "policy"]), max_size=3)))
        debates.append(Debate(make_id("debates", k + 1), draw(_text), kws, draw(st.text(max_size=20)), speeches))
    return Corpus(members=members, debates=tuple(debates))


@settings(max_examples=40, deadline=None)
@given(corpora())
def test_round_trip_property(tmp_path_factory, c):
    path = tmp_path_factory.mktemp("rt")
    save_corpus(c, path)
    assert load_corpus(path) == c


@settings(max_examples=40, deadline=None)
@given(corpora())
def test_valid_corpus_stats_never_fail(c):
    assert validate_corpus(c) == []
    s = corpus_stats(c)
    assert sum(s.polarity_histogram.values()) == s.speech_count
    assert s.word_count == sum(len(sp.text.split()) for _, sp in c.iter_speeches())


def test_unicode_line_separators_survive_round_trip(tmp_path):
    # U+0085, U+2028 and form feeds are written raw and must not split records
    c = small_corpus()
    d = c.debates[0]
    c = c.replace_debates([replace(d, summary="a\x85b\u2028c\x0cd"), *c.debates[1:]])
    save_corpus(c, tmp_path / "c")
    assert load_corpus(tmp_path / "c") == c
