from __future__ import annotations

import json
from pathlib import Path

import pytest

from debate_forge.corpus import (
    Category,
    Corpus,
    Debate,
    DebateType,
    Member,
    Polarity,
    Session,
    SpeechTurn,
    Stance,
)

FIXTURES = Path(__file__).parent / "fixtures"
TRANSCRIPTS = FIXTURES / "transcripts"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def expected_transcripts() -> dict:
    return json.loads((TRANSCRIPTS / "expected.json").read_text(encoding="utf-8"))


def small_corpus() -> Corpus:
    """Two sessions, three debates, four members; every reference resolves."""
    members = (
        Member("mem-000001", "Dharambir Singh,Shri", "Lok Sabha", "BJP"),
        Member("mem-000002", "SHRI P. KARUNAKARAN"),
        Member("mem-000003", "KUMARI SUSHMITA DEV"),
        Member("mem-000004", "DR. KIRIT SOMAIYA"),
    )
    types = (DebateType("dt-000001", "Submission Members"), DebateType("dt-000002", "Government Bills"))
    debates = (
        Debate(
            "deb-000001",
            "Flood situation in Tamil Nadu",
            speeches=(
                SpeechTurn(1, "mem-000002", "The water has entered homes. The state needs help.", Polarity.NEGATIVE,
                           Stance.FOR, (Category.ISSUE, Category.CALL_FOR_ACTION)),
                SpeechTurn(2, "mem-000003", "I thank the rescue teams.", Polarity.POSITIVE, Stance.FOR,
                           (Category.APPRECIATE,)),
            ),
        ),
        Debate("deb-000002", "Afforestation Fund Bill",
               speeches=(SpeechTurn(1, "mem-000001", "I support this Bill."),)),
        Debate("deb-000003", "Drought",
               speeches=(SpeechTurn(1, "mem-000004", "The Government failed.", Polarity.NEGATIVE, Stance.AGAINST,
                                    (Category.BLAME,)),)),
    )
    sessions = (
        Session("ses-000001", "Friday,April 29,2016", "Vaisakha 9,1938(Saka)", "LOK SABHA", "ANOOP MISHRA",
                (("dt-000001", ("deb-000001",)), ("dt-000002", ("deb-000002",)))),
        Session("ses-000002", "Tuesday,May 3,2016", "Vaisakha 13,1938(Saka)", "LOK SABHA", "ANOOP MISHRA",
                (("dt-000001", ("deb-000003",)),)),
    )
    return Corpus(sessions=sessions, members=members, debates=debates, debate_types=types)


@pytest.fixture
def corpus() -> Corpus:
    return small_corpus()
