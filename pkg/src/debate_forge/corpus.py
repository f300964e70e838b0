"""Structured corpus of debate synopses.

Five collections (sessions, members, debates, bills, debate types), persisted
as one JSON Lines file each with sorted keys so that a saved corpus is
byte-for-byte reproducible.
"""

from __future__ import annotations

import enum
import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable

COLLECTION_FILES = {
    "sessions": "sessions.jsonl",
    "members": "members.jsonl",
    "debates": "debates.jsonl",
    "bills": "bills.jsonl",
    "debate_types": "debate_types.jsonl",
}

ID_PREFIXES = {
    "sessions": "ses",
    "members": "mem",
    "debates": "deb",
    "bills": "bill",
    "debate_types": "dt",
}


class Polarity(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"
    UNSET = "Unset"


class Stance(str, enum.Enum):
    FOR = "For"
    AGAINST = "Against"


class Category(str, enum.Enum):
    ISSUE = "Issue"
    BLAME = "Blame"
    APPRECIATE = "Appreciate"
    CALL_FOR_ACTION = "CallForAction"

    @property
    def display(self) -> str:
        return CATEGORY_DISPLAY[self]


# canonical ordering used for serialization and reports
CATEGORIES = (Category.ISSUE, Category.BLAME, Category.APPRECIATE, Category.CALL_FOR_ACTION)
CATEGORY_DISPLAY = {
    Category.ISSUE: "Issue",
    Category.BLAME: "Blame",
    Category.APPRECIATE: "Appreciate",
    Category.CALL_FOR_ACTION: "Call for Action",
}


class CorpusError(Exception):
    """Raised when corpus files cannot be read or contain invalid records."""

    def __init__(self, message: str, path: Path | str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


def make_id(collection: str, n: int) -> str:
    return f"{ID_PREFIXES[collection]}-{n:06d}"


def normalize_name(name: str) -> str:
    """Case-fold and collapse whitespace; the member registry key."""
    return re.sub(r"\s+", " ", name).strip().casefold()


def canonical_categories(cats: Iterable[Category | str]) -> tuple[Category, ...]:
    found = {Category(c) for c in cats}
    return tuple(c for c in CATEGORIES if c in found)


@dataclass(frozen=True)
class Member:
    id: str
    name: str
    house: str = ""
    party: str = ""


@dataclass(frozen=True)
class Bill:
    id: str
    name: str


@dataclass(frozen=True)
class DebateType:
    id: str
    name: str


@dataclass(frozen=True)
class SpeechTurn:
    order_index: int
    member_id: str
    text: str
    polarity: Polarity = Polarity.UNSET
    stance: Stance | None = None
    categories: tuple[Category, ...] = ()

    def to_record(self) -> dict[str, Any]:
        return {
            "order_index": self.order_index,
            "member_id": self.member_id,
            "text": self.text,
            "polarity": self.polarity.value,
            "stance": self.stance.value if self.stance else None,
            "categories": [c.value for c in canonical_categories(self.categories)],
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "SpeechTurn":
        stance = rec.get("stance")
        return cls(
            order_index=int(rec["order_index"]),
            member_id=str(rec["member_id"]),
            text=str(rec["text"]),
            polarity=Polarity(rec.get("polarity", "Unset")),
            stance=Stance(stance) if stance else None,
            categories=canonical_categories(rec.get("categories", ())),
        )


@dataclass(frozen=True)
class Debate:
    id: str
    topic: str = ""
    keywords: tuple[str, ...] = ()
    summary: str = ""
    speeches: tuple[SpeechTurn, ...] = ()
    bill_id: str | None = None

    def to_record(self) -> dict[str, Any]:
        return {
            "_id": self.id,
            "topic": self.topic,
            "keywords": list(self.keywords),
            "summary": self.summary,
            "speeches": [s.to_record() for s in self.speeches],
            "bill_id": self.bill_id,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Debate":
        return cls(
            id=str(rec["_id"]),
            topic=str(rec.get("topic", "")),
            keywords=tuple(rec.get("keywords", ())),
            summary=str(rec.get("summary", "")),
            speeches=tuple(SpeechTurn.from_record(s) for s in rec.get("speeches", ())),
            bill_id=rec.get("bill_id"),
        )

    @property
    def text(self) -> str:
        return "\n".join(s.text for s in self.speeches)


@dataclass(frozen=True)
class Session:
    id: str
    english_date: str
    indian_date: str = ""
    house_name: str = ""
    secretary_general: str = ""
    # debate-type id -> debate ids, in document order
    debates: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def debate_ids(self) -> list[str]:
        return [d for _, ids in self.debates for d in ids]

    def to_record(self) -> dict[str, Any]:
        return {
            "_id": self.id,
            "englishDate": self.english_date,
            "indianDate": self.indian_date,
            "houseName": self.house_name,
            "secretaryGeneralName": self.secretary_general,
            # list of pairs keeps document order under sort_keys serialization
            "debates": [[t, list(ids)] for t, ids in self.debates],
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Session":
        return cls(
            id=str(rec["_id"]),
            english_date=str(rec.get("englishDate", "")),
            indian_date=str(rec.get("indianDate", "")),
            house_name=str(rec.get("houseName", "")),
            secretary_general=str(rec.get("secretaryGeneralName", "")),
            debates=tuple((str(t), tuple(str(i) for i in ids)) for t, ids in rec.get("debates", ())),
        )


def _member_record(m: Member) -> dict[str, Any]:
    return {"_id": m.id, "name": m.name, "house": m.house, "party": m.party}


@dataclass(frozen=True)
class Corpus:
    sessions: tuple[Session, ...] = ()
    members: tuple[Member, ...] = ()
    debates: tuple[Debate, ...] = ()
    bills: tuple[Bill, ...] = ()
    debate_types: tuple[DebateType, ...] = ()

    def debate_type_of(self) -> dict[str, str]:
        """Map debate id -> debate-type name."""
        names = {t.id: t.name for t in self.debate_types}
        out = {}
        for s in self.sessions:
            for type_id, ids in s.debates:
                for d in ids:
                    out[d] = names.get(type_id, type_id)
        return out

    def iter_speeches(self) -> Iterable[tuple[Debate, SpeechTurn]]:
        for d in self.debates:
            for s in d.speeches:
                yield d, s

    def replace_debates(self, debates: Iterable[Debate]) -> "Corpus":
        return replace(self, debates=tuple(debates))


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def validate_corpus(corpus: Corpus) -> list[Violation]:
    """Return every referential-integrity and invariant violation.

    An empty list means the corpus is valid. Violations are data; nothing
    here raises.
    """
    out: list[Violation] = []

    def dupes(kind: str, ids: list[str]) -> set[str]:
        seen: set[str] = set()
        for i in ids:
            if i in seen:
                out.append(Violation(f"{kind}[{i}]", "duplicate id"))
            seen.add(i)
        return seen

    member_ids = dupes("members", [m.id for m in corpus.members])
    debate_ids = dupes("debates", [d.id for d in corpus.debates])
    bill_ids = dupes("bills", [b.id for b in corpus.bills])
    type_ids = dupes("debate_types", [t.id for t in corpus.debate_types])
    dupes("sessions", [s.id for s in corpus.sessions])

    names: dict[str, str] = {}
    for m in corpus.members:
        key = normalize_name(m.name)
        if not key:
            out.append(Violation(f"members[{m.id}].name", "empty name"))
        elif key in names:
            out.append(Violation(f"members[{m.id}].name", f"duplicates member {names[key]}"))
        else:
            names[key] = m.id

    for b in corpus.bills:
        if not b.name.strip():
            out.append(Violation(f"bills[{b.id}].name", "empty name"))

    type_names: dict[str, str] = {}
    for t in corpus.debate_types:
        if not t.name.strip():
            out.append(Violation(f"debate_types[{t.id}].name", "empty name"))
        elif t.name in type_names:
            out.append(Violation(f"debate_types[{t.id}].name", f"duplicates type {type_names[t.name]}"))
        else:
            type_names[t.name] = t.id

    for s in corpus.sessions:
        base = f"sessions[{s.id}]"
        if not s.english_date.strip():
            out.append(Violation(f"{base}.english_date", "empty date"))
        for type_id, ids in s.debates:
            if type_id not in type_ids:
                out.append(Violation(f"{base}.debates[{type_id}]", "unknown debate type"))
            for d in ids:
                if d not in debate_ids:
                    out.append(Violation(f"{base}.debates[{type_id}]", f"unknown debate {d}"))

    for d in corpus.debates:
        base = f"debates[{d.id}]"
        if d.bill_id is not None and d.bill_id not in bill_ids:
            out.append(Violation(f"{base}.bill_id", f"unknown bill {d.bill_id}"))
        for pos, sp in enumerate(d.speeches, start=1):
            sbase = f"{base}.speeches[{pos}]"
            if sp.order_index != pos:
                out.append(Violation(f"{sbase}.order_index", f"expected {pos}, got {sp.order_index}"))
            if not sp.text.strip():
                out.append(Violation(f"{sbase}.text", "empty text"))
            if sp.member_id not in member_ids:
                out.append(Violation(f"{sbase}.member_id", f"unknown member {sp.member_id}"))
    return out


def _dumps(rec: dict[str, Any]) -> str:
    return json.dumps(rec, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def save_corpus(corpus: Corpus, path: Path | str) -> None:
    """Write the five collection files under ``path`` (created if needed)."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    records = {
        "sessions": [s.to_record() for s in corpus.sessions],
        "members": [_member_record(m) for m in corpus.members],
        "debates": [d.to_record() for d in corpus.debates],
        "bills": [{"_id": b.id, "name": b.name} for b in corpus.bills],
        "debate_types": [{"_id": t.id, "name": t.name} for t in corpus.debate_types],
    }
    for name, fname in COLLECTION_FILES.items():
        body = "".join(_dumps(r) + "\n" for r in records[name])
        (root / fname).write_text(body, encoding="utf-8", newline="\n")


def _read_collection(path: Path, build) -> list:
    if not path.exists():
        raise CorpusError("missing collection file", path)
    items = []
    seen: set[str] = set()
    try:
        lines = path.read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"unreadable: {exc}", path) from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise TypeError("record is not an object")
            item = build(rec)
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusError(f"malformed record: {exc}", path, lineno) from exc
        if item.id in seen:
            raise CorpusError(f"duplicate id {item.id}", path, lineno)
        seen.add(item.id)
        items.append(item)
    return items


def load_corpus(path: Path | str) -> Corpus:
    root = Path(path)
    if not root.is_dir():
        raise CorpusError("corpus directory not found", root)
    return Corpus(
        sessions=tuple(_read_collection(root / COLLECTION_FILES["sessions"], Session.from_record)),
        members=tuple(
            _read_collection(
                root / COLLECTION_FILES["members"],
                lambda r: Member(str(r["_id"]), str(r["name"]), str(r.get("house", "")), str(r.get("party", ""))),
            )
        ),
        debates=tuple(_read_collection(root / COLLECTION_FILES["debates"], Debate.from_record)),
        bills=tuple(
            _read_collection(root / COLLECTION_FILES["bills"], lambda r: Bill(str(r["_id"]), str(r["name"])))
        ),
        debate_types=tuple(
            _read_collection(
                root / COLLECTION_FILES["debate_types"], lambda r: DebateType(str(r["_id"]), str(r["name"]))
            )
        ),
    )


@dataclass
class CorpusStats:
    session_count: int = 0
    debate_count: int = 0
    speech_count: int = 0
    word_count: int = 0
    debate_type_histogram: dict[str, int] = field(default_factory=dict)
    polarity_histogram: dict[str, int] = field(default_factory=dict)
    annotation_histogram: dict[str, int] = field(default_factory=dict)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Counts over the corpus; words are whitespace-delimited tokens of speech texts."""
    type_of = corpus.debate_type_of()
    types = Counter(type_of[d.id] for d in corpus.debates if d.id in type_of)
    polarity: Counter[str] = Counter()
    annotations: Counter[str] = Counter()
    speeches = words = 0
    for _, sp in corpus.iter_speeches():
        speeches += 1
        words += len(sp.text.split())
        polarity[sp.polarity.value] += 1
        for c in sp.categories:
            annotations[c.value] += 1
        if sp.stance is not None:
            annotations[sp.stance.value] += 1
    return CorpusStats(
        session_count=len(corpus.sessions),
        debate_count=len(corpus.debates),
        speech_count=speeches,
        word_count=words,
        debate_type_histogram=dict(sorted(types.items(), key=lambda kv: (-kv[1], kv[0]))),
        polarity_histogram={p.value: polarity.get(p.value, 0) for p in Polarity},
        annotation_histogram={
            **{c.value: annotations.get(c.value, 0) for c in CATEGORIES},
            **{s.value: annotations.get(s.value, 0) for s in Stance},
        },
    )
