"""Transcript text -> structured corpus.

The pipeline is: fetch (local files or rate-limited downloads plus an
external text-extraction command), header parsing, debate segmentation at
debate-type headings, speech-turn splitting at ``NAME: text`` lines, and
member resolution. Parsing never aborts on malformed regions; problems
surface as warnings with exact line numbers.
"""

from __future__ import annotations

import json
import logging
import re
import shlex
import subprocess
import time
import urllib.parse
import urllib.request
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .corpus import Corpus, Debate, DebateType, Member, Session, SpeechTurn, make_id, normalize_name, save_corpus

log = logging.getLogger(__name__)

NARRATION = "NARRATION"


@dataclass(frozen=True)
class ParseWarning:
    file: str
    line: int
    reason: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.reason}"


@dataclass
class ParseReport:
    files_processed: int = 0
    files_failed: int = 0
    debates_found: int = 0
    speeches_found: int = 0
    lines_skipped: int = 0
    lines_header: int = 0
    lines_heading: int = 0
    lines_turn: int = 0
    warnings: list[ParseWarning] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "files_processed": self.files_processed,
            "files_failed": self.files_failed,
            "debates_found": self.debates_found,
            "speeches_found": self.speeches_found,
            "lines_skipped": self.lines_skipped,
            "lines_header": self.lines_header,
            "lines_heading": self.lines_heading,
            "lines_turn": self.lines_turn,
            "warnings": [str(w) for w in self.warnings],
        }


# --------------------------------------------------------------------------
# manifest and fetching


@dataclass(frozen=True)
class ManifestEntry:
    path: str | None = None
    url: str | None = None
    date: str | None = None

    @property
    def locator(self) -> str:
        return self.path if self.path is not None else str(self.url)


@dataclass
class IngestManifest:
    entries: list[ManifestEntry]
    base_dir: Path = Path(".")

    def __post_init__(self):
        if not self.entries:
            raise ValueError("manifest has no entries")

    @classmethod
    def load(cls, path: str | Path) -> "IngestManifest":
        """Read JSON Lines of ``{"path"|"url": ..., "date": "YYYY-MM-DD"}``."""
        path = Path(path)
        entries = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").split("\n"), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if not isinstance(rec, dict) or ("path" in rec) == ("url" in rec):
                raise ValueError(f"{path}:{lineno}: entry needs exactly one of 'path' or 'url'")
            entries.append(ManifestEntry(rec.get("path"), rec.get("url"), rec.get("date")))
        return cls(entries, path.parent)


@dataclass(frozen=True)
class RawSessionFile:
    source_path: Path
    text: str
    source_url: str | None = None
    expected_date: str | None = None


@dataclass(frozen=True)
class FetchFailure:
    locator: str
    reason: str


@dataclass
class FetchResult:
    files: list[RawSessionFile] = field(default_factory=list)
    failures: list[FetchFailure] = field(default_factory=list)


@dataclass(frozen=True)
class FetchConfig:
    # e.g. "pdftotext -layout {input} {output}"; without {output}, stdout is the text
    extract_command: str | None = None
    rate_limit: float = 2.0
    timeout: float = 60.0
    user_agent: str = "debate-forge/0.1 (+research corpus builder)"


class _RateLimiter:
    def __init__(self, interval: float, sleep: Callable[[float], None], clock: Callable[[], float]):
        self.interval = interval
        self.sleep = sleep
        self.clock = clock
        self.last: float | None = None

    def wait(self) -> None:
        if self.last is not None:
            remaining = self.interval - (self.clock() - self.last)
            if remaining > 0:
                self.sleep(remaining)
        self.last = self.clock()


def _download_name(url: str) -> str:
    parsed = urllib.parse.urlparse(url)
    name = Path(urllib.parse.unquote(parsed.path)).name or "document"
    return re.sub(r"[^A-Za-z0-9._+-]", "_", name)


def _extract(command: str, src: Path, out_dir: Path) -> str:
    target = out_dir / (src.stem + ".txt")
    if target.exists() and target != src:
        return target.read_text(encoding="utf-8")
    args = [a.format(input=str(src), output=str(target)) for a in shlex.split(command)]
    proc = subprocess.run(args, capture_output=True)
    if proc.returncode != 0:
        err = proc.stderr.decode("utf-8", "replace").strip()
        raise RuntimeError(f"extraction command exited {proc.returncode}: {err}")
    if "{output}" in command:
        text = target.read_text(encoding="utf-8")
    else:
        text = proc.stdout.decode("utf-8")
        if target != src:
            target.write_text(text, encoding="utf-8")
    return text


def fetch_documents(
    manifest: IngestManifest,
    out_dir: str | Path,
    cfg: FetchConfig = FetchConfig(),
    *,
    sleep: Callable[[float], None] = time.sleep,
    clock: Callable[[], float] = time.monotonic,
) -> FetchResult:
    """Materialize every manifest entry as text.

    Local ``.txt`` files are read as they are; other local files and every
    remote document go through ``cfg.extract_command`` when one is set.
    Downloads are rate-limited and skipped when the file already exists in
    ``out_dir``. Failures are recorded per entry; the batch always finishes.
    """
    out_dir = Path(out_dir)
    limiter = _RateLimiter(cfg.rate_limit, sleep, clock)
    result = FetchResult()
    for entry in manifest.entries:
        try:
            if entry.path is not None:
                src = Path(entry.path)
                if not src.is_absolute():
                    src = manifest.base_dir / src
                if not src.is_file():
                    raise FileNotFoundError(f"no such file: {src}")
                if cfg.extract_command and src.suffix.lower() != ".txt":
                    out_dir.mkdir(parents=True, exist_ok=True)
                    text = _extract(cfg.extract_command, src, out_dir)
                else:
                    text = src.read_text(encoding="utf-8")
                result.files.append(RawSessionFile(src, text, None, entry.date))
            else:
                url = str(entry.url)
                out_dir.mkdir(parents=True, exist_ok=True)
                target = out_dir / _download_name(url)
                if not target.exists():
                    limiter.wait()
                    req = urllib.request.Request(url, headers={"User-Agent": cfg.user_agent})
                    with urllib.request.urlopen(req, timeout=cfg.timeout) as resp:
                        payload = resp.read()
                    tmp = target.with_suffix(target.suffix + ".part")
                    tmp.write_bytes(payload)
                    tmp.replace(target)
                if cfg.extract_command:
                    text = _extract(cfg.extract_command, target, out_dir)
                else:
                    text = target.read_text(encoding="utf-8")
                result.files.append(RawSessionFile(target, text, url, entry.date))
        except (OSError, RuntimeError, ValueError, UnicodeDecodeError) as exc:
            log.warning("fetch failed for %s: %s", entry.locator, exc)
            result.failures.append(FetchFailure(entry.locator, str(exc)))
    return result


# --------------------------------------------------------------------------
# header grammar

_WEEKDAYS = "Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday"
_MONTHS = "January|February|March|April|May|June|July|August|September|October|November|December"
_SAKA_MONTHS = "Chaitra|Vaisakha|Vaishakha|Jyaistha|Jyeshtha|Asadha|Ashadha|Sravana|Shravana|Bhadra|Asvina|Ashvina|Kartika|Agrahayana|Pausa|Pausha|Magha|Phalguna"
_ENGLISH_DATE = re.compile(rf"\b({_WEEKDAYS})\s*,?\s*({_MONTHS})\s+(\d{{1,2}})\s*,?\s*(\d{{4}})\b", re.I)
_INDIAN_DATE = re.compile(rf"\b({_SAKA_MONTHS})\s+(\d{{1,2}})\s*,?\s*(\d{{4}})\s*\(\s*Saka\s*\)", re.I)
_HOUSE = re.compile(r"^(LOK\s+SABHA|RAJYA\s+SABHA)$", re.I)
_DECORATION = re.compile(
    r"^(?:[-_=*~.\s]+|synopsis\s+of\s+debates?|\(?\s*proceedings\s+other\s+than\s+questions\s*(?:&|and)\s*answers\s*\)?)$",
    re.I,
)
_SECGEN_LINE = re.compile(r"^secretary[\s-]+general\.?$", re.I)
_SECGEN_LABEL = re.compile(r"^secretary[\s-]+general\s*[:\-]\s*(?P<name>\S.*)$", re.I)
_SECGEN_SUFFIX = re.compile(r"^(?P<name>[A-Z][A-Za-z .]+?)\s*,\s*secretary[\s-]+general\.?$", re.I)
_PAGE_NUMBER = re.compile(r"^[-–\s]*\d{1,4}[-–\s]*$")


@dataclass
class SessionHeader:
    english_date: str = ""
    indian_date: str = ""
    house_name: str = ""
    secretary_general: str = ""
    body_start: int = 0  # index of the first body line
    body_end: int = 0  # one past the last body line
    header_lines: int = 0  # non-blank lines consumed by header and trailer
    warnings: list[ParseWarning] = field(default_factory=list)

    @property
    def english_as_date(self) -> date | None:
        try:
            return datetime.strptime(self.english_date, "%A,%B %d,%Y").date()
        except ValueError:
            return None


def _title(word: str) -> str:
    return word[:1].upper() + word[1:].lower()


def _header_fields(line: str, hdr: SessionHeader) -> bool:
    """Record any header fields found on ``line``; True if the line is header."""
    hit = False
    m = _HOUSE.match(line)
    if m:
        hdr.house_name = " ".join(m.group(1).upper().split())
        return True
    m = _ENGLISH_DATE.search(line)
    if m:
        wd, mon, day, year = m.groups()
        hdr.english_date = f"{_title(wd)},{_title(mon)} {int(day)},{year}"
        hit = True
    m = _INDIAN_DATE.search(line)
    if m:
        mon, day, year = m.groups()
        hdr.indian_date = f"{_title(mon)} {int(day)},{year}(Saka)"
        hit = True
    if hit:
        return True
    m = _SECGEN_LABEL.match(line) or _SECGEN_SUFFIX.match(line)
    if m:
        hdr.secretary_general = " ".join(m.group("name").split()).upper()
        return True
    return bool(_DECORATION.match(line))


def parse_session_header(raw: RawSessionFile) -> SessionHeader:
    """Header fields from the leading lines, and a trailing secretary-general
    signature if present. Missing fields stay empty and add one warning."""
    lines = raw.text.split("\n")
    hdr = SessionHeader(body_end=len(lines))
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        nxt = _next_nonblank(lines, i + 1)
        if nxt is not None and _SECGEN_LINE.match(lines[nxt].strip()) and _is_signature_name(line):
            hdr.secretary_general = " ".join(line.split()).upper()
            hdr.header_lines += 2
            i = nxt + 1
            continue
        if _header_fields(line, hdr):
            hdr.header_lines += 1
            i += 1
            continue
        break
    hdr.body_start = i

    # trailer: "NAME / Secretary General" or "Secretary General: NAME"
    j = len(lines)
    while j > hdr.body_start and not lines[j - 1].strip():
        j -= 1
    if j > hdr.body_start:
        last = lines[j - 1].strip()
        m = _SECGEN_LABEL.match(last) or _SECGEN_SUFFIX.match(last)
        if m:
            hdr.secretary_general = " ".join(m.group("name").split()).upper()
            hdr.header_lines += 1
            j -= 1
        elif _SECGEN_LINE.match(last):
            k = j - 1
            while k > hdr.body_start and not lines[k - 1].strip():
                k -= 1
            if k > hdr.body_start and _is_signature_name(lines[k - 1].strip()):
                hdr.secretary_general = " ".join(lines[k - 1].split()).upper()
                hdr.header_lines += 2
                j = k - 1
    hdr.body_end = j

    missing = [
        name
        for name in ("english_date", "indian_date", "house_name", "secretary_general")
        if not getattr(hdr, name)
    ]
    if missing:
        hdr.warnings.append(ParseWarning(str(raw.source_path), 1, "header missing: " + ", ".join(missing)))
    return hdr


def _next_nonblank(lines: Sequence[str], start: int) -> int | None:
    for k in range(start, len(lines)):
        if lines[k].strip():
            return k
    return None


def _is_signature_name(line: str) -> bool:
    return bool(re.fullmatch(r"[A-Z][A-Z .]{2,60}", line)) and ":" not in line


# --------------------------------------------------------------------------
# debate segmentation


def _heading_key(text: str) -> str:
    words = re.sub(r"[^\w\s]", " ", text.lower()).split()
    return " ".join(w[:-1] if len(w) > 3 and w.endswith("s") else w for w in words)


@dataclass(frozen=True)
class HeadingLexicon:
    """Maps normalized heading text to a canonical debate-type name."""

    names: dict[str, str]

    @classmethod
    def parse(cls, text: str) -> "HeadingLexicon":
        names: dict[str, str] = {}
        for line in text.split("\n"):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = [p.strip() for p in line.split("\t") if p.strip()]
            canonical = parts[0]
            for alias in parts:
                names[_heading_key(alias)] = canonical
        return cls(names)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "HeadingLexicon":
        if path is None:
            text = resources.files("debate_forge").joinpath("data/debate_types.tsv").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        return cls.parse(text)

    def match(self, line: str) -> str | None:
        """Canonical name if ``line`` is an all-caps debate-type heading."""
        stripped = line.strip()
        if not stripped or stripped != stripped.upper() or not re.search(r"[A-Z]", stripped):
            return None
        return self.names.get(_heading_key(stripped))


@dataclass
class DebateSegment:
    debate_type_name: str
    topic: str
    heading_line: int  # 1-based
    body_lines: list[tuple[int, str]]  # (1-based line number, text)

    @property
    def body_text(self) -> str:
        return "\n".join(t for _, t in self.body_lines)


@dataclass
class _Counters:
    heading: int = 0
    skipped: int = 0
    turn: int = 0


def segment_debates(
    raw: RawSessionFile,
    header: SessionHeader | None = None,
    lexicon: HeadingLexicon | None = None,
    warnings: list[ParseWarning] | None = None,
    counters: _Counters | None = None,
) -> list[DebateSegment]:
    """Split the body into debates at debate-type heading lines.

    The first non-blank line after a heading becomes the topic unless it is
    itself a speaker line. Text before the first heading is skipped with a
    warning.
    """
    header = header or parse_session_header(raw)
    lexicon = lexicon or HeadingLexicon.load()
    warnings = [] if warnings is None else warnings
    counters = counters or _Counters()
    src = str(raw.source_path)
    lines = raw.text.split("\n")

    segments: list[DebateSegment] = []
    pre_lines: list[int] = []
    awaiting_topic = False
    for idx in range(header.body_start, header.body_end):
        line = lines[idx].strip()
        lineno = idx + 1
        if not line:
            continue
        name = lexicon.match(line)
        if name is not None:
            segments.append(DebateSegment(name, "", lineno, []))
            counters.heading += 1
            awaiting_topic = True
            continue
        if not segments:
            pre_lines.append(lineno)
            continue
        if _PAGE_NUMBER.match(line):
            counters.skipped += 1
            warnings.append(ParseWarning(src, lineno, "page number skipped"))
            continue
        if awaiting_topic:
            awaiting_topic = False
            if not is_speaker_line(line):
                segments[-1].topic = line
                counters.heading += 1
                continue
        segments[-1].body_lines.append((lineno, line))

    if pre_lines:
        counters.skipped += len(pre_lines)
        what = "before the first debate heading" if segments else "(no debate headings found)"
        warnings.append(ParseWarning(src, pre_lines[0], f"{len(pre_lines)} lines skipped {what}"))
    return segments


# --------------------------------------------------------------------------
# speech turns

_HONORIFICS = frozenset(
    {"shri", "shrimati", "smt", "sh", "dr", "prof", "hon", "kumari", "kum", "adv", "col", "capt", "gen",
     "lt", "mr", "mrs", "ms", "sri", "km", "maj", "thiru", "janab", "sardar", "pt", "justice"}
)
_CONNECTORS = frozenset({"of", "the", "and", "for", "in", "on", "de", "da", "ur", "bin"})
_INITIALS = re.compile(r"(?:[A-Z]\.)+[A-Z]?\.?|[A-Z]")
_NAME_WORD = re.compile(r"[A-Z][A-Z'\-]*|[A-Z][a-z'\-]+(?:[A-Z][a-z'\-]+)*")


def is_speaker_prefix(prefix: str) -> bool:
    """True when ``prefix`` reads as a speaker name (the text before a colon).

    At most 80 characters of upper- or title-cased words; honorifics and
    single-letter initials may carry periods, a few lowercase connectors are
    allowed, and nothing ends a sentence.
    """
    prefix = prefix.strip()
    if not prefix or len(prefix) > 80 or re.search(r"[!?;]", prefix):
        return False
    tokens = [t for t in re.split(r"[\s,()]+", prefix) if t]
    if not tokens:
        return False
    named = honorific = initials = False
    for pos, tok in enumerate(tokens):
        bare = tok.rstrip(".")
        if bare.lower() in _HONORIFICS:
            honorific = True
            continue
        if _INITIALS.fullmatch(tok):
            initials = True
            continue
        if "." in tok:
            return False
        if tok in _CONNECTORS and pos > 0:
            continue
        if not _NAME_WORD.fullmatch(tok):
            return False
        named = True
    # "SHRI A", "HON. SPEAKER" style prefixes
    return named or honorific and (initials or len(tokens) > 1)


def is_speaker_line(line: str) -> bool:
    head, sep, _ = line.partition(":")
    return bool(sep) and is_speaker_prefix(head)


@dataclass(frozen=True)
class TurnDraft:
    speaker_name: str
    speech_text: str
    line: int = 0


def parse_speech_turns(
    body_text: str | Sequence[tuple[int, str]],
    *,
    source: str = "<text>",
    first_line: int = 1,
    warnings: list[ParseWarning] | None = None,
    counters: _Counters | None = None,
) -> list[TurnDraft]:
    """Split a debate body into ``(speaker, text)`` turns.

    A line whose text before the first colon satisfies the speaker-name
    grammar opens a new turn; any other line continues the current one.
    Text ahead of the first speaker becomes a ``NARRATION`` turn.
    """
    warnings = [] if warnings is None else warnings
    counters = counters or _Counters()
    if isinstance(body_text, str):
        numbered = [(first_line + k, ln) for k, ln in enumerate(body_text.split("\n"))]
    else:
        numbered = list(body_text)

    turns: list[tuple[str, list[str], int, int]] = []  # speaker, parts, line, n_lines
    for lineno, raw in numbered:
        line = raw.strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and is_speaker_prefix(head):
            turns.append((" ".join(head.split()), [rest.strip()], lineno, 1))
            continue
        if not turns:
            warnings.append(ParseWarning(source, lineno, "text before first speaker attached to NARRATION turn"))
            turns.append((NARRATION, [line], lineno, 1))
            continue
        speaker, parts, start, n = turns[-1]
        parts.append(line)
        turns[-1] = (speaker, parts, start, n + 1)

    out = []
    for speaker, parts, start, n in turns:
        text = " ".join(p for p in parts if p).strip()
        if not text:
            warnings.append(ParseWarning(source, start, f"empty speech by {speaker} dropped"))
            counters.skipped += n
            continue
        counters.turn += n
        out.append(TurnDraft(speaker, text, start))
    return out


# --------------------------------------------------------------------------
# members


class MemberRegistry:
    """Member lookup by normalized name; unseen names get new ids."""

    def __init__(self, members: Iterable[Member] = ()):
        self._members: list[Member] = []
        self._by_key: dict[str, str] = {}
        self._next = 1
        for m in members:
            self._members.append(m)
            self._by_key[normalize_name(m.name)] = m.id
            tail = m.id.rsplit("-", 1)[-1]
            if tail.isdigit():
                self._next = max(self._next, int(tail) + 1)

    def resolve(self, name: str) -> str:
        key = normalize_name(name)
        if not key:
            raise ValueError("empty member name")
        found = self._by_key.get(key)
        if found is not None:
            return found
        new = Member(make_id("members", self._next), " ".join(name.split()))
        self._next += 1
        self._members.append(new)
        self._by_key[key] = new.id
        return new.id

    @property
    def members(self) -> tuple[Member, ...]:
        return tuple(self._members)

    def __len__(self) -> int:
        return len(self._members)


def resolve_member(speaker_name: str, registry: MemberRegistry) -> str:
    return registry.resolve(speaker_name)


def load_members(path: str | Path) -> list[Member]:
    """Member seed file: JSON Lines of ``{_id, name, house, party}``."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").split("\n"):
        if line.strip():
            r = json.loads(line)
            out.append(Member(str(r["_id"]), str(r["name"]), str(r.get("house", "")), str(r.get("party", ""))))
    return out


# --------------------------------------------------------------------------
# end to end


@dataclass
class ParsedSession:
    source: str
    header: SessionHeader
    debates: list[tuple[DebateSegment, list[TurnDraft]]]
    warnings: list[ParseWarning]
    counters: _Counters


def parse_session(raw: RawSessionFile, lexicon: HeadingLexicon) -> ParsedSession:
    src = str(raw.source_path)
    header = parse_session_header(raw)
    warnings = list(header.warnings)
    counters = _Counters()
    if not raw.text.strip():
        warnings.append(ParseWarning(src, 1, "empty file"))
    segments = segment_debates(raw, header, lexicon, warnings, counters)
    debates = []
    for seg in segments:
        turns = parse_speech_turns(seg.body_lines, source=src, warnings=warnings, counters=counters)
        debates.append((seg, turns))
    if raw.expected_date and header.english_date:
        parsed = header.english_as_date
        if parsed is not None and parsed.isoformat() != raw.expected_date:
            warnings.append(
                ParseWarning(src, 1, f"header date {parsed.isoformat()} differs from manifest date {raw.expected_date}")
            )
    return ParsedSession(src, header, debates, warnings, counters)


@dataclass(frozen=True)
class IngestConfig:
    fetch: FetchConfig = FetchConfig()
    lexicon_path: str | None = None
    download_dir: str | None = None
    members_path: str | None = None
    jobs: int = 1


def _manifest_date_label(iso: str | None) -> str:
    if not iso:
        return ""
    try:
        d = datetime.strptime(iso, "%Y-%m-%d")
    except ValueError:
        return ""
    return f"{d:%A},{d:%B} {d.day},{d.year}"


def build_corpus(parsed: Sequence[ParsedSession], raws: Sequence[RawSessionFile],
                 registry: MemberRegistry, report: ParseReport) -> Corpus:
    """Single-threaded merge: assigns all ids in input order."""
    type_ids: dict[str, str] = {}
    sessions, debates = [], []
    for ps, raw in zip(parsed, raws):
        report.warnings.extend(ps.warnings)
        report.lines_header += ps.header.header_lines
        report.lines_heading += ps.counters.heading
        report.lines_turn += ps.counters.turn
        report.lines_skipped += ps.counters.skipped
        if not ps.debates and not ps.header.english_date:
            continue
        grouped: dict[str, list[str]] = {}
        for seg, turns in ps.debates:
            type_id = type_ids.setdefault(seg.debate_type_name, make_id("debate_types", len(type_ids) + 1))
            debate_id = make_id("debates", len(debates) + 1)
            speeches = tuple(
                SpeechTurn(order_index=k, member_id=registry.resolve(t.speaker_name), text=t.speech_text)
                for k, t in enumerate(turns, start=1)
            )
            debates.append(Debate(id=debate_id, topic=seg.topic, speeches=speeches))
            grouped.setdefault(type_id, []).append(debate_id)
            report.debates_found += 1
            report.speeches_found += len(speeches)
        english = ps.header.english_date or _manifest_date_label(raw.expected_date)
        if not english:
            english = "unknown"
            report.warnings.append(ParseWarning(ps.source, 1, "session date unknown"))
        sessions.append(
            Session(
                id=make_id("sessions", len(sessions) + 1),
                english_date=english,
                indian_date=ps.header.indian_date,
                house_name=ps.header.house_name,
                secretary_general=ps.header.secretary_general,
                debates=tuple((t, tuple(ids)) for t, ids in grouped.items()),
            )
        )
    return Corpus(
        sessions=tuple(sessions),
        members=registry.members,
        debates=tuple(debates),
        debate_types=tuple(DebateType(i, name) for name, i in type_ids.items()),
    )


def _parse_job(args):
    raw, lexicon = args
    return parse_session(raw, lexicon)


def ingest(manifest: IngestManifest, out_corpus_dir: str | Path, cfg: IngestConfig = IngestConfig()) -> ParseReport:
    """Fetch, parse and write a corpus; returns the parse report."""
    out = Path(out_corpus_dir)
    lexicon = HeadingLexicon.load(cfg.lexicon_path)
    download_dir = Path(cfg.download_dir) if cfg.download_dir else out / "raw"
    fetched = fetch_documents(manifest, download_dir, cfg.fetch)
    report = ParseReport(files_failed=len(fetched.failures))
    for f in fetched.failures:
        report.warnings.append(ParseWarning(f.locator, 0, f"fetch failed: {f.reason}"))
    raws = fetched.files
    if cfg.jobs > 1 and len(raws) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            parsed = list(pool.map(_parse_job, [(r, lexicon) for r in raws]))
    else:
        parsed = [parse_session(r, lexicon) for r in raws]
    report.files_processed = len(raws)
    registry = MemberRegistry(load_members(cfg.members_path) if cfg.members_path else ())
    corpus = build_corpus(parsed, raws, registry, report)
    save_corpus(corpus, out)
    return report
