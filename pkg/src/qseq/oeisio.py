"""OEIS lookups against a local "stripped" dump, plus an opt-in remote fetch.

Stripped lines look like ``A000108 ,1,1,2,5,14,42,``.  The dump carries no
offsets, so matching is shift-tolerant.  Shift convention: a match at shift
``s`` means ``candidate[i + s] == terms[i]`` wherever both sides exist.  A
positive shift drops the candidate's first ``s`` terms (the candidate
"shifted s to the left").  A negative shift skips the record's first ``-s``
terms.
"""

from __future__ import annotations

import json
import logging
import os
import re
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

log = logging.getLogger(__name__)

ANUMBER_RE = re.compile(r"^A\d{6}$")
DUMP_ENV = "QSEQ_OEIS_DUMP"
ENDPOINT_ENV = "QSEQ_OEIS_ENDPOINT"
DEFAULT_ENDPOINT = "https://oeis.org/search"
MIN_OVERLAP = 5


class OeisError(Exception):
    pass


class StrippedFormatError(OeisError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class OfflineError(OeisError):
    pass


def validate_anumber(anumber: str) -> str:
    if not isinstance(anumber, str) or not ANUMBER_RE.match(anumber):
        raise ValueError(f"not an OEIS identifier: {anumber!r} (expected A + 6 digits)")
    return anumber


@dataclass(frozen=True)
class OeisRecord:
    anumber: str
    terms: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        validate_anumber(self.anumber)
        if not self.terms:
            raise ValueError(f"{self.anumber} has no terms")
        object.__setattr__(self, "terms", tuple(int(t) for t in self.terms))

    def to_stripped(self) -> str:
        return f"{self.anumber} ," + ",".join(str(t) for t in self.terms) + ","


def parse_stripped_line(line: str, lineno: int = 1) -> OeisRecord | None:
    """Parse one dump line; comments and blank lines give None."""
    text = line.strip()
    if not text or text.startswith("#"):
        return None
    head, sep, body = text.partition(" ")
    if not sep:
        raise StrippedFormatError("missing term list", lineno)
    try:
        validate_anumber(head)
    except ValueError as exc:
        raise StrippedFormatError(str(exc), lineno) from None
    body = body.strip()
    if not body.startswith(","):
        raise StrippedFormatError("term list must start with ','", lineno)
    fields = body.strip(",").split(",")
    try:
        terms = tuple(int(f) for f in fields if f != "")
    except ValueError:
        raise StrippedFormatError(f"non-integer term in {head}", lineno) from None
    if not terms:
        raise StrippedFormatError(f"{head} has no terms", lineno)
    return OeisRecord(head, terms)


class SequenceStore(Mapping[str, OeisRecord]):
    """Read-only A-number index."""

    def __init__(self, records: Iterable[OeisRecord] = ()):
        self._records: dict[str, OeisRecord] = {}
        for rec in records:
            self._records[rec.anumber] = rec

    def __getitem__(self, anumber: str) -> OeisRecord:
        return self._records[anumber]

    def __iter__(self) -> Iterator[str]:
        return iter(self._records)

    def __len__(self) -> int:
        return len(self._records)


def parse_stripped(lines: Iterable[str]) -> SequenceStore:
    records: dict[str, OeisRecord] = {}
    for lineno, line in enumerate(lines, 1):
        rec = parse_stripped_line(line, lineno)
        if rec is None:
            continue
        if rec.anumber in records:
            log.warning("line %d: duplicate %s, keeping the later entry", lineno, rec.anumber)
        records[rec.anumber] = rec
    return SequenceStore(records.values())


def load_stripped(path) -> SequenceStore:
    with open(path, encoding="utf-8") as fh:
        return parse_stripped(fh)


def fixture_path() -> Path:
    return Path(str(resources.files("qseq") / "data" / "stripped_fixture.txt"))


def default_dump_path() -> Path:
    env = os.environ.get(DUMP_ENV)
    return Path(env) if env else fixture_path()


class MatchStatus(Enum):
    MATCH = "match"
    PREFIX_MATCH = "prefix-match"
    NO_MATCH = "no-match"


@dataclass(frozen=True)
class Verdict:
    status: MatchStatus
    anumber: str
    shift: int | None = None
    overlap: int = 0

    def __str__(self):
        if self.status is MatchStatus.NO_MATCH:
            return f"{self.anumber}: no match"
        return f"{self.anumber}: {self.status.value} at shift {self.shift} over {self.overlap} terms"


def _overlap_at(candidate: Sequence[int], terms: Sequence[int], shift: int) -> int | None:
    """Overlap length if candidate[i + shift] == terms[i] on the overlap, else None."""
    c_start, t_start = (shift, 0) if shift >= 0 else (0, -shift)
    n = min(len(candidate) - c_start, len(terms) - t_start)
    if n <= 0:
        return None
    for i in range(n):
        if candidate[c_start + i] != terms[t_start + i]:
            return None
    return n


def _shift_order(max_shift: int) -> list[int]:
    order = [0]
    for s in range(1, max_shift + 1):
        order += [s, -s]
    return order


def verify(
    store: Mapping[str, OeisRecord],
    candidate: Sequence[int],
    anumber: str,
    max_shift: int = 3,
    min_overlap: int = MIN_OVERLAP,
) -> Verdict:
    """Compare ``candidate`` with one record, trying the smallest shifts first."""
    validate_anumber(anumber)
    if not candidate:
        raise ValueError("empty candidate")
    try:
        record = store[anumber]
    except KeyError:
        raise OeisError(f"{anumber} is not in the loaded dump") from None
    candidate = [int(c) for c in candidate]
    short = None
    for s in _shift_order(max_shift):
        n = _overlap_at(candidate, record.terms, s)
        if n is None:
            continue
        if n >= min_overlap:
            return Verdict(MatchStatus.MATCH, anumber, s, n)
        if short is None:
            short = Verdict(MatchStatus.PREFIX_MATCH, anumber, s, n)
    return short or Verdict(MatchStatus.NO_MATCH, anumber)


def search(
    store: Mapping[str, OeisRecord], candidate: Sequence[int], min_overlap: int = MIN_OVERLAP
) -> list[tuple[str, int]]:
    """Every (anumber, shift) where the candidate occurs as a contiguous run.

    The run may extend past the end of the stored terms provided at least
    ``min_overlap`` terms overlap.  Shifts are <= 0 in the module convention.
    A candidate shorter than ``min_overlap`` matches nothing.
    """
    if min_overlap < MIN_OVERLAP:
        raise ValueError(f"min_overlap must be at least {MIN_OVERLAP}")
    if len(candidate) < min_overlap:
        # too short to reach the overlap threshold anywhere
        return []
    candidate = [int(c) for c in candidate]
    hits = []
    for anumber in sorted(store):
        terms = store[anumber].terms
        for start in range(len(terms)):
            n = _overlap_at(candidate, terms, -start)
            if n is not None and n >= min_overlap:
                hits.append((anumber, -start))
    return hits


def _parse_remote(payload, anumber: str) -> OeisRecord:
    results = payload.get("results") if isinstance(payload, dict) else payload
    if not results:
        raise OeisError(f"{anumber}: no results in response")
    wanted = int(anumber[1:])
    for entry in results:
        if int(entry.get("number", -1)) == wanted:
            data = entry.get("data", "")
            terms = tuple(int(t) for t in data.split(",") if t.strip())
            offset = int(str(entry.get("offset", "0")).split(",")[0])
            return OeisRecord(anumber, terms, offset)
    raise OeisError(f"{anumber}: response does not contain the requested entry")


def fetch_remote(
    anumber: str,
    *,
    offline: bool = True,
    endpoint: str | None = None,
    timeout: float = 10.0,
) -> OeisRecord:
    """Fetch one record from the OEIS JSON search endpoint.

    Refuses unless ``offline`` is explicitly False.  Failures raise; nothing
    is ever synthesized.
    """
    validate_anumber(anumber)
    if offline:
        raise OfflineError("remote OEIS access is disabled (offline mode)")
    base = endpoint or os.environ.get(ENDPOINT_ENV) or DEFAULT_ENDPOINT
    url = f"{base}?{urllib.parse.urlencode({'q': 'id:' + anumber, 'fmt': 'json'})}"
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
    except (urllib.error.URLError, OSError) as exc:
        raise OeisError(f"fetching {anumber} failed: {exc}") from exc
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise OeisError(f"{anumber}: malformed response: {exc}") from exc
    try:
        return _parse_remote(payload, anumber)
    except (TypeError, ValueError, AttributeError) as exc:
        raise OeisError(f"{anumber}: malformed response: {exc}") from exc
