"""Snapshot-dated entity index over a Wikidata JSON dump.

Only two claim properties matter here: P39 (position held) and P106
(occupation). An entity is retained when it carries at least one of them;
with person_only set it must additionally be an instance (P31) of human
(Q5). Labels and aliases are casefolded into two lookup maps, one keyed by
the full normalized name and one by each individual name token, so both
"narendra modi" and the bare "modi" can reach the same record.

The dump is read as newline-delimited JSON entities, optionally gzipped.
The wrapped-array form is tolerated: '[' and ']' lines are skipped and a
trailing ',' per line is dropped. Indexing is a single streaming pass;
nothing is buffered beyond the retained records.

The serialized index is a single UTF-8 NDJSON file: the first line is a
header object {"format_version", "snapshot_date", "record_count"}, followed
by exactly record_count record objects sorted by numeric QID. Lookup maps
are derived data and are rebuilt on load.
"""

from __future__ import annotations

import gzip
import io
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date as Date
from enum import Enum
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

from .errors import DataError

__all__ = [
    "RoleProperty",
    "Statement",
    "EntityRecord",
    "EntityIndex",
    "ResolveMode",
    "LabelSource",
    "ResolvedLabel",
    "index_dump",
    "save_index",
    "load_index",
    "lookup_by_name",
    "resolve_person_label",
    "coverage_rate",
    "top_labels",
]

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

HUMAN_QID = "Q5"
INSTANCE_OF = "P31"

FALLBACK_PERSON_TOKEN = "PER"


class RoleProperty(Enum):
    POSITION_HELD = "P39"
    OCCUPATION = "P106"


class LabelSource(Enum):
    POSITION_HELD = "P39"
    OCCUPATION = "P106"
    FALLBACK_PER = "fallback"


class ResolveMode(Enum):
    DUMP_ORDER = "dump-order"
    TEMPORAL = "temporal"


@dataclass(frozen=True)
class Statement:
    property: RoleProperty
    value_qid: str
    start_date: Date | None
    end_date: Date | None
    dump_order: int

    def __post_init__(self) -> None:
        if self.start_date and self.end_date and self.start_date > self.end_date:
            raise DataError(
                f"statement {self.value_qid}: start {self.start_date} after end {self.end_date}"
            )

    def valid_at(self, when: Date) -> bool:
        if self.start_date is not None and self.start_date > when:
            return False
        if self.end_date is not None and self.end_date < when:
            return False
        return True


@dataclass(frozen=True)
class EntityRecord:
    qid: str
    primary_label: str
    aliases: tuple[str, ...]
    statements: tuple[Statement, ...]
    sitelink_count: int


@dataclass
class EntityIndex:
    snapshot_date: Date
    records: dict[str, EntityRecord] = field(default_factory=dict)
    by_name: dict[str, list[str]] = field(default_factory=dict)
    by_token: dict[str, list[str]] = field(default_factory=dict)
    malformed_lines: int = 0

    def add(self, record: EntityRecord) -> None:
        self.records[record.qid] = record
        for name in (record.primary_label, *record.aliases):
            key = _normalize(name)
            if not key:
                continue
            bucket = self.by_name.setdefault(key, [])
            if record.qid not in bucket:
                bucket.append(record.qid)
            for token in key.split(" "):
                tbucket = self.by_token.setdefault(token, [])
                if record.qid not in tbucket:
                    tbucket.append(record.qid)

    def __len__(self) -> int:
        return len(self.records)


def _normalize(name: str) -> str:
    return " ".join(name.casefold().split())


_QID_RE = re.compile(r"^Q\d+$")
# Wikidata time values look like "+2009-01-20T00:00:00Z"; low-precision
# values zero out month/day.
_TIME_RE = re.compile(r"^\+(\d{1,16})-(\d{2})-(\d{2})T")


def qid_sort_key(token: str) -> tuple[int, object]:
    """QIDs order numerically; anything else sorts after them, textually."""
    if _QID_RE.match(token):
        return (0, int(token[1:]))
    return (1, token)


def _parse_time_value(value: dict) -> Date | None:
    raw = value.get("time")
    if not isinstance(raw, str):
        return None
    m = _TIME_RE.match(raw)
    if not m:
        return None  # BCE or otherwise unusable
    year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
    if year < 1:
        return None
    try:
        return Date(year, max(month, 1), max(day, 1))
    except ValueError:
        return None


def _qualifier_date(claim: dict, prop: str) -> Date | None:
    for snak in claim.get("qualifiers", {}).get(prop, []):
        if snak.get("snaktype") != "value":
            continue
        dv = snak.get("datavalue", {})
        if dv.get("type") != "time":
            continue
        parsed = _parse_time_value(dv.get("value", {}))
        if parsed is not None:
            return parsed
    return None


def _claim_target(claim: dict) -> str | None:
    snak = claim.get("mainsnak", {})
    if snak.get("snaktype") != "value":
        return None
    dv = snak.get("datavalue", {})
    if dv.get("type") != "wikibase-entityid":
        return None
    target = dv.get("value", {}).get("id")
    if isinstance(target, str) and _QID_RE.match(target):
        return target
    return None


def _is_human(claims: dict) -> bool:
    return any(_claim_target(c) == HUMAN_QID for c in claims.get(INSTANCE_OF, []))


def _extract_record(entity: dict) -> EntityRecord | None:
    """Build an EntityRecord, or None when the entity is not indexable
    (no P39/P106 targets, or no English label to match surfaces against)."""
    claims = entity.get("claims", {})
    statements: list[Statement] = []
    order = 0
    for prop in RoleProperty:
        for claim in claims.get(prop.value, []):
            target = _claim_target(claim)
            if target is None:
                continue
            start = _qualifier_date(claim, "P580")
            end = _qualifier_date(claim, "P582")
            if start and end and start > end:
                start = end = None  # dump noise; keep the statement undated
            statements.append(
                Statement(
                    property=prop,
                    value_qid=target,
                    start_date=start,
                    end_date=end,
                    dump_order=order,
                )
            )
            order += 1
    if not statements:
        return None
    label_obj = entity.get("labels", {}).get("en")
    label = label_obj.get("value") if isinstance(label_obj, dict) else None
    if not label or not isinstance(label, str):
        return None  # nothing to match surfaces against
    aliases = tuple(
        a["value"]
        for a in entity.get("aliases", {}).get("en", [])
        if isinstance(a, dict) and isinstance(a.get("value"), str) and a["value"]
    )
    return EntityRecord(
        qid=entity["id"],
        primary_label=label,
        aliases=aliases,
        statements=tuple(statements),
        sitelink_count=len(entity.get("sitelinks", {})),
    )


def _open_dump(source: str | Path | BinaryIO | io.TextIOBase) -> Iterator[str]:
    if isinstance(source, io.TextIOBase):
        yield from source
        return
    if isinstance(source, (str, Path)):
        raw: BinaryIO = open(source, "rb")
        close = True
    else:
        raw, close = source, False
    try:
        head = raw.read(2)
        raw.seek(raw.tell() - len(head))
        if head == b"\x1f\x8b":
            with gzip.open(raw, "rt", encoding="utf-8") as fh:
                yield from fh
        else:
            yield from io.TextIOWrapper(raw, encoding="utf-8")
    finally:
        if close:
            raw.close()


def index_dump(
    source: str | Path | BinaryIO | io.TextIOBase,
    snapshot_date: Date,
    *,
    person_only: bool = False,
    strict: bool = False,
) -> EntityIndex:
    """Stream a dump into an EntityIndex.

    Retains entities with at least one P39/P106 item target and an English
    label; person_only additionally requires P31 = Q5. Malformed lines are
    counted on index.malformed_lines and skipped, or raise DataError under
    strict. An empty result is valid but logged as a warning.
    """
    index = EntityIndex(snapshot_date=snapshot_date)
    for lineno, line in enumerate(_open_dump(source), start=1):
        line = line.strip()
        if not line or line in ("[", "]"):
            continue
        line = line.rstrip(",")
        try:
            entity = json.loads(line)
            if not isinstance(entity, dict):
                raise DataError("not a JSON object")
            qid = entity.get("id")
            if not isinstance(qid, str) or not _QID_RE.match(qid):
                raise DataError(f"bad entity id {qid!r}")
        except (json.JSONDecodeError, DataError) as exc:
            if strict:
                msg = exc.msg if isinstance(exc, json.JSONDecodeError) else str(exc)
                raise DataError(f"dump line {lineno}: {msg}") from None
            index.malformed_lines += 1
            continue
        if entity.get("type") not in (None, "item"):
            continue
        if person_only and not _is_human(entity.get("claims", {})):
            continue
        record = _extract_record(entity)
        if record is not None:
            index.add(record)
    if not index.records:
        log.warning("dump produced an empty index (snapshot %s)", snapshot_date)
    return index


def _record_to_json(record: EntityRecord) -> dict:
    return {
        "qid": record.qid,
        "label": record.primary_label,
        "aliases": list(record.aliases),
        "sitelinks": record.sitelink_count,
        "statements": [
            {
                "property": s.property.value,
                "value": s.value_qid,
                "start": s.start_date.isoformat() if s.start_date else None,
                "end": s.end_date.isoformat() if s.end_date else None,
            }
            for s in record.statements
        ],
    }


def save_index(index: EntityIndex, path: str | Path) -> None:
    """Write the versioned single-file index format (see module docstring)."""
    path = Path(path)
    header = {
        "format_version": FORMAT_VERSION,
        "snapshot_date": index.snapshot_date.isoformat(),
        "record_count": len(index.records),
    }
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False))
        fh.write("\n")
        for qid in sorted(index.records, key=qid_sort_key):
            fh.write(json.dumps(_record_to_json(index.records[qid]), ensure_ascii=False))
            fh.write("\n")


def load_index(path: str | Path) -> EntityIndex:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError:
            raise DataError(f"{path}: missing or malformed index header") from None
        if not isinstance(header, dict) or header.get("format_version") != FORMAT_VERSION:
            raise DataError(
                f"{path}: unsupported index format version {header.get('format_version')!r}"
            )
        try:
            snapshot = Date.fromisoformat(header["snapshot_date"])
            expected = int(header["record_count"])
        except (KeyError, ValueError, TypeError):
            raise DataError(f"{path}: malformed index header fields") from None
        index = EntityIndex(snapshot_date=snapshot)
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                statements = tuple(
                    Statement(
                        property=RoleProperty(s["property"]),
                        value_qid=s["value"],
                        start_date=Date.fromisoformat(s["start"]) if s["start"] else None,
                        end_date=Date.fromisoformat(s["end"]) if s["end"] else None,
                        dump_order=i,
                    )
                    for i, s in enumerate(raw["statements"])
                )
                record = EntityRecord(
                    qid=raw["qid"],
                    primary_label=raw["label"],
                    aliases=tuple(raw["aliases"]),
                    statements=statements,
                    sitelink_count=raw["sitelinks"],
                )
            except (json.JSONDecodeError, KeyError, ValueError, TypeError):
                raise DataError(f"{path}: malformed index record at line {lineno}") from None
            index.add(record)
    if len(index.records) != expected:
        raise DataError(
            f"{path}: header promises {expected} records, found {len(index.records)}"
        )
    return index


def lookup_by_name(index: EntityIndex, surface: str) -> list[str]:
    """Candidate QIDs for a surface form.

    Exact normalized full-name match is tried first; only when it yields
    nothing does the per-token map contribute (union over the surface's
    tokens). Candidates are ordered by sitelink count descending, numeric
    QID ascending. Unknown surfaces return an empty list.
    """
    key = _normalize(surface)
    if not key:
        return []
    candidates = list(index.by_name.get(key, ()))
    if not candidates:
        seen: set[str] = set()
        for token in key.split(" "):
            for qid in index.by_token.get(token, ()):
                if qid not in seen:
                    seen.add(qid)
                    candidates.append(qid)
    candidates.sort(key=lambda q: (-index.records[q].sitelink_count, qid_sort_key(q)))
    return candidates


@dataclass(frozen=True)
class ResolvedLabel:
    token: str
    source: LabelSource


def _first_by_dump_order(
    statements: Iterable[Statement], prop: RoleProperty
) -> Statement | None:
    best: Statement | None = None
    for s in statements:
        if s.property is prop and (best is None or s.dump_order < best.dump_order):
            best = s
    return best


def resolve_person_label(
    index: EntityIndex,
    surface: str,
    mode: ResolveMode = ResolveMode.DUMP_ORDER,
) -> ResolvedLabel:
    """Map a person surface form to a role token.

    The top lookup candidate supplies the statements. DUMP_ORDER takes the
    first-listed position held (P39), else the first-listed occupation
    (P106). TEMPORAL prefers the position held that is valid at the index's
    snapshot date (open-ended ranges count; the latest start wins, dump
    order breaking ties) and falls back to the full DUMP_ORDER cascade when
    none is valid. Unresolvable surfaces yield the generic person token.
    """
    candidates = lookup_by_name(index, surface)
    if not candidates:
        return ResolvedLabel(token=FALLBACK_PERSON_TOKEN, source=LabelSource.FALLBACK_PER)
    statements = index.records[candidates[0]].statements
    if mode is ResolveMode.TEMPORAL:
        valid = [
            s
            for s in statements
            if s.property is RoleProperty.POSITION_HELD and s.valid_at(index.snapshot_date)
        ]
        if valid:
            valid.sort(key=lambda s: (s.start_date or Date.min, -s.dump_order), reverse=True)
            return ResolvedLabel(token=valid[0].value_qid, source=LabelSource.POSITION_HELD)
        # fall through to dump-order behavior
    position = _first_by_dump_order(statements, RoleProperty.POSITION_HELD)
    if position is not None:
        return ResolvedLabel(token=position.value_qid, source=LabelSource.POSITION_HELD)
    occupation = _first_by_dump_order(statements, RoleProperty.OCCUPATION)
    if occupation is not None:
        return ResolvedLabel(token=occupation.value_qid, source=LabelSource.OCCUPATION)
    return ResolvedLabel(token=FALLBACK_PERSON_TOKEN, source=LabelSource.FALLBACK_PER)


def coverage_rate(labels_a: Iterable[str], labels_b: Iterable[str]) -> float:
    """Percentage of a's unique labels that also occur in b:
    100 * |a intersect b| / |a|. Empty a is an error."""
    set_a = set(labels_a)
    if not set_a:
        raise DataError("coverage_rate: first label set is empty")
    set_b = set(labels_b)
    return 100.0 * len(set_a & set_b) / len(set_a)


def top_labels(
    tokens: Iterable[str], index: EntityIndex, k: int
) -> list[tuple[str, int]]:
    """The k most frequent tokens in a usage multiset, rendered with the
    index's human-readable labels where available. Count ties break by
    numeric QID ascending."""
    if k < 1:
        raise DataError(f"top_labels: k must be >= 1, got {k}")
    counts = Counter(tokens)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], qid_sort_key(kv[0])))
    out = []
    for token, count in ranked[:k]:
        record = index.records.get(token)
        out.append((record.primary_label if record else token, count))
    return out
