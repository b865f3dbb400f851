"""Phrase/label association scoring.

Ranks n-grams by how strongly they co-occur with one class label, using
local mutual information:

    lmi(w, l) = p(w, l) * log(p(l | w) / p(l))

with p(w, l) = count(w, l) / P, p(l | w) = count(w, l) / count(w) and
p(l) = count(l) / P, where P is the total number of n-gram occurrences in
the corpus and count(l) the number of occurrences inside documents carrying
label l. Occurrences are counted, not document frequencies: a phrase
appearing three times in one document contributes three.

High-lmi phrases for a label are the vocabulary a bag-of-ngrams classifier
will lean on for that label; scanning the top of the table is the quickest
way to spot dataset-specific or period-specific artifacts.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .corpus import Corpus, Label
from .errors import DataError

__all__ = [
    "tokenize",
    "extract_ngrams",
    "LmiEntry",
    "LmiTable",
    "compute_lmi",
    "export_lmi_table",
]

_SIGILS = ("@", "#")

LMI_TSV_HEADER = "phrase\tlabel\tcount_wl\tcount_w\tp_l_given_w\tlmi_scaled"


def _clean_token(raw: str) -> str:
    """Strip edge punctuation from one whitespace-delimited chunk.

    Kept: a leading '@' or '#' sigil, all internal marks ("covid-19",
    "clinton's"), and a single trailing '.' directly after an alphanumeric
    ("no.", "gov."). Everything else non-alphanumeric is stripped from both
    edges. Returns "" when nothing survives.
    """
    sigil = ""
    if raw[:1] in _SIGILS:
        sigil, raw = raw[0], raw[1:]
    start = 0
    while start < len(raw) and not raw[start].isalnum():
        start += 1
    end = len(raw)
    while end > start:
        ch = raw[end - 1]
        if ch.isalnum():
            break
        if ch == "." and end - 1 > start and raw[end - 2].isalnum():
            break
        end -= 1
    core = raw[start:end]
    if not core:
        return ""
    return sigil + core


def tokenize(text: str) -> list[str]:
    """Casefold, split on whitespace, and normalize each chunk.

    See _clean_token for the edge-punctuation rules; empty results are
    dropped, so every returned token is non-empty and casefolded.
    """
    tokens = []
    for raw in text.casefold().split():
        tok = _clean_token(raw)
        if tok:
            tokens.append(tok)
    return tokens


def extract_ngrams(tokens: list[str], n: int) -> list[str]:
    """All contiguous n-token windows, in order, joined by single spaces.

    Returns len(tokens) - n + 1 phrases (empty list when the sequence is
    shorter than n).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return [" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


@dataclass(frozen=True)
class LmiEntry:
    phrase: str
    label: Label
    count_wl: int
    count_w: int
    p_l_given_w: float
    lmi: float


@dataclass(frozen=True)
class LmiTable:
    n: int
    total_phrases: int
    p_label: dict[Label, float]
    entries: tuple[LmiEntry, ...]

    def entries_for(self, label: Label) -> list[LmiEntry]:
        return [e for e in self.entries if e.label is label]


_LABEL_ORDER = {Label.REAL: 0, Label.FAKE: 1}


def compute_lmi(
    corpus: Corpus,
    n: int = 2,
    *,
    min_count: int = 5,
    log_base: float | None = None,
) -> LmiTable:
    """Score every observed (n-gram, label) pair by local mutual information.

    Only pairs with at least one occurrence are emitted; phrases whose total
    count across labels is below min_count are excluded (default 5, the
    conventional floor for association scores on noisy text). The logarithm
    is natural unless log_base is given; changing the base rescales every
    score by a positive constant and cannot change the ordering.

    Entries are grouped by label (real first), each group sorted by lmi
    descending with ties broken lexicographically by phrase.

    Raises DataError("no phrases") when no document yields a single n-gram.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if min_count < 0:
        raise ValueError(f"min_count must be >= 0, got {min_count}")
    count_wl: Counter[tuple[str, Label]] = Counter()
    count_w: Counter[str] = Counter()
    count_l: Counter[Label] = Counter()
    for doc in corpus:
        grams = extract_ngrams(tokenize(doc.text), n)
        if not grams:
            continue
        count_l[doc.label] += len(grams)
        for gram in grams:
            count_wl[(gram, doc.label)] += 1
            count_w[gram] += 1
    total = sum(count_l.values())
    if total == 0:
        raise DataError("no phrases: every document tokenizes to fewer than n tokens")
    p_label = {label: count_l.get(label, 0) / total for label in Label}
    scale = 1.0 if log_base is None else math.log(log_base)
    entries = []
    for (phrase, label), c_wl in count_wl.items():
        c_w = count_w[phrase]
        if c_w < min_count:
            continue
        p_lw = c_wl / c_w
        lmi = (c_wl / total) * math.log(p_lw / p_label[label]) / scale
        entries.append(
            LmiEntry(
                phrase=phrase,
                label=label,
                count_wl=c_wl,
                count_w=c_w,
                p_l_given_w=p_lw,
                lmi=lmi,
            )
        )
    entries.sort(key=lambda e: (_LABEL_ORDER[e.label], -e.lmi, e.phrase))
    return LmiTable(n=n, total_phrases=total, p_label=p_label, entries=tuple(entries))


def _format_scaled(lmi: float, scale: float) -> str:
    return format(lmi * scale, ".6g")


def export_lmi_table(
    table: LmiTable,
    *,
    top_k: int = 10,
    scale: float = 1e6,
    fmt: str = "tsv",
) -> str:
    """Render the top_k entries per label.

    fmt "tsv" emits the machine-readable table (header
    phrase/label/count_wl/count_w/p_l_given_w/lmi_scaled); fmt "text" emits
    an aligned human-readable listing. Scores are multiplied by `scale`
    (default 10^6, so 0.000218 prints as 218) and p(l|w) is rounded to two
    decimals in both renderings.
    """
    if top_k < 1:
        raise DataError(f"top_k must be >= 1, got {top_k}")
    if fmt not in ("tsv", "text"):
        raise DataError(f"unknown export format {fmt!r}; expected 'tsv' or 'text'")
    rows: list[LmiEntry] = []
    for label in Label:
        rows.extend(table.entries_for(label)[:top_k])
    if fmt == "tsv":
        lines = [LMI_TSV_HEADER]
        for e in rows:
            lines.append(
                f"{e.phrase}\t{e.label.value}\t{e.count_wl}\t{e.count_w}"
                f"\t{e.p_l_given_w:.2f}\t{_format_scaled(e.lmi, scale)}"
            )
        return "\n".join(lines) + "\n"
    width = max((len(e.phrase) for e in rows), default=6)
    lines = [f"top {top_k} {table.n}-grams per label (lmi x {scale:g})"]
    for label in Label:
        label_rows = [e for e in rows if e.label is label]
        if not label_rows:
            continue
        lines.append(f"-- {label.value} --")
        for e in label_rows:
            lines.append(
                f"{e.phrase:<{width}}  lmi={_format_scaled(e.lmi, scale):>10}"
                f"  p(l|w)={e.p_l_given_w:.2f}  count={e.count_wl}/{e.count_w}"
            )
    return "\n".join(lines) + "\n"
