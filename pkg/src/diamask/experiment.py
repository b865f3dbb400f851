"""Classifier, paired significance testing, and the evaluation matrix.

The classifier is intentionally simple and fully deterministic: hashed
bag-of-ngrams features (keyed blake2b, so results do not depend on process
hash salting) into a logistic regression trained by plain SGD with a seeded
per-epoch shuffle. Bitwise reproducibility for a fixed seed is part of the
contract; it is what makes byte-identical experiment reruns possible.

Paired comparisons between two models on the same test set use McNemar's
test on the discordant counts b (baseline right, contender wrong) and c
(the reverse): the exact two-sided binomial when b + c < 25, otherwise the
continuity-corrected chi-square with one degree of freedom. Multiple
comparisons against the same baseline are Bonferroni-adjusted.

run_matrix ties it together: for every (training dataset, policy) pair it
masks, trains, and evaluates in-domain and on every other dataset, then
scores each masked policy against the no-mask baseline per cell.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from datetime import date as Date, timedelta
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .analysis import extract_ngrams, tokenize
from .annotate import AnnotatedDocument, NeSpan, NeTag
from .corpus import Corpus, Document, Label, SplitMode, SplitSpec, split_by_time, split_random
from .errors import DataError
from .masking import MaskPolicy, mask_corpus
from .wikidata import (
    EntityIndex,
    EntityRecord,
    ResolveMode,
    RoleProperty,
    Statement,
    qid_sort_key,
)

__all__ = [
    "FeatureSpace",
    "featurize",
    "TrainConfig",
    "Model",
    "train",
    "evaluate",
    "EvalCell",
    "save_model",
    "load_model",
    "McNemarResult",
    "mcnemar",
    "DatasetBundle",
    "MatrixCell",
    "MatrixReport",
    "run_matrix",
    "SyntheticData",
    "synth_diachronic_corpus",
]


# ---------------------------------------------------------------------------
# features


@dataclass(frozen=True)
class FeatureSpace:
    """Hashed n-gram feature space: orders to extract, a power-of-two bucket
    count, and the 64-bit key for the hash."""

    orders: tuple[int, ...] = (1, 2)
    dimensions: int = 2**20
    hash_seed: int = 0

    def __post_init__(self) -> None:
        orders = tuple(sorted(set(self.orders)))
        if not orders or orders[0] < 1:
            raise DataError(f"n-gram orders must be >= 1, got {self.orders}")
        object.__setattr__(self, "orders", orders)
        if self.dimensions < 2 or self.dimensions & (self.dimensions - 1):
            raise DataError(f"dimensions must be a power of two >= 2, got {self.dimensions}")
        if not (0 <= self.hash_seed < 2**64):
            raise DataError("hash_seed must fit in 64 bits")

    def bucket(self, phrase: str) -> int:
        digest = hashlib.blake2b(
            phrase.encode("utf-8"),
            digest_size=8,
            key=self.hash_seed.to_bytes(8, "little"),
        ).digest()
        return int.from_bytes(digest, "big") & (self.dimensions - 1)


def featurize(text: str, space: FeatureSpace) -> dict[int, int]:
    """Sparse bucket -> occurrence-count vector for one text. Empty text (or
    text shorter than every order) gives the zero vector."""
    tokens = tokenize(text)
    vec: dict[int, int] = {}
    for n in space.orders:
        for gram in extract_ngrams(tokens, n):
            idx = space.bucket(gram)
            vec[idx] = vec.get(idx, 0) + 1
    return vec


def _as_arrays(vec: dict[int, int]) -> tuple[np.ndarray, np.ndarray]:
    idx = np.fromiter(vec.keys(), dtype=np.int64, count=len(vec))
    cnt = np.fromiter(vec.values(), dtype=np.float64, count=len(vec))
    return idx, cnt


# ---------------------------------------------------------------------------
# logistic regression


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    learning_rate: float = 0.1
    l2: float = 1e-6
    seed: int = 7

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise DataError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise DataError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.l2 < 0:
            raise DataError(f"l2 must be >= 0, got {self.l2}")


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@dataclass
class Model:
    """Trained logistic model. Scores point toward the fake label: the
    predicted label is fake iff sigmoid(score) > 0.5, ties toward real."""

    space: FeatureSpace
    config: TrainConfig
    train_set: str
    weights: np.ndarray
    bias: float

    def score(self, vec: dict[int, int]) -> float:
        s = self.bias
        for idx, cnt in vec.items():
            s += self.weights[idx] * cnt
        return float(s)

    def predict(self, text: str) -> Label:
        p = _sigmoid(self.score(featurize(text, self.space)))
        return Label.FAKE if p > 0.5 else Label.REAL


def train(
    corpus: Corpus,
    space: FeatureSpace = FeatureSpace(),
    config: TrainConfig = TrainConfig(),
) -> Model:
    """SGD logistic regression over hashed n-gram counts.

    Per-sample updates in a seeded shuffled order (reshuffled every epoch
    from one PRNG stream), fixed learning rate, L2 applied to the touched
    coordinates of each update. Single-threaded and bitwise deterministic
    for a fixed seed. A corpus with only one label is an error.
    """
    if len(corpus) == 0:
        raise DataError("cannot train on an empty corpus")
    if len(set(corpus.labels())) < 2:
        raise DataError("training corpus must contain both labels")
    feats = [_as_arrays(featurize(doc.text, space)) for doc in corpus]
    ys = [1.0 if doc.label is Label.FAKE else 0.0 for doc in corpus]
    w = np.zeros(space.dimensions, dtype=np.float64)
    bias = 0.0
    lr = config.learning_rate
    l2 = config.l2
    order = list(range(len(corpus)))
    rng = random.Random(config.seed)
    for _ in range(config.epochs):
        rng.shuffle(order)
        for i in order:
            idx, cnt = feats[i]
            score = bias + (float(w[idx] @ cnt) if idx.size else 0.0)
            g = _sigmoid(score) - ys[i]
            if idx.size:
                w[idx] -= lr * (g * cnt + l2 * w[idx])
            bias -= lr * g
    return Model(space=space, config=config, train_set=corpus.name, weights=w, bias=bias)


@dataclass(frozen=True)
class EvalCell:
    train_set: str
    test_set: str
    policy: MaskPolicy | None
    accuracy: float
    predictions: tuple[Label, ...]
    gold: tuple[Label, ...]

    @property
    def n(self) -> int:
        return len(self.gold)


def evaluate(model: Model, test: Corpus, policy: MaskPolicy | None = None) -> EvalCell:
    """Accuracy and per-document predictions on a test corpus (order
    preserved). An empty test set is an error."""
    if len(test) == 0:
        raise DataError("cannot evaluate on an empty corpus")
    predictions = tuple(model.predict(doc.text) for doc in test)
    gold = tuple(test.labels())
    correct = sum(p is g for p, g in zip(predictions, gold))
    return EvalCell(
        train_set=model.train_set,
        test_set=test.name,
        policy=policy,
        accuracy=correct / len(gold),
        predictions=predictions,
        gold=gold,
    )


MODEL_FORMAT_VERSION = 1


def save_model(model: Model, path: str | Path) -> None:
    """Single JSON object; weights stored sparsely (untouched buckets stay
    exactly zero during training, so this is lossless)."""
    nonzero = np.nonzero(model.weights)[0]
    obj = {
        "format_version": MODEL_FORMAT_VERSION,
        "space": {
            "orders": list(model.space.orders),
            "dimensions": model.space.dimensions,
            "hash_seed": model.space.hash_seed,
        },
        "config": {
            "epochs": model.config.epochs,
            "learning_rate": model.config.learning_rate,
            "l2": model.config.l2,
            "seed": model.config.seed,
        },
        "train_set": model.train_set,
        "bias": model.bias,
        "weights": {str(int(i)): float(model.weights[i]) for i in nonzero},
    }
    Path(path).write_text(json.dumps(obj, ensure_ascii=False) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> Model:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        raise DataError(f"{path}: malformed model file") from None
    if not isinstance(obj, dict) or obj.get("format_version") != MODEL_FORMAT_VERSION:
        raise DataError(f"{path}: unsupported model format")
    try:
        space = FeatureSpace(
            orders=tuple(obj["space"]["orders"]),
            dimensions=obj["space"]["dimensions"],
            hash_seed=obj["space"]["hash_seed"],
        )
        config = TrainConfig(**obj["config"])
        w = np.zeros(space.dimensions, dtype=np.float64)
        for key, value in obj["weights"].items():
            w[int(key)] = value
        return Model(
            space=space,
            config=config,
            train_set=obj["train_set"],
            weights=w,
            bias=float(obj["bias"]),
        )
    except (KeyError, ValueError, TypeError, IndexError):
        raise DataError(f"{path}: malformed model fields") from None


# ---------------------------------------------------------------------------
# McNemar


@dataclass(frozen=True)
class McNemarResult:
    b: int
    c: int
    statistic: float | None
    p_raw: float
    p_adjusted: float
    m: int

    @property
    def significant(self) -> bool:
        return self.p_adjusted < 0.05


def mcnemar(baseline: EvalCell, contender: EvalCell, m: int = 1) -> McNemarResult:
    """Two-sided McNemar test between two prediction sets on one test set.

    Exact binomial branch when b + c < 25:
        p = min(1, 2 * sum_{k<=min(b,c)} C(b+c, k) * 0.5^(b+c))
    otherwise the continuity-corrected chi-square statistic
        (|b - c| - 1)^2 / (b + c)
    with 1 df, whose tail probability is erfc(sqrt(statistic / 2)).
    p_adjusted = min(1, m * p_raw) (Bonferroni over m comparisons).
    """
    if m < 1:
        raise DataError(f"m must be >= 1, got {m}")
    if baseline.test_set != contender.test_set:
        raise DataError(
            f"mismatched test sets: {baseline.test_set!r} vs {contender.test_set!r}"
        )
    if baseline.gold != contender.gold:
        raise DataError("test sets differ in length, order, or labels")
    b = c = 0
    for gold, pb, pc in zip(baseline.gold, baseline.predictions, contender.predictions):
        base_right = pb is gold
        cont_right = pc is gold
        if base_right and not cont_right:
            b += 1
        elif cont_right and not base_right:
            c += 1
    n = b + c
    if n < 25:
        tail = sum(math.comb(n, k) for k in range(min(b, c) + 1))
        p_raw = min(1.0, 2.0 * tail * 0.5**n)
        statistic = None
    else:
        statistic = (abs(b - c) - 1.0) ** 2 / n
        p_raw = math.erfc(math.sqrt(statistic / 2.0))
    return McNemarResult(
        b=b, c=c, statistic=statistic, p_raw=p_raw, p_adjusted=min(1.0, m * p_raw), m=m
    )


# ---------------------------------------------------------------------------
# evaluation matrix


@dataclass(frozen=True)
class DatasetBundle:
    """A named dataset ready for the matrix: annotated documents (spans may
    be empty) in corpus order."""

    name: str
    docs: tuple[AnnotatedDocument, ...]

    def corpus(self) -> Corpus:
        return Corpus(name=self.name, documents=tuple(d.document for d in self.docs))


@dataclass(frozen=True)
class MatrixCell:
    train_set: str
    test_set: str
    policy: MaskPolicy
    accuracy: float
    n_test: int
    mcnemar: McNemarResult | None

    @property
    def in_domain(self) -> bool:
        return self.train_set == self.test_set

    @property
    def starred(self) -> bool:
        return self.mcnemar is not None and self.mcnemar.significant


@dataclass(frozen=True)
class MatrixReport:
    datasets: tuple[str, ...]
    policies: tuple[MaskPolicy, ...]
    split: SplitSpec
    m: int
    ood_full: bool
    cells: tuple[MatrixCell, ...]

    def cell(self, train_set: str, test_set: str, policy: MaskPolicy) -> MatrixCell:
        for cell in self.cells:
            if (
                cell.train_set == train_set
                and cell.test_set == test_set
                and cell.policy is policy
            ):
                return cell
        raise KeyError((train_set, test_set, policy))

    def to_json(self) -> str:
        obj = {
            "datasets": list(self.datasets),
            "policies": [p.value for p in self.policies],
            "split": {
                "mode": self.split.mode.value,
                "train_fraction": self.split.train_fraction,
                "boundary_date": (
                    self.split.boundary_date.isoformat() if self.split.boundary_date else None
                ),
                "seed": self.split.seed,
            },
            "bonferroni_m": self.m,
            "ood_full": self.ood_full,
            "cells": [
                {
                    "train": cell.train_set,
                    "test": cell.test_set,
                    "policy": cell.policy.value,
                    "in_domain": cell.in_domain,
                    "accuracy": cell.accuracy,
                    "n_test": cell.n_test,
                    "mcnemar": (
                        None
                        if cell.mcnemar is None
                        else {
                            "b": cell.mcnemar.b,
                            "c": cell.mcnemar.c,
                            "statistic": cell.mcnemar.statistic,
                            "p_raw": cell.mcnemar.p_raw,
                            "p_adjusted": cell.mcnemar.p_adjusted,
                            "m": cell.mcnemar.m,
                            "significant": cell.mcnemar.significant,
                        }
                    ),
                }
                for cell in self.cells
            ],
        }
        return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"

    def to_text(self) -> str:
        """Accuracy grid, one block per training set, one column per test
        set; '*' marks adjusted p < 0.05 against the no-mask baseline."""
        name_w = max(len(p.display_name) for p in self.policies)
        col_w = max(10, max(len(d) for d in self.datasets) + 2)
        lines = [
            "accuracy grid"
            + (
                f" (* = adjusted p < 0.05 vs {MaskPolicy.NO_MASK.display_name}, m = {self.m})"
                if self.m > 1 or len(self.policies) > 1
                else ""
            )
        ]
        for train_name in self.datasets:
            lines.append("")
            header = f"train={train_name}".ljust(name_w + 2)
            header += "".join(f"{d:>{col_w}}" for d in self.datasets)
            lines.append(header)
            for policy in self.policies:
                row = f"  {policy.display_name:<{name_w}}"
                for test_name in self.datasets:
                    cell = self.cell(train_name, test_name, policy)
                    mark = "*" if cell.starred else ""
                    row += f"{cell.accuracy:.3f}{mark}".rjust(col_w)
                lines.append(row)
        return "\n".join(lines) + "\n"


def _split_bundle(
    bundle: DatasetBundle, split: SplitSpec
) -> tuple[list[AnnotatedDocument], list[AnnotatedDocument]]:
    corpus = bundle.corpus()
    if split.mode is SplitMode.RANDOM_HOLDOUT:
        train_c, test_c = split_random(corpus, split)
    else:
        train_c, test_c = split_by_time(corpus, split)
    by_id = {ann.document.id: ann for ann in bundle.docs}
    return (
        [by_id[doc.id] for doc in train_c],
        [by_id[doc.id] for doc in test_c],
    )


def run_matrix(
    datasets: Sequence[DatasetBundle],
    policies: Sequence[MaskPolicy],
    indexes: Mapping[str, EntityIndex | None],
    split: SplitSpec,
    *,
    space: FeatureSpace = FeatureSpace(),
    config: TrainConfig = TrainConfig(),
    resolve_mode: ResolveMode = ResolveMode.DUMP_ORDER,
    ood_full: bool = False,
) -> MatrixReport:
    """Full evaluation matrix over datasets x policies.

    For every (train dataset, policy): the dataset is split, its training
    split masked (always with that dataset's own index) and a model trained,
    then evaluated on the in-domain test split and on every other dataset's
    test split (or the full foreign dataset when ood_full is set), each
    masked with the same policy and the evaluated dataset's index. Every
    masked policy is McNemar-tested against the no-mask baseline within its
    (train, test) cell, Bonferroni-adjusted for m = len(policies) - 1
    comparisons. Output ordering and content are deterministic.
    """
    if not datasets:
        raise DataError("run_matrix needs at least one dataset")
    if not policies:
        raise DataError("run_matrix needs at least one policy")
    names = [b.name for b in datasets]
    if len(set(names)) != len(names):
        raise DataError(f"dataset names must be unique, got {names}")
    if len(set(policies)) != len(policies):
        raise DataError("policies must be unique")
    for bundle in datasets:
        if any(p.requires_index for p in policies) and indexes.get(bundle.name) is None:
            raise DataError(f"dataset {bundle.name!r} has no entity index but a policy needs one")
    m = max(1, len(policies) - 1)
    splits = {b.name: _split_bundle(b, split) for b in datasets}
    results: dict[tuple[str, str, MaskPolicy], EvalCell] = {}
    for train_bundle in datasets:
        train_anns, _ = splits[train_bundle.name]
        for policy in policies:
            masked_train, _ = mask_corpus(
                train_anns,
                policy,
                indexes.get(train_bundle.name),
                resolve_mode,
                name=train_bundle.name,
            )
            model = train(masked_train, space, config)
            for eval_bundle in datasets:
                eval_train_anns, eval_test_anns = splits[eval_bundle.name]
                if eval_bundle.name == train_bundle.name:
                    eval_anns = eval_test_anns
                elif ood_full:
                    eval_anns = list(eval_bundle.docs)
                else:
                    eval_anns = eval_test_anns
                masked_eval, _ = mask_corpus(
                    eval_anns,
                    policy,
                    indexes.get(eval_bundle.name),
                    resolve_mode,
                    name=eval_bundle.name,
                )
                results[(train_bundle.name, eval_bundle.name, policy)] = evaluate(
                    model, masked_eval, policy=policy
                )
    has_baseline = MaskPolicy.NO_MASK in policies and len(policies) > 1
    cells = []
    for train_name in names:
        for test_name in names:
            for policy in policies:
                ev = results[(train_name, test_name, policy)]
                test_result = None
                if has_baseline and policy is not MaskPolicy.NO_MASK:
                    baseline = results[(train_name, test_name, MaskPolicy.NO_MASK)]
                    test_result = mcnemar(baseline, ev, m)
                cells.append(
                    MatrixCell(
                        train_set=train_name,
                        test_set=test_name,
                        policy=policy,
                        accuracy=ev.accuracy,
                        n_test=ev.n,
                        mcnemar=test_result,
                    )
                )
    return MatrixReport(
        datasets=tuple(names),
        policies=tuple(policies),
        split=split,
        m=m,
        ood_full=ood_full,
        cells=tuple(cells),
    )


# ---------------------------------------------------------------------------
# synthetic diachronic corpus


@dataclass(frozen=True)
class SyntheticData:
    corpus_a: Corpus
    corpus_b: Corpus
    annotated_a: tuple[AnnotatedDocument, ...]
    annotated_b: tuple[AnnotatedDocument, ...]
    index: EntityIndex


_FILLERS = (
    "officials",
    "said",
    "report",
    "measures",
    "meeting",
    "public",
    "response",
    "plan",
    "sources",
    "media",
    "statement",
    "decision",
)

_BEATS = (
    "budget",
    "summit",
    "tribunal",
    "campaign",
    "survey",
    "ceasefire",
    "tariffs",
    "vaccine",
    "drought",
    "merger",
    "strike",
    "audit",
)

_SYNTH_SNAPSHOT = Date(2020, 12, 28)
_PERSON_LABEL_CORRELATION = 0.9


def _role_leanings(role_qids: Sequence[str]) -> dict[str, Label]:
    """Alternate fake/real over the sorted unique role QIDs."""
    ordered = sorted(set(role_qids), key=qid_sort_key)
    return {
        qid: (Label.FAKE if i % 2 == 0 else Label.REAL) for i, qid in enumerate(ordered)
    }


def _beat_word(pair_index: int) -> str:
    base = _BEATS[pair_index % len(_BEATS)]
    if pair_index < len(_BEATS):
        return base
    return f"{base}{pair_index // len(_BEATS)}"


def _person_record(qid: str, name: str, role_qid: str) -> EntityRecord:
    return EntityRecord(
        qid=qid,
        primary_label=name,
        aliases=(),
        statements=(
            Statement(
                property=RoleProperty.POSITION_HELD,
                value_qid=role_qid,
                start_date=None,
                end_date=None,
                dump_order=0,
            ),
        ),
        sitelink_count=5,
    )


def synth_diachronic_corpus(
    seed: int,
    n_docs: int,
    period_a_persons: Sequence[str],
    period_b_persons: Sequence[str],
    role_map: Mapping[str, str],
) -> SyntheticData:
    """Two mirrored single-period corpora exhibiting person-identity bias.

    Each document mentions one person (twice) plus a role-stable "beat"
    word and neutral filler words; its label follows the person's role
    leaning with probability 0.9. Periods share everything except the
    person surfaces: period B repeats period A's document skeletons with
    the counterpart person swapped in, so after replacing person spans
    with role tokens the two periods' token distributions are identical by
    construction. n_docs is the size of each period (at least 100) and
    counterpart persons (paired by position) must share a role QID while
    their names must not collide across periods.

    The returned entity index covers every person with an unqualified
    position-held statement pointing at their role QID.
    """
    if n_docs < 100:
        raise DataError(f"n_docs must be >= 100, got {n_docs}")
    if len(period_a_persons) != len(period_b_persons) or not period_a_persons:
        raise DataError("period person lists must be non-empty and the same length")
    pairs = list(zip(period_a_persons, period_b_persons))
    seen_a = {name.casefold() for name in period_a_persons}
    seen_b = {name.casefold() for name in period_b_persons}
    overlap = seen_a & seen_b
    if overlap:
        raise DataError(f"person names overlap across periods: {sorted(overlap)}")
    if len(seen_a) != len(pairs) or len(seen_b) != len(pairs):
        raise DataError("person names must be unique within each period")
    roles = []
    for name_a, name_b in pairs:
        for name in (name_a, name_b):
            if name not in role_map:
                raise DataError(f"role_map is missing person {name!r}")
        if role_map[name_a] != role_map[name_b]:
            raise DataError(
                f"counterparts {name_a!r} and {name_b!r} must share a role QID, "
                f"got {role_map[name_a]!r} vs {role_map[name_b]!r}"
            )
        roles.append(role_map[name_a])
    leanings = _role_leanings(roles)

    index = EntityIndex(snapshot_date=_SYNTH_SNAPSHOT)
    for i, (name_a, name_b) in enumerate(pairs):
        index.add(_person_record(f"Q{900001 + i}", name_a, roles[i]))
        index.add(_person_record(f"Q{950001 + i}", name_b, roles[i]))

    rng = random.Random(seed)
    skeletons = []
    for _ in range(n_docs):
        pair_i = rng.randrange(len(pairs))
        label = leanings[roles[pair_i]]
        if rng.random() >= _PERSON_LABEL_CORRELATION:
            label = Label.REAL if label is Label.FAKE else Label.FAKE
        fillers = [rng.choice(_FILLERS) for _ in range(3)]
        skeletons.append((pair_i, label, fillers))

    def build_period(
        period: str, person_of: Sequence[str], start: Date
    ) -> tuple[Corpus, tuple[AnnotatedDocument, ...]]:
        docs = []
        annotated = []
        for k, (pair_i, label, f) in enumerate(skeletons):
            name = person_of[pair_i]
            beat = _beat_word(pair_i)
            head = f"{f[0]} {beat} "
            mid = f" {f[1]} "
            first_start = len(head)
            second_start = len(head) + len(name) + len(mid)
            text = f"{head}{name}{mid}{name} {f[2]}"
            doc = Document(
                id=f"{period}-{k:05d}",
                text=text,
                label=label,
                date=start + timedelta(days=k % 330),
                source=f"synth-{period}",
            )
            spans = (
                NeSpan(start=first_start, end=first_start + len(name), tag=NeTag.PER, surface=name),
                NeSpan(
                    start=second_start, end=second_start + len(name), tag=NeTag.PER, surface=name
                ),
            )
            docs.append(doc)
            annotated.append(AnnotatedDocument(document=doc, spans=spans))
        corpus = Corpus(name=f"period-{period}", documents=tuple(docs))
        return corpus, tuple(annotated)

    corpus_a, annotated_a = build_period("a", [p[0] for p in pairs], Date(2015, 1, 1))
    corpus_b, annotated_b = build_period("b", [p[1] for p in pairs], Date(2020, 1, 1))
    return SyntheticData(
        corpus_a=corpus_a,
        corpus_b=corpus_b,
        annotated_a=annotated_a,
        annotated_b=annotated_b,
        index=index,
    )
