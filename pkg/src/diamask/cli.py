"""Command-line interface.

Exit codes: 0 on success, 1 on domain errors (bad input data or impossible
requests), 2 on usage errors (unknown/missing flags, unparseable flag
values). Diagnostics go to stderr; data goes to files or stdout ('-' means
stdout wherever an output path is taken). Subcommands never modify their
input files, and a rerun with identical inputs and seeds produces
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date as Date
from pathlib import Path

from .analysis import compute_lmi, export_lmi_table
from .annotate import AnnotatedDocument, load_annotations, load_gazetteer, tag_with_gazetteer, write_annotations
from .corpus import (
    Corpus,
    SplitMode,
    SplitSpec,
    document_to_record,
    load_corpus,
    save_corpus,
    split_by_time,
    split_random,
)
from .errors import DataError
from .experiment import (
    DatasetBundle,
    FeatureSpace,
    TrainConfig,
    evaluate,
    load_model,
    run_matrix,
    save_model,
    train,
)
from .masking import MaskPolicy, mask_corpus
from .wikidata import (
    ResolveMode,
    coverage_rate,
    index_dump,
    load_index,
    qid_sort_key,
    save_index,
    top_labels,
)
from .wikidata import _QID_RE  # QID shape, shared with the library

log = logging.getLogger("diamask")


class _UsageError(Exception):
    """Flag-level problem detected after argparse (exit status 2)."""


def _iso_date(raw: str) -> Date:
    try:
        return Date.fromisoformat(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a YYYY-MM-DD date: {raw!r}") from None


def _orders(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {raw!r}") from None


def _write_output(dest: str, payload: str) -> None:
    if dest == "-":
        sys.stdout.write(payload)
    else:
        Path(dest).write_text(payload, encoding="utf-8")


def _emit_corpus(corpus: Corpus, dest: str) -> None:
    if dest == "-":
        for doc in corpus:
            sys.stdout.write(json.dumps(document_to_record(doc), ensure_ascii=False) + "\n")
    else:
        save_corpus(corpus, dest)


def _resolve_seed(args: argparse.Namespace, fallback: int) -> int:
    if getattr(args, "sub_seed", None) is not None:
        return args.sub_seed
    if args.seed is not None:
        return args.seed
    return fallback


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.input, allow_empty_text=args.allow_empty_text, name=args.name)
    _emit_corpus(corpus, args.output)
    log.info("ingested %d documents from %s", len(corpus), args.input)
    return 0


def _cmd_lmi(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    table = compute_lmi(corpus, n=args.n, min_count=args.min_count)
    rendered = export_lmi_table(table, top_k=args.top, scale=args.scale, fmt=args.format)
    _write_output(args.output, rendered)
    return 0


def _cmd_tag(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    gazetteer = load_gazetteer(args.gazetteer)
    annotated = [tag_with_gazetteer(doc, gazetteer) for doc in corpus]
    write_annotations(annotated, args.output)
    total = sum(len(a.spans) for a in annotated)
    log.info("tagged %d spans across %d documents", total, len(corpus))
    return 0


def _cmd_index_wikidata(args: argparse.Namespace) -> int:
    index = index_dump(
        args.dump, args.snapshot_date, person_only=args.person_only, strict=args.strict
    )
    save_index(index, args.output)
    print(
        f"indexed {len(index)} entities (snapshot {index.snapshot_date}, "
        f"{index.malformed_lines} malformed line(s) skipped)",
        file=sys.stderr,
    )
    return 0


def _load_annotated(corpus_path: str, annotations_path: str | None) -> tuple[Corpus, list[AnnotatedDocument]]:
    corpus = load_corpus(corpus_path)
    if annotations_path is None:
        return corpus, [AnnotatedDocument(document=doc, spans=()) for doc in corpus]
    return corpus, load_annotations(corpus, annotations_path)


def _cmd_mask(args: argparse.Namespace) -> int:
    policy = MaskPolicy(args.policy)
    if policy.requires_index and args.index is None:
        raise _UsageError(f"--index is required for policy {policy.value!r}")
    corpus, annotated = _load_annotated(args.corpus, args.annotations)
    index = load_index(args.index) if args.index else None
    masked, usage = mask_corpus(
        annotated, policy, index, ResolveMode(args.resolve_mode), name=corpus.name
    )
    _emit_corpus(masked, args.output)
    if args.usage_report:
        lines = ["token\tcount"]
        for token, count in sorted(usage.items(), key=lambda kv: (-kv[1], qid_sort_key(kv[0]))):
            lines.append(f"{token}\t{count}")
        _write_output(args.usage_report, "\n".join(lines) + "\n")
    log.info("masked %d documents with %s", len(masked), policy.value)
    return 0


def _cmd_split(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    mode = SplitMode(args.mode)
    if mode is SplitMode.TIME_BASED and args.boundary_date is None:
        raise _UsageError("--boundary-date is required for --mode time")
    spec = SplitSpec(
        mode=mode,
        train_fraction=args.train_fraction,
        boundary_date=args.boundary_date,
        seed=_resolve_seed(args, fallback=0),
    )
    if mode is SplitMode.RANDOM_HOLDOUT:
        train_c, test_c = split_random(corpus, spec)
    else:
        train_c, test_c = split_by_time(corpus, spec)
    _emit_corpus(train_c, args.train_output)
    _emit_corpus(test_c, args.test_output)
    log.info("split %d documents into %d train / %d test", len(corpus), len(train_c), len(test_c))
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    space = FeatureSpace(
        orders=args.orders, dimensions=args.dimensions, hash_seed=args.hash_seed
    )
    config = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        l2=args.l2,
        seed=_resolve_seed(args, fallback=TrainConfig().seed),
    )
    model = train(corpus, space, config)
    save_model(model, args.output)
    log.info("trained on %d documents", len(corpus))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    corpus = load_corpus(args.corpus)
    cell = evaluate(model, corpus)
    payload = {
        "train_set": cell.train_set,
        "test_set": cell.test_set,
        "accuracy": cell.accuracy,
        "n": cell.n,
        "predictions": [
            {"id": doc.id, "gold": gold.value, "predicted": pred.value}
            for doc, gold, pred in zip(corpus, cell.gold, cell.predictions)
        ],
    }
    _write_output(args.output, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    return 0


def _require(config: dict, key: str, context: str) -> object:
    if key not in config:
        raise DataError(f"experiment config: {context} is missing {key!r}")
    return config[key]


def _cmd_experiment(args: argparse.Namespace) -> int:
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"experiment config: malformed JSON ({exc.msg})") from None
    if not isinstance(config, dict):
        raise DataError("experiment config: expected a JSON object")
    bundles = []
    indexes = {}
    for entry in _require(config, "datasets", "config"):
        name = str(_require(entry, "name", "dataset entry"))
        corpus = load_corpus(str(_require(entry, "corpus", f"dataset {name!r}")), name=name)
        if entry.get("annotations"):
            annotated = load_annotations(corpus, entry["annotations"])
        else:
            annotated = [AnnotatedDocument(document=doc, spans=()) for doc in corpus]
        bundles.append(DatasetBundle(name=name, docs=tuple(annotated)))
        indexes[name] = load_index(entry["index"]) if entry.get("index") else None
    policy_values = config.get("policies", [p.value for p in MaskPolicy])
    policies = [MaskPolicy.parse(str(v)) for v in policy_values]
    split_cfg = _require(config, "split", "config")
    mode = SplitMode(str(_require(split_cfg, "mode", "split")))
    boundary = split_cfg.get("boundary_date")
    split = SplitSpec(
        mode=mode,
        train_fraction=float(split_cfg.get("train_fraction", 0.8)),
        boundary_date=Date.fromisoformat(boundary) if boundary else None,
        seed=int(split_cfg.get("seed", 0)),
    )
    feat_cfg = config.get("features", {})
    space = FeatureSpace(
        orders=tuple(feat_cfg.get("orders", (1, 2))),
        dimensions=int(feat_cfg.get("dimensions", FeatureSpace().dimensions)),
        hash_seed=int(feat_cfg.get("hash_seed", 0)),
    )
    train_cfg = config.get("training", {})
    tconfig = TrainConfig(
        epochs=int(train_cfg.get("epochs", TrainConfig().epochs)),
        learning_rate=float(train_cfg.get("learning_rate", TrainConfig().learning_rate)),
        l2=float(train_cfg.get("l2", TrainConfig().l2)),
        seed=int(train_cfg.get("seed", TrainConfig().seed)),
    )
    report = run_matrix(
        bundles,
        policies,
        indexes,
        split,
        space=space,
        config=tconfig,
        resolve_mode=ResolveMode(str(config.get("resolve_mode", ResolveMode.DUMP_ORDER.value))),
        ood_full=bool(config.get("ood_full", False)),
    )
    if args.output_json:
        _write_output(args.output_json, report.to_json())
    if args.output_text or not args.output_json:
        _write_output(args.output_text or "-", report.to_text())
    return 0


def _read_usage(path: str) -> list[str]:
    tokens = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or (lineno == 1 and line.startswith("token\t")):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path} line {lineno}: expected 'token<TAB>count'")
            try:
                count = int(parts[1])
            except ValueError:
                raise DataError(f"{path} line {lineno}: bad count {parts[1]!r}") from None
            tokens.extend([parts[0]] * count)
    return tokens


def _cmd_coverage(args: argparse.Namespace) -> int:
    if len(args.usage) < 2 and not (len(args.usage) == 1 and args.top_k):
        raise _UsageError("--usage must be given at least twice (NAME=PATH each)")
    named: list[tuple[str, list[str]]] = []
    for spec in args.usage:
        name, sep, path = spec.partition("=")
        if not sep or not name or not path:
            raise _UsageError(f"--usage expects NAME=PATH, got {spec!r}")
        # Usage reports may contain PER/LOC/ORG/MISC placeholders; coverage
        # is over role QIDs only.
        tokens = [t for t in _read_usage(path) if _QID_RE.match(t)]
        named.append((name, tokens))
    lines = []
    if len(named) >= 2:
        lines.append("# coverage matrix (% of row's unique labels present in column)")
        lines.append("dataset\t" + "\t".join(name for name, _ in named))
        for name_a, tokens_a in named:
            row = [name_a]
            for _, tokens_b in named:
                row.append(f"{coverage_rate(tokens_a, tokens_b):.1f}")
            lines.append("\t".join(row))
    if args.top_k:
        index = load_index(args.index) if args.index else None
        if lines:
            lines.append("")
        lines.append(f"# top {args.top_k} labels per dataset")
        for name, tokens in named:
            if index is not None:
                ranked = top_labels(tokens, index, args.top_k)
            else:
                from collections import Counter

                counts = Counter(tokens)
                ranked = sorted(counts.items(), key=lambda kv: (-kv[1], qid_sort_key(kv[0])))[
                    : args.top_k
                ]
            for label, count in ranked:
                lines.append(f"{name}\t{label}\t{count}")
    _write_output(args.output, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diamask",
        description="Audit phrase/label bias in labeled corpora and mask named entities "
        "against it using a snapshotted Wikidata role index.",
    )
    parser.add_argument("--seed", type=int, default=None, help="default seed for seeded stages")
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="cap on stage-internal parallelism (stages are currently single-threaded)",
    )
    parser.add_argument(
        "--strict", action="store_true", help="fail on malformed dump lines instead of skipping"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="info-level diagnostics")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("ingest", help="load, validate, and re-emit a corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="output path, or - for stdout")
    p.add_argument("--allow-empty-text", action="store_true")
    p.add_argument("--name", default=None, help="corpus name (default: input file stem)")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("lmi", help="rank phrase/label associations by local mutual information")
    p.add_argument("--corpus", required=True)
    p.add_argument("--n", type=int, default=2, help="n-gram order (default 2)")
    p.add_argument("--top", type=int, default=10, help="entries per label (default 10)")
    p.add_argument("--min-count", type=int, default=5, help="minimum phrase count (default 5)")
    p.add_argument("--scale", type=float, default=1e6, help="score multiplier (default 1e6)")
    p.add_argument("--format", choices=("tsv", "text"), default="tsv")
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_lmi)

    p = sub.add_parser("tag", help="annotate entities with an exact-match gazetteer")
    p.add_argument("--corpus", required=True)
    p.add_argument("--gazetteer", required=True, help="TSV file: name<TAB>tag per line")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_tag)

    p = sub.add_parser("index-wikidata", help="build an entity index from a JSON dump")
    p.add_argument("--dump", required=True, help="NDJSON entity dump, optionally .gz")
    p.add_argument("--snapshot-date", required=True, type=_iso_date)
    p.add_argument("--output", required=True)
    p.add_argument(
        "--person-only", action="store_true", help="keep only instance-of-human entities"
    )
    p.set_defaults(func=_cmd_index_wikidata)

    p = sub.add_parser("mask", help="apply a masking policy to an annotated corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--annotations", default=None, help="span file (default: no spans)")
    p.add_argument("--policy", required=True, choices=[pol.value for pol in MaskPolicy])
    p.add_argument("--index", default=None, help="entity index (required for wikid policies)")
    p.add_argument(
        "--resolve-mode",
        choices=[m.value for m in ResolveMode],
        default=ResolveMode.DUMP_ORDER.value,
    )
    p.add_argument("--output", required=True)
    p.add_argument("--usage-report", default=None, help="write replacement-token counts (TSV)")
    p.set_defaults(func=_cmd_mask)

    p = sub.add_parser("split", help="split a corpus into train and test")
    p.add_argument("--corpus", required=True)
    p.add_argument("--mode", choices=[m.value for m in SplitMode], required=True)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--boundary-date", type=_iso_date, default=None)
    p.add_argument("--seed", dest="sub_seed", type=int, default=None)
    p.add_argument("--train-output", required=True)
    p.add_argument("--test-output", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("train", help="train the hashed n-gram logistic classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--output", required=True, help="model file")
    p.add_argument("--epochs", type=int, default=TrainConfig().epochs)
    p.add_argument("--learning-rate", type=float, default=TrainConfig().learning_rate)
    p.add_argument("--l2", type=float, default=TrainConfig().l2)
    p.add_argument("--seed", dest="sub_seed", type=int, default=None)
    p.add_argument("--orders", type=_orders, default=(1, 2), help="n-gram orders, e.g. 1,2")
    p.add_argument("--dimensions", type=int, default=FeatureSpace().dimensions)
    p.add_argument("--hash-seed", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model on a corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("experiment", help="run the dataset x policy evaluation matrix")
    p.add_argument("--config", required=True, help="JSON experiment config (see README)")
    p.add_argument("--output-json", default=None)
    p.add_argument("--output-text", default=None, help="default: stdout")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("coverage", help="role-label overlap between mask usage reports")
    p.add_argument(
        "--usage",
        action="append",
        default=[],
        metavar="NAME=PATH",
        help="usage report from `mask --usage-report`; repeat per dataset",
    )
    p.add_argument("--top-k", type=int, default=None, help="also list the top labels")
    p.add_argument("--index", default=None, help="entity index for human-readable labels")
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_coverage)

    return parser


def dispatch(argv: list[str] | None = None) -> int:
    """Parse and run one invocation; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.threads < 1:
        print("usage error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
