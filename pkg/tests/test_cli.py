import json
import logging
import subprocess
import sys

import pytest

from diamask import (
    DatasetBundle,
    MaskPolicy,
    SplitMode,
    SplitSpec,
    evaluate,
    load_annotations,
    load_corpus,
    load_index,
    load_model,
    mask_corpus,
    run_matrix,
    save_corpus,
    split_random,
    synth_diachronic_corpus,
    train,
    write_annotations,
)
from diamask.cli import dispatch

from helpers import SYNTH_A, SYNTH_B, SYNTH_ROLE_MAP, entity_line, make_entity, modi_dump_lines


@pytest.fixture(autouse=True)
def _fresh_logging():
    # dispatch() calls logging.basicConfig; drop the handler afterwards so
    # every test reconfigures against its own captured stderr.
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()


def write_corpus_file(path, records):
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    return str(path)


@pytest.fixture()
def tiny_corpus(tmp_path):
    return write_corpus_file(
        tmp_path / "tiny.jsonl",
        [
            {"id": "f0", "text": "a b x", "label": "fake"},
            {"id": "f1", "text": "a b y", "label": "fake"},
            {"id": "f2", "text": "a b", "label": "fake"},
            {"id": "r0", "text": "a b q w e", "label": "real"},
            {"id": "r1", "text": "m n", "label": "real"},
        ],
    )


@pytest.fixture()
def world(tmp_path):
    """Synthetic two-period world written to disk for pipeline tests."""
    data = synth_diachronic_corpus(
        seed=11,
        n_docs=100,
        period_a_persons=SYNTH_A[:4],
        period_b_persons=SYNTH_B[:4],
        role_map=SYNTH_ROLE_MAP,
    )
    paths = {}
    paths["corpus_a"] = tmp_path / "corpus_a.jsonl"
    paths["corpus_b"] = tmp_path / "corpus_b.jsonl"
    save_corpus(data.corpus_a, paths["corpus_a"])
    save_corpus(data.corpus_b, paths["corpus_b"])
    paths["ann_a"] = tmp_path / "ann_a.jsonl"
    paths["ann_b"] = tmp_path / "ann_b.jsonl"
    write_annotations(data.annotated_a, paths["ann_a"])
    write_annotations(data.annotated_b, paths["ann_b"])
    paths["gazetteer"] = tmp_path / "persons.tsv"
    names = list(SYNTH_A[:4]) + list(SYNTH_B[:4])
    paths["gazetteer"].write_text(
        "".join(f"{name}\tPER\n" for name in names), encoding="utf-8"
    )
    paths["dump"] = tmp_path / "dump.jsonl"
    lines = [
        entity_line(
            make_entity(
                f"Q{900001 + i}",
                name,
                positions=((SYNTH_ROLE_MAP[name],),),
                sitelinks=5,
            )
        )
        for i, name in enumerate(names)
    ]
    paths["dump"].write_text("\n".join(lines) + "\n", encoding="utf-8")
    paths["index"] = tmp_path / "entities.idx"
    code = dispatch(
        [
            "index-wikidata",
            "--dump",
            str(paths["dump"]),
            "--snapshot-date",
            "2020-12-28",
            "--output",
            str(paths["index"]),
        ]
    )
    assert code == 0
    paths["data"] = data
    paths["dir"] = tmp_path
    return paths


class TestExitCodes:
    def test_no_arguments_is_a_usage_error(self):
        assert dispatch([]) == 2

    def test_unknown_subcommand_is_a_usage_error(self):
        assert dispatch(["frobnicate"]) == 2

    def test_help_exits_zero(self, capsys):
        assert dispatch(["--help"]) == 0
        assert "SUBCOMMAND" in capsys.readouterr().out

    def test_missing_input_file_is_a_data_error(self, capsys):
        assert dispatch(["ingest", "--input", "/nope/x.jsonl", "--output", "-"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_threads_must_be_positive(self, capsys):
        code = dispatch(
            ["--threads", "0", "ingest", "--input", "x", "--output", "-"]
        )
        assert code == 2
        assert "--threads" in capsys.readouterr().err

    def test_malformed_corpus_is_a_data_error(self, tmp_path, capsys):
        path = tmp_path / "bad.jsonl"
        path.write_text("{oops\n")
        assert dispatch(["ingest", "--input", str(path), "--output", "-"]) == 1
        assert "line 1" in capsys.readouterr().err


class TestIngest:
    def test_reemits_canonical_jsonl(self, tiny_corpus, tmp_path):
        out = tmp_path / "out.jsonl"
        assert dispatch(["ingest", "--input", tiny_corpus, "--output", str(out)]) == 0
        loaded = load_corpus(out)
        assert [d.id for d in loaded] == ["f0", "f1", "f2", "r0", "r1"]

    def test_stdout_output(self, tiny_corpus, capsys):
        assert dispatch(["ingest", "--input", tiny_corpus, "--output", "-"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 5
        assert json.loads(lines[0]) == {"id": "f0", "text": "a b x", "label": "fake"}

    def test_verbose_logs_to_stderr(self, tiny_corpus):
        # In-process pytest owns the root logger, so exercise -v end to end.
        proc = subprocess.run(
            [sys.executable, "-m", "diamask", "-v", "ingest", "--input", tiny_corpus, "--output", "-"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "ingested 5 documents" in proc.stderr
        assert "ingested" not in proc.stdout

    def test_quiet_by_default(self, tiny_corpus):
        proc = subprocess.run(
            [sys.executable, "-m", "diamask", "ingest", "--input", tiny_corpus, "--output", "-"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stderr == ""

    def test_empty_text_needs_flag(self, tmp_path):
        path = write_corpus_file(
            tmp_path / "c.jsonl", [{"id": "a", "text": "", "label": "real"}]
        )
        assert dispatch(["ingest", "--input", path, "--output", "-"]) == 1
        assert (
            dispatch(["ingest", "--input", path, "--allow-empty-text", "--output", "-"])
            == 0
        )


class TestLmi:
    def test_writes_tsv_with_header(self, tiny_corpus, tmp_path):
        out = tmp_path / "lmi.tsv"
        code = dispatch(
            ["lmi", "--corpus", tiny_corpus, "--min-count", "0", "--output", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "phrase\tlabel\tcount_wl\tcount_w\tp_l_given_w\tlmi_scaled"
        assert any(line.startswith("a b\tfake\t3\t4\t0.75\t") for line in lines)

    def test_reruns_are_byte_identical(self, tiny_corpus, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        args = ["lmi", "--corpus", tiny_corpus, "--min-count", "0"]
        assert dispatch(args + ["--output", str(a)]) == 0
        assert dispatch(args + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_text_format(self, tiny_corpus, capsys):
        code = dispatch(
            ["lmi", "--corpus", tiny_corpus, "--min-count", "0", "--format", "text"]
        )
        assert code == 0
        assert "-- fake --" in capsys.readouterr().out

    def test_bad_top_is_a_data_error(self, tiny_corpus, capsys):
        assert dispatch(["lmi", "--corpus", tiny_corpus, "--top", "0"]) == 1
        assert "top_k" in capsys.readouterr().err


class TestTag:
    def test_tags_and_writes_annotations(self, tmp_path):
        corpus_path = write_corpus_file(
            tmp_path / "c.jsonl",
            [{"id": "d1", "text": "I met Barack Obama.", "label": "real"}],
        )
        gaz = tmp_path / "g.tsv"
        gaz.write_text("Barack Obama\tPER\n")
        out = tmp_path / "spans.jsonl"
        code = dispatch(
            ["tag", "--corpus", corpus_path, "--gazetteer", str(gaz), "--output", str(out)]
        )
        assert code == 0
        annotated = load_annotations(load_corpus(corpus_path), out)
        assert [(s.start, s.end, s.surface) for s in annotated[0].spans] == [
            (6, 18, "Barack Obama")
        ]

    def test_bad_gazetteer_is_a_data_error(self, tmp_path, tiny_corpus):
        gaz = tmp_path / "g.tsv"
        gaz.write_text("only one column\n")
        assert (
            dispatch(
                ["tag", "--corpus", tiny_corpus, "--gazetteer", str(gaz), "--output", "-"]
            )
            == 1
        )


class TestIndexWikidata:
    def test_builds_loadable_index(self, tmp_path, capsys):
        dump = tmp_path / "dump.jsonl"
        dump.write_text("\n".join(modi_dump_lines()) + "\n")
        out = tmp_path / "entities.idx"
        code = dispatch(
            [
                "index-wikidata",
                "--dump",
                str(dump),
                "--snapshot-date",
                "2020-12-28",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        assert "indexed 3 entities" in capsys.readouterr().err
        index = load_index(out)
        assert set(index.records) == {"Q1165", "Q76", "Q42"}

    def test_malformed_lines_reported(self, tmp_path, capsys):
        dump = tmp_path / "dump.jsonl"
        dump.write_text(modi_dump_lines()[0] + "\n{broken\n")
        out = tmp_path / "entities.idx"
        args = [
            "index-wikidata",
            "--dump",
            str(dump),
            "--snapshot-date",
            "2020-12-28",
            "--output",
            str(out),
        ]
        assert dispatch(args) == 0
        assert "1 malformed line(s)" in capsys.readouterr().err
        assert dispatch(["--strict"] + args) == 1
        assert "line 2" in capsys.readouterr().err

    def test_person_only_filter(self, tmp_path, capsys):
        dump = tmp_path / "dump.jsonl"
        dump.write_text(
            entity_line(make_entity("Q9", "Acme Corp", occupations=("Q2",), human=False))
            + "\n"
            + entity_line(make_entity("Q10", "Jane Roe", occupations=("Q2",)))
            + "\n"
        )
        out = tmp_path / "entities.idx"
        code = dispatch(
            [
                "index-wikidata",
                "--dump",
                str(dump),
                "--snapshot-date",
                "2020-12-28",
                "--person-only",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        assert set(load_index(out).records) == {"Q10"}

    def test_bad_snapshot_date_is_a_usage_error(self, tmp_path):
        code = dispatch(
            [
                "index-wikidata",
                "--dump",
                "x",
                "--snapshot-date",
                "12/28/2020",
                "--output",
                "y",
            ]
        )
        assert code == 2


class TestMask:
    def test_wikid_without_index_is_a_usage_error(self, world, capsys):
        code = dispatch(
            [
                "mask",
                "--corpus",
                str(world["corpus_a"]),
                "--annotations",
                str(world["ann_a"]),
                "--policy",
                "wikid",
                "--output",
                "-",
            ]
        )
        assert code == 2
        assert "--index" in capsys.readouterr().err

    def test_unknown_policy_is_a_usage_error(self, world):
        code = dispatch(
            [
                "mask",
                "--corpus",
                str(world["corpus_a"]),
                "--policy",
                "redact",
                "--output",
                "-",
            ]
        )
        assert code == 2

    def test_masks_and_reports_usage(self, world):
        out = world["dir"] / "masked_a.jsonl"
        usage = world["dir"] / "usage_a.tsv"
        code = dispatch(
            [
                "mask",
                "--corpus",
                str(world["corpus_a"]),
                "--annotations",
                str(world["ann_a"]),
                "--policy",
                "wikid",
                "--index",
                str(world["index"]),
                "--output",
                str(out),
                "--usage-report",
                str(usage),
            ]
        )
        assert code == 0
        masked = load_corpus(out)
        roles = {SYNTH_ROLE_MAP[n] for n in SYNTH_A[:4]}
        for doc in masked:
            assert any(role in doc.text for role in roles)
            assert not any(name in doc.text for name in SYNTH_A[:4])
        lines = usage.read_text().splitlines()
        assert lines[0] == "token\tcount"
        counts = [int(line.split("\t")[1]) for line in lines[1:]]
        assert counts == sorted(counts, reverse=True)
        assert sum(counts) == 200  # two mentions per document

    def test_no_annotations_means_no_spans(self, world):
        out = world["dir"] / "masked_plain.jsonl"
        code = dispatch(
            [
                "mask",
                "--corpus",
                str(world["corpus_a"]),
                "--policy",
                "basic-ner",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        original = load_corpus(world["corpus_a"])
        masked = load_corpus(out)
        assert [d.text for d in masked] == [d.text for d in original]


class TestSplit:
    def test_random_split_sizes_and_determinism(self, world):
        train1 = world["dir"] / "train1.jsonl"
        test1 = world["dir"] / "test1.jsonl"
        train2 = world["dir"] / "train2.jsonl"
        test2 = world["dir"] / "test2.jsonl"
        base = [
            "split",
            "--corpus",
            str(world["corpus_a"]),
            "--mode",
            "random",
            "--train-fraction",
            "0.8",
            "--seed",
            "3",
        ]
        assert dispatch(base + ["--train-output", str(train1), "--test-output", str(test1)]) == 0
        assert dispatch(base + ["--train-output", str(train2), "--test-output", str(test2)]) == 0
        assert len(load_corpus(train1)) == 80
        assert len(load_corpus(test1)) == 20
        assert train1.read_bytes() == train2.read_bytes()
        assert test1.read_bytes() == test2.read_bytes()

    def test_global_seed_is_the_fallback(self, world):
        out_a = world["dir"] / "ga.jsonl"
        out_b = world["dir"] / "gb.jsonl"
        junk = world["dir"] / "junk.jsonl"
        argv = lambda seed_args, out: seed_args + [
            "split",
            "--corpus",
            str(world["corpus_a"]),
            "--mode",
            "random",
            "--train-output",
            str(out),
            "--test-output",
            str(junk),
        ]
        assert dispatch(argv(["--seed", "3"], out_a)) == 0
        assert dispatch(argv([], out_b) + ["--seed", "3"]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_time_mode_requires_boundary(self, world, capsys):
        code = dispatch(
            [
                "split",
                "--corpus",
                str(world["corpus_a"]),
                "--mode",
                "time",
                "--train-output",
                "-",
                "--test-output",
                "-",
            ]
        )
        assert code == 2
        assert "--boundary-date" in capsys.readouterr().err

    def test_time_mode_splits_on_boundary(self, world):
        train = world["dir"] / "tt.jsonl"
        test = world["dir"] / "te.jsonl"
        code = dispatch(
            [
                "split",
                "--corpus",
                str(world["corpus_a"]),
                "--mode",
                "time",
                "--boundary-date",
                "2015-02-15",
                "--train-output",
                str(train),
                "--test-output",
                str(test),
            ]
        )
        assert code == 0
        from datetime import date

        assert all(d.date <= date(2015, 2, 15) for d in load_corpus(train))
        assert all(d.date > date(2015, 2, 15) for d in load_corpus(test))

    def test_bad_fraction_is_a_data_error(self, world):
        code = dispatch(
            [
                "split",
                "--corpus",
                str(world["corpus_a"]),
                "--mode",
                "random",
                "--train-fraction",
                "1.5",
                "--train-output",
                "-",
                "--test-output",
                "-",
            ]
        )
        assert code == 1


class TestTrainEval:
    def test_train_then_eval(self, tmp_path):
        corpus = write_corpus_file(
            tmp_path / "sep.jsonl",
            [
                {"id": "f0", "text": "zzz bad hoax", "label": "fake"},
                {"id": "f1", "text": "zzz fabricated claim", "label": "fake"},
                {"id": "r0", "text": "qqq verified story", "label": "real"},
                {"id": "r1", "text": "qqq sourced report", "label": "real"},
            ],
        )
        model_path = tmp_path / "model.json"
        code = dispatch(
            ["train", "--corpus", corpus, "--output", str(model_path), "--dimensions", "65536"]
        )
        assert code == 0
        model = load_model(model_path)
        assert model.space.dimensions == 65536
        report_path = tmp_path / "report.json"
        code = dispatch(
            ["eval", "--model", str(model_path), "--corpus", corpus, "--output", str(report_path)]
        )
        assert code == 0
        report = json.loads(report_path.read_text())
        assert report["accuracy"] == 1.0
        assert report["n"] == 4
        assert {p["id"] for p in report["predictions"]} == {"f0", "f1", "r0", "r1"}
        assert all(p["gold"] == p["predicted"] for p in report["predictions"])

    def test_single_label_corpus_fails_training(self, tmp_path, capsys):
        corpus = write_corpus_file(
            tmp_path / "one.jsonl",
            [{"id": "f0", "text": "x", "label": "fake"}],
        )
        assert dispatch(["train", "--corpus", corpus, "--output", "-"]) == 1
        assert "both labels" in capsys.readouterr().err

    def test_missing_model_is_a_data_error(self, tiny_corpus):
        assert dispatch(["eval", "--model", "/nope/m.json", "--corpus", tiny_corpus]) == 1


class TestPipelineComposition:
    def test_stepwise_cli_matches_run_matrix_cell(self, world):
        d = world["dir"]
        tagged = d / "tagged.jsonl"
        code = dispatch(
            [
                "tag",
                "--corpus",
                str(world["corpus_a"]),
                "--gazetteer",
                str(world["gazetteer"]),
                "--output",
                str(tagged),
            ]
        )
        assert code == 0

        masked = d / "masked.jsonl"
        code = dispatch(
            [
                "mask",
                "--corpus",
                str(world["corpus_a"]),
                "--annotations",
                str(tagged),
                "--policy",
                "wikid",
                "--index",
                str(world["index"]),
                "--output",
                str(masked),
            ]
        )
        assert code == 0

        train_path, test_path = d / "tr.jsonl", d / "te2.jsonl"
        code = dispatch(
            [
                "split",
                "--corpus",
                str(masked),
                "--mode",
                "random",
                "--train-fraction",
                "0.8",
                "--seed",
                "3",
                "--train-output",
                str(train_path),
                "--test-output",
                str(test_path),
            ]
        )
        assert code == 0

        model_path = d / "model.json"
        assert dispatch(["train", "--corpus", str(train_path), "--output", str(model_path)]) == 0
        report_path = d / "eval.json"
        code = dispatch(
            ["eval", "--model", str(model_path), "--corpus", str(test_path), "--output", str(report_path)]
        )
        assert code == 0
        cli_report = json.loads(report_path.read_text())

        # The same experiment run through the library must agree exactly.
        corpus = load_corpus(world["corpus_a"], name="a")
        annotated = tuple(load_annotations(corpus, tagged))
        index = load_index(world["index"])
        spec = SplitSpec(mode=SplitMode.RANDOM_HOLDOUT, train_fraction=0.8, seed=3)
        lib_masked, _ = mask_corpus(annotated, MaskPolicy.WIKID, index=index)
        lib_train, lib_test = split_random(lib_masked, spec)
        lib_eval = evaluate(train(lib_train), lib_test)
        assert cli_report["accuracy"] == lib_eval.accuracy
        cli_predicted = {p["id"]: p["predicted"] for p in cli_report["predictions"]}
        lib_predicted = {
            doc.id: pred.value for doc, pred in zip(lib_test, lib_eval.predictions)
        }
        assert cli_predicted == lib_predicted

        # run_matrix splits before masking; same seed, ids, and index must
        # still land on the identical in-domain cell.
        bundle = DatasetBundle(name="a", docs=annotated)
        matrix = run_matrix([bundle], (MaskPolicy.WIKID,), {"a": index}, spec)
        cell = matrix.cell("a", "a", MaskPolicy.WIKID)
        assert cli_report["accuracy"] == cell.accuracy
        assert cli_report["n"] == cell.n_test

        # The gazetteer reproduces the generator's gold spans exactly.
        gold = {a.document.id: a.spans for a in world["data"].annotated_a}
        assert {a.document.id: a.spans for a in annotated} == gold


def experiment_config(world, **overrides):
    config = {
        "datasets": [
            {
                "name": "a",
                "corpus": str(world["corpus_a"]),
                "annotations": str(world["ann_a"]),
                "index": str(world["index"]),
            },
            {
                "name": "b",
                "corpus": str(world["corpus_b"]),
                "annotations": str(world["ann_b"]),
                "index": str(world["index"]),
            },
        ],
        "policies": ["no-mask", "wikid"],
        "split": {"mode": "random", "train_fraction": 0.8, "seed": 3},
        "features": {"dimensions": 65536},
        "ood_full": True,
    }
    config.update(overrides)
    path = world["dir"] / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


class TestExperiment:
    def test_runs_matrix_and_writes_both_renderings(self, world, capsys):
        config = experiment_config(world)
        out_json = world["dir"] / "report.json"
        out_text = world["dir"] / "report.txt"
        code = dispatch(
            [
                "experiment",
                "--config",
                str(config),
                "--output-json",
                str(out_json),
                "--output-text",
                str(out_text),
            ]
        )
        assert code == 0
        report = json.loads(out_json.read_text())
        assert report["datasets"] == ["a", "b"]
        assert len(report["cells"]) == 8
        assert report["ood_full"] is True
        text = out_text.read_text()
        assert "train=a" in text and "WikiD" in text

    def test_text_goes_to_stdout_by_default(self, world, capsys):
        config = experiment_config(world, policies=["no-mask"])
        assert dispatch(["experiment", "--config", str(config)]) == 0
        assert "train=a" in capsys.readouterr().out

    def test_reruns_are_byte_identical(self, world):
        config = experiment_config(world)
        a, b = world["dir"] / "r1.json", world["dir"] / "r2.json"
        for out in (a, b):
            code = dispatch(
                ["experiment", "--config", str(config), "--output-json", str(out)]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_datasets_key_is_a_data_error(self, world, capsys):
        config = world["dir"] / "bad.json"
        config.write_text("{}")
        assert dispatch(["experiment", "--config", str(config)]) == 1
        assert "datasets" in capsys.readouterr().err

    def test_malformed_config_is_a_data_error(self, world):
        config = world["dir"] / "bad.json"
        config.write_text("{nope")
        assert dispatch(["experiment", "--config", str(config)]) == 1


class TestCoverage:
    def write_usage(self, path, rows):
        path.write_text(
            "token\tcount\n" + "".join(f"{t}\t{c}\n" for t, c in rows), encoding="utf-8"
        )
        return str(path)

    def test_matrix_with_qid_filtering(self, tmp_path, capsys):
        a = self.write_usage(tmp_path / "a.tsv", [("Q101", 3), ("Q102", 2), ("PER", 1)])
        b = self.write_usage(tmp_path / "b.tsv", [("Q101", 1), ("Q103", 4), ("LOC", 9)])
        code = dispatch(["coverage", "--usage", f"a={a}", "--usage", f"b={b}"])
        assert code == 0
        out = capsys.readouterr().out
        lines = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert lines[0] == "dataset\ta\tb"
        assert lines[1] == "a\t100.0\t50.0"
        assert lines[2] == "b\t50.0\t100.0"

    def test_top_k_listing(self, tmp_path, capsys):
        a = self.write_usage(tmp_path / "a.tsv", [("Q101", 3), ("Q102", 2)])
        b = self.write_usage(tmp_path / "b.tsv", [("Q101", 1)])
        code = dispatch(
            ["coverage", "--usage", f"a={a}", "--usage", f"b={b}", "--top-k", "1"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "a\tQ101\t3" in out
        assert "b\tQ101\t1" in out

    def test_single_usage_without_top_k_is_a_usage_error(self, tmp_path, capsys):
        a = self.write_usage(tmp_path / "a.tsv", [("Q101", 3)])
        assert dispatch(["coverage", "--usage", f"a={a}"]) == 2
        assert "--usage" in capsys.readouterr().err

    def test_bad_name_path_syntax_is_a_usage_error(self, tmp_path):
        a = self.write_usage(tmp_path / "a.tsv", [("Q101", 3)])
        assert dispatch(["coverage", "--usage", a, "--usage", f"b={a}"]) == 2

    def test_bad_count_is_a_data_error(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("token\tcount\nQ101\tmany\n")
        code = dispatch(
            ["coverage", "--usage", f"a={bad}", "--usage", f"b={bad}"]
        )
        assert code == 1
