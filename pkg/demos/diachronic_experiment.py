"""Reproduce the period-transfer failure and its repair on synthetic news.

Two corpora describe different election periods with disjoint politician
names but identical underlying structure. A classifier trained on one
period collapses on the other because it memorized who, not what. Masking
person mentions with role tokens restores cross-period accuracy.
"""

from diamask import (
    DatasetBundle,
    MaskPolicy,
    SplitMode,
    SplitSpec,
    run_matrix,
    synth_diachronic_corpus,
)

PERIOD_A = (
    "Alan Pryce", "Bela Konda", "Cyra Doshi", "Dev Malik",
    "Emil Ito", "Farah Osei", "Grant Lee", "Hana Riggs",
)
PERIOD_B = (
    "Bella Quist", "Alan Verne", "Dora Feld", "Carl Ibarra",
    "Fiona Stam", "Evan Kovic", "Hana Obi", "Gary Lund",
)
ROLES = ("Q101", "Q102", "Q103", "Q104", "Q105", "Q106", "Q107", "Q108")
ROLE_MAP = {name: ROLES[i] for i, name in enumerate(PERIOD_A)}
ROLE_MAP.update({name: ROLES[i] for i, name in enumerate(PERIOD_B)})

POLICIES = (MaskPolicy.NO_MASK, MaskPolicy.BASIC_NER, MaskPolicy.WIKID)


def main() -> None:
    data = synth_diachronic_corpus(
        seed=1,
        n_docs=400,
        period_a_persons=PERIOD_A,
        period_b_persons=PERIOD_B,
        role_map=ROLE_MAP,
    )
    sample = data.corpus_a.documents[0]
    print(f"sample document ({sample.id}, {sample.label.value}): {sample.text!r}")
    print()

    bundles = [
        DatasetBundle(name="period-a", docs=tuple(data.annotated_a)),
        DatasetBundle(name="period-b", docs=tuple(data.annotated_b)),
    ]
    indexes = {"period-a": data.index, "period-b": data.index}
    spec = SplitSpec(mode=SplitMode.RANDOM_HOLDOUT, train_fraction=0.8, seed=1)
    report = run_matrix(bundles, POLICIES, indexes, spec, ood_full=True)
    print(report.to_text())

    home = report.cell("period-a", "period-a", MaskPolicy.NO_MASK)
    raw = report.cell("period-a", "period-b", MaskPolicy.NO_MASK)
    fixed = report.cell("period-a", "period-b", MaskPolicy.WIKID)
    print("training on period-a, testing on period-b:")
    print(f"  no-mask accuracy {raw.accuracy:.3f} "
          f"(down from {home.accuracy:.3f} on period-a's own held-out test)")
    print(f"  wikid accuracy   {fixed.accuracy:.3f} "
          f"(adjusted p = {fixed.mcnemar.p_adjusted:.2e})")
    print("in-domain columns barely move, so masking costs almost nothing")
    print("where the old model was fine and rescues the cross-period case")


if __name__ == "__main__":
    main()
