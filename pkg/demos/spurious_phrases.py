"""Find label-leaking phrases with local mutual information.

A tiny fake-news corpus where one politician is mentioned only in fake
articles and another only in real ones. Neither name says anything about
the claims themselves; the split is an accident of when and where the
articles were collected. LMI surfaces the leak, and tag masking removes it.
"""

from datetime import date

from diamask import (
    Corpus,
    Document,
    Gazetteer,
    Label,
    MaskPolicy,
    NeTag,
    compute_lmi,
    export_lmi_table,
    mask_corpus,
    tag_with_gazetteer,
)

FAKE_TEXTS = [
    "Modi bans all cash overnight claims viral post",
    "Modi orders army to seize banks says message",
    "miracle cure endorsed by Modi spreads online fast",
    "Modi to give free phones to every citizen",
    "fake Modi quotes overwhelm fact checkers this week",
    "Modi resignation rumor spreads after doctored video clip",
]
REAL_TEXTS = [
    "Obama addresses congress on the new budget plan",
    "Obama signs health care bill into law today",
    "senators question Obama over the proposed trade deal",
    "Obama visits flood zone and pledges federal aid",
    "white house says Obama will veto the measure",
    "Obama nominates new justice to the supreme court",
]


def build_corpus() -> Corpus:
    docs = []
    for i, text in enumerate(FAKE_TEXTS):
        docs.append(Document(f"fake-{i}", text, Label.FAKE, date(2019, 1, 1 + i), "demo"))
    for i, text in enumerate(REAL_TEXTS):
        docs.append(Document(f"real-{i}", text, Label.REAL, date(2012, 2, 1 + i), "demo"))
    return Corpus("demo", tuple(docs))


def main() -> None:
    corpus = build_corpus()
    print(f"corpus: {len(corpus)} documents, half fake, half real")
    print()

    print("=== unigram LMI before masking ===")
    table = compute_lmi(corpus, n=1, min_count=3)
    print(export_lmi_table(table, top_k=3, fmt="text"))

    # Both names top their label's column with p(l|w) = 1.0. A classifier
    # trained here would learn who is mentioned, not what is claimed.
    gazetteer = Gazetteer.from_pairs([("Modi", NeTag.PER), ("Obama", NeTag.PER)])
    annotated = [tag_with_gazetteer(doc, gazetteer) for doc in corpus]
    masked, usage = mask_corpus(annotated, MaskPolicy.BASIC_NER)
    print(f"masked {sum(usage.values())} person mentions: {dict(usage)}")
    print()

    print("=== unigram LMI after basic-ner masking ===")
    after = compute_lmi(masked, n=1, min_count=3)
    print(export_lmi_table(after, top_k=3, fmt="text"))

    per_rows = [e for e in after.entries if e.phrase == "per"]
    for row in per_rows:
        print(f"merged tag: lmi({row.phrase!r}, {row.label.value}) = {row.lmi:g} "
              f"(p(l|w) = {row.p_l_given_w:.2f})")
    print("both labels now mention a person equally often, so the merged")
    print("tag carries zero signal; only content words are left to rank")


if __name__ == "__main__":
    main()
