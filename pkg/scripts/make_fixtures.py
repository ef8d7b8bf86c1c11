#!/usr/bin/env python3
"""Regenerate the bundled fixture datasets under src/simbench/fixtures/.

Everything is derived from the package PRNG with fixed seeds, so running
this script twice produces identical files.  The fixtures are synthetic:
small enough for offline test runs, structured enough (topic vocabularies,
graded summary quality, negation-bearing sentences) that every task
produces non-degenerate scores.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from simbench.rng import Rng, derive_seed, round_half_away
from simbench.tokenization import dump_bpe_vocab, train_bpe_vocab

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "simbench" / "fixtures"

ADJECTIVES = [
    "bright", "quiet", "novel", "rapid", "dense", "subtle", "formal", "rough",
    "stable", "curious", "narrow", "gentle", "broad", "modest", "sharp", "plain",
]
GENERAL_NOUNS = [
    "system", "method", "signal", "record", "garden", "market", "bridge",
    "engine", "pattern", "library", "journal", "station", "survey", "council",
    "harbor", "workshop", "ledger", "meadow", "archive", "turbine",
]
VERBS = [
    "supports", "measures", "extends", "covers", "follows", "improves",
    "alters", "tracks", "guides", "limits", "shapes", "repeats",
]
VERB_BASES = [
    "support", "measure", "extend", "cover", "follow", "improve",
    "alter", "track", "guide", "limit",
]
TAILS = [
    "for the second season", "across the valley", "without much delay",
    "under close review", "in the early report", "near the old road",
    "during the trial", "after the first pass", "with steady results",
    "beyond the fence line",
]

TOPICS = {
    "astronomy": [
        "telescope", "nebula", "orbit", "comet", "galaxy", "eclipse",
        "quasar", "asteroid", "observatory", "spectrum", "parallax", "supernova",
    ],
    "cooking": [
        "skillet", "broth", "saffron", "dough", "marinade", "oven",
        "whisk", "simmer", "garnish", "pastry", "seasoning", "ladle",
    ],
    "sailing": [
        "rudder", "mainsail", "harbor", "keel", "regatta", "mooring",
        "compass", "rigging", "spinnaker", "tide", "helm", "buoy",
    ],
    "geology": [
        "basalt", "stratum", "fault", "magma", "erosion", "sediment",
        "quartz", "fossil", "glacier", "tectonics", "mineral", "crater",
    ],
    "music": [
        "sonata", "tempo", "cello", "chord", "overture", "rhythm",
        "ensemble", "melody", "octave", "concerto", "baritone", "cadence",
    ],
    "gardening": [
        "trellis", "compost", "seedling", "pruning", "mulch", "perennial",
        "greenhouse", "pollinator", "rootstock", "loam", "cutting", "bloom",
    ],
}

LOREM = """Lorem ipsum dolor sit amet, consectetur adipiscing elit, sed do eiusmod tempor incididunt ut labore et dolore magna aliqua. Ut enim ad minim veniam, quis nostrud exercitation ullamco laboris nisi ut aliquip ex ea commodo consequat. Duis aute irure dolor in reprehenderit in voluptate velit esse cillum dolore eu fugiat nulla pariatur. Excepteur sint occaecat cupidatat non proident, sunt in culpa qui officia deserunt mollit anim id est laborum.

Sed ut perspiciatis unde omnis iste natus error sit voluptatem accusantium doloremque laudantium, totam rem aperiam, eaque ipsa quae ab illo inventore veritatis et quasi architecto beatae vitae dicta sunt explicabo. Nemo enim ipsam voluptatem quia voluptas sit aspernatur aut odit aut fugit, sed quia consequuntur magni dolores eos qui ratione voluptatem sequi nesciunt. Neque porro quisquam est, qui dolorem ipsum quia dolor sit amet, consectetur, adipisci velit, sed quia non numquam eius modi tempora incidunt ut labore et dolore magnam aliquam quaerat voluptatem.

At vero eos et accusamus et iusto odio dignissimos ducimus qui blanditiis praesentium voluptatum deleniti atque corrupti quos dolores et quas molestias excepturi sint occaecati cupiditate non provident, similique sunt in culpa qui officia deserunt mollitia animi, id est laborum et dolorum fuga. Et harum quidem rerum facilis est et expedita distinctio. Nam libero tempore, cum soluta nobis est eligendi optio cumque nihil impedit quo minus id quod maxime placeat facere possimus, omnis voluptas assumenda est, omnis dolor repellendus.

Temporibus autem quibusdam et aut officiis debitis aut rerum necessitatibus saepe eveniet ut et voluptates repudiandae sint et molestiae non recusandae. Itaque earum rerum hic tenetur a sapiente delectus, ut aut reiciendis voluptatibus maiores alias consequatur aut perferendis doloribus asperiores repellat.
"""


def pick(rng: Rng, items: list[str]) -> str:
    return items[rng.below(len(items))]


def make_sentence(rng: Rng, nouns: list[str]) -> str:
    template = rng.below(5)
    noun_a, noun_b = pick(rng, nouns), pick(rng, nouns)
    adj_a, adj_b = pick(rng, ADJECTIVES), pick(rng, ADJECTIVES)
    if template == 0:
        body = f"the {adj_a} {noun_a} is {adj_b} and {pick(rng, VERBS)} the {noun_b}"
    elif template == 1:
        body = f"the {noun_a} has a {adj_a} {noun_b} and can {pick(rng, VERB_BASES)} it"
    elif template == 2:
        body = f"a {adj_a} {noun_a} {pick(rng, VERBS)} the {noun_b} {pick(rng, TAILS)}"
    elif template == 3:
        body = f"the {noun_a} was {adj_a} before the {noun_b} {pick(rng, TAILS)}"
    else:
        body = f"teams {pick(rng, VERBS).rstrip('s')} the {adj_a} {noun_a} while the {noun_b} does hold"
    terminator = "." if rng.below(10) < 8 else ("!" if rng.below(2) else "?")
    return body[0].upper() + body[1:] + terminator


def make_document(rng: Rng, nouns: list[str], sentences: int) -> str:
    return " ".join(make_sentence(rng, nouns) for _ in range(sentences))


def write_jsonl(path: Path, records: list[dict]) -> None:
    path.write_text(
        "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records),
        "utf-8",
    )
    print(f"wrote {path} ({len(records)} records)")


def make_pairs(seed: int, count: int, min_sentences: int, max_sentences: int, prefix: str):
    rng = Rng(seed)
    topic_names = sorted(TOPICS)
    records = []
    for i in range(count):
        nouns = GENERAL_NOUNS + TOPICS[topic_names[rng.below(len(topic_names))]]
        span = max_sentences - min_sentences + 1
        text = make_document(rng, nouns, min_sentences + rng.below(span))
        sentences = text.split(". ")
        summary = ". ".join(sentences[:2])
        if not summary.endswith((".", "!", "?")):
            summary += "."
        records.append({"id": f"{prefix}-{i:03d}", "text": text, "summary": summary})
    return records


def make_comparisons(seed: int, count: int):
    rng = Rng(seed)
    topic_names = sorted(TOPICS)
    records = []
    for i in range(count):
        topic = topic_names[rng.below(len(topic_names))]
        other = topic_names[rng.below(len(topic_names))]
        while other == topic:
            other = topic_names[rng.below(len(topic_names))]
        nouns = GENERAL_NOUNS + TOPICS[topic]
        post = make_document(rng, nouns, 5 + rng.below(3))
        post_sentences = post.split(". ")
        good = ". ".join(post_sentences[:2])
        bad = make_document(rng, TOPICS[other], 2)
        good_first = rng.below(2) == 0
        summary_a, summary_b = (good, bad) if good_first else (bad, good)
        choice = 0 if good_first else 1
        if rng.below(100) < 15:  # annotator noise
            choice = 1 - choice
        records.append(
            {
                "id": f"cmp-{i:03d}",
                "post": post,
                "summary_a": summary_a,
                "summary_b": summary_b,
                "choice": choice,
            }
        )
    return records


def make_axis_evals(seed: int, count: int):
    rng = Rng(seed)
    topic_names = sorted(TOPICS)
    records = []
    for i in range(count):
        quality = 1 + (i % 7)
        topic = topic_names[rng.below(len(topic_names))]
        other = topic_names[rng.below(len(topic_names))]
        while other == topic:
            other = topic_names[rng.below(len(topic_names))]
        nouns = GENERAL_NOUNS + TOPICS[topic]
        text = make_document(rng, nouns, 6)
        own = text.split(". ")
        good_count = round_half_away(quality * 3 / 7)
        parts = own[:good_count]
        for _ in range(3 - good_count):
            parts.append(make_sentence(rng, TOPICS[other]))
        summary = ". ".join(p.rstrip(".!? ") for p in parts) + "."
        ratings = {}
        for key in ("overall", "accuracy", "coverage", "coherence"):
            jitter = rng.below(3) - 1
            ratings[key] = max(1, min(7, quality + jitter))
        records.append(
            {
                "id": f"axis-{i:03d}",
                "text": text,
                "summary": summary,
                "ratings": ratings,
            }
        )
    return records


def make_clustering(seed: int, sets_spec: list[tuple[str, int, int]]):
    rng = Rng(seed)
    topic_names = sorted(TOPICS)
    records = []
    for set_id, topic_count, per_topic in sets_spec:
        start = rng.below(len(topic_names))
        chosen = [topic_names[(start + j) % len(topic_names)] for j in range(topic_count)]
        texts, labels = [], []
        for topic in chosen:
            for _ in range(per_topic):
                texts.append(make_document(rng, TOPICS[topic], 2))
                labels.append(topic)
        order = list(range(len(texts)))
        rng.shuffle(order)
        records.append(
            {
                "set_id": set_id,
                "texts": [texts[i] for i in order],
                "labels": [labels[i] for i in order],
            }
        )
    return records


def make_retrieval(seed: int, directory: Path):
    rng = Rng(seed)
    directory.mkdir(parents=True, exist_ok=True)
    topic_names = sorted(TOPICS)
    corpus = []
    doc_ids_by_topic: dict[str, list[str]] = {}
    for topic in topic_names:
        for i in range(5):
            doc_id = f"{topic[:4]}-{i}"
            corpus.append(
                {
                    "_id": doc_id,
                    "title": f"{topic.capitalize()} notes {i}",
                    "text": make_document(rng, TOPICS[topic], 3 + rng.below(2)),
                }
            )
            doc_ids_by_topic.setdefault(topic, []).append(doc_id)
    queries = []
    qrels_lines = ["query-id\tcorpus-id\tscore"]
    query_topics = topic_names + topic_names[:2]  # 8 queries over 6 topics
    for qi, topic in enumerate(query_topics):
        words = TOPICS[topic]
        text = f"the {pick(rng, words)} and the {pick(rng, words)} {pick(rng, TAILS)}"
        query_id = f"q{qi}"
        queries.append({"_id": query_id, "text": text})
        relevant = doc_ids_by_topic[topic][: 2 + rng.below(2)]
        for doc_id in relevant:
            qrels_lines.append(f"{query_id}\t{doc_id}\t1")
    write_jsonl(directory / "corpus.jsonl", corpus)
    write_jsonl(directory / "queries.jsonl", queries)
    (directory / "qrels.tsv").write_text("\n".join(qrels_lines) + "\n", "utf-8")
    print(f"wrote {directory / 'qrels.tsv'}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    base = 0x51AE_BE4C

    (FIXTURES / "needle.txt").write_text(LOREM, "utf-8")
    print(f"wrote {FIXTURES / 'needle.txt'}")

    robustness = make_pairs(derive_seed(base, "robustness"), 50, 6, 9, "rob")
    write_jsonl(FIXTURES / "pairs_robustness.jsonl", robustness)

    prose = make_pairs(derive_seed(base, "sense-prose"), 20, 5, 8, "sp")
    write_jsonl(FIXTURES / "sensitivity_prose.jsonl", prose)
    reviews = make_pairs(derive_seed(base, "sense-reviews"), 20, 3, 5, "sr")
    write_jsonl(FIXTURES / "sensitivity_reviews.jsonl", reviews)

    write_jsonl(
        FIXTURES / "comparisons.jsonl", make_comparisons(derive_seed(base, "cmp"), 64)
    )
    write_jsonl(
        FIXTURES / "axis_evals.jsonl", make_axis_evals(derive_seed(base, "axis"), 56)
    )

    write_jsonl(
        FIXTURES / "clustering_topics.jsonl",
        make_clustering(
            derive_seed(base, "clu-a"),
            [("topics-0", 4, 9), ("topics-1", 4, 9), ("topics-2", 3, 10)],
        ),
    )
    write_jsonl(
        FIXTURES / "clustering_mixed.jsonl",
        make_clustering(
            derive_seed(base, "clu-b"), [("mixed-0", 3, 8), ("mixed-1", 2, 10)]
        ),
    )

    make_retrieval(derive_seed(base, "retrieval"), FIXTURES / "retrieval")

    corpus_text = [LOREM]
    corpus_text += [r["text"] for r in robustness]
    corpus_text += [r["text"] for r in prose]
    vocab = train_bpe_vocab(corpus_text, merges=384)
    (FIXTURES / "bpe_vocab.txt").write_text(dump_bpe_vocab(vocab), "utf-8")
    print(f"wrote {FIXTURES / 'bpe_vocab.txt'} ({len(vocab)} entries)")

    config = {
        "seed": 42,
        "subjects": ["levenshtein", "rouge", "jaccard", "bm25", "mock-small"],
        "tasks": [
            "human_preference",
            "robustness",
            "sensitivity",
            "clustering",
            "retrieval",
        ],
        "datasets": {
            "human_preference": {
                "comparisons": "comparisons.jsonl",
                "axis_evals": "axis_evals.jsonl",
            },
            "robustness": {"prose": "pairs_robustness.jsonl"},
            "sensitivity": {
                "prose": "sensitivity_prose.jsonl",
                "reviews": "sensitivity_reviews.jsonl",
            },
            "clustering": {
                "topics": "clustering_topics.jsonl",
                "mixed": "clustering_mixed.jsonl",
            },
            "retrieval": {"micro": "retrieval"},
        },
        "providers": {
            "mock-small": {
                "provider_id": "mock",
                "model_id": "mock-64",
                "dimension": 64,
            }
        },
        "cache": {"dir": ".simbench-cache"},
        "perturb": {"needle_path": "needle.txt"},
    }
    (FIXTURES / "run_config.json").write_text(
        json.dumps(config, indent=2) + "\n", "utf-8"
    )
    print(f"wrote {FIXTURES / 'run_config.json'}")


if __name__ == "__main__":
    main()
