#!/usr/bin/env python3
"""Writes the synthetic benchmark under data/benchmark.

Ten ambiguous topics with four facets each. Every facet has four judged
documents; forty more documents mention a topic without any facet. Each facet
gets one clarification round. Questions for negative, idk and single-word
"other" answers propose the wrong facet, so adding the question misleads the
ranker; positive questions propose the right one, and multi-word answers name
the facet the user actually wants.
"""

import json
import pathlib
import random

TOPICS = {
    "jaguar": [
        ["engine", "dealer", "sedan"],
        ["rainforest", "predator", "cub"],
        ["touchdown", "stadium", "roster"],
        ["fender", "strings", "amplifier"],
    ],
    "mercury": [
        ["planet", "orbit", "crater"],
        ["thermometer", "toxic", "spill"],
        ["astronaut", "capsule", "launch"],
        ["messenger", "myth", "sandals"],
    ],
    "python": [
        ["interpreter", "syntax", "module"],
        ["snake", "venom", "constrictor"],
        ["comedy", "sketch", "troupe"],
        ["pet", "terrarium", "feeding"],
    ],
    "amazon": [
        ["river", "basin", "tributary"],
        ["shopping", "delivery", "prime"],
        ["warriors", "legend", "greek"],
        ["kindle", "ebook", "reader"],
    ],
    "turkey": [
        ["istanbul", "ankara", "bosphorus"],
        ["roast", "stuffing", "thanksgiving"],
        ["hunting", "wild", "gobbler"],
        ["sandwich", "deli", "sliced"],
    ],
    "bass": [
        ["fishing", "lure", "lake"],
        ["bassist", "groove", "fretless"],
        ["subwoofer", "speaker", "frequency"],
        ["ale", "brewery", "pint"],
    ],
    "crane": [
        ["construction", "tower", "lifting"],
        ["bird", "wetland", "migration"],
        ["origami", "folding", "paper"],
        ["kungfu", "stance", "karate"],
    ],
    "seal": [
        ["singer", "album", "kissfromarose"],
        ["harbor", "pup", "blubber"],
        ["navy", "commando", "training"],
        ["wax", "stamp", "envelope"],
    ],
    "atari": [
        ["arcade", "joystick", "cabinet"],
        ["company", "founder", "history"],
        ["emulator", "roms", "download"],
        ["console", "cartridge", "collector"],
    ],
    "jefferson": [
        ["president", "declaration", "monticello"],
        ["airplane", "psychedelic", "band"],
        ["county", "courthouse", "records"],
        ["memorial", "rotunda", "tidal"],
    ],
}

FILLER = (
    "information page guide best new online free official site read more "
    "latest review photos video article details top list popular world "
    "people local great service group report find story"
).split()

# answer types of the forty rounds; misleading questions dominate
PLAN_COUNTS = {
    "N,single": 14, "N,multi": 10, "idk,multi": 7, "O,single": 4,
    "P,single": 2, "P,multi": 2, "O,multi": 1,
}
PLAN = [kind for kind, count in PLAN_COUNTS.items() for _ in range(count)]
random.Random(7).shuffle(PLAN)


def document(rng, topic, facet_words, n_facet):
    words = [topic] * rng.randint(1, 3)
    words += [rng.choice(facet_words) for _ in range(n_facet)]
    words += [rng.choice(FILLER) for _ in range(rng.randint(8, 25))]
    rng.shuffle(words)
    return " ".join(words).capitalize() + "."


def question_for(words):
    return f"would you like to know about {words[0]} {words[1]}"


def answer_for(kind, words, rng):
    if kind == "N,single":
        return rng.choice(["no", "No.", "no!"])
    if kind == "N,multi":
        return f"no i want {words[0]} {words[2]}"
    if kind == "P,single":
        return rng.choice(["yes", "Yes.", "yes!"])
    if kind == "P,multi":
        return f"yes i need {words[2]} {words[0]}"
    if kind == "O,single":
        return rng.choice(["whatever", "hmm", "dunno"])
    if kind == "O,multi":
        return f"i am interested in {words[1]} {words[2]}"
    return rng.choice(["I don't know", "i dont know", "I don't know, sorry"])


def main():
    rng = random.Random(20190706)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "benchmark"
    out.mkdir(parents=True, exist_ok=True)

    docs, qrels, conversations = [], [], []
    n = 0
    for t, (topic, facets) in enumerate(TOPICS.items(), start=1):
        for f, words in enumerate(facets, start=1):
            key = f"{t}-{f}"
            for grade in (2, 2, 1, 1):
                n += 1
                doc_id = f"bench{n:04d}"
                docs.append({"doc_id": doc_id, "text": document(rng, topic, words, rng.randint(2, 4))})
                qrels.append(f"{key} 0 {doc_id} {grade}")
            kind = PLAN[(t - 1) * 4 + (f - 1)]
            polarity = kind.split(",")[0]
            if polarity in ("P", "O") and kind != "O,single":
                asked = words
            else:
                asked = facets[f % 4]  # a different facet of the same topic
            conversations.append({
                "topic_id": str(t),
                "facet_id": key,
                "initial_query": topic,
                "question": question_for(asked),
                "answer": answer_for(kind, words, rng),
            })
        for _ in range(4):
            n += 1
            docs.append({"doc_id": f"bench{n:04d}", "text": document(rng, topic, [], 0)})

    with open(out / "corpus.jsonl", "w") as fh:
        for d in docs:
            fh.write(json.dumps(d) + "\n")
    with open(out / "conversations.jsonl", "w") as fh:
        for c in conversations:
            fh.write(json.dumps(c) + "\n")
    with open(out / "qrels.txt", "w") as fh:
        fh.write("\n".join(qrels) + "\n")


if __name__ == "__main__":
    main()
