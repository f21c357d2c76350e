#!/usr/bin/env python3
"""Regenerates the synthetic review fixtures.

    python3 data/fixtures/generate.py

desk/          two places, about 200 sentences, plus a 16-d word-vector
               table whose aspect words cluster around one direction per
               aspect class.
seven-places/  seven places of 1000 reviews each with a fixed female/male
               split per place.

Output is deterministic.
"""

import json
import math
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

NOUNS = {
    "Attractions": ["architecture", "monument", "view", "ruins", "scenery", "structure", "temple", "wall", "carvings", "dome"],
    "Access": ["bus", "train", "road", "queue", "gate", "walk", "taxi", "entrance", "shuttle", "parking"],
    "Activities": ["photography", "photos", "pictures", "hike", "climb", "trek", "souvenirs", "shopping", "sunrise"],
    "Amenities": ["guide", "food", "restaurant", "toilets", "hotel", "staff", "services", "information", "cafe"],
    "Culture": ["history", "heritage", "tradition", "locals", "weather", "climate", "religion", "dress", "music"],
    "Cost": ["ticket", "tickets", "price", "fee", "cost", "money", "entry", "value"],
    "Negatives": ["crowds", "scam", "touts", "vendors", "litter", "hawkers"],
}
CATALOG_ONLY = {
    "Attractions": ["monuments", "surroundings", "events", "wonder"],
    "Access": ["travel", "infrastructure", "transport", "time", "visiting"],
    "Activities": ["events"],
    "Amenities": ["guides", "hospitality", "vendors", "accommodation"],
    "Culture": ["hospitality", "events", "culture"],
    "Cost": ["visiting", "expensive", "cheap", "worth"],
    "Negatives": ["bad", "experiences", "rude", "dirty", "pushy", "crowded"],
    "Miscellaneous": ["nationality", "adjectives", "amazing", "beautiful", "great", "foreigners", "tourists"],
}
POSITIVE = ["amazing", "beautiful", "stunning", "lovely", "wonderful", "fantastic", "impressive", "excellent", "great", "good", "nice", "clean", "friendly", "helpful", "easy"]
NEGATIVE = ["awful", "terrible", "horrible", "dirty", "rude", "pushy", "crowded", "overpriced", "disappointing", "slow", "boring", "bad"]
FILLER = [
    "We went there with family.",
    "Our trip was in the summer.",
    "I came here two years ago with my brother.",
    "We spent about three hours there.",
    "My parents joined us on this trip.",
    "It was our second visit.",
]
TEMPLATES = [
    "The {n} was {a}.",
    "The {n} is {a} and the {n2} was {a2}.",
    "Really {a} {n}!",
    "We found the {n} {a}, but the {n2} was {b}.",
    "Honestly the {n} was not {a}.",
    "The {n} here is {a}.",
    "A {a} {n} and a {a2} {n2}.",
    "If you go, the {n} is {a}.",
]


def sentence(rng):
    aspect = rng.choice(sorted(NOUNS))
    n, n2 = rng.sample(NOUNS[aspect], 2)
    positive = rng.random() < 0.65
    pool, other = (POSITIVE, NEGATIVE) if positive else (NEGATIVE, POSITIVE)
    a, a2 = rng.sample(pool, 2)
    s = rng.choice(TEMPLATES).format(n=n, n2=n2, a=a, a2=a2, b=rng.choice(other))
    return s[0].upper() + s[1:]


def review_text(rng, k):
    parts = [sentence(rng) for _ in range(k)]
    if rng.random() < 0.3:
        parts.insert(rng.randrange(len(parts) + 1), rng.choice(FILLER))
    return " ".join(parts)


def desk(rng):
    rows = []
    for place, count in [("taj-mahal", 40), ("petra", 38)]:
        for i in range(count):
            rows.append({
                "id": f"{place}-{i:03d}",
                "place": place,
                "text": review_text(rng, rng.choice([1, 2, 2, 3])),
                "rating": rng.randint(1, 5),
                "likes": int(rng.paretovariate(1.3)) - 1,
                "username": f"traveller{rng.randrange(10_000)}",
                "gender": rng.choice("FFMMU"),
                "country": rng.choice(["India", "Jordan", "UK", "USA", "Brazil", None]),
            })
    # a verbatim duplicate sentence across reviews
    rows[3]["text"] += " Amazing monument!"
    rows[47]["text"] += " Amazing monument!"
    return rows


def vectors(rng, dim=16):
    def unit():
        v = [rng.gauss(0, 1) for _ in range(dim)]
        norm = math.sqrt(sum(x * x for x in v))
        return [x / norm for x in v]

    centroids = {a: unit() for a in sorted(set(NOUNS) | set(CATALOG_ONLY))}
    table = {}
    for a in sorted(centroids):
        for w in NOUNS.get(a, []) + CATALOG_ONLY.get(a, []):
            if w in table:
                continue
            noise = unit()
            table[w] = [c + 0.35 * e for c, e in zip(centroids[a], noise)]
    generic = set(POSITIVE + NEGATIVE)
    for line in FILLER + TEMPLATES:
        for w in line.lower().replace(".", " ").replace(",", " ").replace("!", " ").split():
            if w.isalpha():
                generic.add(w)
    for w in sorted(generic - set(table)):
        table[w] = [0.3 * x for x in unit()]
    return table


def table1(rng):
    counts = [
        ("colosseum", 492, 508),
        ("christ-the-redeemer", 445, 555),
        ("machu-picchu", 456, 544),
        ("petra", 439, 561),
        ("taj-mahal", 398, 602),
        ("chichen-itza", 482, 518),
        ("great-wall", 452, 548),
    ]
    rows = []
    for place, female, male in counts:
        genders = ["F"] * female + ["M"] * male
        rng.shuffle(genders)
        for i, g in enumerate(genders):
            rows.append({
                "id": f"{place}-{i:04d}",
                "place": place,
                "text": review_text(rng, 1),
                "rating": rng.randint(1, 5),
                "likes": int(rng.paretovariate(1.2)) - 1,
                "username": f"u{rng.randrange(100_000)}",
                "gender": g,
            })
    return rows


def write_jsonl(path, rows):
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r, sort_keys=True) + "\n")


def main():
    write_jsonl(HERE / "desk" / "reviews.jsonl", desk(random.Random(7)))
    with open(HERE / "desk" / "vectors.txt", "w") as f:
        table = vectors(random.Random(11))
        f.write(f"{len(table)} 16\n")
        for w in sorted(table):
            f.write(w + " " + " ".join(f"{x:.5f}" for x in table[w]) + "\n")
    write_jsonl(HERE / "seven-places" / "reviews.jsonl", table1(random.Random(1000)))


if __name__ == "__main__":
    main()
