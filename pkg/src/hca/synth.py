"""Synthetic planted-category corpora with known ground truth.

Each category owns a disjoint pool of pseudo-words. Every post draws its
content words from its own pool plus a few shared noise words, so the
planted category is the correct answer by construction. The synonym graph
ties every pool word to one of the category's seeds within two hops.
"""
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import yaml

from .lexicon import PERK, PROBLEM, SYNONYM, CategorySpec, SynonymGraph, dump_graph, dump_specs
from .normalize import load_config

CATEGORY_NAMES = (
    ("exam-stress", PROBLEM),
    ("heavy-workload", PROBLEM),
    ("sleep-deprivation", PROBLEM),
    ("lab-equipment", PROBLEM),
    ("placement-anxiety", PROBLEM),
    ("learning-joy", PERK),
)
HASHTAG_FOR = {PROBLEM: "#engineeringProblems", PERK: "#engineeringPerks"}
_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
_EMOTICONS = (":(", ":)", ":D", "<3", ":/")


@dataclass
class PlantedCorpus:
    specs: List[CategorySpec]
    graph: SynonymGraph
    pools: Dict[str, List[str]]
    noise: List[str]
    records: List[dict] = field(default_factory=list)

    def write(self, directory) -> Dict[str, Path]:
        """Write dataset.jsonl, categories.tsv, synonyms.tsv and config.yaml."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = {
            "dataset": directory / "dataset.jsonl",
            "categories": directory / "categories.tsv",
            "synonyms": directory / "synonyms.tsv",
            "config": directory / "config.yaml",
        }
        with open(paths["dataset"], "w", encoding="utf-8", newline="\n") as fh:
            for rec in self.records:
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        paths["categories"].write_text(dump_specs(self.specs), encoding="utf-8")
        paths["synonyms"].write_text(dump_graph(self.graph), encoding="utf-8")
        config = {
            "dataset": "dataset.jsonl",
            "categories": "categories.tsv",
            "synonyms": "synonyms.tsv",
            "hashtags": ["engineeringproblems", "engineeringperks"],
        }
        paths["config"].write_text(yaml.safe_dump(config, sort_keys=True), encoding="utf-8")
        return paths


def _pseudo_words(rng: random.Random, count: int, banned) -> List[str]:
    words, seen = [], set(banned)
    while len(words) < count:
        n_syll = rng.randint(2, 3)
        word = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(n_syll))
        if rng.random() < 0.5:
            word += rng.choice(_CONSONANTS)
        if word in seen or any(a == b for a, b in zip(word, word[1:])):
            continue
        seen.add(word)
        words.append(word)
    return words


def _decorate(rng: random.Random, word: str) -> str:
    """Surface noise that normalization must undo: casing and elongation."""
    roll = rng.random()
    if roll < 0.1:
        return word.upper()
    if roll < 0.2:
        return word.capitalize()
    if roll < 0.3:
        return word + word[-1] * rng.randint(2, 4)
    return word


def generate(
    n_per_category: int = 200,
    pool_size: int = 30,
    n_seeds: int = 3,
    n_noise: int = 40,
    words_per_post: Tuple[int, int] = (4, 8),
    noise_per_post: Tuple[int, int] = (0, 3),
    seed: int = 7,
    categories: Sequence[Tuple[str, str]] = CATEGORY_NAMES,
) -> PlantedCorpus:
    rng = random.Random(seed)
    ncfg = load_config()
    banned = set(ncfg.stopwords) | set(ncfg.slang) | set(ncfg.reference_vocab) | {"rt"}
    all_words = _pseudo_words(rng, pool_size * len(categories) + n_noise, banned)
    pools = {
        name: all_words[i * pool_size:(i + 1) * pool_size]
        for i, (name, _) in enumerate(categories)
    }
    noise = all_words[pool_size * len(categories):]

    graph = SynonymGraph()
    specs = []
    for name, polarity in categories:
        pool = pools[name]
        seeds, rest = pool[:n_seeds], pool[n_seeds:]
        half = (len(rest) + 1) // 2
        near, far = rest[:half], rest[half:]
        for i, word in enumerate(near):
            graph.add_edge(seeds[i % n_seeds], word, SYNONYM)
        for i, word in enumerate(far):
            graph.add_edge(near[i % len(near)], word, SYNONYM)
        specs.append(CategorySpec(name, polarity, frozenset(seeds)))

    records = []
    order = [(name, pol) for name, pol in categories for _ in range(n_per_category)]
    rng.shuffle(order)
    for i, (name, polarity) in enumerate(order):
        k = rng.randint(*words_per_post)
        words = [_decorate(rng, w) for w in rng.choices(pools[name], k=k)]
        words += rng.sample(noise, rng.randint(*noise_per_post))
        rng.shuffle(words)
        parts = []
        if rng.random() < 0.3:
            parts += ["RT", f"@user{rng.randint(1, 999)}"]
        parts += words
        parts.append(HASHTAG_FOR[polarity])
        if rng.random() < 0.2:
            parts.append(f"http://t.co/{rng.randint(10000, 99999)}")
        if rng.random() < 0.2:
            parts.append(rng.choice(_EMOTICONS))
        records.append({"id": f"p{i:05d}", "text": " ".join(parts), "label": name})
    return PlantedCorpus(specs, graph, pools, noise, records)
