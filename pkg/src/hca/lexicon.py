"""Seed expansion over a synonym/antonym graph and corpus-hit weak labeling."""
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import InputFileError, ParseError, ValidationError

PROBLEM = "problem"
PERK = "perk"
POLARITIES = (PROBLEM, PERK)
SYNONYM = "synonym"
ANTONYM = "antonym"
EDGE_KINDS = (SYNONYM, ANTONYM)

DEFAULT_MAX_DEPTH = 2


@dataclass(frozen=True)
class CategorySpec:
    name: str
    polarity: str
    seeds: FrozenSet[str]
    counterpart: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "seeds", frozenset(self.seeds))
        if not self.name:
            raise ValidationError("category name must be non-empty")
        if self.polarity not in POLARITIES:
            raise ValidationError(f"category {self.name!r}: polarity must be one of {POLARITIES}")
        if not self.seeds:
            raise ValidationError(f"category {self.name!r} has no seed words")
        bad = [s for s in self.seeds if not s or s != s.lower()]
        if bad:
            raise ValidationError(f"category {self.name!r}: seeds must be lowercase, got {bad}")


def validate_specs(specs: Sequence[CategorySpec]) -> Dict[str, CategorySpec]:
    if not specs:
        raise ValidationError("at least one category spec is required")
    by_name = {}
    for spec in specs:
        if spec.name in by_name:
            raise ValidationError(f"duplicate category name {spec.name!r}")
        by_name[spec.name] = spec
    for spec in specs:
        if spec.counterpart is None:
            continue
        other = by_name.get(spec.counterpart)
        if other is None:
            raise ValidationError(
                f"category {spec.name!r} names missing counterpart {spec.counterpart!r}"
            )
        if other.polarity == spec.polarity:
            raise ValidationError(
                f"category {spec.name!r} and counterpart {other.name!r} share polarity {spec.polarity}"
            )
    return by_name


class SynonymGraph:
    """Undirected word graph with synonym/antonym labeled edges."""

    def __init__(self, edges: Iterable[Tuple[str, str, str]] = (), nodes: Iterable[str] = ()):
        self.nodes: Set[str] = set(nodes)
        self._adj: Dict[str, Dict[str, str]] = {}
        for a, b, kind in edges:
            self.add_edge(a, b, kind)

    def add_edge(self, a: str, b: str, kind: str) -> None:
        if kind not in EDGE_KINDS:
            raise ValidationError(f"edge kind must be one of {EDGE_KINDS}, got {kind!r}")
        if a == b:
            raise ValidationError(f"self-loop on {a!r}")
        existing = self._adj.get(a, {}).get(b)
        if existing is not None:
            if existing != kind:
                raise ValidationError(f"conflicting edges between {a!r} and {b!r}")
            return
        self.nodes.update((a, b))
        self._adj.setdefault(a, {})[b] = kind
        self._adj.setdefault(b, {})[a] = kind

    def neighbors(self, word: str) -> List[Tuple[str, str]]:
        """(neighbor, kind) pairs sorted by neighbor for a stable traversal order."""
        return sorted(self._adj.get(word, {}).items())

    @property
    def edges(self) -> Set[Tuple[str, str, str]]:
        return {(a, b, k) for a, nb in self._adj.items() for b, k in nb.items() if a < b}

    def __len__(self):
        return len(self.nodes)


def expand_seeds(
    spec: CategorySpec,
    specs: Sequence[CategorySpec],
    graph: SynonymGraph,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Set[Tuple[str, str, int]]:
    """Breadth-first growth of `spec.seeds` through the graph.

    Synonym edges stay in the category and keep expanding. An antonym edge
    claims its neighbor for the counterpart category one level deeper and
    stops there; with no counterpart it is ignored. Every (word, category)
    pair is reported once, at its smallest depth.
    """
    if max_depth < 0:
        raise ValidationError(f"max_depth must be >= 0, got {max_depth}")
    del specs  # counterpart is stored on the spec itself; kept for interface symmetry
    depth = {seed: 0 for seed in spec.seeds}
    flipped: Dict[str, int] = {}
    queue = deque(sorted(spec.seeds))
    while queue:
        word = queue.popleft()
        d = depth[word]
        if d >= max_depth:
            continue
        for nb, kind in graph.neighbors(word):
            if kind == SYNONYM:
                if nb not in depth:
                    depth[nb] = d + 1
                    queue.append(nb)
            elif spec.counterpart is not None and nb not in flipped:
                flipped[nb] = d + 1
    out = {(w, spec.name, d) for w, d in depth.items()}
    out.update((w, spec.counterpart, d) for w, d in flipped.items())
    return out


@dataclass
class CategoryCorpus:
    entries: Dict[str, Tuple[str, int]] = field(default_factory=dict)
    conflicts: List[str] = field(default_factory=list)

    def category_of(self, word: str) -> Optional[str]:
        hit = self.entries.get(word)
        return hit[0] if hit else None

    def words(self, category: str) -> List[str]:
        return sorted(w for w, (c, _) in self.entries.items() if c == category)

    def restrict(self, vocabulary) -> "CategoryCorpus":
        keep = {w: e for w, e in self.entries.items() if w in vocabulary}
        return CategoryCorpus(keep, list(self.conflicts))

    def dump(self) -> str:
        return "".join(f"{w}\t{c}\t{d}\n" for w, (c, d) in sorted(self.entries.items()))


def build_corpus(
    specs: Sequence[CategorySpec], graph: SynonymGraph, max_depth: int = DEFAULT_MAX_DEPTH
) -> CategoryCorpus:
    """Merge every category's expansion into one disjoint word -> category map.

    The claim with the smallest depth wins; words claimed at the same
    smallest depth by different categories are left out and listed in
    `conflicts`.
    """
    validate_specs(specs)
    best: Dict[str, Tuple[int, Set[str]]] = {}
    for spec in specs:
        for word, cat, d in expand_seeds(spec, specs, graph, max_depth):
            cur = best.get(word)
            if cur is None or d < cur[0]:
                best[word] = (d, {cat})
            elif d == cur[0]:
                cur[1].add(cat)
    entries, conflicts = {}, []
    for word, (d, cats) in best.items():
        if len(cats) == 1:
            entries[word] = (next(iter(cats)), d)
        else:
            conflicts.append(word)
    return CategoryCorpus(entries, sorted(conflicts))


def score(tokens: Sequence[str], corpus: CategoryCorpus, categories: Sequence[str] = ()) -> Dict[str, int]:
    """Corpus hits per category, counted with multiplicity.

    Every name in `categories` is present in the result, zero or not.
    """
    out = {c: 0 for c in categories}
    for tok in tokens:
        cat = corpus.category_of(tok)
        if cat is not None:
            out[cat] = out.get(cat, 0) + 1
    return out


@dataclass(frozen=True)
class WeakLabel:
    doc_id: str
    category: Optional[str]  # None means unlabeled
    scores: Mapping[str, int]

    @property
    def labeled(self) -> bool:
        return self.category is not None

    def to_json(self) -> dict:
        return {"id": self.doc_id, "category": self.category, "scores": dict(self.scores)}


def weak_label(doc, corpus: CategoryCorpus, spec_order: Sequence[str]) -> WeakLabel:
    """Argmax of corpus hits; ties go to the category listed first."""
    scores = score(doc.tokens, corpus, spec_order)
    extra = set(scores) - set(spec_order)
    if extra:
        raise ValidationError(f"spec_order is missing corpus categories {sorted(extra)}")
    best, best_score = None, 0
    for name in spec_order:
        if scores[name] > best_score:
            best, best_score = name, scores[name]
    return WeakLabel(doc.id, best, {c: scores[c] for c in spec_order})


# ----------------------------------------------------------------------
# file formats


def _lines(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.strip() and not line.startswith("#"):
            yield line_no, line


def load_specs(path) -> List[CategorySpec]:
    """`name<TAB>polarity<TAB>counterpart-or-"-"<TAB>seed words`."""
    specs = []
    for line_no, line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(path, line_no, "expected 4 tab-separated fields")
        name, polarity, counterpart, seeds = (p.strip() for p in parts)
        try:
            specs.append(
                CategorySpec(
                    name,
                    polarity,
                    frozenset(s.lower() for s in seeds.split()),
                    None if counterpart in ("", "-") else counterpart,
                )
            )
        except ValidationError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    validate_specs(specs)
    return specs


def load_graph(path) -> SynonymGraph:
    """`word1<TAB>word2<TAB>synonym|antonym`."""
    graph = SynonymGraph()
    for line_no, line in _lines(path):
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 3 or not parts[0] or not parts[1]:
            raise ParseError(path, line_no, "expected 'word1<TAB>word2<TAB>kind'")
        try:
            graph.add_edge(parts[0].lower(), parts[1].lower(), parts[2].lower())
        except ValidationError as exc:
            raise ParseError(path, line_no, str(exc)) from None
    return graph


def load_corpus(path) -> CategoryCorpus:
    entries = {}
    for line_no, line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(path, line_no, "expected 'word<TAB>category<TAB>depth'")
        try:
            entries[parts[0]] = (parts[1], int(parts[2]))
        except ValueError:
            raise ParseError(path, line_no, f"bad depth {parts[2]!r}") from None
    return CategoryCorpus(entries)


def dump_specs(specs: Sequence[CategorySpec]) -> str:
    return "".join(
        f"{s.name}\t{s.polarity}\t{s.counterpart or '-'}\t{' '.join(sorted(s.seeds))}\n"
        for s in specs
    )


def dump_graph(graph: SynonymGraph) -> str:
    return "".join(f"{a}\t{b}\t{k}\n" for a, b, k in sorted(graph.edges))


def label_distribution(labels: Iterable[WeakLabel], spec_order: Sequence[str]) -> Dict[str, int]:
    counts = Counter(l.category for l in labels if l.category is not None)
    return {c: counts.get(c, 0) for c in spec_order}
