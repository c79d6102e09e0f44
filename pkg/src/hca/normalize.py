"""Text normalization: casing, notation stripping, stop words, elongation, slang.

The stages run in a fixed order::

    to_uniform_case -> strip_notations -> tokenize -> remove_stopwords
        -> compress_elongation -> expand_slang
"""
import itertools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .errors import InputFileError, ParseError, ValidationError

REQUIRED_STOPWORDS = frozenset({"is", "are", "am"})
URL_PREFIXES = ("http://", "https://", "www.")
RETWEET = "rt"


@dataclass(frozen=True)
class NormalizeConfig:
    stopwords: FrozenSet[str] = frozenset(REQUIRED_STOPWORDS)
    slang: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    reference_vocab: FrozenSet[str] = frozenset()
    emoticon_patterns: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "reference_vocab", frozenset(self.reference_vocab))
        object.__setattr__(
            self, "emoticon_patterns", tuple(dict.fromkeys(p.lower() for p in self.emoticon_patterns))
        )
        object.__setattr__(
            self, "slang", {k: tuple(v) for k, v in self.slang.items()}
        )
        self.validate()

    def validate(self):
        missing = REQUIRED_STOPWORDS - self.stopwords
        if missing:
            raise ValidationError(f"stopwords must include {sorted(missing)}")
        for key, repl in self.slang.items():
            if not key or key != key.lower():
                raise ValidationError(f"slang key {key!r} must be non-empty lowercase")
            if key in repl:
                raise ValidationError(f"slang key {key!r} expands to itself")
            chained = [w for w in repl if w in self.slang]
            if chained:
                raise ValidationError(
                    f"slang key {key!r} expands to other slang key(s) {chained}"
                )

    @property
    def emoticon_set(self) -> FrozenSet[str]:
        return frozenset(self.emoticon_patterns)


# ----------------------------------------------------------------------
# resource files


def _read_lines(path) -> List[Tuple[int, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    return [(i, line.rstrip("\r\n")) for i, line in enumerate(text.splitlines(), start=1)]


def load_wordlist(path, comments: bool = True) -> List[str]:
    """One entry per line; blank lines skipped, '#' lines skipped when `comments`."""
    words = []
    for _, line in _read_lines(path):
        item = line.strip()
        if not item or (comments and item.startswith("#")):
            continue
        words.append(item)
    return words


def load_slang(path) -> Dict[str, Tuple[str, ...]]:
    slang = {}
    for line_no, line in _read_lines(path):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].split():
            raise ParseError(path, line_no, "expected 'key<TAB>replacement words'")
        key = parts[0].strip().lower()
        if key in slang:
            raise ParseError(path, line_no, f"duplicate slang key {key!r}")
        slang[key] = tuple(w.lower() for w in parts[1].split())
    return slang


def default_resource(name: str) -> Path:
    return Path(str(resources.files("hca") / "data" / name))


def load_config(
    stopwords=None, slang=None, reference_vocab=None, emoticons=None
) -> NormalizeConfig:
    """Build a config from resource files; any path left as None uses the shipped default."""
    stop = load_wordlist(stopwords or default_resource("stopwords.txt"))
    sl = load_slang(slang or default_resource("slang.tsv"))
    vocab = load_wordlist(reference_vocab or default_resource("reference_vocab.txt"))
    emo = load_wordlist(emoticons or default_resource("emoticons.txt"), comments=False)
    return NormalizeConfig(
        stopwords=frozenset(w.lower() for w in stop),
        slang=sl,
        reference_vocab=frozenset(w.lower() for w in vocab),
        emoticon_patterns=tuple(emo),
    )


# ----------------------------------------------------------------------
# stages


def to_uniform_case(text: str) -> str:
    return text.lower()


def _is_notation(token: str, emoticons) -> bool:
    return (
        token.startswith(("#", "@"))
        or token == RETWEET
        or token.startswith(URL_PREFIXES)
        or token in emoticons
    )


def strip_notations(text: str, cfg: NormalizeConfig) -> str:
    """Drop hashtag, mention, RT, URL and emoticon tokens (whitespace-delimited)."""
    emoticons = cfg.emoticon_set
    return " ".join(t for t in text.split() if not _is_notation(t, emoticons))


def _strip_edges(token: str) -> str:
    start, end = 0, len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end]


def tokenize(text: str) -> List[str]:
    """Whitespace split, then trim non-alphanumeric characters at both ends.

    Tokens that still carry notation residue ('#', '@', '://', a 'www.'
    prefix, or a bare 'rt' once punctuation is trimmed) are dropped, e.g.
    "(@bob)" or "rt:".
    """
    out = []
    for raw in text.split():
        if "#" in raw or "@" in raw or "://" in raw:
            continue
        tok = _strip_edges(raw)
        if not tok or tok == RETWEET or tok.startswith("www."):
            continue
        out.append(tok)
    return out


def remove_stopwords(tokens: Sequence[str], stopwords) -> List[str]:
    return [t for t in tokens if t not in stopwords]


def _letter_runs(token: str) -> List[Tuple[int, int]]:
    """(start, end) spans of maximal runs of >= 3 identical letters."""
    runs = []
    for _, group in itertools.groupby(enumerate(token), key=lambda p: p[1]):
        group = list(group)
        if len(group) >= 3 and group[0][1].isalpha():
            runs.append((group[0][0], group[-1][0] + 1))
    return runs


def _rebuild(token: str, runs, lengths) -> str:
    parts, pos = [], 0
    for (start, end), n in zip(runs, lengths):
        parts.append(token[pos:start])
        parts.append(token[start] * n)
        pos = end
    parts.append(token[pos:])
    return "".join(parts)


def compress_elongation(token: str, reference_vocab) -> str:
    """Shrink every run of 3+ identical letters to 2 or 1 letters.

    Candidate lengths are enumerated jointly over all runs, 2 before 1 and
    leftmost run varying slowest; the first candidate found in
    `reference_vocab` wins. Without a hit every run shrinks to one letter.

    >>> compress_elongation("happyyy", {"happy"})
    'happy'
    >>> compress_elongation("cooool", {"cool"})
    'cool'
    """
    runs = _letter_runs(token)
    if not runs:
        return token
    # 2^k candidates; k is tiny for real tokens but unbounded for adversarial input
    if len(runs) <= 12:
        for lengths in itertools.product((2, 1), repeat=len(runs)):
            candidate = _rebuild(token, runs, lengths)
            if candidate in reference_vocab:
                return candidate
    return _rebuild(token, runs, (1,) * len(runs))


def expand_slang(tokens: Sequence[str], slang: Mapping[str, Sequence[str]]) -> List[str]:
    out = []
    for tok in tokens:
        repl = slang.get(tok)
        if repl is None:
            out.append(tok)
        else:
            out.extend(repl)
    return out


@dataclass(frozen=True)
class NormalizedDoc:
    id: str
    tokens: Tuple[str, ...]
    label: Optional[str] = None

    def to_json(self) -> dict:
        out = {"id": self.id, "tokens": list(self.tokens)}
        if self.label is not None:
            out["label"] = self.label
        return out


def normalize_text(text: str, cfg: NormalizeConfig) -> List[str]:
    text = to_uniform_case(text)
    text = strip_notations(text, cfg)
    tokens = remove_stopwords(tokenize(text), cfg.stopwords)
    tokens = [compress_elongation(t, cfg.reference_vocab) for t in tokens]
    # compression can land on a stop word ("isss" -> "is")
    tokens = remove_stopwords(tokens, cfg.stopwords)
    return [t for t in expand_slang(tokens, cfg.slang) if t]


def normalize(rec, cfg: NormalizeConfig) -> NormalizedDoc:
    """Normalize one TweetRecord into a NormalizedDoc (gold label carried along)."""
    return NormalizedDoc(rec.id, tuple(normalize_text(rec.text, cfg)), getattr(rec, "label", None))
