"""Data model, ingestion and preprocessing for emotion-labeled post corpora.

A corpus is a JSON Lines file with one record per line:

    {"id": "...", "text": "...", "source": "...", "meta": {...}, "labels": [0/1 x 11]}

``source``, ``meta`` and ``labels`` are optional depending on the schema.
Labels are fixed-order binary vectors over the eleven-emotion label set in
:data:`EMOTION_LABELS`; "neutral or no emotion" is the all-zeros vector.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

__all__ = [
    "EMOTION_LABELS",
    "CorpusError",
    "Post",
    "EmotionVector",
    "LabeledPost",
    "TokenizedPost",
    "EmotionMapping",
    "SELF_REPORT_MAPPING",
    "load_corpus",
    "write_corpus",
    "record_to_json",
    "binarize_rating",
    "map_emotion",
    "normalize_text",
    "tokenize",
    "detokenize",
    "enforce_max_length",
    "load_stopwords",
    "default_stopwords",
]

EMOTION_LABELS = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "love",
    "optimism",
    "pessimism",
    "sadness",
    "surprise",
    "trust",
)

N_LABELS = len(EMOTION_LABELS)

# Word tokens, or single non-word non-space characters (punctuation).
_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)

# Punctuation that attaches to the preceding token when detokenizing.
_NO_SPACE_BEFORE = frozenset(".,!?;:")


class CorpusError(ValueError):
    """Raised for malformed corpus files or records."""


@dataclass(frozen=True)
class Post:
    """A raw text unit (title and body already concatenated)."""

    id: str
    text: str
    source: str | None = None
    meta: dict[str, str] | None = None

    def __post_init__(self):
        if not self.id:
            raise CorpusError("post id must be non-empty")
        if not self.text or not self.text.strip():
            raise CorpusError(f"post {self.id!r}: text empty after whitespace normalization")


@dataclass(frozen=True)
class EmotionVector:
    """Fixed-order scores over the eleven emotion labels, each in [0, 1]."""

    scores: tuple[float, ...]

    def __post_init__(self):
        if len(self.scores) != N_LABELS:
            raise CorpusError(f"expected {N_LABELS} scores, got {len(self.scores)}")
        for i, s in enumerate(self.scores):
            if not 0.0 <= s <= 1.0:
                raise CorpusError(f"score for {EMOTION_LABELS[i]!r} out of [0, 1]: {s}")

    @property
    def is_binary(self) -> bool:
        return all(s in (0.0, 1.0) for s in self.scores)

    def active_labels(self) -> frozenset[str]:
        """Labels whose score is exactly 1 (meaningful for binary vectors)."""
        return frozenset(EMOTION_LABELS[i] for i, s in enumerate(self.scores) if s == 1.0)

    @classmethod
    def zeros(cls) -> "EmotionVector":
        return cls(scores=(0.0,) * N_LABELS)

    @classmethod
    def from_labels(cls, names) -> "EmotionVector":
        names = set(names)
        unknown = names - set(EMOTION_LABELS)
        if unknown:
            raise CorpusError(f"unknown emotion labels: {sorted(unknown)}")
        return cls(scores=tuple(1.0 if name in names else 0.0 for name in EMOTION_LABELS))


@dataclass(frozen=True)
class LabeledPost:
    """A post paired with a binary emotion vector."""

    post: Post
    labels: EmotionVector

    def __post_init__(self):
        if not self.labels.is_binary:
            raise CorpusError(f"post {self.post.id!r}: labels must be binarized")


@dataclass(frozen=True)
class TokenizedPost:
    """Lowercased word/punctuation tokens with a functional-token mask.

    ``is_functional[i]`` is True when token i is a stopword or punctuation;
    content words carry False.
    """

    post_id: str
    tokens: tuple[str, ...]
    is_functional: tuple[bool, ...]

    def __post_init__(self):
        if len(self.tokens) < 1:
            raise CorpusError("tokenized post must contain at least one token")
        if len(self.tokens) != len(self.is_functional):
            raise CorpusError("tokens and is_functional must have equal length")

    def content_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.is_functional) if not f]


@dataclass(frozen=True)
class EmotionMapping:
    """Mapping from source-corpus emotion names to the canonical label set."""

    pairs: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        bad = {t for t in self.pairs.values() if t not in EMOTION_LABELS}
        if bad:
            raise CorpusError(f"mapping targets outside the label set: {sorted(bad)}")
        if len(set(self.pairs.values())) != len(self.pairs):
            raise CorpusError("mapping must be injective on in-scope entries")


# Self-report emotion names mapped onto the canonical label set.  Names
# with no counterpart (lonely, calm, stressed, ...) are deliberately absent
# and map to None.
SELF_REPORT_MAPPING = EmotionMapping(
    pairs={
        "angry": "anger",
        "excited": "anticipation",
        "disgusted": "disgust",
        "afraid": "fear",
        "happy": "joy",
        "hopeful": "optimism",
        "despaired": "pessimism",
        "sad": "sadness",
        "surprised": "surprise",
    }
)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a stopword file: one token per line, '#' comments allowed."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The English stopword list shipped with the package."""
    ref = resources.files("emoaug").joinpath("data/stopwords.txt")
    words = set()
    for line in ref.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def normalize_text(text: str) -> str:
    """Lowercase, NFKC-normalize, and space-separate word/punctuation tokens."""
    normalized = unicodedata.normalize("NFKC", text).lower()
    return " ".join(_TOKEN_RE.findall(normalized))


def tokenize(text: str, post_id: str = "", stopwords: frozenset[str] | None = None) -> TokenizedPost:
    """Split text into lowercased tokens with punctuation detached.

    Functional tokens are stopwords and punctuation; everything else is a
    content token eligible for masking.  Raises :class:`CorpusError` when the
    text is empty after normalization.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    normalized = unicodedata.normalize("NFKC", text).lower()
    tokens = _TOKEN_RE.findall(normalized)
    if not tokens:
        raise CorpusError("text empty after normalization")
    is_functional = tuple(
        tok in stopwords or not any(ch.isalnum() or ch == "_" for ch in tok) for tok in tokens
    )
    return TokenizedPost(post_id=post_id, tokens=tuple(tokens), is_functional=is_functional)


def detokenize(tokens) -> str:
    """Join tokens with spaces, reattaching sentence punctuation (.,!?;:)."""
    tokens = list(tokens)
    if not tokens:
        raise CorpusError("cannot detokenize an empty token list")
    parts = [tokens[0]]
    for tok in tokens[1:]:
        if tok in _NO_SPACE_BEFORE:
            parts.append(tok)
        else:
            parts.append(" " + tok)
    return "".join(parts)


def enforce_max_length(tp: TokenizedPost, max_tokens: int = 512) -> bool:
    """Return True when the post fits the token budget (boundary inclusive)."""
    if max_tokens < 1:
        raise ValueError(f"max_tokens must be >= 1, got {max_tokens}")
    return len(tp.tokens) <= max_tokens


def binarize_rating(rating: int, threshold: int = 4) -> int:
    """Convert a 1-10 self-report rating to 0/1 at the given threshold."""
    if not isinstance(rating, int) or isinstance(rating, bool):
        raise CorpusError(f"rating must be an integer, got {rating!r}")
    if not 1 <= rating <= 10:
        raise CorpusError(f"rating out of range 1..10: {rating}")
    return 1 if rating >= threshold else 0


def map_emotion(name: str, mapping: EmotionMapping = SELF_REPORT_MAPPING) -> str | None:
    """Map a source emotion name to its canonical label, or None if out of scope."""
    return mapping.pairs.get(name.strip().lower())


def _parse_labels(raw, line_no: int) -> EmotionVector:
    if not isinstance(raw, list) or len(raw) != N_LABELS:
        raise CorpusError(f"line {line_no}: labels must be a list of {N_LABELS} binary values")
    values = []
    for v in raw:
        if v not in (0, 1, 0.0, 1.0):
            raise CorpusError(f"line {line_no}: labels must contain only 0 or 1, got {v!r}")
        values.append(float(v))
    return EmotionVector(scores=tuple(values))


def _parse_record(obj, line_no: int, schema: str):
    if not isinstance(obj, dict):
        raise CorpusError(f"line {line_no}: record must be a JSON object")
    post_id = obj.get("id")
    text = obj.get("text")
    if not isinstance(post_id, str) or not post_id:
        raise CorpusError(f"line {line_no}: missing or empty 'id'")
    if not isinstance(text, str):
        raise CorpusError(f"line {line_no}: missing 'text'")
    source = obj.get("source")
    if source is not None and not isinstance(source, str):
        raise CorpusError(f"line {line_no}: 'source' must be a string")
    meta = obj.get("meta")
    if meta is not None and not (
        isinstance(meta, dict) and all(isinstance(k, str) and isinstance(v, str) for k, v in meta.items())
    ):
        raise CorpusError(f"line {line_no}: 'meta' must be a string-to-string map")
    try:
        post = Post(id=post_id, text=text, source=source, meta=meta)
    except CorpusError as exc:
        raise CorpusError(f"line {line_no}: {exc}") from None
    if schema == "posts":
        return post
    if "labels" not in obj:
        raise CorpusError(f"line {line_no}: labeled schema requires 'labels'")
    return LabeledPost(post=post, labels=_parse_labels(obj["labels"], line_no))


def load_corpus(path: str | Path, schema: str = "posts"):
    """Load a JSONL corpus, returning Posts or LabeledPosts in file order.

    Raises :class:`CorpusError` naming the 1-based line number for malformed
    lines, and naming both occurrences for duplicate ids.
    """
    if schema not in ("posts", "labeled"):
        raise ValueError(f"schema must be 'posts' or 'labeled', got {schema!r}")
    records = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {line_no}: invalid JSON: {exc.msg}") from None
            record = _parse_record(obj, line_no, schema)
            post_id = record.id if isinstance(record, Post) else record.post.id
            if post_id in seen:
                raise CorpusError(
                    f"duplicate id {post_id!r} at lines {seen[post_id]} and {line_no}"
                )
            seen[post_id] = line_no
            records.append(record)
    return records


def _record_dict(record) -> dict:
    if isinstance(record, LabeledPost):
        out = _record_dict(record.post)
        out["labels"] = [int(s) for s in record.labels.scores]
        return out
    out = {"id": record.id, "text": record.text}
    if record.source is not None:
        out["source"] = record.source
    if record.meta is not None:
        out["meta"] = record.meta
    return out


def record_to_json(record) -> str:
    """Canonical single-line JSON for a Post or LabeledPost."""
    return json.dumps(_record_dict(record), ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_corpus(path: str | Path, records) -> int:
    """Write records as canonical JSONL; returns the number written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        count = 0
        for record in records:
            fh.write(record_to_json(record) + "\n")
            count += 1
    return count
