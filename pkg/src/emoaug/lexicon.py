"""Static word embeddings, the strong-negative-emotion lexicon, and similarity scoring.

The embedding store is a plain-text table ("word v1 ... vd" per line).  The
affect lexicon provides valence/arousal/dominance scores per word; words with
low valence and high arousal form the strong-negative-emotion (SNE) set used
to bias mask-target selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LexiconError",
    "EmbeddingTable",
    "VadEntry",
    "SneLexicon",
    "load_embeddings",
    "load_vad_lexicon",
    "build_sne_lexicon",
    "cosine",
    "sne_affinity",
]

# Default affect thresholds for SNE membership; the scale is [0, 1].
DEFAULT_VALENCE_MAX = 0.3
DEFAULT_AROUSAL_MIN = 0.7


class LexiconError(ValueError):
    """Raised for malformed lexicon or embedding files."""


class EmbeddingTable:
    """Immutable word -> vector store; lookups of absent words return None."""

    def __init__(self, dim: int, vectors: dict[str, np.ndarray], duplicates_skipped: int = 0):
        if dim < 1:
            raise LexiconError(f"embedding dim must be >= 1, got {dim}")
        for word, vec in vectors.items():
            if vec.shape != (dim,):
                raise LexiconError(f"vector for {word!r} has length {vec.shape[0]}, expected {dim}")
        self.dim = dim
        self._vectors = {w: np.asarray(v, dtype=float) for w, v in vectors.items()}
        self.duplicates_skipped = duplicates_skipped

    def get(self, word: str) -> np.ndarray | None:
        return self._vectors.get(word)

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    @property
    def words(self):
        return self._vectors.keys()


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a text embedding table; duplicates keep the first occurrence."""
    vectors: dict[str, np.ndarray] = {}
    dim = None
    duplicates = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            word, values = parts[0], parts[1:]
            if dim is None:
                if not values:
                    raise LexiconError(f"line {line_no}: no vector values")
                dim = len(values)
            if len(values) != dim:
                raise LexiconError(f"line {line_no}: expected {dim} values, got {len(values)}")
            if word in vectors:
                duplicates += 1
                continue
            try:
                vectors[word] = np.array([float(v) for v in values])
            except ValueError:
                raise LexiconError(f"line {line_no}: non-numeric vector value") from None
    if not vectors:
        raise LexiconError("no vectors")
    return EmbeddingTable(dim=dim, vectors=vectors, duplicates_skipped=duplicates)


@dataclass(frozen=True)
class VadEntry:
    """Valence/arousal/dominance scores for one word, each in [0, 1]."""

    word: str
    valence: float
    arousal: float
    dominance: float

    def __post_init__(self):
        for name in ("valence", "arousal", "dominance"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise LexiconError(f"{self.word!r}: {name} out of [0, 1]: {value}")


def load_vad_lexicon(path: str | Path, scale: str = "unit") -> list[VadEntry]:
    """Load a VAD lexicon (tab- or comma-separated, with header).

    ``scale="unit"`` expects values already in [0, 1]; ``scale="1-9"``
    normalizes each score by (x - 1) / 8.
    """
    if scale not in ("unit", "1-9"):
        raise ValueError(f"scale must be 'unit' or '1-9', got {scale!r}")
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise LexiconError("empty VAD lexicon")
    delim = "\t" if "\t" in lines[0] else ","
    header = [h.strip().lower() for h in lines[0].split(delim)]
    try:
        cols = {name: header.index(name) for name in ("word", "valence", "arousal", "dominance")}
    except ValueError:
        raise LexiconError(f"VAD header must name word, valence, arousal, dominance; got {header}") from None
    entries = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = [p.strip() for p in line.split(delim)]
        if len(parts) < len(header):
            raise LexiconError(f"line {line_no}: expected {len(header)} fields, got {len(parts)}")
        try:
            v, a, d = (float(parts[cols[c]]) for c in ("valence", "arousal", "dominance"))
        except ValueError:
            raise LexiconError(f"line {line_no}: non-numeric score") from None
        if scale == "1-9":
            v, a, d = ((x - 1.0) / 8.0 for x in (v, a, d))
        entries.append(VadEntry(word=parts[cols["word"]].lower(), valence=v, arousal=a, dominance=d))
    return entries


@dataclass(frozen=True)
class SneLexicon:
    """Words with valence <= valence_max and arousal >= arousal_min at build time."""

    words: frozenset[str]
    valence_max: float
    arousal_min: float

    def __post_init__(self):
        if not self.words:
            raise LexiconError("SNE lexicon must be non-empty")


def build_sne_lexicon(
    vad,
    valence_max: float = DEFAULT_VALENCE_MAX,
    arousal_min: float = DEFAULT_AROUSAL_MIN,
) -> SneLexicon:
    """Select strong-negative-emotion words from a VAD lexicon."""
    for name, value in (("valence_max", valence_max), ("arousal_min", arousal_min)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    words = frozenset(e.word for e in vad if e.valence <= valence_max and e.arousal >= arousal_min)
    if not words:
        raise LexiconError(
            f"no words satisfy valence <= {valence_max} and arousal >= {arousal_min}; "
            "relax the thresholds"
        )
    return SneLexicon(words=words, valence_max=valence_max, arousal_min=arousal_min)


def cosine(u, v) -> float:
    """Cosine similarity of two equal-length vectors; zero vectors are rejected."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"vector length mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))


def sne_affinity(word: str, emb: EmbeddingTable, sne: SneLexicon) -> float:
    """Maximum cosine similarity of ``word`` to any in-vocabulary SNE word.

    Clamped below at 0 so the result is usable as a sampling weight.
    Out-of-vocabulary words and an empty SNE/vocabulary intersection score 0.
    """
    vec = emb.get(word)
    if vec is None:
        return 0.0
    best = None
    for sne_word in sne.words:
        sne_vec = emb.get(sne_word)
        if sne_vec is None:
            continue
        sim = cosine(vec, sne_vec)
        if best is None or sim > best:
            best = sim
    if best is None:
        return 0.0
    return max(0.0, best)
