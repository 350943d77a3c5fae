"""Provider interfaces for the three model roles, plus the operations over them.

Providers abstract fill-mask infilling, translation, and multi-label
classification so the pipeline can run against deterministic built-ins or a
remote inference service interchangeably.  Raw classifier scores are
pre-activation; the pipeline applies the hard sigmoid and a decision
threshold itself.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

from ..corpus import EMOTION_LABELS, Post
from ..masking import MASK_TOKEN, MaskedSentence

__all__ = [
    "ProviderError",
    "RetryableProviderError",
    "PermanentProviderError",
    "ProviderConfigError",
    "FillMaskCapability",
    "TranslationCapability",
    "ClassifierCapability",
    "FillMaskProvider",
    "TranslationProvider",
    "ClassifierProvider",
    "PredictionScores",
    "BackTranslation",
    "hard_sigmoid",
    "fill",
    "back_translate",
    "classify",
    "read_scores_jsonl",
    "write_scores_jsonl",
]


class ProviderError(Exception):
    """Base class for provider failures."""


class RetryableProviderError(ProviderError):
    """Transient failure; the call may be retried."""


class PermanentProviderError(ProviderError):
    """Non-retryable failure (contract violation, over-length input, 4xx)."""


class ProviderConfigError(ProviderError):
    """Provider wiring is wrong (e.g. translation language mismatch)."""


@dataclass(frozen=True)
class FillMaskCapability:
    name: str
    max_input_tokens: int = 512
    single_flight: bool = False


@dataclass(frozen=True)
class TranslationCapability:
    source_lang: str
    target_lang: str
    supports_sampling: bool = False
    single_flight: bool = False


@dataclass(frozen=True)
class ClassifierCapability:
    label_order: tuple[str, ...] = EMOTION_LABELS
    single_flight: bool = False


class FillMaskProvider(ABC):
    """Produces one replacement token per mask sentinel, in position order."""

    capability: FillMaskCapability

    @abstractmethod
    def replacements(self, masked: MaskedSentence) -> list[str]:
        """Replacement tokens for the masked positions, sorted by position."""


class TranslationProvider(ABC):
    """Total function from non-empty text to non-empty text.

    Providers whose capability sets ``supports_sampling`` may vary output by
    ``seed``; deterministic providers must ignore it.
    """

    capability: TranslationCapability

    @abstractmethod
    def translate(self, text: str, seed: int | None = None) -> str:
        """Translate text from the capability's source to its target language."""


class ClassifierProvider(ABC):
    """Returns one raw (pre-activation) confidence score per label."""

    capability: ClassifierCapability

    @abstractmethod
    def raw_scores(self, text: str) -> list[float]:
        """Raw scores in the capability's label order; any real values."""


def hard_sigmoid(x: float) -> float:
    """Piecewise-linear activation: max(0, min(1, (x + 1) / 2))."""
    return max(0.0, min(1.0, (x + 1.0) / 2.0))


@dataclass(frozen=True)
class PredictionScores:
    """Classifier output for one post: raw, activated, and thresholded scores."""

    post_id: str
    raw: tuple[float, ...]
    activated: tuple[float, ...]
    predicted: tuple[int, ...]
    decision_threshold: float = 0.5

    def __post_init__(self):
        n = len(EMOTION_LABELS)
        if not len(self.raw) == len(self.activated) == len(self.predicted) == n:
            raise ValueError(f"scores must have exactly {n} entries per field")
        for i, (r, a, p) in enumerate(zip(self.raw, self.activated, self.predicted)):
            if a != hard_sigmoid(r):
                raise ValueError(f"activated[{i}] != hard_sigmoid(raw[{i}])")
            if p != int(a >= self.decision_threshold):
                raise ValueError(f"predicted[{i}] inconsistent with threshold {self.decision_threshold}")

    def predicted_labels(self) -> frozenset[str]:
        return frozenset(EMOTION_LABELS[i] for i, p in enumerate(self.predicted) if p == 1)


@dataclass(frozen=True)
class BackTranslation:
    """Round-trip translation result with the pivot-language intermediate kept for audit."""

    source: str
    intermediate: str
    text: str


def fill(masked: MaskedSentence, provider: FillMaskProvider) -> tuple[str, ...]:
    """Complete a masked sentence, returning the full token list.

    Every sentinel is replaced by a non-empty, non-sentinel token; all other
    positions are returned unchanged.  Over-length input is a permanent
    error; unexpected provider exceptions surface as retryable.
    """
    positions = masked.mask_positions()
    if not positions:
        raise ValueError("masked sentence has no sentinels to fill")
    if len(masked.tokens) > provider.capability.max_input_tokens:
        raise PermanentProviderError(
            f"input of {len(masked.tokens)} tokens exceeds provider limit "
            f"{provider.capability.max_input_tokens}"
        )
    try:
        replacements = provider.replacements(masked)
    except ProviderError:
        raise
    except Exception as exc:
        raise RetryableProviderError(f"fill-mask provider failed: {exc}") from exc
    if len(replacements) != len(positions):
        raise PermanentProviderError(
            f"provider returned {len(replacements)} replacements for {len(positions)} masks"
        )
    completed = list(masked.tokens)
    for pos, token in zip(positions, replacements):
        if not isinstance(token, str) or not token or token == MASK_TOKEN:
            raise PermanentProviderError(f"invalid replacement token {token!r} at position {pos}")
        completed[pos] = token
    return tuple(completed)


def back_translate(
    text: str,
    fwd: TranslationProvider,
    bwd: TranslationProvider,
    seed: int | None = None,
) -> BackTranslation:
    """Translate text through a pivot language and back.

    The forward target language must match the backward source language.
    Both the intermediate and the final string are recorded for audit.
    """
    if not text or not text.strip():
        raise ValueError("back_translate requires non-empty text")
    if fwd.capability.target_lang != bwd.capability.source_lang:
        raise ProviderConfigError(
            f"language mismatch: forward targets {fwd.capability.target_lang!r} but "
            f"backward reads {bwd.capability.source_lang!r}"
        )
    intermediate = _translate_hop(fwd, text, seed)
    final = _translate_hop(bwd, intermediate, seed)
    return BackTranslation(source=text, intermediate=intermediate, text=final)


def _translate_hop(provider: TranslationProvider, text: str, seed: int | None) -> str:
    try:
        out = provider.translate(text, seed=seed)
    except ProviderError:
        raise
    except Exception as exc:
        raise RetryableProviderError(f"translation hop failed: {exc}") from exc
    if not isinstance(out, str) or not out:
        raise PermanentProviderError("translation provider returned empty output")
    return out


def classify(post: Post, provider: ClassifierProvider, threshold: float = 0.5) -> PredictionScores:
    """Score a post: raw scores from the provider, hard-sigmoid activation, thresholding."""
    try:
        raw = provider.raw_scores(post.text)
    except ProviderError:
        raise
    except Exception as exc:
        raise RetryableProviderError(f"classifier provider failed: {exc}") from exc
    if len(raw) != len(provider.capability.label_order):
        raise PermanentProviderError(
            f"classifier returned {len(raw)} scores for {len(provider.capability.label_order)} labels"
        )
    raw = tuple(float(r) for r in raw)
    activated = tuple(hard_sigmoid(r) for r in raw)
    predicted = tuple(int(a >= threshold) for a in activated)
    return PredictionScores(
        post_id=post.id,
        raw=raw,
        activated=activated,
        predicted=predicted,
        decision_threshold=threshold,
    )


def _scores_dict(s: PredictionScores) -> dict:
    return {
        "post_id": s.post_id,
        "raw": list(s.raw),
        "activated": list(s.activated),
        "predicted": list(s.predicted),
        "decision_threshold": s.decision_threshold,
    }


def write_scores_jsonl(path: str | Path, scores) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        count = 0
        for s in scores:
            fh.write(json.dumps(_scores_dict(s), ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n")
            count += 1
    return count


def read_scores_jsonl(path: str | Path) -> list[PredictionScores]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {line_no}: invalid JSON: {exc.msg}") from None
            try:
                out.append(
                    PredictionScores(
                        post_id=obj["post_id"],
                        raw=tuple(obj["raw"]),
                        activated=tuple(obj["activated"]),
                        predicted=tuple(obj["predicted"]),
                        decision_threshold=obj.get("decision_threshold", 0.5),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"line {line_no}: bad prediction record: {exc}") from None
    return out
