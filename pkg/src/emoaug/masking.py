"""Mask-target selection and masked-sentence construction.

Two strategies are provided: masking a fixed fraction of tokens picked one by
one (``token``), and masking one contiguous window around a single anchor
(``span``).  Anchors are always content (non-functional) tokens, sampled with
probability proportional to their affinity weight plus a small epsilon floor
so zero-affinity and out-of-vocabulary words remain maskable.

All selection is driven by an explicit seed, so identical inputs always yield
identical plans regardless of call order or thread count.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from .corpus import TokenizedPost

__all__ = [
    "MASK_TOKEN",
    "MaskingError",
    "MaskPlan",
    "MaskedSentence",
    "derive_seed",
    "select_token_masks",
    "select_span_mask",
    "apply_mask",
]

# Internal mask sentinel.  Provider adapters render their own sentinel; the
# plan and masked sentence only guarantee the positions.
MASK_TOKEN = "<mask>"

DEFAULT_MASK_RATE = 0.15
DEFAULT_SPAN_LEN = 5
DEFAULT_EPSILON = 0.01


class MaskingError(ValueError):
    """Raised when a mask plan cannot be built or applied."""


@dataclass(frozen=True)
class MaskPlan:
    """Which token positions to mask, and the seed that chose them."""

    post_id: str
    mask_indices: tuple[int, ...]
    strategy: str
    rng_seed: int

    def __post_init__(self):
        if not self.mask_indices:
            raise MaskingError("mask plan must select at least one index")
        if list(self.mask_indices) != sorted(set(self.mask_indices)):
            raise MaskingError("mask indices must be sorted and unique")
        if any(i < 0 for i in self.mask_indices):
            raise MaskingError("mask indices must be non-negative")
        if self.strategy not in ("token", "span"):
            raise MaskingError(f"unknown strategy {self.strategy!r}")
        if self.strategy == "span":
            lo, hi = self.mask_indices[0], self.mask_indices[-1]
            if hi - lo + 1 != len(self.mask_indices):
                raise MaskingError("span plan must cover one contiguous run")


@dataclass(frozen=True)
class MaskedSentence:
    """Token sequence with sentinels substituted, plus the removed originals."""

    tokens: tuple[str, ...]
    removed: dict[int, str]

    def __post_init__(self):
        sentinel_positions = {i for i, t in enumerate(self.tokens) if t == MASK_TOKEN}
        if sentinel_positions != set(self.removed):
            raise MaskingError("sentinel positions must match the removed map exactly")

    def restore(self) -> tuple[str, ...]:
        """Original token list, with removed tokens put back."""
        return tuple(self.removed.get(i, tok) for i, tok in enumerate(self.tokens))

    def mask_positions(self) -> tuple[int, ...]:
        return tuple(sorted(self.removed))


def derive_seed(global_seed: int, *parts) -> int:
    """Stable 64-bit seed from a global seed plus identifying parts.

    Uses SHA-256 so per-post, per-fold work parallelizes deterministically
    across processes and platforms.
    """
    h = hashlib.sha256(str(global_seed).encode("utf-8"))
    for part in parts:
        h.update(b"\x1f")
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "big")


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _eligible_indices(tp: TokenizedPost) -> list[int]:
    eligible = tp.content_indices()
    if not eligible:
        raise MaskingError(f"post {tp.post_id!r}: nothing maskable (no non-functional tokens)")
    return eligible


def _check_weights(tp: TokenizedPost, weights) -> list[float]:
    weights = list(weights)
    if len(weights) != len(tp.tokens):
        raise MaskingError(
            f"post {tp.post_id!r}: got {len(weights)} weights for {len(tp.tokens)} tokens"
        )
    return weights


def _weighted_sample(indices, weights, m: int, rng: random.Random) -> list[int]:
    """Sample m distinct indices with probability proportional to weight."""
    pool = list(indices)
    pool_weights = [weights[i] for i in pool]
    chosen = []
    for _ in range(m):
        total = sum(pool_weights)
        r = rng.random() * total
        acc = 0.0
        pick = len(pool) - 1
        for j, w in enumerate(pool_weights):
            acc += w
            if r < acc:
                pick = j
                break
        chosen.append(pool.pop(pick))
        pool_weights.pop(pick)
    return chosen


def select_token_masks(
    tp: TokenizedPost,
    weights,
    rate: float = DEFAULT_MASK_RATE,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
    rate_basis: str = "all",
) -> MaskPlan:
    """Pick ``max(1, round(rate * k))`` content tokens to mask.

    ``k`` counts all tokens by default (``rate_basis="all"``); pass
    ``rate_basis="content"`` to count content tokens only.  Selection weight
    for index i is ``max(0, weights[i]) + epsilon``.  When fewer content
    tokens exist than the target count, all of them are masked.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if rate_basis not in ("all", "content"):
        raise ValueError(f"rate_basis must be 'all' or 'content', got {rate_basis!r}")
    weights = _check_weights(tp, weights)
    eligible = _eligible_indices(tp)
    k = len(tp.tokens) if rate_basis == "all" else len(eligible)
    m = max(1, _round_half_up(rate * k))
    m = min(m, len(eligible))
    effective = [max(0.0, w) + epsilon for w in weights]
    rng = random.Random(seed)
    chosen = _weighted_sample(eligible, effective, m, rng)
    return MaskPlan(post_id=tp.post_id, mask_indices=tuple(sorted(chosen)), strategy="token", rng_seed=seed)


def select_span_mask(
    tp: TokenizedPost,
    weights,
    span_len: int = DEFAULT_SPAN_LEN,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
) -> MaskPlan:
    """Mask one contiguous window of ``span_len`` tokens around a sampled anchor.

    The window shifts (rather than shrinks) at sentence edges; sentences
    shorter than ``span_len`` are masked whole.
    """
    if span_len < 1:
        raise ValueError(f"span_len must be >= 1, got {span_len}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    weights = _check_weights(tp, weights)
    eligible = _eligible_indices(tp)
    effective = [max(0.0, w) + epsilon for w in weights]
    rng = random.Random(seed)
    anchor = _weighted_sample(eligible, effective, 1, rng)[0]
    k = len(tp.tokens)
    if k < span_len:
        indices = range(k)
    else:
        start = anchor - (span_len - 1) // 2
        start = min(max(start, 0), k - span_len)
        indices = range(start, start + span_len)
    return MaskPlan(post_id=tp.post_id, mask_indices=tuple(indices), strategy="span", rng_seed=seed)


def apply_mask(tp: TokenizedPost, plan: MaskPlan) -> MaskedSentence:
    """Substitute the sentinel at each planned index, recording the originals."""
    tokens = list(tp.tokens)
    removed: dict[int, str] = {}
    for idx in plan.mask_indices:
        if idx >= len(tokens):
            raise MaskingError(f"mask index {idx} out of range for {len(tokens)} tokens")
        removed[idx] = tokens[idx]
        tokens[idx] = MASK_TOKEN
    return MaskedSentence(tokens=tuple(tokens), removed=removed)
