"""Confidence-window filtering of pseudo-labeled posts and low-resource sampling.

Posts whose predicted emotions score too low or too high are excluded: the
window keeps examples the classifier finds neither trivial nor hopeless.
The window applies to activated (post-hard-sigmoid) scores of predicted
labels only, with inclusive boundaries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

__all__ = ["FilterConfig", "SplitSpec", "confidence_filter", "sample_split"]


@dataclass(frozen=True)
class FilterConfig:
    low: float = 0.3
    high: float = 0.8
    mode: str = "any"
    decision_threshold: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.low < self.high <= 1.0:
            raise ValueError(f"need 0 <= low < high <= 1, got low={self.low}, high={self.high}")
        if self.mode not in ("any", "all"):
            raise ValueError(f"mode must be 'any' or 'all', got {self.mode!r}")
        if not 0.0 <= self.decision_threshold <= 1.0:
            raise ValueError(f"decision_threshold must be in [0, 1], got {self.decision_threshold}")

    def to_dict(self) -> dict:
        return {
            "low": self.low,
            "high": self.high,
            "mode": self.mode,
            "decision_threshold": self.decision_threshold,
        }


def confidence_filter(scored, cfg: FilterConfig = FilterConfig()) -> list[str]:
    """Return ids of posts whose predicted labels fall inside the window.

    Predicted labels are recomputed from activated scores against
    ``cfg.decision_threshold``.  Posts with no predicted labels are dropped.
    ``mode="any"`` keeps a post when at least one predicted label scores
    inside [low, high]; ``mode="all"`` requires every predicted label to.
    """
    kept = []
    for s in scored:
        predicted = [a for a in s.activated if a >= cfg.decision_threshold]
        if not predicted:
            continue
        in_window = [cfg.low <= a <= cfg.high for a in predicted]
        keep = any(in_window) if cfg.mode == "any" else all(in_window)
        if keep:
            kept.append(s.post_id)
    return kept


@dataclass(frozen=True)
class SplitSpec:
    total: int = 1000
    train: int = 700
    valid: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.total <= 0 or self.train <= 0 or self.valid <= 0:
            raise ValueError("total, train and valid must all be positive")
        if self.train + self.valid != self.total:
            raise ValueError(f"train + valid must equal total ({self.train} + {self.valid} != {self.total})")


def sample_split(ids, spec: SplitSpec = SplitSpec()) -> tuple[list[str], list[str]]:
    """Uniformly sample ``spec.total`` ids and partition them train/valid.

    Ids are sorted before seeded sampling, so the split depends only on the
    id set and the seed, never on input order.  Returns disjoint lists of
    exactly ``spec.train`` and ``spec.valid`` ids.
    """
    ids = list(ids)
    if len(set(ids)) != len(ids):
        raise ValueError("ids must be unique")
    if len(ids) < spec.total:
        raise ValueError(f"need at least {spec.total} ids to sample, have {len(ids)}")
    rng = random.Random(spec.seed)
    chosen = rng.sample(sorted(ids), spec.total)
    return chosen[: spec.train], chosen[spec.train :]
