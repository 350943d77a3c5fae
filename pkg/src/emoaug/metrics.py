"""Evaluation metrics: lexical diversity, multi-label Jaccard, and micro/macro F1.

Counting is done in plain Python over explicit per-label confusion counts so
every reported number is recomputable from the support table in the report.

Conventions (stated because multi-label corner cases vary between toolkits):

* Jaccard scores the both-empty case as 1 (predicting "no emotion" for a
  neutral post is correct).
* Macro-F1 averages per-label F1 over labels with any TP/FP/FN activity;
  labels untouched by both gold and predictions are excluded from the mean.
* Type-token ratios never count n-grams across text boundaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import EMOTION_LABELS, EmotionVector, Post, tokenize
from .providers.base import ClassifierProvider, PredictionScores, ProviderError, classify

__all__ = [
    "MetricsError",
    "MetricsReport",
    "type_token_ratio",
    "jaccard_score",
    "f1_scores",
    "F1Result",
    "evaluate_fidelity",
    "evaluate_extrinsic",
]


class MetricsError(ValueError):
    """Raised for unusable metric inputs."""


@dataclass(frozen=True)
class MetricsReport:
    """All evaluation numbers plus the counts backing them."""

    ttr: dict[int, float]
    jaccard: float
    f1_macro: float
    f1_micro: float
    support: dict[str, dict[str, int]]
    n_examples: int

    def to_dict(self) -> dict:
        return {
            "ttr": {str(n): v for n, v in sorted(self.ttr.items())},
            "jaccard": self.jaccard,
            "f1_macro": self.f1_macro,
            "f1_micro": self.f1_micro,
            "support": {label: dict(counts) for label, counts in self.support.items()},
            "n_examples": self.n_examples,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=2)

    def to_table(self) -> str:
        """Aligned plain-text rendering of the report."""
        lines = []
        lines.append(f"{'examples':<14}{self.n_examples}")
        lines.append(f"{'jaccard':<14}{self.jaccard:.4f}")
        lines.append(f"{'f1_macro':<14}{self.f1_macro:.4f}")
        lines.append(f"{'f1_micro':<14}{self.f1_micro:.4f}")
        for n in sorted(self.ttr):
            lines.append(f"{f'ttr_{n}gram':<14}{self.ttr[n]:.4f}")
        lines.append("")
        lines.append(f"{'label':<14}{'tp':>6}{'fp':>6}{'fn':>6}")
        for label in EMOTION_LABELS:
            counts = self.support.get(label, {"tp": 0, "fp": 0, "fn": 0})
            lines.append(f"{label:<14}{counts['tp']:>6}{counts['fp']:>6}{counts['fn']:>6}")
        return "\n".join(lines) + "\n"


def type_token_ratio(texts, n: int = 1) -> float:
    """Unique n-grams divided by total n-grams over the tokenized texts.

    N-grams never cross text boundaries.  Raises when no text yields a
    single n-gram of order ``n``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    texts = list(texts)
    if not texts:
        raise MetricsError("no texts")
    total = 0
    unique = set()
    for text in texts:
        tokens = tokenize(text).tokens
        for i in range(len(tokens) - n + 1):
            unique.add(tokens[i : i + n])
            total += 1
    if total == 0:
        raise MetricsError(f"no {n}-grams in the given texts")
    return len(unique) / total


def _check_binary_pair(gold, pred):
    gold = list(gold)
    pred = list(pred)
    if len(gold) != len(pred):
        raise MetricsError(f"gold and pred lengths differ: {len(gold)} vs {len(pred)}")
    if not gold:
        raise MetricsError("need at least one example")
    for vectors in (gold, pred):
        for v in vectors:
            if not v.is_binary:
                raise MetricsError("vectors must be binary")
    return gold, pred


def jaccard_score(gold, pred) -> float:
    """Mean per-example |G n P| / |G u P| over binary emotion vectors."""
    gold, pred = _check_binary_pair(gold, pred)
    total = 0.0
    for g, p in zip(gold, pred):
        gs, ps = g.active_labels(), p.active_labels()
        union = gs | ps
        total += 1.0 if not union else len(gs & ps) / len(union)
    return total / len(gold)


@dataclass(frozen=True)
class F1Result:
    macro: float
    micro: float
    support: dict[str, dict[str, int]] = field(default_factory=dict)


def f1_scores(gold, pred) -> F1Result:
    """Per-label confusion counts pooled into micro-F1 and averaged into macro-F1."""
    gold, pred = _check_binary_pair(gold, pred)
    support = {label: {"tp": 0, "fp": 0, "fn": 0} for label in EMOTION_LABELS}
    for g, p in zip(gold, pred):
        for i, label in enumerate(EMOTION_LABELS):
            gv, pv = g.scores[i], p.scores[i]
            if pv == 1.0 and gv == 1.0:
                support[label]["tp"] += 1
            elif pv == 1.0:
                support[label]["fp"] += 1
            elif gv == 1.0:
                support[label]["fn"] += 1
    per_label_f1 = []
    for label in EMOTION_LABELS:
        tp, fp, fn = support[label]["tp"], support[label]["fp"], support[label]["fn"]
        if tp == fp == fn == 0:
            continue
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_label_f1.append(f1)
    macro = sum(per_label_f1) / len(per_label_f1) if per_label_f1 else 0.0
    tp = sum(c["tp"] for c in support.values())
    fp = sum(c["fp"] for c in support.values())
    fn = sum(c["fn"] for c in support.values())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    micro = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return F1Result(macro=macro, micro=micro, support=support)


def _predicted_vector(scores: PredictionScores) -> EmotionVector:
    return EmotionVector(scores=tuple(float(p) for p in scores.predicted))


def evaluate_fidelity(
    synthetic,
    clf: ClassifierProvider,
    threshold: float = 0.5,
    ttr_orders=(1, 3),
    extra_texts=(),
) -> tuple[MetricsReport, list[dict]]:
    """Classify synthetic text and score predictions against propagated labels.

    Returns the report plus a failure manifest; examples whose classification
    failed are excluded from the metrics rather than aborting the run.
    ``extra_texts`` joins the diversity (TTR) computation only, for reporting
    diversity over synthetic plus original text.
    """
    synthetic = list(synthetic)
    if not synthetic:
        raise MetricsError("no synthetic examples to evaluate")
    gold, pred, failures = [], [], []
    texts = []
    for example in synthetic:
        texts.append(example.text)
        try:
            scores = classify(Post(id=f"synthetic/{example.source_id}/{example.fold}", text=example.text), clf, threshold)
        except ProviderError as exc:
            failures.append({"source_id": example.source_id, "fold": example.fold, "error": str(exc)})
            continue
        gold.append(example.labels)
        pred.append(_predicted_vector(scores))
    if not gold:
        raise MetricsError("classification failed for every synthetic example")
    ttr = {}
    all_texts = texts + list(extra_texts)
    for n in ttr_orders:
        try:
            ttr[n] = type_token_ratio(all_texts, n)
        except MetricsError:
            continue
    f1 = f1_scores(gold, pred)
    report = MetricsReport(
        ttr=ttr,
        jaccard=jaccard_score(gold, pred),
        f1_macro=f1.macro,
        f1_micro=f1.micro,
        support=f1.support,
        n_examples=len(gold),
    )
    return report, failures


def evaluate_extrinsic(gold, pred) -> MetricsReport:
    """Score id-aligned predictions against gold labels (no diversity numbers)."""
    gold = list(gold)
    pred = list(pred)
    by_id = {}
    for s in pred:
        by_id[s.post_id] = s
    gold_ids = [lp.post.id for lp in gold]
    missing = [pid for pid in gold_ids if pid not in by_id]
    extra = sorted(set(by_id) - set(gold_ids))
    if missing or extra:
        raise MetricsError(f"id mismatch: missing predictions for {missing}, unmatched predictions {extra}")
    gold_vectors = [lp.labels for lp in gold]
    pred_vectors = [_predicted_vector(by_id[pid]) for pid in gold_ids]
    f1 = f1_scores(gold_vectors, pred_vectors)
    return MetricsReport(
        ttr={},
        jaccard=jaccard_score(gold_vectors, pred_vectors),
        f1_macro=f1.macro,
        f1_micro=f1.micro,
        support=f1.support,
        n_examples=len(gold),
    )


def write_report(path: str | Path, report: MetricsReport, table_path: str | Path | None = None):
    """Write the JSON report, and optionally the aligned text table."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json() + "\n", encoding="utf-8")
    if table_path is not None:
        Path(table_path).write_text(report.to_table(), encoding="utf-8")
