"""Multi-fold synthesis of labeled examples via mask infilling or back translation.

Every training example yields ``folds`` synthetic examples.  Labels are
propagated from the source, never re-annotated.  Each (source, fold) task
derives its own seed from the global seed, so whole-corpus augmentation is
byte-identical across runs and worker counts.

Outputs identical to their (normalized) source text are regenerated with
fresh seeds up to ``max_regen_attempts`` times and then emitted with a
``degenerate`` flag; transient provider failures consume the same attempt
budget and surface as per-source shortfalls when exhausted.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import EmotionVector, LabeledPost, detokenize, tokenize
from .lexicon import EmbeddingTable, SneLexicon, sne_affinity
from .masking import apply_mask, derive_seed, select_span_mask, select_token_masks
from .providers.base import (
    FillMaskProvider,
    ProviderConfigError,
    RetryableProviderError,
    TranslationProvider,
    back_translate,
    fill,
)

__all__ = [
    "METHODS",
    "AugmentationConfig",
    "ProviderBundle",
    "SyntheticExample",
    "AugmentationResult",
    "AugmentationAborted",
    "augment_one",
    "augment_corpus",
    "write_synthetic_jsonl",
    "read_synthetic_jsonl",
]

METHODS = ("bt", "mask_token", "mask_span")


@dataclass(frozen=True)
class AugmentationConfig:
    method: str
    folds: int = 1
    mask_rate: float = 0.15
    span_len: int = 5
    global_seed: int = 0
    max_regen_attempts: int = 3
    epsilon: float = 0.01
    rate_basis: str = "all"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.folds < 1:
            raise ValueError(f"folds must be >= 1, got {self.folds}")
        if not 0.0 < self.mask_rate <= 1.0:
            raise ValueError(f"mask_rate must be in (0, 1], got {self.mask_rate}")
        if self.span_len < 1:
            raise ValueError(f"span_len must be >= 1, got {self.span_len}")
        if self.max_regen_attempts < 0:
            raise ValueError(f"max_regen_attempts must be >= 0, got {self.max_regen_attempts}")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "folds": self.folds,
            "mask_rate": self.mask_rate,
            "span_len": self.span_len,
            "global_seed": self.global_seed,
            "max_regen_attempts": self.max_regen_attempts,
            "epsilon": self.epsilon,
            "rate_basis": self.rate_basis,
        }


@dataclass
class ProviderBundle:
    """Providers and lexicon resources for one augmentation run.

    Mask methods need ``fill_mask``; back translation needs both translators.
    When ``embeddings`` and ``sne`` are present, mask-target selection is
    weighted by SNE affinity; otherwise all content tokens weigh the same.
    """

    fill_mask: FillMaskProvider | None = None
    translator_fwd: TranslationProvider | None = None
    translator_bwd: TranslationProvider | None = None
    embeddings: EmbeddingTable | None = None
    sne: SneLexicon | None = None
    stopwords: frozenset[str] | None = None


@dataclass(frozen=True)
class SyntheticExample:
    source_id: str
    fold: int
    text: str
    labels: EmotionVector
    method: str
    provenance: dict = field(default_factory=dict)
    degenerate: bool = False

    def __post_init__(self):
        if self.fold < 1:
            raise ValueError(f"fold must be >= 1, got {self.fold}")
        if not self.text:
            raise ValueError("synthetic text must be non-empty")


@dataclass
class AugmentationResult:
    examples: list[SyntheticExample]
    shortfalls: list[dict]
    dropped_degenerate: int = 0

    @property
    def degenerate_count(self) -> int:
        return sum(1 for e in self.examples if e.degenerate)


class AugmentationAborted(RuntimeError):
    """A permanent provider failure stopped the run; partial output attached."""

    def __init__(self, message: str, partial: AugmentationResult, cause: Exception):
        super().__init__(message)
        self.partial = partial
        self.cause = cause


def _affinity_weights(tp, bundle: ProviderBundle) -> list[float]:
    if bundle.embeddings is None or bundle.sne is None:
        return [0.0] * len(tp.tokens)
    return [sne_affinity(tok, bundle.embeddings, bundle.sne) for tok in tp.tokens]


def _mask_generate(x: LabeledPost, cfg: AugmentationConfig, bundle: ProviderBundle, seed: int):
    tp = tokenize(x.post.text, post_id=x.post.id, stopwords=bundle.stopwords)
    weights = _affinity_weights(tp, bundle)
    if cfg.method == "mask_token":
        plan = select_token_masks(
            tp, weights, rate=cfg.mask_rate, seed=seed, epsilon=cfg.epsilon, rate_basis=cfg.rate_basis
        )
    else:
        plan = select_span_mask(tp, weights, span_len=cfg.span_len, seed=seed, epsilon=cfg.epsilon)
    masked = apply_mask(tp, plan)
    completed = fill(masked, bundle.fill_mask)
    text = detokenize(completed)
    reference = detokenize(tp.tokens)
    provenance = {
        "strategy": plan.strategy,
        "seed": seed,
        "mask_indices": list(plan.mask_indices),
        "removed": {str(i): masked.removed[i] for i in plan.mask_indices},
        "replacements": {str(i): completed[i] for i in plan.mask_indices},
    }
    return text, reference, provenance


def _bt_generate(x: LabeledPost, cfg: AugmentationConfig, bundle: ProviderBundle, seed: int):
    sample_seed = seed if bundle.translator_fwd.capability.supports_sampling else None
    result = back_translate(x.post.text, bundle.translator_fwd, bundle.translator_bwd, seed=sample_seed)
    provenance = {
        "seed": seed,
        "intermediate": result.intermediate,
        "pivot_lang": bundle.translator_fwd.capability.target_lang,
    }
    return result.text, x.post.text, provenance


def augment_one(x: LabeledPost, fold: int, cfg: AugmentationConfig, bundle: ProviderBundle) -> SyntheticExample:
    """Synthesize one example for (source, fold), retrying degenerate outputs.

    The first attempt uses ``derive_seed(global_seed, source_id, fold)``;
    regeneration attempts extend the seed with the attempt index.  When every
    attempt reproduces the source text, the last output is returned with
    ``degenerate=True``.
    """
    if not 1 <= fold <= cfg.folds:
        raise ValueError(f"fold {fold} outside 1..{cfg.folds}")
    generate = _bt_generate if cfg.method == "bt" else _mask_generate
    last_output = None
    last_error: Exception | None = None
    for attempt in range(cfg.max_regen_attempts + 1):
        if attempt == 0:
            seed = derive_seed(cfg.global_seed, x.post.id, fold)
        else:
            seed = derive_seed(cfg.global_seed, x.post.id, fold, attempt)
        try:
            text, reference, provenance = generate(x, cfg, bundle, seed)
        except RetryableProviderError as exc:
            last_error = exc
            continue
        last_output = (text, provenance)
        if text != reference:
            return SyntheticExample(
                source_id=x.post.id, fold=fold, text=text, labels=x.labels,
                method=cfg.method, provenance=provenance,
            )
    if last_output is None:
        raise last_error
    text, provenance = last_output
    return SyntheticExample(
        source_id=x.post.id, fold=fold, text=text, labels=x.labels,
        method=cfg.method, provenance=provenance, degenerate=True,
    )


class _SingleFlight:
    """Serializes calls to a provider that declared single-flight capability."""

    def __init__(self, provider):
        self._provider = provider
        self._lock = threading.Lock()
        self.capability = provider.capability

    def __getattr__(self, name):
        attr = getattr(self._provider, name)
        if not callable(attr):
            return attr

        def locked(*args, **kwargs):
            with self._lock:
                return attr(*args, **kwargs)

        return locked


def _wrap_single_flight(bundle: ProviderBundle) -> ProviderBundle:
    def wrap(p):
        if p is not None and getattr(p.capability, "single_flight", False):
            return _SingleFlight(p)
        return p

    return ProviderBundle(
        fill_mask=wrap(bundle.fill_mask),
        translator_fwd=wrap(bundle.translator_fwd),
        translator_bwd=wrap(bundle.translator_bwd),
        embeddings=bundle.embeddings,
        sne=bundle.sne,
        stopwords=bundle.stopwords,
    )


def _validate_bundle(cfg: AugmentationConfig, bundle: ProviderBundle):
    if cfg.method == "bt":
        if bundle.translator_fwd is None or bundle.translator_bwd is None:
            raise ProviderConfigError("back translation needs both forward and backward translators")
        if bundle.translator_fwd.capability.target_lang != bundle.translator_bwd.capability.source_lang:
            raise ProviderConfigError("forward target language must match backward source language")
        if cfg.folds > 1 and not bundle.translator_fwd.capability.supports_sampling:
            raise ProviderConfigError(
                "back translation with folds > 1 needs a sampling-capable forward translator"
            )
    else:
        if bundle.fill_mask is None:
            raise ProviderConfigError(f"method {cfg.method!r} needs a fill-mask provider")


def augment_corpus(
    train,
    cfg: AugmentationConfig,
    bundle: ProviderBundle,
    workers: int = 1,
    keep_degenerate: bool = True,
) -> AugmentationResult:
    """Run Algorithm-style multi-fold augmentation over a training corpus.

    Returns ``folds * len(train)`` examples when no provider fails, sorted by
    (source_id, fold) so worker count never changes the artifact.  Transient
    failures that outlive the attempt budget become shortfall entries; a
    permanent failure aborts with the partial output attached.
    """
    train = list(train)
    if not train:
        raise ValueError("training corpus must be non-empty")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    _validate_bundle(cfg, bundle)
    bundle = _wrap_single_flight(bundle)

    tasks = [(x, fold) for x in train for fold in range(1, cfg.folds + 1)]
    examples: list[SyntheticExample] = []
    shortfalls: list[dict] = []
    abort: Exception | None = None

    def run(task):
        x, fold = task
        return augment_one(x, fold, cfg, bundle)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for task, outcome in zip(tasks, pool.map(lambda t: _guard(run, t), tasks)):
            x, fold = task
            if isinstance(outcome, SyntheticExample):
                examples.append(outcome)
            elif isinstance(outcome, RetryableProviderError):
                shortfalls.append({"source_id": x.post.id, "fold": fold, "error": str(outcome)})
            elif isinstance(outcome, Exception):
                abort = abort or outcome

    examples.sort(key=lambda e: (e.source_id, e.fold))
    dropped = 0
    if not keep_degenerate:
        kept = [e for e in examples if not e.degenerate]
        dropped = len(examples) - len(kept)
        examples = kept
    result = AugmentationResult(examples=examples, shortfalls=shortfalls, dropped_degenerate=dropped)
    if abort is not None:
        raise AugmentationAborted(f"augmentation aborted: {abort}", partial=result, cause=abort)
    return result


def _guard(fn, task):
    try:
        return fn(task)
    except Exception as exc:
        return exc


def _example_dict(e: SyntheticExample) -> dict:
    return {
        "source_id": e.source_id,
        "fold": e.fold,
        "text": e.text,
        "labels": [int(s) for s in e.labels.scores],
        "method": e.method,
        "degenerate": e.degenerate,
        "provenance": e.provenance,
    }


def write_synthetic_jsonl(path: str | Path, examples) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        count = 0
        for e in examples:
            fh.write(json.dumps(_example_dict(e), ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n")
            count += 1
    return count


def read_synthetic_jsonl(path: str | Path) -> list[SyntheticExample]:
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
                    SyntheticExample(
                        source_id=obj["source_id"],
                        fold=int(obj["fold"]),
                        text=obj["text"],
                        labels=EmotionVector(scores=tuple(float(v) for v in obj["labels"])),
                        method=obj["method"],
                        provenance=obj.get("provenance", {}),
                        degenerate=bool(obj.get("degenerate", False)),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"line {line_no}: bad synthetic record: {exc}") from None
    return out
