"""Scikit-learn-style wrappers so the pipeline stages compose with the wider ecosystem.

The transformers here follow the fit/transform contract and expose their
knobs through ``get_params``/``set_params``, but consume and produce the
package's domain objects (labeled posts, prediction scores) rather than
feature matrices.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .augment import AugmentationConfig, ProviderBundle, augment_corpus
from .corpus import Post
from .filtering import FilterConfig, confidence_filter
from .providers.base import classify as classify_post
from .validation import check_labeled_posts, check_prediction_scores, check_texts

__all__ = ["EmotionAwareAugmenter", "ConfidenceWindowFilter", "EmotionClassifier"]


class EmotionAwareAugmenter(BaseEstimator, TransformerMixin):
    """Transforms labeled posts into multi-fold synthetic examples.

    ``transform`` returns a list of SyntheticExample; per-source shortfalls
    from the last run are available as ``shortfalls_``.
    """

    def __init__(
        self,
        method="mask_token",
        folds=1,
        mask_rate=0.15,
        span_len=5,
        global_seed=0,
        max_regen_attempts=3,
        fill_mask=None,
        translator_fwd=None,
        translator_bwd=None,
        embeddings=None,
        sne=None,
        stopwords=None,
        workers=1,
        keep_degenerate=True,
    ):
        self.method = method
        self.folds = folds
        self.mask_rate = mask_rate
        self.span_len = span_len
        self.global_seed = global_seed
        self.max_regen_attempts = max_regen_attempts
        self.fill_mask = fill_mask
        self.translator_fwd = translator_fwd
        self.translator_bwd = translator_bwd
        self.embeddings = embeddings
        self.sne = sne
        self.stopwords = stopwords
        self.workers = workers
        self.keep_degenerate = keep_degenerate

    def fit(self, X, y=None):
        check_labeled_posts(X)
        self.config_ = AugmentationConfig(
            method=self.method,
            folds=self.folds,
            mask_rate=self.mask_rate,
            span_len=self.span_len,
            global_seed=self.global_seed,
            max_regen_attempts=self.max_regen_attempts,
        )
        self.bundle_ = ProviderBundle(
            fill_mask=self.fill_mask,
            translator_fwd=self.translator_fwd,
            translator_bwd=self.translator_bwd,
            embeddings=self.embeddings,
            sne=self.sne,
            stopwords=self.stopwords,
        )
        return self

    def transform(self, X):
        if not hasattr(self, "config_"):
            raise NotFittedError("call fit before transform")
        X = check_labeled_posts(X)
        result = augment_corpus(
            X, self.config_, self.bundle_, workers=self.workers, keep_degenerate=self.keep_degenerate
        )
        self.shortfalls_ = result.shortfalls
        return result.examples


class ConfidenceWindowFilter(BaseEstimator, TransformerMixin):
    """Keeps prediction scores whose predicted labels fall inside the window."""

    def __init__(self, low=0.3, high=0.8, mode="any", decision_threshold=0.5):
        self.low = low
        self.high = high
        self.mode = mode
        self.decision_threshold = decision_threshold

    def fit(self, X=None, y=None):
        self.config_ = FilterConfig(
            low=self.low, high=self.high, mode=self.mode, decision_threshold=self.decision_threshold
        )
        return self

    def transform(self, X):
        if not hasattr(self, "config_"):
            raise NotFittedError("call fit before transform")
        X = check_prediction_scores(X)
        kept = set(confidence_filter(X, self.config_))
        self.kept_ids_ = [s.post_id for s in X if s.post_id in kept]
        return [s for s in X if s.post_id in kept]


class EmotionClassifier(BaseEstimator):
    """Array-facing wrapper over a classifier provider.

    ``decision_function`` returns raw scores, ``predict_proba`` the
    hard-sigmoid activations, and ``predict`` the thresholded binary label
    matrix, all shaped (n_texts, 11).
    """

    def __init__(self, provider=None, threshold=0.5):
        self.provider = provider
        self.threshold = threshold

    def fit(self, X=None, y=None):
        if self.provider is None:
            raise ValueError("provider must be set before fit")
        self.label_order_ = tuple(self.provider.capability.label_order)
        return self

    def _scores(self, X):
        if not hasattr(self, "label_order_"):
            raise NotFittedError("call fit before predicting")
        texts = check_texts(X)
        return [
            classify_post(Post(id=f"text/{i}", text=text), self.provider, self.threshold)
            for i, text in enumerate(texts)
        ]

    def decision_function(self, X) -> np.ndarray:
        return np.array([s.raw for s in self._scores(X)], dtype=float)

    def predict_proba(self, X) -> np.ndarray:
        return np.array([s.activated for s in self._scores(X)], dtype=float)

    def predict(self, X) -> np.ndarray:
        return np.array([s.predicted for s in self._scores(X)], dtype=int)
