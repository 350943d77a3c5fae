"""emoaug: emotion-aware data augmentation for low-resource multi-label corpora.

Pipeline stages (each also exposed as a CLI subcommand):

    ingest -> classify -> filter -> sample -> augment -> evaluate

The package synthesizes labeled training examples by masked-token infilling
biased toward strong-negative-emotion words, or by round-trip translation
through a pivot language; filters pseudo-labeled data by prediction
confidence; and evaluates synthetic data for diversity and label
preservation.
"""

from .corpus import (
    EMOTION_LABELS,
    EmotionMapping,
    EmotionVector,
    SELF_REPORT_MAPPING,
    LabeledPost,
    Post,
    TokenizedPost,
)
from .estimators import ConfidenceWindowFilter, EmotionAwareAugmenter, EmotionClassifier
from .filtering import FilterConfig, SplitSpec
from .metrics import MetricsReport

__version__ = "0.1.0"

__all__ = [
    "EMOTION_LABELS",
    "EmotionMapping",
    "EmotionVector",
    "SELF_REPORT_MAPPING",
    "LabeledPost",
    "Post",
    "TokenizedPost",
    "ConfidenceWindowFilter",
    "EmotionAwareAugmenter",
    "EmotionClassifier",
    "FilterConfig",
    "SplitSpec",
    "MetricsReport",
    "__version__",
]
