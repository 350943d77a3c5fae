"""Provider interfaces, deterministic built-ins, and the remote-service client."""

from .base import (
    BackTranslation,
    ClassifierCapability,
    ClassifierProvider,
    FillMaskCapability,
    FillMaskProvider,
    PermanentProviderError,
    PredictionScores,
    ProviderConfigError,
    ProviderError,
    RetryableProviderError,
    TranslationCapability,
    TranslationProvider,
    back_translate,
    classify,
    fill,
    hard_sigmoid,
    read_scores_jsonl,
    write_scores_jsonl,
)
from .mocks import (
    DEFAULT_KEYWORDS,
    DEMO_EN_FR,
    DEMO_FR_EN,
    EchoFillMask,
    IdentityTranslator,
    KeywordClassifier,
    NearestNeighborFillMask,
    ReverseWordsTranslator,
    SamplingSubstitutionTranslator,
    SubstitutionTranslator,
)
from .remote import RemoteClassifier, RemoteFillMask, RemoteTranslator, remote_call

__all__ = [
    "BackTranslation",
    "ClassifierCapability",
    "ClassifierProvider",
    "FillMaskCapability",
    "FillMaskProvider",
    "PermanentProviderError",
    "PredictionScores",
    "ProviderConfigError",
    "ProviderError",
    "RetryableProviderError",
    "TranslationCapability",
    "TranslationProvider",
    "back_translate",
    "classify",
    "fill",
    "hard_sigmoid",
    "read_scores_jsonl",
    "write_scores_jsonl",
    "DEFAULT_KEYWORDS",
    "DEMO_EN_FR",
    "DEMO_FR_EN",
    "EchoFillMask",
    "IdentityTranslator",
    "KeywordClassifier",
    "NearestNeighborFillMask",
    "ReverseWordsTranslator",
    "SamplingSubstitutionTranslator",
    "SubstitutionTranslator",
    "RemoteClassifier",
    "RemoteFillMask",
    "RemoteTranslator",
    "remote_call",
]
