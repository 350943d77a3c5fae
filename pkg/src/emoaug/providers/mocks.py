"""Deterministic built-in providers.

These cover the three provider roles without any model inference, so the
whole pipeline can run (and be tested) offline.  All of them are pure
functions of their inputs and are safe to call concurrently.
"""

from __future__ import annotations

import re

from ..corpus import EMOTION_LABELS, tokenize
from ..lexicon import EmbeddingTable, cosine
from ..masking import MASK_TOKEN, MaskedSentence
from .base import (
    ClassifierCapability,
    ClassifierProvider,
    FillMaskCapability,
    FillMaskProvider,
    TranslationCapability,
    TranslationProvider,
)

__all__ = [
    "EchoFillMask",
    "NearestNeighborFillMask",
    "IdentityTranslator",
    "ReverseWordsTranslator",
    "SubstitutionTranslator",
    "SamplingSubstitutionTranslator",
    "KeywordClassifier",
    "DEFAULT_KEYWORDS",
    "DEMO_EN_FR",
    "DEMO_FR_EN",
]

_WORD_RE = re.compile(r"\w+", re.UNICODE)


class EchoFillMask(FillMaskProvider):
    """Returns the removed tokens themselves; output equals the original sentence."""

    def __init__(self, max_input_tokens: int = 512):
        self.capability = FillMaskCapability(name="echo", max_input_tokens=max_input_tokens)

    def replacements(self, masked: MaskedSentence) -> list[str]:
        return [masked.removed[i] for i in masked.mask_positions()]


class NearestNeighborFillMask(FillMaskProvider):
    """Replaces each removed token with its nearest embedding neighbor.

    Candidates are content words from the embedding vocabulary (no stopwords
    or punctuation, never the removed token itself).  Ties break toward the
    lexicographically smallest word.  Removed tokens absent from the
    vocabulary are echoed back unchanged.
    """

    def __init__(self, embeddings: EmbeddingTable, stopwords: frozenset[str] = frozenset(), max_input_tokens: int = 512):
        self.capability = FillMaskCapability(name="nearest-neighbor", max_input_tokens=max_input_tokens)
        self.embeddings = embeddings
        self._candidates = sorted(
            w
            for w in embeddings.words
            if w not in stopwords and w != MASK_TOKEN and _WORD_RE.search(w)
        )

    def _nearest(self, word: str) -> str:
        vec = self.embeddings.get(word)
        if vec is None:
            return word
        best_word = None
        best_sim = None
        for cand in self._candidates:
            if cand == word:
                continue
            sim = cosine(vec, self.embeddings.get(cand))
            if best_sim is None or sim > best_sim:
                best_word, best_sim = cand, sim
        return best_word if best_word is not None else word

    def replacements(self, masked: MaskedSentence) -> list[str]:
        return [self._nearest(masked.removed[i]) for i in masked.mask_positions()]


class IdentityTranslator(TranslationProvider):
    """Returns the input text unchanged."""

    def __init__(self, source_lang: str = "en", target_lang: str = "fr"):
        self.capability = TranslationCapability(source_lang=source_lang, target_lang=target_lang)

    def translate(self, text: str, seed: int | None = None) -> str:
        return text


class ReverseWordsTranslator(TranslationProvider):
    """Reverses word order; applying it twice restores the input."""

    def __init__(self, source_lang: str = "en", target_lang: str = "fr"):
        self.capability = TranslationCapability(source_lang=source_lang, target_lang=target_lang)

    def translate(self, text: str, seed: int | None = None) -> str:
        return " ".join(reversed(text.split()))


class SubstitutionTranslator(TranslationProvider):
    """Word-for-word substitution from a fixed table; unknown words pass through.

    Only ``\\w+`` runs are substituted, so punctuation survives untouched.
    """

    def __init__(self, table: dict[str, str], source_lang: str, target_lang: str):
        self.capability = TranslationCapability(source_lang=source_lang, target_lang=target_lang)
        self.table = dict(table)

    def translate(self, text: str, seed: int | None = None) -> str:
        return _WORD_RE.sub(lambda m: self.table.get(m.group(0), m.group(0)), text)


class SamplingSubstitutionTranslator(TranslationProvider):
    """Substitution translator that picks among variant tables by seed.

    Declares sampling support so multi-fold back translation can request
    distinct outputs per fold.  ``seed=None`` uses the first table.
    """

    def __init__(self, tables, source_lang: str, target_lang: str):
        if not tables:
            raise ValueError("need at least one substitution table")
        self.capability = TranslationCapability(
            source_lang=source_lang, target_lang=target_lang, supports_sampling=True
        )
        self.tables = [dict(t) for t in tables]

    def translate(self, text: str, seed: int | None = None) -> str:
        table = self.tables[0 if seed is None else seed % len(self.tables)]
        return _WORD_RE.sub(lambda m: table.get(m.group(0), m.group(0)), text)


# Keyword cue words per label, used by the mock classifier.  Each family is
# closed under the demo round-trip tables below, so back-translated text
# keeps its cues.
DEFAULT_KEYWORDS: dict[str, tuple[str, ...]] = {
    "anger": ("angry", "furious", "mad", "rage", "irritated"),
    "anticipation": ("excited", "eager", "thrilled", "expectant"),
    "disgust": ("disgusted", "repulsed", "gross", "revolting"),
    "fear": ("afraid", "scared", "terrified", "panic"),
    "joy": ("happy", "glad", "cheerful", "delighted"),
    "love": ("love", "adore", "cherish"),
    "optimism": ("hopeful", "optimistic", "confident", "upbeat"),
    "pessimism": ("hopeless", "doomed", "bleak", "despair"),
    "sadness": ("sad", "unhappy", "miserable", "grief", "sorrow"),
    "surprise": ("surprised", "astonished", "shocked"),
    "trust": ("trust", "faith", "reliable"),
}


class KeywordClassifier(ClassifierProvider):
    """Scores each label by counting its cue words in the text.

    raw score = base + per_hit * (number of distinct cue words present).
    With the defaults a single hit yields raw +1 and a miss raw -1, i.e.
    activated scores of exactly 1 and 0.
    """

    def __init__(self, rules: dict[str, tuple[str, ...]] | None = None, base: float = -1.0, per_hit: float = 2.0):
        self.capability = ClassifierCapability(label_order=EMOTION_LABELS)
        rules = DEFAULT_KEYWORDS if rules is None else rules
        unknown = set(rules) - set(EMOTION_LABELS)
        if unknown:
            raise ValueError(f"rules reference unknown labels: {sorted(unknown)}")
        self.rules = {label: tuple(words) for label, words in rules.items()}
        self.base = base
        self.per_hit = per_hit

    def raw_scores(self, text: str) -> list[float]:
        present = set(tokenize(text).tokens)
        scores = []
        for label in self.capability.label_order:
            hits = sum(1 for w in self.rules.get(label, ()) if w in present)
            scores.append(self.base + self.per_hit * hits)
        return scores


# Demo round-trip substitution tables.  Each English cue word pivots through
# a French word and comes back as a different cue word of the same label
# family, so the mock back translation rewrites sentences while preserving
# their emotion cues.
DEMO_EN_FR: dict[str, str] = {
    # anger
    "angry": "fache",
    "furious": "furieux",
    "mad": "enrage",
    "rage": "colere",
    "irritated": "irrite",
    # anticipation
    "excited": "excite",
    "eager": "impatient",
    "thrilled": "ravi",
    # disgust
    "disgusted": "degoute",
    "repulsed": "repugne",
    "gross": "repugnant",
    # fear
    "afraid": "effraye",
    "scared": "apeure",
    "terrified": "terrifie",
    "panic": "panique",
    # joy
    "happy": "heureux",
    "glad": "content",
    "cheerful": "joyeux",
    "delighted": "enchante",
    # love
    "love": "amour",
    "adore": "adorer",
    "cherish": "cherir",
    # optimism
    "hopeful": "esperant",
    "optimistic": "optimiste",
    "confident": "confiant",
    "upbeat": "positif",
    # pessimism
    "hopeless": "desespere",
    "doomed": "condamne",
    "bleak": "sombre",
    "despair": "desespoir",
    # sadness
    "sad": "triste",
    "unhappy": "malheureux",
    "miserable": "pitoyable",
    "grief": "chagrin",
    "sorrow": "peine",
    # surprise
    "surprised": "surpris",
    "astonished": "etonne",
    "shocked": "choque",
    # trust
    "trust": "confiance",
    "faith": "foi",
    "reliable": "fiable",
    # neutral filler vocabulary
    "today": "aujourdhui",
    "morning": "matin",
    "night": "nuit",
    "work": "travail",
    "job": "boulot",
    "friend": "ami",
    "family": "famille",
    "news": "nouvelles",
    "weather": "meteo",
    "dog": "chien",
    "exam": "examen",
    "results": "resultats",
    "feeling": "sentiment",
    "feel": "ressens",
}

DEMO_FR_EN: dict[str, str] = {
    # anger
    "fache": "furious",
    "furieux": "mad",
    "enrage": "angry",
    "colere": "irritated",
    "irrite": "rage",
    # anticipation
    "excite": "eager",
    "impatient": "thrilled",
    "ravi": "excited",
    # disgust
    "degoute": "repulsed",
    "repugne": "gross",
    "repugnant": "disgusted",
    # fear
    "effraye": "scared",
    "apeure": "terrified",
    "terrifie": "afraid",
    "panique": "panic",
    # joy
    "heureux": "glad",
    "content": "cheerful",
    "joyeux": "delighted",
    "enchante": "happy",
    # love
    "amour": "adore",
    "adorer": "cherish",
    "cherir": "love",
    # optimism
    "esperant": "optimistic",
    "optimiste": "confident",
    "confiant": "upbeat",
    "positif": "hopeful",
    # pessimism
    "desespere": "doomed",
    "condamne": "bleak",
    "sombre": "hopeless",
    "desespoir": "despair",
    # sadness
    "triste": "unhappy",
    "malheureux": "miserable",
    "pitoyable": "sorrow",
    "chagrin": "sad",
    "peine": "grief",
    # surprise
    "surpris": "astonished",
    "etonne": "shocked",
    "choque": "surprised",
    # trust
    "confiance": "faith",
    "foi": "reliable",
    "fiable": "trust",
    # neutral filler vocabulary
    "aujourdhui": "presently",
    "matin": "daybreak",
    "nuit": "evening",
    "travail": "labor",
    "boulot": "occupation",
    "ami": "companion",
    "famille": "household",
    "nouvelles": "reports",
    "meteo": "forecast",
    "chien": "hound",
    "examen": "assessment",
    "resultats": "outcomes",
    "sentiment": "emotion",
    "ressens": "sense",
}
