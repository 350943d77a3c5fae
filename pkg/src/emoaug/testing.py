"""Contract checks for inference services implementing the provider endpoints.

These helpers are used by this package's own remote-client tests against a
stub server, and by any service implementation (such as the bundled sidecar)
to prove endpoint conformance.  All payloads and responses are validated
against the JSON schema files shipped under ``emoaug/schemas``.
"""

from __future__ import annotations

import json
from importlib import resources

from .corpus import EMOTION_LABELS, Post
from .masking import MASK_TOKEN, MaskedSentence
from .providers.base import back_translate, classify, fill
from .providers.remote import RemoteClassifier, RemoteFillMask, RemoteTranslator

__all__ = [
    "load_schema",
    "validate_payload",
    "check_fill_mask_endpoint",
    "check_translate_endpoint",
    "check_classify_endpoint",
    "check_echo_roundtrip",
]


def load_schema(name: str) -> dict:
    """Load one of the shipped endpoint schemas (e.g. 'fill_mask_request')."""
    ref = resources.files("emoaug").joinpath(f"schemas/{name}.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def validate_payload(payload: dict, schema_name: str):
    """Validate a payload against a shipped schema; raises on mismatch."""
    import jsonschema

    jsonschema.validate(payload, load_schema(schema_name))


def check_fill_mask_endpoint(base_url: str, **client_kwargs):
    """The endpoint returns exactly one well-formed replacement per mask."""
    provider = RemoteFillMask(base_url, **client_kwargs)
    masked = MaskedSentence(
        tokens=("i", "am", MASK_TOKEN, "today", "."),
        removed={2: "sad"},
    )
    completed = fill(masked, provider)
    assert len(completed) == 5
    assert completed[2] != MASK_TOKEN and completed[2]
    assert completed[0] == "i" and completed[3] == "today"
    return completed


def check_translate_endpoint(base_url: str, **client_kwargs):
    """A round trip through the pivot language yields non-empty text."""
    fwd = RemoteTranslator(base_url, "en", "fr", **client_kwargs)
    bwd = RemoteTranslator(base_url, "fr", "en", **client_kwargs)
    result = back_translate("the quick brown fox", fwd, bwd)
    assert result.text and result.intermediate
    return result


def check_classify_endpoint(base_url: str, **client_kwargs):
    """The endpoint returns 11 raw scores in the canonical label order."""
    provider = RemoteClassifier(base_url, **client_kwargs)
    scores = classify(Post(id="probe", text="i am sad today"), provider)
    assert len(scores.raw) == len(EMOTION_LABELS)
    assert all(0.0 <= a <= 1.0 for a in scores.activated)
    return scores


def check_echo_roundtrip(base_url: str, **client_kwargs):
    """In echo mode every endpoint returns its inputs unchanged.

    Fill-mask echoes the removed tokens (completing back to the original
    sentence), translation echoes the text, and classification returns the
    neutral all-negative score vector.
    """
    completed = check_fill_mask_endpoint(base_url, **client_kwargs)
    assert completed == ("i", "am", "sad", "today", ".")
    result = check_translate_endpoint(base_url, **client_kwargs)
    assert result.intermediate == "the quick brown fox"
    assert result.text == "the quick brown fox"
    scores = check_classify_endpoint(base_url, **client_kwargs)
    assert scores.predicted == (0,) * len(EMOTION_LABELS)
