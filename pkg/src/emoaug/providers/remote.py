"""HTTP client providers for a remote inference service.

Wire contract (JSON over HTTP, all POST):

    /v1/fill-mask  {"tokens": [...], "mask_indices": [...], "top_k": 1}
                   -> {"replacements": ["w", ...]}
    /v1/translate  {"text": "...", "source": "en", "target": "fr"}
                   -> {"text": "..."}
    /v1/classify   {"text": "..."}
                   -> {"raw_scores": [11 floats], "label_order": [...]}

200 is success; 4xx is permanent; 5xx and transport failures are retryable
with exponential backoff.  Each request carries an X-Request-Id header the
service echoes back for tracing.

The fill-mask payload carries the original token list; ``mask_indices``
names the positions the service must treat as masked (an honest service
substitutes its own mask token there before inference, and must not
condition on the original tokens at those positions outside echo mode).
"""

from __future__ import annotations

import json
import logging
import time
import uuid

import requests

from ..masking import MaskedSentence
from .base import (
    ClassifierCapability,
    ClassifierProvider,
    FillMaskCapability,
    FillMaskProvider,
    PermanentProviderError,
    RetryableProviderError,
    TranslationCapability,
    TranslationProvider,
)

__all__ = [
    "remote_call",
    "RemoteFillMask",
    "RemoteTranslator",
    "RemoteClassifier",
]

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 3
DEFAULT_TIMEOUT = 10.0
DEFAULT_BACKOFF = 0.5


def remote_call(
    base_url: str,
    path: str,
    payload: dict,
    retries: int = DEFAULT_RETRIES,
    timeout: float = DEFAULT_TIMEOUT,
    backoff: float = DEFAULT_BACKOFF,
    session: requests.Session | None = None,
) -> dict:
    """POST a JSON payload, retrying transient failures with exponential backoff.

    ``retries`` counts re-attempts after the first try.  Transport errors and
    5xx responses are retried; 4xx and malformed response bodies are
    permanent.
    """
    url = base_url.rstrip("/") + path
    post = (session or requests).post
    request_id = uuid.uuid4().hex
    last_error: Exception | None = None
    for attempt in range(retries + 1):
        if attempt:
            time.sleep(backoff * (2 ** (attempt - 1)))
        try:
            resp = post(url, json=payload, timeout=timeout, headers={"X-Request-Id": request_id})
        except requests.RequestException as exc:
            last_error = exc
            continue
        if 500 <= resp.status_code < 600:
            last_error = RetryableProviderError(f"{url} returned {resp.status_code}")
            continue
        if resp.status_code != 200:
            raise PermanentProviderError(f"{url} returned {resp.status_code}: {resp.text[:500]}")
        try:
            body = resp.json()
        except (json.JSONDecodeError, ValueError):
            logger.error("malformed response from %s (request %s): %r", url, request_id, resp.text[:500])
            raise PermanentProviderError(f"{url}: malformed response JSON") from None
        if not isinstance(body, dict):
            logger.error("non-object response from %s (request %s): %r", url, request_id, resp.text[:500])
            raise PermanentProviderError(f"{url}: response is not a JSON object")
        return body
    raise RetryableProviderError(
        f"{url} unreachable after {retries + 1} attempts: {last_error}"
    ) from (last_error if isinstance(last_error, Exception) else None)


class RemoteFillMask(FillMaskProvider):
    def __init__(
        self,
        base_url: str,
        name: str = "remote-fill-mask",
        max_input_tokens: int = 512,
        retries: int = DEFAULT_RETRIES,
        timeout: float = DEFAULT_TIMEOUT,
        backoff: float = DEFAULT_BACKOFF,
    ):
        self.capability = FillMaskCapability(name=name, max_input_tokens=max_input_tokens)
        self.base_url = base_url
        self.retries = retries
        self.timeout = timeout
        self.backoff = backoff

    def replacements(self, masked: MaskedSentence) -> list[str]:
        payload = {
            "tokens": list(masked.restore()),
            "mask_indices": list(masked.mask_positions()),
            "top_k": 1,
        }
        body = remote_call(
            self.base_url, "/v1/fill-mask", payload,
            retries=self.retries, timeout=self.timeout, backoff=self.backoff,
        )
        reps = body.get("replacements")
        if not isinstance(reps, list) or not all(isinstance(r, str) for r in reps):
            raise PermanentProviderError("fill-mask response missing 'replacements' list of strings")
        return reps


class RemoteTranslator(TranslationProvider):
    def __init__(
        self,
        base_url: str,
        source_lang: str,
        target_lang: str,
        supports_sampling: bool = False,
        retries: int = DEFAULT_RETRIES,
        timeout: float = DEFAULT_TIMEOUT,
        backoff: float = DEFAULT_BACKOFF,
    ):
        self.capability = TranslationCapability(
            source_lang=source_lang, target_lang=target_lang, supports_sampling=supports_sampling
        )
        self.base_url = base_url
        self.retries = retries
        self.timeout = timeout
        self.backoff = backoff

    def translate(self, text: str, seed: int | None = None) -> str:
        payload = {
            "text": text,
            "source": self.capability.source_lang,
            "target": self.capability.target_lang,
        }
        if seed is not None and self.capability.supports_sampling:
            payload["seed"] = seed
        body = remote_call(
            self.base_url, "/v1/translate", payload,
            retries=self.retries, timeout=self.timeout, backoff=self.backoff,
        )
        out = body.get("text")
        if not isinstance(out, str) or not out:
            raise PermanentProviderError("translate response missing non-empty 'text'")
        return out


class RemoteClassifier(ClassifierProvider):
    def __init__(
        self,
        base_url: str,
        retries: int = DEFAULT_RETRIES,
        timeout: float = DEFAULT_TIMEOUT,
        backoff: float = DEFAULT_BACKOFF,
    ):
        self.capability = ClassifierCapability()
        self.base_url = base_url
        self.retries = retries
        self.timeout = timeout
        self.backoff = backoff

    def raw_scores(self, text: str) -> list[float]:
        body = remote_call(
            self.base_url, "/v1/classify", {"text": text},
            retries=self.retries, timeout=self.timeout, backoff=self.backoff,
        )
        scores = body.get("raw_scores")
        if not isinstance(scores, list) or not all(isinstance(s, (int, float)) for s in scores):
            raise PermanentProviderError("classify response missing 'raw_scores' list of numbers")
        order = body.get("label_order")
        if order is not None and tuple(order) != self.capability.label_order:
            raise PermanentProviderError(f"classify response label_order mismatch: {order}")
        return [float(s) for s in scores]
