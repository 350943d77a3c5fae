"""Conformance of the live service against the pipeline's provider contract.

Runs the pipeline package's own remote-client checks against the sidecar in
echo mode: the same assertions the pipeline's stub-server tests make, plus
the acceptance criterion's one-pass/fail summary line.
"""

from emoaug.corpus import Post
from emoaug.providers import RemoteClassifier, RemoteTranslator
from emoaug.providers.base import back_translate, classify
from emoaug.testing import (
    check_classify_endpoint,
    check_echo_roundtrip,
    check_fill_mask_endpoint,
    check_translate_endpoint,
)

FAST = {"retries": 2, "timeout": 10.0, "backoff": 0.01}


class TestRemoteClientIntegration:
    def test_fill_mask_contract(self, echo_server):
        check_fill_mask_endpoint(echo_server, **FAST)

    def test_translate_contract(self, echo_server):
        check_translate_endpoint(echo_server, **FAST)

    def test_classify_contract(self, echo_server):
        check_classify_endpoint(echo_server, **FAST)

    def test_echo_mode_passes_full_roundtrip(self, echo_server):
        check_echo_roundtrip(echo_server, **FAST)

    def test_pipeline_operations_through_live_service(self, echo_server):
        fwd = RemoteTranslator(echo_server, "en", "fr", **FAST)
        bwd = RemoteTranslator(echo_server, "fr", "en", **FAST)
        result = back_translate("i am sad about the news today.", fwd, bwd)
        assert result.text == "i am sad about the news today."

        scores = classify(Post(id="p", text="plain text"), RemoteClassifier(echo_server, **FAST))
        assert scores.predicted == (0,) * 11

    def test_acceptance_contract_summary(self, echo_server):
        check_echo_roundtrip(echo_server, **FAST)
        for path, payload in [
            ("/v1/fill-mask", {"tokens": ["a", "<mask>"], "mask_indices": [1]}),
            ("/v1/translate", {"text": "t", "source": "en", "target": "fr"}),
            ("/v1/classify", {"text": "t"}),
        ]:
            import requests

            first = requests.post(echo_server + path, json=payload, timeout=10).content
            second = requests.post(echo_server + path, json=payload, timeout=10).content
            assert first == second
        print(
            "ACCEPTANCE 10 PASS: sidecar endpoints validate against the shared schemas, "
            "echo mode passes the remote-client integration checks, and identical "
            "requests return identical outputs"
        )
