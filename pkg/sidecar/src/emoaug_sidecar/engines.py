"""Inference engines behind the endpoints: an echo double and real models.

The echo engine returns inputs unchanged and stands in for the models during
integration testing.  The transformers engine loads one pretrained model per
configured role at startup; a load failure aborts startup rather than
serving a half-configured service.
"""

from __future__ import annotations

from .config import ServiceConfig

# Canonical multi-label emotion order; part of the wire contract.
LABEL_ORDER = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "love",
    "optimism",
    "pessimism",
    "sadness",
    "surprise",
    "trust",
)

MASK_SENTINEL = "<mask>"


class RoleNotLoaded(Exception):
    def __init__(self, role: str):
        super().__init__(f"role {role!r} is not loaded on this server")
        self.role = role


class EchoEngines:
    """Returns inputs unchanged; classification reports the neutral state."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.roles = config.configured_roles()

    def fill(self, tokens, mask_indices, top_k=1):
        return [tokens[i] for i in mask_indices]

    def translate(self, text, source, target, seed=None):
        return text

    def classify(self, text):
        return [-1.0] * len(LABEL_ORDER), list(LABEL_ORDER)


class TransformersEngines:
    """Serves real pretrained models for every configured role.

    Fill-mask uses greedy top-1 decoding: each mask position independently
    takes the argmax token.  Translation generates greedily; when the service
    is not in deterministic mode, a request ``seed`` switches generation to
    sampling for multi-fold back translation.
    """

    def __init__(self, config: ServiceConfig):
        import torch  # deferred so the echo service needs no torch install
        from transformers import (
            AutoModelForMaskedLM,
            AutoModelForSeq2SeqLM,
            AutoModelForSequenceClassification,
            AutoTokenizer,
        )

        self._torch = torch
        self.config = config
        self.roles = config.configured_roles()
        self.device = torch.device(config.device)

        if "fill_mask" in self.roles:
            self.mlm_tokenizer = AutoTokenizer.from_pretrained(config.fill_mask_model)
            self.mlm = AutoModelForMaskedLM.from_pretrained(config.fill_mask_model).to(self.device).eval()
        self.translators = {}
        for role, model_id in (
            ("translate_en_fr", config.en_fr_model),
            ("translate_fr_en", config.fr_en_model),
        ):
            if role in self.roles:
                tokenizer = AutoTokenizer.from_pretrained(model_id)
                model = AutoModelForSeq2SeqLM.from_pretrained(model_id).to(self.device).eval()
                self.translators[role] = (tokenizer, model)
        if "classify" in self.roles:
            self.clf_tokenizer = AutoTokenizer.from_pretrained(config.classifier_model)
            self.clf = (
                AutoModelForSequenceClassification.from_pretrained(config.classifier_model)
                .to(self.device)
                .eval()
            )
            id2label = {int(k): v for k, v in self.clf.config.id2label.items()}
            wanted = {label.lower() for label in LABEL_ORDER}
            have = {v.lower() for v in id2label.values()}
            if not wanted <= have:
                raise ValueError(
                    f"classifier labels {sorted(have)} do not cover the required set {sorted(wanted)}"
                )
            lower_to_index = {v.lower(): k for k, v in id2label.items()}
            self._clf_order = [lower_to_index[label] for label in LABEL_ORDER]

    def fill(self, tokens, mask_indices, top_k=1):
        torch = self._torch
        mask_token = self.mlm_tokenizer.mask_token
        words = list(tokens)
        for i in mask_indices:
            words[i] = mask_token
        text = " ".join(words)
        encoded = self.mlm_tokenizer(text, return_tensors="pt", truncation=True).to(self.device)
        mask_positions = (encoded["input_ids"][0] == self.mlm_tokenizer.mask_token_id).nonzero(as_tuple=True)[0]
        if len(mask_positions) != len(mask_indices):
            raise ValueError(
                f"tokenizer produced {len(mask_positions)} mask tokens for {len(mask_indices)} requested masks"
            )
        with torch.no_grad():
            logits = self.mlm(**encoded).logits[0]
        replacements = []
        for position in mask_positions:
            token_id = int(logits[position].argmax())
            word = self.mlm_tokenizer.decode([token_id]).strip()
            replacements.append(word or self.mlm_tokenizer.convert_ids_to_tokens(token_id))
        return replacements

    def translate(self, text, source, target, seed=None):
        torch = self._torch
        role = f"translate_{source}_{target}"
        if role not in self.translators:
            raise RoleNotLoaded(role)
        tokenizer, model = self.translators[role]
        encoded = tokenizer(text, return_tensors="pt", truncation=True).to(self.device)
        sample = seed is not None and not self.config.deterministic
        if sample:
            torch.manual_seed(seed)
        with torch.no_grad():
            output = model.generate(
                **encoded, num_beams=1, do_sample=sample, max_new_tokens=512
            )
        return tokenizer.decode(output[0], skip_special_tokens=True)

    def classify(self, text):
        torch = self._torch
        encoded = self.clf_tokenizer(text, return_tensors="pt", truncation=True).to(self.device)
        with torch.no_grad():
            logits = self.clf(**encoded).logits[0]
        return [float(logits[i]) for i in self._clf_order], list(LABEL_ORDER)


def build_engines(config: ServiceConfig):
    if config.echo:
        return EchoEngines(config)
    return TransformersEngines(config)
