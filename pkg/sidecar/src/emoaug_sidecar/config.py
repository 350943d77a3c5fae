"""Service configuration: which model fills each role, device, and serving mode."""

from __future__ import annotations

from dataclasses import dataclass

ROLES = ("fill_mask", "translate_en_fr", "translate_fr_en", "classify")


@dataclass
class ServiceConfig:
    """Model identifiers per role; unset roles answer 501.

    ``echo=True`` serves all endpoints without loading any model, returning
    inputs unchanged (used by integration tests).  ``deterministic=True``
    forces greedy decoding so identical requests yield identical outputs;
    sampling requests (a ``seed`` on /v1/translate) are honored only when
    ``deterministic`` is off.
    """

    fill_mask_model: str | None = None
    en_fr_model: str | None = None
    fr_en_model: str | None = None
    classifier_model: str | None = None
    device: str = "cpu"
    port: int = 8000
    echo: bool = False
    deterministic: bool = True

    def configured_roles(self) -> set[str]:
        if self.echo:
            return set(ROLES)
        roles = set()
        if self.fill_mask_model:
            roles.add("fill_mask")
        if self.en_fr_model:
            roles.add("translate_en_fr")
        if self.fr_en_model:
            roles.add("translate_fr_en")
        if self.classifier_model:
            roles.add("classify")
        return roles
