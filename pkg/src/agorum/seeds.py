"""Seed file loading: organizer-provided starting policies and labeled cases.

Seed files are YAML or JSON matching ``resources/seed.schema.json`` (shipped
with the package and validated here via jsonschema). Seeding happens in the
setup phase: the organizer account creates each policy with its cases inline,
so seed cases carry labels but no votes.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING

import jsonschema
import yaml

from .engine import LinkSpec, NewCaseSpec
from .errors import ValidationError
from .model import CampaignConfig, Label

if TYPE_CHECKING:
    from .service import Platform, Principal


def seed_schema() -> dict:
    raw = resources.files("agorum").joinpath("resources/seed.schema.json").read_text("utf-8")
    return json.loads(raw)


def parse_seed_text(text: str) -> dict:
    # YAML is a superset of JSON, so one parser covers both formats.
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError("seed_file", f"seed file is not valid YAML/JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError("seed_file", "seed file must contain a mapping")
    return data


def validate_seed(data: dict) -> dict:
    try:
        jsonschema.validate(data, seed_schema())
    except jsonschema.ValidationError as exc:
        raise ValidationError("seed_file", f"seed file violates the schema: {exc.message}") from exc
    config = data["campaign"].get("config", {})
    if not config.get("case_features_enabled", True):
        for policy in data["policies"]:
            if policy.get("cases"):
                raise ValidationError(
                    "seed_file", "campaigns without case features must not seed cases"
                )
    return data


def load_seed_file(path: str | Path) -> dict:
    return validate_seed(parse_seed_text(Path(path).read_text("utf-8")))


def apply_seed(platform: "Platform", data: dict) -> tuple[str, "Principal"]:
    """Create and populate a campaign from validated seed data.

    Returns the campaign id and the organizer principal (the token is shown
    once; distribute participant invites from it).
    """
    campaign_spec = data["campaign"]
    config = CampaignConfig.from_dict(campaign_spec.get("config", {}))
    view, organizer = platform.create_campaign(
        title=campaign_spec["title"],
        description=campaign_spec.get("description", ""),
        organizer_name=campaign_spec.get("organizer_name", "organizer"),
        config=config,
    )
    campaign_id = view["id"]
    for policy in data["policies"]:
        links = [
            LinkSpec(
                label=Label(case["label"]),
                new_case=NewCaseSpec(title=case["title"], description=case["description"]),
            )
            for case in policy.get("cases", [])
        ]
        platform.create_policy(
            campaign_id,
            author=organizer.user_id,
            title=policy["title"],
            description=policy["description"],
            initial_links=links,
        )
    return campaign_id, organizer


def seed_from_file(platform: "Platform", path: str | Path) -> tuple[str, "Principal"]:
    return apply_seed(platform, load_seed_file(path))
