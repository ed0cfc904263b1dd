"""Name canonicalization shared by the model, validator and text dialect."""

from __future__ import annotations

import re

STATE_SEP = "::"


def canonical_name(text: str) -> str:
    """Trim and collapse internal whitespace runs; case is preserved."""
    return " ".join(text.split())


def is_entity_name(name: str) -> bool:
    """True if ``name`` is canonical and usable in ``Owner::state`` references."""
    return bool(name) and canonical_name(name) == name and STATE_SEP not in name and not name.endswith(":")


def slugify(text: str) -> str:
    return re.sub(r"[^0-9a-z]+", "-", text.lower()).strip("-") or "x"
