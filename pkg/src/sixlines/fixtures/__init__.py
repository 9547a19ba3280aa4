"""Bundled surface descriptions used in the worked examples and tests."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from ..surfaces import Surface, surface_from_dict, validate

__all__ = ["builtin_names", "builtin_surface"]

_NAMES = ("s1", "s2", "s3", "s4", "s5")


def builtin_names() -> tuple[str, ...]:
    return _NAMES


@lru_cache(maxsize=None)
def builtin_surface(name: str) -> Surface:
    """Load and validate one of the bundled surfaces by short name."""
    if name not in _NAMES:
        raise KeyError(f"no bundled surface named {name!r} (have {', '.join(_NAMES)})")
    text = resources.files(__package__).joinpath(f"{name}.json").read_text("utf-8")
    surface = surface_from_dict(json.loads(text), name=name)
    validate(surface)
    return surface
