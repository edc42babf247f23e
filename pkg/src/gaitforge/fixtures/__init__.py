"""Bundled data tables (model bank, rule tables, angle ranges).

The JSON files here are the single source of truth for both the runtime and
the test suite. Set ``GAITFORGE_FIXTURES`` to point at a directory with
replacement files.
"""

import os
from importlib import resources
from pathlib import Path


def fixture_dir() -> Path:
    override = os.environ.get("GAITFORGE_FIXTURES")
    if override:
        return Path(override)
    return Path(resources.files(__name__))


def fixture_path(name: str) -> Path:
    path = fixture_dir() / name
    if not path.exists():
        raise FileNotFoundError(f"fixture {name!r} not found in {path.parent}")
    return path
