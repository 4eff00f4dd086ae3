"""Shipped Turtle fixtures: the EV-battery demo plus seeded-fault files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def path(name: str = "demo.ttl") -> Path:
    """Filesystem path of a shipped fixture."""
    candidate = resources.files(__package__) / name
    with resources.as_file(candidate) as concrete:
        return Path(concrete)


def read(name: str = "demo.ttl") -> str:
    return (resources.files(__package__) / name).read_text(encoding="utf-8")
