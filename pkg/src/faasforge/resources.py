"""Access to data files shipped inside the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    """Absolute path of a file under faasforge/data."""
    path = Path(str(resources.files("faasforge") / "data" / name))
    if not path.is_file():
        raise FileNotFoundError(f"packaged data file not found: {name}")
    return path


def data_text(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


def data_bytes(name: str) -> bytes:
    return data_path(name).read_bytes()


def fixture_path(name: str) -> Path:
    """Absolute path of a file under faasforge/fixtures."""
    path = Path(str(resources.files("faasforge") / "fixtures" / name))
    if not path.is_file():
        raise FileNotFoundError(f"packaged fixture not found: {name}")
    return path
