"""Fixtures shared by unit and integration tests."""

from __future__ import annotations

import json
import typing as t
from pathlib import Path

import pytest

from rep_lab.oracle.example import ExampleFamily


@pytest.fixture
def family() -> ExampleFamily:
    """Closed-form family with t_B = pi/2 and pole coefficient 1."""
    return ExampleFamily(k=4.0, c_b=1.0, lambda10=-1.0, lambda40=1.0)


@pytest.fixture
def write_config(tmp_path: Path) -> t.Callable[..., Path]:
    """Write a JSON run configuration into tmp_path and return its path."""

    def write(document: t.Dict[str, t.Any], name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write
