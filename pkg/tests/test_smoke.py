"""Smoke tests for the levyrange package."""

from __future__ import annotations

import builtins
import importlib
import math
import sys

import pytest

import levyrange
from levyrange import LevyTriplet, PositiveLawSpec, decide_membership, support_of_functional
from levyrange.exceptions import DependencyError
from levyrange.models import Decision, SupportKind


def test_import_levyrange() -> None:
    """The package imports and carries a version."""
    assert levyrange is not None
    assert hasattr(levyrange, "__version__")


def test_import_cli() -> None:
    """The CLI module imports when the cli extra is installed."""
    pytest.importorskip("typer")
    import levyrange.cli

    assert hasattr(levyrange.cli, "app")


def test_support_and_range_through_public_api() -> None:
    support = support_of_functional(LevyTriplet.drift(2.0), LevyTriplet.drift(1.0))
    assert support.kind is SupportKind.POINT
    assert support.lower == pytest.approx(0.5)

    verdict = decide_membership(PositiveLawSpec.stable(0.5, 1.0), LevyTriplet.brownian(1.0, 1.0))
    assert verdict.decision is Decision.ACCEPT
    assert verdict.eta_witness.drift.value == pytest.approx(math.pi / 2, rel=1e-9)


def test_module_entrypoint_raises_dependencyerror_without_cli_extra(monkeypatch) -> None:
    real_import = builtins.__import__

    def fake_import(name, *args, **kwargs):
        root = name.split(".")[0]
        if root in {"typer", "click", "rich"}:
            raise ModuleNotFoundError(f"forced missing {root}", name=root)
        return real_import(name, *args, **kwargs)

    monkeypatch.delitem(sys.modules, "levyrange.cli", raising=False)
    monkeypatch.delitem(sys.modules, "levyrange.__main__", raising=False)
    monkeypatch.setattr(builtins, "__import__", fake_import)

    with pytest.raises(DependencyError, match=r'Install with: pip install "levyrange\[cli\]"$'):
        importlib.import_module("levyrange.__main__")
