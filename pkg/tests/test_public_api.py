from __future__ import annotations

import importlib

import pytest

import levyrange


def test_version_is_exposed() -> None:
    assert levyrange.__version__ == "0.1.0"


@pytest.mark.parametrize("name", [n for n in levyrange.__all__ if n != "__version__"])
def test_lazy_exports_resolve(name: str) -> None:
    module_name, attr_name = levyrange._EXPORTS[name]
    expected = getattr(importlib.import_module(module_name), attr_name)
    assert getattr(levyrange, name) is expected


def test_unknown_attribute_raises() -> None:
    with pytest.raises(AttributeError, match="no attribute 'nope'"):
        levyrange.nope  # noqa: B018


def test_dir_lists_exports() -> None:
    names = dir(levyrange)
    assert "decide_membership" in names
    assert "simulate_functional" in names


def test_exceptions_share_a_base() -> None:
    for name in ("ValidationError", "SpecFileError", "DomainError", "NumericError", "UnsupportedCaseError"):
        assert issubclass(getattr(levyrange, name), levyrange.LevyRangeError)
