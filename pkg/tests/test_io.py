from __future__ import annotations

from pathlib import Path

import pandas as pd
import pytest

from levyrange.exceptions import SpecFileError
from levyrange.utils.io import read_coefficients, read_table, write_table


def test_write_table_prefixes_header_lines(tmp_path: Path) -> None:
    path = tmp_path / "out" / "table.csv"
    frame = pd.DataFrame({"u": [0.5, 1.0], "laplace": [0.1, 1.0 / 3.0]})

    write_table(frame, path, header={"theta": "0.5", "N": 40})

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[:3] == ["# theta: 0.5", "# N: 40", "u,laplace"]
    back = read_table(path)
    assert back["laplace"].iloc[1] == 1.0 / 3.0


def test_write_table_rejects_other_formats(tmp_path: Path) -> None:
    with pytest.raises(SpecFileError, match="Unsupported output format: .parquet"):
        write_table(pd.DataFrame({"x": [1]}), tmp_path / "table.parquet")


def test_read_table_missing_file(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        read_table(tmp_path / "missing.csv")


def test_read_coefficients_skips_comments_and_separators(tmp_path: Path) -> None:
    path = tmp_path / "feta.txt"
    path.write_text("# psi_eta of a 1/2-stable\n-1.5, 0.25\n\n1e-3  # trailing\n", encoding="utf-8")

    assert read_coefficients(path) == [-1.5, 0.25, 1e-3]


def test_read_coefficients_bad_token(tmp_path: Path) -> None:
    path = tmp_path / "feta.txt"
    path.write_text("-1\nabc\n", encoding="utf-8")

    with pytest.raises(SpecFileError, match=":2: invalid coefficient 'abc'"):
        read_coefficients(path)


def test_read_coefficients_empty_file(tmp_path: Path) -> None:
    path = tmp_path / "feta.txt"
    path.write_text("# nothing here\n", encoding="utf-8")

    with pytest.raises(SpecFileError, match="no coefficients"):
        read_coefficients(path)


def test_read_coefficients_missing_file(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        read_coefficients(tmp_path / "missing.txt")
