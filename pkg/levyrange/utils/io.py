"""CSV output and coefficient-file input."""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path

import pandas as pd

from levyrange.exceptions import SpecFileError


def write_table(
    df: pd.DataFrame, path: Path | str, header: Mapping[str, object] | None = None
) -> None:
    """
    Write a DataFrame as CSV, preceded by ``# key: value`` header lines.

    Raises:
        SpecFileError: If the target is not a .csv path
    """
    path = Path(path)
    if path.suffix.lower() != ".csv":
        raise SpecFileError(f"Unsupported output format: {path.suffix or '<none>'} (expected .csv)")
    if path.parent.as_posix():
        path.parent.mkdir(parents=True, exist_ok=True)

    with path.open("w", encoding="utf-8", newline="") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key}: {value}\n")
        df.to_csv(fh, index=False, float_format="%.17g")


def read_table(path: Path | str) -> pd.DataFrame:
    """Read a CSV written by write_table (header lines are skipped)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return pd.read_csv(path, comment="#")


def read_coefficients(path: Path | str) -> list[float]:
    """
    Read Maclaurin coefficients f_1, f_2, ... of psi_eta from a text file.

    Values may be separated by commas, whitespace or newlines; ``#`` starts a comment.

    Raises:
        FileNotFoundError: If the file does not exist
        SpecFileError: If a value cannot be parsed or the file is empty
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Coefficient file not found: {path}")

    values: list[float] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        content = line.split("#", 1)[0].replace(",", " ").strip()
        for token in content.split():
            try:
                values.append(float(token))
            except ValueError as exc:
                raise SpecFileError(f"{path}:{lineno}: invalid coefficient {token!r}") from exc
    if not values:
        raise SpecFileError(f"{path}: no coefficients found")
    return values
