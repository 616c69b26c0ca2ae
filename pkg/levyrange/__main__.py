"""Entry point for running levyrange as a module: python -m levyrange"""

from levyrange.exceptions import DependencyError

try:
    from levyrange.cli import main
except ModuleNotFoundError as exc:  # pragma: no cover - depends on installed extras
    if exc.name not in {"typer", "rich", "click"}:
        raise
    raise DependencyError(
        f"The levyrange CLI needs {exc.name}. Install with: pip install \"levyrange[cli]\""
    ) from exc

if __name__ == "__main__":
    main()
