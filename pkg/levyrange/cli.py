"""CLI entrypoint for levyrange using Typer."""

from __future__ import annotations

import json
import math
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn, TypeVar

import numpy as np
import pandas as pd
import typer
from pydantic import ValidationError as PydanticValidationError
from typer.core import TyperGroup

from levyrange.brownian.frobenius import frobenius_solve
from levyrange.brownian.riccati import BmDriftParams
from levyrange.cli_config import CLIConfig
from levyrange.constants import (
    EXIT_INCONCLUSIVE,
    EXIT_REJECT,
    EXIT_SUCCESS,
    EXIT_USAGE,
    SE_BAND,
)
from levyrange.context import AppContext, map_exception_to_exit_code
from levyrange.exceptions import DomainError, SpecFileError, ValidationError
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import Decision
from levyrange.ranges.criterion import decide_membership
from levyrange.ranges.laws import PositiveLawSpec
from levyrange.ranges.stable import StableConvolutionSpec, preimage_form, stable_range_check
from levyrange.simulation.engine import empirical_laplace, simulate_functional
from levyrange.specs import (
    dump_process_spec,
    load_law_spec,
    load_process_spec,
    power_sum_spec,
    spec_digest,
)
from levyrange.support.classifier import support_of_functional
from levyrange.utils.io import read_coefficients, write_table
from levyrange.utils.logging import configure_logging_json, get_logger

logger = get_logger(__name__)

T = TypeVar("T")


def _click_exception_type(name: str) -> type[Exception]:
    """Exception class from the click namespace typer is built on (vendored or standalone)."""
    for klass in typer.BadParameter.__mro__:
        if klass.__name__ == name:
            return klass
    raise LookupError(name)  # pragma: no cover


UsageError = _click_exception_type("UsageError")
ClickException = _click_exception_type("ClickException")

_DECISION_EXIT = {
    Decision.ACCEPT: EXIT_SUCCESS,
    Decision.REJECT: EXIT_REJECT,
    Decision.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class LevyRangeGroup(TyperGroup):
    """Typer group whose usage errors exit with EXIT_USAGE."""

    def parse_args(self, ctx, args):
        try:
            return super().parse_args(ctx, args)
        except UsageError as exc:
            exc.exit_code = EXIT_USAGE  # type: ignore[attr-defined]
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except UsageError as exc:
            exc.exit_code = EXIT_USAGE  # type: ignore[attr-defined]
            raise


app = typer.Typer(
    name="levyrange",
    help="Support, range and Monte Carlo tools for exponential functionals of Lévy processes",
    cls=LevyRangeGroup,
    no_args_is_help=True,
    add_completion=False,
)


def _format_error_message(error: Exception | str) -> str:
    if (
        isinstance(error, ValidationError)
        and not isinstance(error, SpecFileError)
        and isinstance(error.__cause__, PydanticValidationError)
    ):
        return _format_error_message(error.__cause__)
    if isinstance(error, PydanticValidationError):
        fragments: list[str] = []
        for err in error.errors():
            location = ".".join(str(part) for part in err.get("loc", ()) if part != "__root__")
            msg = err.get("msg", "").strip()
            if location:
                fragments.append(f"{location}: {msg}")
            elif msg:
                fragments.append(msg)
        detail = "; ".join(fragments).strip()
        if detail:
            return f"Invalid input: {detail}"
    return " ".join(str(error).split())


def _emit_error(ctx: AppContext | None, error: Exception | str, *, hint: str | None = None) -> None:
    message = _format_error_message(error)
    if hint is None and isinstance(error, FileNotFoundError):
        hint = "Check that the path exists and is readable."

    console = ctx.get_console(stderr=True) if ctx else AppContext.create().get_console(stderr=True)
    console.print(f"Error: {message}", soft_wrap=False, overflow="ignore", no_wrap=True)
    if hint:
        console.print(f"Hint: {hint}", soft_wrap=False, overflow="ignore", no_wrap=True)


def _cli_exit(code: int, *, exc: Exception | None = None) -> NoReturn:
    if exc is None:
        raise typer.Exit(code=code)
    raise typer.Exit(code=code) from exc


def _cli_fail(
    ctx: AppContext | None,
    *,
    error: Exception | str,
    exc_for_code: Exception | None = None,
    hint: str | None = None,
) -> NoReturn:
    _emit_error(ctx, error, hint=hint)
    code_exc: Exception
    if exc_for_code is not None:
        code_exc = exc_for_code
    elif isinstance(error, Exception):
        code_exc = error
    else:
        code_exc = RuntimeError(str(error))
    _cli_exit(
        map_exception_to_exit_code(code_exc),
        exc=exc_for_code or (error if isinstance(error, Exception) else None),
    )


def _guard(ctx: AppContext, fn: Callable[[], T]) -> T:
    try:
        return fn()
    except typer.Exit:
        raise
    except Exception as exc:
        logger.info("command_failed", error_type=type(exc).__name__, exc_info=True)
        _cli_fail(ctx, error=exc)


def _start(
    overrides: dict[str, Any], config_path: Path | None
) -> tuple[AppContext, CLIConfig]:
    base_ctx = AppContext.create()
    provided = {key for key, value in overrides.items() if value is not None}
    try:
        cli_config = CLIConfig.from_sources(
            cli_args=overrides, config_path=config_path, cli_provided_keys=provided
        )
        numerics = cli_config.to_numerics_config()
    except (FileNotFoundError, PydanticValidationError, ValidationError) as exc:
        _cli_fail(base_ctx, error=exc, exc_for_code=exc)

    ctx = AppContext.create(
        quiet=cli_config.quiet,
        verbose=cli_config.verbose,
        output_format=cli_config.format,
        numerics=numerics,
    )
    configure_logging_json(level=cli_config.log_level)
    return ctx, cli_config


def _jsonable(value: Any) -> Any:  # noqa: ANN401
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if hasattr(value, "value") and not isinstance(value, (int, float, str, bool)):
        return value.value
    return value


def _emit_document(
    ctx: AppContext,
    cli_config: CLIConfig,
    command: str,
    result: dict[str, Any],
    human_lines: Sequence[str],
    *,
    inputs: dict[str, Path] | None = None,
    seed: int | None = None,
) -> None:
    """Print the structured document, or the human lines preceded by the resolved config."""
    from levyrange import __version__

    console = ctx.get_console()
    config = cli_config.model_dump(mode="json")
    if ctx.structured:
        document = {
            "command": command,
            "config": config,
            "provenance": {
                "levyrange_version": __version__,
                "spec_digests": {
                    name: spec_digest(path) for name, path in sorted((inputs or {}).items())
                },
                "seed": seed,
            },
            "result": result,
        }
        console.print(json.dumps(_jsonable(document), sort_keys=True), soft_wrap=True)
        return
    if not ctx.quiet_mode:
        console.print(f"config: {json.dumps(_jsonable(config), sort_keys=True)}", soft_wrap=True)
    for line in human_lines:
        console.print(line, soft_wrap=True)


def _load_process(path: Path) -> LevyTriplet:
    try:
        return load_process_spec(path).to_triplet()
    except SpecFileError:
        raise
    except (ValidationError, DomainError) as exc:
        raise SpecFileError(f"{path}: {exc}") from exc


def _load_law(path: Path) -> PositiveLawSpec:
    try:
        return load_law_spec(path).to_law()
    except SpecFileError:
        raise
    except (ValidationError, DomainError) as exc:
        raise SpecFileError(f"{path}: {exc}") from exc


def _parse_floats(raw: str, name: str) -> list[float]:
    try:
        values = [float(token) for token in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise ValidationError(f"{name} must be a comma-separated list of numbers, got {raw!r}") from exc
    if not values:
        raise ValidationError(f"{name} must not be empty")
    return values


def _parse_coefficients(raw: str) -> list[float]:
    """Comma-separated f_1, f_2, ... or the path of a coefficient file."""
    try:
        return _parse_floats(raw, "--feta")
    except ValidationError:
        if Path(raw).exists():
            return read_coefficients(raw)
        raise


def _parse_grid(raw: str) -> np.ndarray:
    """``lo:hi:n`` -> n evenly spaced points."""
    parts = raw.split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"--grid must look like lo:hi:n, got {raw!r}") from exc
    if not (0 < lo < hi) or n < 2:
        raise ValidationError("--grid needs 0 < lo < hi and n >= 2")
    return np.linspace(lo, hi, n)


_FORMAT_HELP = "Output format: human or structured (one JSON document)"
_CONFIG_HELP = "Path to YAML config file with CLI options"


@app.command()
def support(
    xi: Path = typer.Option(..., "--xi", help="Process spec of xi (YAML)"),
    eta: Path = typer.Option(..., "--eta", help="Process spec of eta (YAML)"),
    output_format: str | None = typer.Option(None, "--format", help=_FORMAT_HELP),
    config: Path | None = typer.Option(None, "--config", "-c", help=_CONFIG_HELP),
    verbose: bool | None = typer.Option(None, "--verbose/--no-verbose", "-v"),
    quiet: bool | None = typer.Option(None, "--quiet/--no-quiet", "-q"),
):
    """Classify the support of the exponential functional."""
    ctx, cfg = _start(
        {"format": output_format, "verbose": verbose, "quiet": quiet}, config
    )
    result = _guard(ctx, lambda: support_of_functional(_load_process(xi), _load_process(eta)))
    _emit_document(
        ctx,
        cfg,
        "support",
        result.to_dict(),
        [f"support: {result.kind.value} {result.describe()}"],
        inputs={"xi": xi, "eta": eta},
    )
    _cli_exit(EXIT_SUCCESS)


@app.command("range-check")
def range_check(
    mu: Path = typer.Option(..., "--mu", help="Law spec of mu (YAML)"),
    xi: Path = typer.Option(..., "--xi", help="Process spec of xi (YAML)"),
    method: str | None = typer.Option(
        None, "--method", help="auto, general, finite-k, growth or stable"
    ),
    witness_csv: Path | None = typer.Option(
        None, "--witness-csv", help="Write the eta Laplace exponent on the numeric grid"
    ),
    output_format: str | None = typer.Option(None, "--format", help=_FORMAT_HELP),
    config: Path | None = typer.Option(None, "--config", "-c", help=_CONFIG_HELP),
    verbose: bool | None = typer.Option(None, "--verbose/--no-verbose", "-v"),
    quiet: bool | None = typer.Option(None, "--quiet/--no-quiet", "-q"),
):
    """Decide whether mu lies in the range of the exponential-functional map for xi."""
    ctx, cfg = _start(
        {"format": output_format, "verbose": verbose, "quiet": quiet, "method": method}, config
    )
    verdict = _guard(
        ctx, lambda: decide_membership(_load_law(mu), _load_process(xi), cfg.method, ctx.numerics)
    )

    lines = [
        f"decision: {verdict.decision.value}",
        f"method: {verdict.method}",
        f"certificate: {verdict.certificate}",
    ]
    witness = verdict.eta_witness
    if witness is not None:
        lines.append(f"eta drift: {witness.drift.value:.12g}")
        if witness_csv is not None:
            grid = ctx.numerics.bernstein_grid()

            def write_witness() -> None:
                table = pd.DataFrame({"u": grid, "psi_eta": [witness.exponent(float(u)) for u in grid]})
                header = {"method": verdict.method, "eta_drift": repr(witness.drift.value)}
                write_table(table, witness_csv, header=header)

            _guard(ctx, write_witness)
            lines.append(f"witness: {witness_csv}")

    _emit_document(
        ctx, cfg, "range-check", verdict.to_dict(), lines, inputs={"mu": mu, "xi": xi}
    )
    _cli_exit(_DECISION_EXIT[verdict.decision])


@app.command("preimage-stable")
def preimage_stable(
    alpha: float = typer.Option(..., "--alpha", help="Stable index in (0, 1)"),
    c: float = typer.Option(..., "--c", help="Scale of the Lévy density c x^{-1-alpha}"),
    a: float = typer.Option(..., "--a", help="Drift of xi = sigma B + a t"),
    sigma: float = typer.Option(..., "--sigma", help="Volatility of xi"),
    drift: float = typer.Option(0.0, "--drift", help="Drift of the stable law"),
    output_format: str | None = typer.Option(None, "--format", help=_FORMAT_HELP),
    config: Path | None = typer.Option(None, "--config", "-c", help=_CONFIG_HELP),
    verbose: bool | None = typer.Option(None, "--verbose/--no-verbose", "-v"),
    quiet: bool | None = typer.Option(None, "--quiet/--no-quiet", "-q"),
):
    """Decide a positive stable law under Brownian xi and print its eta pre-image."""
    ctx, cfg = _start(
        {"format": output_format, "verbose": verbose, "quiet": quiet}, config
    )

    def decide() -> tuple[Any, dict[str, Any] | None]:
        spec = StableConvolutionSpec.single(alpha, c, drift)
        verdict = stable_range_check(spec, a, sigma)
        if not verdict.accepted:
            return verdict, None
        form = preimage_form(spec, BmDriftParams(a, sigma))
        eta_spec = power_sum_spec(form.drift(), form.density_coefficients())
        return verdict, dump_process_spec(eta_spec)

    verdict, eta_spec = _guard(ctx, decide)
    result = verdict.to_dict()
    result["eta_spec"] = eta_spec
    lines = [f"decision: {verdict.decision.value}", f"certificate: {verdict.certificate}"]
    if eta_spec is not None:
        lines.append(f"eta drift: {eta_spec['drift']:.12g}")
        for term in eta_spec["terms"]:
            lines.append(
                f"eta density term: {term['coefficient']:.12g} x^(-1-{term['exponent']:.12g})"
            )
    _emit_document(ctx, cfg, "preimage-stable", result, lines)
    _cli_exit(_DECISION_EXIT[verdict.decision])


@app.command("solve-ode")
def solve_ode(
    theta: float = typer.Option(..., "--theta", help="theta = 2a/sigma^2 (not an integer)"),
    feta: str = typer.Option(
        ..., "--feta", help="Coefficients f_1,f_2,... of psi_eta, or a coefficient file"
    ),
    n_terms: int | None = typer.Option(None, "--N", help="Number of series terms"),
    grid: str | None = typer.Option(None, "--grid", help="Evaluation grid lo:hi:n"),
    c1: float | None = typer.Option(None, "--c1", help="Use this C1 instead of fitting it"),
    sigma: float | None = typer.Option(None, "--sigma", help="Volatility (default sigma^2 = 2)"),
    output: Path | None = typer.Option(None, "--output", "-o", help="CSV output path"),
    output_format: str | None = typer.Option(None, "--format", help=_FORMAT_HELP),
    config: Path | None = typer.Option(None, "--config", "-c", help=_CONFIG_HELP),
    verbose: bool | None = typer.Option(None, "--verbose/--no-verbose", "-v"),
    quiet: bool | None = typer.Option(None, "--quiet/--no-quiet", "-q"),
):
    """Frobenius series of the Laplace transform of V for Brownian xi."""
    ctx, cfg = _start(
        {"format": output_format, "verbose": verbose, "quiet": quiet, "series_terms": n_terms},
        config,
    )

    def solve() -> tuple[Any, pd.DataFrame | None]:
        sigma2 = 2.0 if sigma is None else sigma * sigma
        p = BmDriftParams.from_theta(theta, sigma2)
        u_grid = _parse_grid(grid) if grid is not None else None
        series, table = frobenius_solve(
            _parse_coefficients(feta), p, cfg.series_terms, u_grid, c1=c1
        )
        if table is not None and output is not None:
            write_table(table, output, header=series.header())
        return series, table

    series, table = _guard(ctx, solve)
    header = series.header()
    result: dict[str, Any] = {"series": header, "output": str(output) if output else None}
    if table is not None and output is None:
        result["rows"] = table.to_dict(orient="records")
    lines = [f"{key}: {value}" for key, value in header.items()]
    if table is not None:
        if output is not None:
            lines.append(f"written: {output}")
        else:
            lines.append(table.to_csv(index=False, float_format="%.17g").rstrip("\n"))
    _emit_document(ctx, cfg, "solve-ode", result, lines)
    _cli_exit(EXIT_SUCCESS)


def _sim_overrides(
    paths: int | None,
    dt: float | None,
    horizon: float | None,
    seed: int | None,
    eps: float | None,
    threads: int | None,
) -> dict[str, Any]:
    return {"paths": paths, "dt": dt, "T": horizon, "seed": seed, "eps": eps, "threads": threads}


@app.command()
def simulate(
    xi: Path = typer.Option(..., "--xi", help="Process spec of xi (YAML)"),
    eta: Path = typer.Option(..., "--eta", help="Process spec of eta (YAML)"),
    paths: int | None = typer.Option(None, "--paths", help="Number of paths"),
    dt: float | None = typer.Option(None, "--dt", help="Step size"),
    horizon: float | None = typer.Option(None, "--T", help="Horizon (default max(30, 20/E xi_1))"),
    seed: int | None = typer.Option(None, "--seed", help="Root seed"),
    eps: float | None = typer.Option(None, "--eps", help="Small-jump cutoff"),
    threads: int | None = typer.Option(None, "--threads", help="Worker threads"),
    out: Path | None = typer.Option(None, "--out", help="CSV file for the samples"),
    output_format: str | None = typer.Option(None, "--format", help=_FORMAT_HELP),
    config: Path | None = typer.Option(None, "--config", "-c", help=_CONFIG_HELP),
    verbose: bool | None = typer.Option(None, "--verbose/--no-verbose", "-v"),
    quiet: bool | None = typer.Option(None, "--quiet/--no-quiet", "-q"),
):
    """Monte Carlo samples of the exponential functional."""
    overrides = {"format": output_format, "verbose": verbose, "quiet": quiet}
    overrides.update(_sim_overrides(paths, dt, horizon, seed, eps, threads))
    ctx, cfg = _start(overrides, config)
    timings: dict[str, float] = {}

    def run_simulation():
        sim = cfg.to_sim_config()
        samples = simulate_functional(
            _load_process(xi), _load_process(eta), sim, threads=cfg.threads, timings=timings
        )
        if out is not None:
            header = dict(samples.rng_lineage)
            header.update(
                {
                    "horizon": repr(samples.horizon),
                    "step_dt": repr(samples.step_dt),
                    "truncation_bound": repr(samples.truncation_bound),
                    "xi_sha256": spec_digest(xi),
                    "eta_sha256": spec_digest(eta),
                }
            )
            write_table(samples.to_frame(), out, header=header)
        return samples

    samples = _guard(ctx, run_simulation)
    logger.info("simulation_timings", **timings)
    summary = samples.summary()
    summary["out"] = str(out) if out else None
    lines = [f"{key}: {value}" for key, value in summary.items() if key != "rng_lineage"]
    _emit_document(
        ctx, cfg, "simulate", summary, lines, inputs={"xi": xi, "eta": eta}, seed=cfg.seed
    )
    _cli_exit(EXIT_SUCCESS)


@app.command()
def verify(
    xi: Path = typer.Option(..., "--xi", help="Process spec of xi (YAML)"),
    eta: Path = typer.Option(..., "--eta", help="Process spec of eta (YAML)"),
    mu: Path = typer.Option(..., "--mu", help="Law spec of the claimed law of V (YAML)"),
    u: str = typer.Option("0.5,1,2", "--u", help="Comma-separated Laplace arguments"),
    paths: int | None = typer.Option(None, "--paths", help="Number of paths"),
    dt: float | None = typer.Option(None, "--dt", help="Step size"),
    horizon: float | None = typer.Option(None, "--T", help="Horizon (default max(30, 20/E xi_1))"),
    seed: int | None = typer.Option(None, "--seed", help="Root seed"),
    eps: float | None = typer.Option(None, "--eps", help="Small-jump cutoff"),
    threads: int | None = typer.Option(None, "--threads", help="Worker threads"),
    output_format: str | None = typer.Option(None, "--format", help=_FORMAT_HELP),
    config: Path | None = typer.Option(None, "--config", "-c", help=_CONFIG_HELP),
    verbose: bool | None = typer.Option(None, "--verbose/--no-verbose", "-v"),
    quiet: bool | None = typer.Option(None, "--quiet/--no-quiet", "-q"),
):
    """Compare the empirical Laplace transform of V with the claimed law mu."""
    overrides = {"format": output_format, "verbose": verbose, "quiet": quiet}
    overrides.update(_sim_overrides(paths, dt, horizon, seed, eps, threads))
    ctx, cfg = _start(overrides, config)

    def compare() -> list[dict[str, Any]]:
        points = _parse_floats(u, "--u")
        law = _load_law(mu)
        samples = simulate_functional(
            _load_process(xi), _load_process(eta), cfg.to_sim_config(), threads=cfg.threads
        )
        rows = []
        for point in points:
            empirical, se = empirical_laplace(samples, point)
            analytic = math.exp(law.psi_V(point))
            margin = SE_BAND * se
            if math.isfinite(samples.truncation_bound):
                margin += point * samples.truncation_bound
            rows.append(
                {
                    "u": point,
                    "empirical": empirical,
                    "std_error": se,
                    "analytic": analytic,
                    "margin": margin,
                    "verdict": "pass" if abs(empirical - analytic) <= margin else "fail",
                }
            )
        return rows

    rows = _guard(ctx, compare)
    passed = all(row["verdict"] == "pass" for row in rows)
    lines = [
        "u,empirical,std_error,analytic,margin,verdict",
        *(
            f"{r['u']:g},{r['empirical']:.10g},{r['std_error']:.3g},{r['analytic']:.10g},"
            f"{r['margin']:.3g},{r['verdict']}"
            for r in rows
        ),
    ]
    _emit_document(
        ctx,
        cfg,
        "verify",
        {"rows": rows, "passed": passed},
        lines,
        inputs={"xi": xi, "eta": eta, "mu": mu},
        seed=cfg.seed,
    )
    _cli_exit(EXIT_SUCCESS if passed else EXIT_REJECT)


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI on argv and return the exit code instead of exiting."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        code = app(args=args, standalone_mode=False, prog_name="levyrange")
    except ClickException as exc:
        _emit_error(None, exc.format_message())  # type: ignore[attr-defined]
        return EXIT_USAGE
    except typer.Abort:
        _emit_error(None, "aborted")
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_SUCCESS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
