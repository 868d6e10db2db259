"""Command-line interface.

``popnetcod run`` executes a (policy x capacity x seed) sweep and writes the
CSV results; ``popnetcod config`` prints the resolved configuration.

Exit codes: 0 on success, 2 for configuration errors, 1 for any other failure.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional

import typer
import yaml
from pydantic import ValidationError

from popnetcod.application.dtos.experiment import ExperimentRequestDTO
from popnetcod.domain.exceptions import AppException, ConfigurationException
from popnetcod.infrastructure.bootstrap.app_container import AppContainer
from popnetcod.logging import get_logger, setup_logging
from popnetcod.settings import DEFAULT_SETTINGS_PATH, ExperimentSettings

logger = get_logger(__name__)

app = typer.Typer(help="Network-coded NDN caching experiments.", add_completion=False, no_args_is_help=True)

CONFIG_ERROR = 2
RUN_ERROR = 1


def parse_list(value: str | None) -> list[str] | None:
    if value is None:
        return None
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise ConfigurationException(f"Empty list '{value}'.")
    return items


def parse_seeds(value: str | None) -> list[int] | None:
    """'5' means seeds 1..5; '3,7,11' lists seeds explicitly."""
    items = parse_list(value)
    if value is None or items is None:
        return None
    try:
        numbers = [int(item) for item in items]
    except ValueError as e:
        raise ConfigurationException(f"Invalid seeds '{value}'.") from e
    if len(numbers) == 1 and "," not in value:
        if numbers[0] < 1:
            raise ConfigurationException(f"Seed count must be positive, got {numbers[0]}.")
        return list(range(1, numbers[0] + 1))
    return numbers


def parse_capacities(value: str | None) -> list[int | str] | None:
    items = parse_list(value)
    if items is None:
        return None
    return [int(item) if item.isdigit() else item for item in items]


def load_settings(config: Path | None, full_scale: bool, **overrides) -> ExperimentSettings:
    path = config or Path(os.getenv("POPNETCOD_SETTINGS", str(DEFAULT_SETTINGS_PATH)))
    return ExperimentSettings.from_yaml(path, full_scale=full_scale, **overrides)


def _fail(message: str, code: int) -> typer.Exit:
    typer.echo(f"error: {message}", err=True)
    return typer.Exit(code=code)


@app.command()
def run(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Experiment YAML file."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory for CSV files."),
    seeds: Optional[str] = typer.Option(None, help="Number of seeds, or a comma-separated list."),
    policies: Optional[str] = typer.Option(None, help="Comma-separated policy names."),
    capacities: Optional[str] = typer.Option(None, help="Comma-separated capacities (packets or '<x>%')."),
    full_scale: bool = typer.Option(False, "--paper-scale", "--full-scale", help="Use the full-size scenario."),
    workers: Optional[int] = typer.Option(None, min=1, help="Runs executed concurrently."),
    log_level: str = typer.Option("INFO", help="Logging level."),
) -> None:
    """Run a policy x capacity x seed sweep and write the CSV results."""
    setup_logging(level=getattr(logging, log_level.upper(), logging.INFO))
    try:
        settings = load_settings(config, full_scale, output_dir=out, workers=workers)
        request = ExperimentRequestDTO(
            policies=parse_list(policies) or settings.compare,
            capacities=parse_capacities(capacities) or settings.capacities,
            seeds=parse_seeds(seeds) or settings.seeds,
            output_dir=settings.output_dir,
            workers=settings.workers,
        )
        container = AppContainer.build(settings)
        result = container.run_experiment.run_experiment(request)
    except (ConfigurationException, ValidationError) as e:
        raise _fail(str(e), CONFIG_ERROR) from e
    except AppException as e:
        raise _fail(e.message or str(e), RUN_ERROR) from e
    typer.echo(f"{result.message}: {len(result.runs)} runs, results in {request.output_dir}")


@app.command("config")
def show_config(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Experiment YAML file."),
    full_scale: bool = typer.Option(False, "--paper-scale", "--full-scale", help="Use the full-size scenario."),
) -> None:
    """Print the resolved configuration as YAML."""
    try:
        settings = load_settings(config, full_scale)
    except ConfigurationException as e:
        raise _fail(str(e), CONFIG_ERROR) from e
    typer.echo(yaml.safe_dump(settings.model_dump(mode="json"), sort_keys=False))
