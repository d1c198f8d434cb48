"""Command-line entry point."""

from shallowscope.cli.config import ExperimentConfig, derive_seed, resolve_threads
from shallowscope.cli.main import main, run
from shallowscope.cli.tables import emit_csv, parse_csv

__all__ = ["ExperimentConfig", "derive_seed", "emit_csv", "main", "parse_csv", "resolve_threads", "run"]
