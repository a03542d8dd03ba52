"""Data files and the printed run summary."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import TextIO

from floqlat.cli.commands import CommandResult
from floqlat.cli.experiment import ExperimentConfig
from floqlat.common.sweep import SweepResult

logger = logging.getLogger(__name__)


def _companion(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}_{suffix}{path.suffix}")


def _write(table: SweepResult, path: Path, fmt: str, digits: int) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        table.to_json(path, digits)
    else:
        table.to_csv(path, digits)


def write_outputs(result: CommandResult, cfg: ExperimentConfig, digits: int) -> list[Path]:
    """Main table at the configured path; extra tables next to it with a suffixed stem."""
    main = Path(cfg.default_out_path())
    written = [main]
    _write(result.table, main, cfg.output, digits)
    for suffix, table in result.extra_tables.items():
        path = _companion(main, suffix)
        _write(table, path, cfg.output, digits)
        written.append(path)
    for path in written:
        logger.info("wrote %s", path)
    return written


def print_summary(result: CommandResult, cfg: ExperimentConfig, written: list[Path], stream: TextIO) -> None:
    print(f"--- floqlat {cfg.command} ---", file=stream)
    if cfg.note:
        print(f"note: {cfg.note}", file=stream)
    width = max((len(k) for k, _ in result.summary), default=0)
    for key, value in result.summary:
        print(f"{key.ljust(width)} = {value}", file=stream)
    for path in written:
        print(f"output: {path}", file=stream)
    print("-" * (len(cfg.command) + 15), file=stream)
