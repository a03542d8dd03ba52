"""Sweep results and the thread-pool runner that produces them."""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, TextIO, TypeVar

import numpy as np

from floqlat.common.interrupt import SweepInterruptHandler
from floqlat.utils.floqlat_exception import FloqlatException, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 12
EXIT_INTERRUPTED = 130

T = TypeVar("T")
R = TypeVar("R")


def format_number(x: float, digits: int = DEFAULT_DIGITS) -> str:
    x = float(x)
    if x == 0:
        return "0"
    return f"{x:.{digits}g}"


@dataclass
class SweepResult:
    axis_name: str
    axis: np.ndarray
    curves: dict[str, np.ndarray]
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.axis = np.asarray(self.axis, dtype=float)
        self.curves = {k: np.asarray(v, dtype=float) for k, v in self.curves.items()}
        for name, values in self.curves.items():
            if values.shape != self.axis.shape:
                raise ValidationError(f"curve {name!r} has {values.size} points for an axis of {self.axis.size}")

    @property
    def columns(self) -> list[str]:
        return [self.axis_name, *self.curves]

    def rows(self) -> Iterable[list[float]]:
        for k, x in enumerate(self.axis):
            yield [x, *(v[k] for v in self.curves.values())]

    def write_csv(self, stream: TextIO, digits: int = DEFAULT_DIGITS) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows():
            writer.writerow([format_number(x, digits) for x in row])

    def to_csv(self, path: str | Path | None = None, digits: int = DEFAULT_DIGITS) -> str:
        buf = io.StringIO()
        self.write_csv(buf, digits)
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_dict(self, digits: int = DEFAULT_DIGITS) -> dict[str, Any]:
        # round through the CSV formatter so both outputs carry the same digits
        fmt = (lambda v: [float(format_number(x, digits)) for x in v])
        return {
            "axis": {"name": self.axis_name, "values": fmt(self.axis)},
            "curves": {name: fmt(values) for name, values in self.curves.items()},
            "meta": self.meta,
        }

    def to_json(self, path: str | Path | None = None, digits: int = DEFAULT_DIGITS) -> str:
        text = json.dumps(self.to_dict(digits), indent=2, sort_keys=False, default=str) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text


def run_sweep(fn: Callable[[T], R], points: Sequence[T], *, threads: int = 1,
              handler: SweepInterruptHandler | None = None) -> list[R]:
    """
    Evaluate fn at every point with up to `threads` workers; results keep the input order.

    A stop request on `handler` cancels the points not yet started and raises
    FloqlatException with exit code 130.
    """
    points = list(points)
    threads = max(1, min(int(threads), len(points) or 1))
    handler = handler or SweepInterruptHandler()
    results: list[R] = []
    with handler, ThreadPoolExecutor(max_workers=threads, thread_name_prefix="sweep") as pool:
        futures = [pool.submit(fn, p) for p in points]
        for k, fut in enumerate(futures):
            if handler.interrupted:
                for pending in futures[k:]:
                    pending.cancel()
                raise FloqlatException(f"sweep interrupted after {k} of {len(points)} points",
                                       exit_code=EXIT_INTERRUPTED)
            results.append(fut.result())
    logger.debug("sweep of %d points finished on %d threads", len(points), threads)
    return results
