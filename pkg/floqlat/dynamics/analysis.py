"""Period averaging and peak timing of population traces."""
from __future__ import annotations

import logging

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

logger = logging.getLogger(__name__)


def period_average(times: np.ndarray, values: np.ndarray, period: float) -> np.ndarray:
    """Running boxcar mean over one drive period; removes micromotion."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if period <= 0 or times.size < 3:
        return values.copy()
    dt = float(np.mean(np.diff(times)))
    width = int(round(abs(period) / dt))
    if width < 2:
        return values.copy()
    return uniform_filter1d(values, size=width, mode="nearest")


def refine_peak(times: np.ndarray, values: np.ndarray, k: int) -> float:
    """Vertex of the parabola through samples k-1, k, k+1."""
    if k <= 0 or k >= len(values) - 1:
        return float(times[k])
    y0, y1, y2 = values[k - 1], values[k], values[k + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return float(times[k])
    shift = 0.5 * (y0 - y2) / denom
    return float(times[k] + shift * (times[k + 1] - times[k]))


def first_peak(times: np.ndarray, values: np.ndarray, height: float) -> float | None:
    """Time of the first local maximum above `height`, or None."""
    peaks, _ = find_peaks(np.asarray(values, dtype=float), height=height)
    if peaks.size == 0:
        return None
    return refine_peak(np.asarray(times, dtype=float), np.asarray(values, dtype=float), int(peaks[0]))
