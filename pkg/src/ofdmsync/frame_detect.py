"""Frame detection by lag-L autocorrelation against received power.

A frame is present while the timing metric M[n] stays above a threshold for
at least ``min_plateau`` consecutive samples. Two metric arithmetics are
provided:

* ``exact``: M[n] = |R[n]|^2 / P[n]^2, thresholded at 0.5. Gain-invariant.
* ``l1_approx``: the shift-register-friendly variant that replaces |R|^2 by
  |Re R| + |Im R| and tests it against 0.5 * P^2. Implemented here as
  (|Re R| + |Im R|) / P^2 thresholded at 0.5, which is the same comparison
  rearranged. Because the left side scales as gain^2 and the right as
  gain^4, its decisions are only meaningful near unit signal power.

:func:`autocorrelation` and :func:`signal_power` return plain window sums.
The detector divides both by the window length before forming the metric,
the software image of a CIC chain acting as a moving-average filter; the
exact metric is indifferent to that scaling, while the l1 approximation
needs it to hold at its unit-power operating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_samples
from .errors import ConfigError, SizingError

METRIC_MODES = ("exact", "l1_approx")
_EPS = 1e-30  # keeps silence at metric 0 instead of 0/0


@dataclass(frozen=True)
class FrameDetectConfig:
    lag: int = 16
    window: int = 16
    threshold: float = 0.5
    min_plateau: int = 32
    metric_mode: str = "exact"

    def __post_init__(self):
        if self.lag < 1 or self.window < 1:
            raise ConfigError("lag and window must be positive")
        if not 0 < self.threshold < 1:
            raise ConfigError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.min_plateau < 1:
            raise ConfigError("min_plateau must be positive")
        if self.metric_mode not in METRIC_MODES:
            raise ConfigError(f"metric_mode must be one of {METRIC_MODES}")


@dataclass(frozen=True)
class FrameEvent:
    """One maximal above-threshold run: inclusive sample bounds and peak metric."""

    start_index: int
    end_index: int
    peak_metric: float


def sliding_sum(values: np.ndarray, window: int) -> np.ndarray:
    """Moving sum over ``window`` entries via a running accumulate/subtract."""
    values = np.asarray(values)
    if window < 1:
        raise SizingError("window must be positive")
    if len(values) < window:
        raise SizingError(f"need at least {window} values, got {len(values)}")
    acc = np.cumsum(values)
    out = acc[window - 1:].copy()
    out[1:] -= acc[:-window]
    return out


def autocorrelation(r, lag: int = 16, window: int = 16) -> np.ndarray:
    """R[n] = sum_{m<window} r[n+m] * conj(r[n+m+lag]) for every valid n."""
    x = as_samples(r)
    if len(x) < lag + window:
        raise SizingError(f"buffer of {len(x)} samples is shorter than lag+window={lag + window}")
    products = x[: len(x) - lag] * np.conj(x[lag:])
    return sliding_sum(products, window)


def signal_power(r, lag: int = 16, window: int = 16) -> np.ndarray:
    """P[n] = sum_{m<window} |r[n+m+lag]|^2, aligned with autocorrelation()."""
    x = as_samples(r)
    if len(x) < lag + window:
        raise SizingError(f"buffer of {len(x)} samples is shorter than lag+window={lag + window}")
    magnitudes = np.abs(x[lag:]) ** 2
    return sliding_sum(magnitudes, window)[: len(x) - lag - window + 1]


def detection_metric(R: np.ndarray, P: np.ndarray, mode: str = "exact") -> np.ndarray:
    """Per-sample decision metric, thresholded against cfg.threshold downstream."""
    R = np.asarray(R, dtype=np.complex128)
    P = np.asarray(P, dtype=np.float64)
    if R.shape != P.shape:
        raise SizingError("R and P must have equal lengths")
    if mode == "exact":
        num = R.real**2 + R.imag**2
    elif mode == "l1_approx":
        num = np.abs(R.real) + np.abs(R.imag)
    else:
        raise ConfigError(f"metric mode must be one of {METRIC_MODES}")
    return num / (P**2 + _EPS)


def compute_metrics(r, cfg: FrameDetectConfig = FrameDetectConfig()):
    """(R_avg, P_avg, M) arrays for a buffer; index n matches the buffer index.

    R_avg and P_avg are the window-averaged correlation and power feeding
    the decision metric.
    """
    R = autocorrelation(r, cfg.lag, cfg.window) / cfg.window
    P = signal_power(r, cfg.lag, cfg.window) / cfg.window
    return R, P, detection_metric(R, P, cfg.metric_mode)


def _events_from_mask(mask: np.ndarray, metric: np.ndarray, min_plateau: int,
                      offset: int = 0) -> list[FrameEvent]:
    edges = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    events = []
    for s, e in zip(starts, ends):
        if e - s + 1 >= min_plateau:
            events.append(FrameEvent(int(s) + offset, int(e) + offset,
                                     float(metric[s:e + 1].max())))
    return events


def detect_frames(r, cfg: FrameDetectConfig = FrameDetectConfig()) -> list[FrameEvent]:
    """All maximal above-threshold runs of length >= min_plateau.

    A buffer too short to hold even one correlation window yields no events.
    """
    x = as_samples(r)
    if len(x) < cfg.lag + cfg.window:
        return []
    _, _, metric = compute_metrics(x, cfg)
    return _events_from_mask(metric > cfg.threshold, metric, cfg.min_plateau)


class StreamingFrameDetector:
    """Chunk-by-chunk frame detector holding private delay-line state.

    Feed arbitrary sample chunks through :meth:`process`; call :meth:`flush`
    after the last chunk. The concatenated event list equals what
    :func:`detect_frames` reports on the whole stream. Instances are
    single-owner: hand one between threads, never share it.
    """

    def __init__(self, cfg: FrameDetectConfig = FrameDetectConfig()):
        self.cfg = cfg
        self._pending = np.zeros(0, np.complex128)
        self._base = 0  # absolute index of _pending[0]
        self._run_start = -1
        self._run_end = -1
        self._run_peak = 0.0

    def _step_run(self, mask: np.ndarray, metric: np.ndarray, base: int,
                  out: list[FrameEvent]) -> None:
        for i, above in enumerate(mask):
            if above:
                if self._run_start < 0:
                    self._run_start = base + i
                    self._run_peak = metric[i]
                else:
                    self._run_peak = max(self._run_peak, metric[i])
                self._run_end = base + i
            elif self._run_start >= 0:
                if self._run_end - self._run_start + 1 >= self.cfg.min_plateau:
                    out.append(FrameEvent(self._run_start, self._run_end, float(self._run_peak)))
                self._run_start = -1

    def process(self, chunk) -> list[FrameEvent]:
        cfg = self.cfg
        self._pending = np.concatenate([self._pending, as_samples(chunk)])
        span = cfg.lag + cfg.window
        if len(self._pending) < span:
            return []
        _, _, metric = compute_metrics(self._pending, cfg)
        events: list[FrameEvent] = []
        self._step_run(metric > cfg.threshold, metric, self._base, events)
        consumed = len(metric)  # keep span-1 samples of context for the next chunk
        self._pending = self._pending[consumed:]
        self._base += consumed
        return events

    def flush(self) -> list[FrameEvent]:
        """Close any run still open at end of stream; resets run state."""
        events: list[FrameEvent] = []
        if self._run_start >= 0:
            if self._run_end - self._run_start + 1 >= self.cfg.min_plateau:
                events.append(FrameEvent(self._run_start, self._run_end, float(self._run_peak)))
            self._run_start = -1
        return events
