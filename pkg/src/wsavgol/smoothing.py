"""Apply designed filters to finite signals and sample streams."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .design import FilterCoefficients, FilterSpec, design_coefficients

EDGE_POLICIES = ("valid", "mirror", "polyfit")


@dataclass(frozen=True)
class SignalSeries:
    """A finite record of signal samples, optionally with an abscissa.

    Non-finite samples are rejected on construction so the convolution
    contract stays exact.
    """

    values: tuple[float, ...]
    abscissa: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("signal must contain at least one sample")
        arr = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal contains NaN or infinite samples")
        if self.abscissa is not None and len(self.abscissa) != len(self.values):
            raise ValueError("abscissa length does not match the signal")

    @classmethod
    def from_iterable(cls, values, abscissa=None) -> "SignalSeries":
        absc = None if abscissa is None else tuple(float(a) for a in abscissa)
        return cls(tuple(float(v) for v in values), absc)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _edge_refit(spec: FilterSpec, j: int) -> np.ndarray:
    """Off-center taps at evaluation index j, same window/degree/weights."""
    shifted = FilterSpec(q=spec.q, degree=spec.degree, weight=spec.weight, j=j)
    return design_coefficients(shifted).as_array()


def smooth(signal: SignalSeries, coeffs: FilterCoefficients, edge: str = "polyfit") -> SignalSeries:
    """Filter a finite signal with an explicit edge policy.

    Interior outputs are always the exact tap/window dot products.  The
    policies differ in what happens near the record ends:

      valid    drop edge positions; output has length L - q + 1.
      mirror   reflect the signal about its endpoints, output length L.
      polyfit  re-design off-center taps for each edge position (same
               window, degree and weights), output length L.

    mirror and polyfit assume a center-evaluated filter.
    """
    if edge not in EDGE_POLICIES:
        raise ValueError(f"unknown edge policy {edge!r}; expected one of {EDGE_POLICIES}")
    y = signal.as_array()
    taps = coeffs.as_array()
    spec = coeffs.spec
    q = spec.q
    length = y.size

    if edge == "valid":
        if length < q:
            raise ValueError(
                f"insufficient data: {length} samples with a {q}-sample window"
            )
        out = np.convolve(y, taps[::-1], mode="valid")
        absc = None
        if signal.abscissa is not None:
            j0 = spec.evaluation_index - 1
            absc = signal.abscissa[j0 : j0 + out.size]
        return SignalSeries(tuple(float(v) for v in out), absc)

    if not spec.is_centered:
        raise ValueError(f"edge policy {edge!r} needs a center-evaluated filter")
    m = spec.m

    if edge == "mirror":
        if length < m:
            raise ValueError(
                f"insufficient data: mirror padding needs at least {m} samples"
            )
        padded = np.pad(y, (m - 1, m - 1), mode="reflect")
        out = np.convolve(padded, taps[::-1], mode="valid")
        return SignalSeries(tuple(float(v) for v in out), signal.abscissa)

    # polyfit: interior by convolution, edges by off-center refits on the
    # first and last full windows.
    if length < q:
        raise ValueError(
            f"insufficient data: polyfit edges need at least {q} samples"
        )
    out = np.empty(length)
    out[m - 1 : length - (m - 1)] = np.convolve(y, taps[::-1], mode="valid")
    head, tail = y[:q], y[-q:]
    for j in range(1, m):
        out[j - 1] = _edge_refit(spec, j) @ head
    for j in range(m + 1, q + 1):
        out[length - q + j - 1] = _edge_refit(spec, j) @ tail
    return SignalSeries(tuple(float(v) for v in out), signal.abscissa)


def stream_smooth(source: Iterable[float], coeffs: FilterCoefficients) -> Iterator[float]:
    """Filter an unbounded sample stream.

    Yields one output per input once the window has filled, delayed by
    m-1 samples relative to the window center; concatenated outputs
    equal batch smoothing with the `valid` policy.  The internal window
    buffer has a single owner: do not feed one stream from multiple
    threads.
    """
    taps = coeffs.as_array()
    q = taps.size
    window: deque[float] = deque(maxlen=q)
    for sample in source:
        value = float(sample)
        if not np.isfinite(value):
            raise ValueError("signal contains NaN or infinite samples")
        window.append(value)
        if len(window) == q:
            yield float(taps @ np.asarray(window))
