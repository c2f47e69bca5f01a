"""Discrete Fourier magnitude spectra of interferograms and peak search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tomography import Interferogram


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided magnitude spectrum; bin k sits at frequency k * bin_width."""

    magnitudes: np.ndarray
    bin_width: float  # Hz
    mean_removed: bool

    def __post_init__(self):
        m = np.array(self.magnitudes, dtype=float).reshape(-1)
        if m.size and m.min() < 0:
            raise ValueError("magnitudes must be non-negative")
        m.setflags(write=False)
        object.__setattr__(self, "magnitudes", m)

    def __len__(self) -> int:
        return len(self.magnitudes)

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(len(self.magnitudes)) * self.bin_width


def dft_magnitude(ig: Interferogram, remove_mean: bool = True,
                  window: str | None = None) -> Spectrum:
    """One-sided DFT magnitude of the interferogram.

    Evaluated directly (O(N^2)); fine for the few-thousand-sample scans
    this tool produces.  ``window="hann"`` tapers the samples for scans
    whose frequencies do not land on the bin grid.
    """
    x = ig.samples.astype(float)
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 samples")
    if remove_mean:
        x = x - x.mean()
    if window == "hann":
        x = x * np.hanning(n)
    elif window not in (None, "boxcar"):
        raise ValueError(f"unknown window {window!r}")
    k = np.arange(n // 2 + 1)
    kernel = np.exp(-2j * np.pi * np.outer(k, np.arange(n)) / n)
    return Spectrum(np.abs(kernel @ x), 1.0 / (n * ig.dt), remove_mean)


def find_peaks(spectrum: Spectrum, min_relative: float) -> list[tuple[float, float]]:
    """Local maxima at least min_relative of the global maximum.

    Returns (frequency_hz, magnitude) pairs sorted by descending
    magnitude; the DC bin is skipped when the mean was removed.
    """
    if not 0.0 < min_relative <= 1.0:
        raise ValueError("min_relative must lie in (0, 1]")
    m = spectrum.magnitudes
    if m.size == 0:
        raise ValueError("empty spectrum")
    top = float(m.max())
    if top == 0.0:
        return []
    threshold = min_relative * top
    start = 1 if spectrum.mean_removed else 0
    freqs = spectrum.frequencies
    peaks = []
    for i in range(start, len(m)):
        if m[i] < threshold:
            continue
        left_ok = i == 0 or m[i] > m[i - 1]
        right_ok = i == len(m) - 1 or m[i] > m[i + 1]
        if left_ok and right_ok:
            peaks.append((float(freqs[i]), float(m[i])))
    peaks.sort(key=lambda p: (-p[1], p[0]))
    return peaks


def write_spectrum_csv(spectrum: Spectrum, path) -> None:
    """CSV with header freq_MHz,magnitude at 12 significant digits."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["freq_MHz", "magnitude"])
        for f, m in zip(spectrum.frequencies, spectrum.magnitudes):
            writer.writerow([f"{f / 1e6:.12g}", f"{m:.12g}"])
