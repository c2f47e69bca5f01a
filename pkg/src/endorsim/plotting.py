"""Matplotlib rendering of interferograms and spectra to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spectral import Spectrum
from .tomography import Interferogram


def _interferogram_axes(ax, ig: Interferogram, label: str | None = None) -> None:
    ax.plot(ig.times * 1e6, ig.samples, lw=1.0, color="tab:blue")
    ax.set_xlabel("t (us)")
    ax.set_ylabel("signal")
    ax.set_ylim(-1.05, 1.05)
    ax.grid(alpha=0.3)
    if label:
        ax.set_title(label, fontsize=10)


def _spectrum_axes(ax, spec: Spectrum, label: str | None = None) -> None:
    freqs = spec.frequencies / 1e6
    ax.plot(freqs, spec.magnitudes, lw=1.0, color="tab:red")
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("magnitude")
    ax.grid(alpha=0.3)
    if label:
        ax.set_title(label, fontsize=10)


def save_interferogram_plot(ig: Interferogram, path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 3.2))
    title = None
    if ig.state or ig.family:
        title = f"{ig.state or ''} / detector {ig.family or ''}".strip(" /")
    _interferogram_axes(ax, ig, title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_spectrum_plot(spec: Spectrum, path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 3.2))
    _spectrum_axes(ax, spec, None)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_interferogram_panels(igs: list[Interferogram], labels: list[str], path) -> None:
    """Stacked interferogram panels sharing the time axis."""
    fig, axes = plt.subplots(len(igs), 1, figsize=(6.4, 2.2 * len(igs)), sharex=True)
    axes = np.atleast_1d(axes)
    for ax, ig, label in zip(axes, igs, labels):
        _interferogram_axes(ax, ig, label)
        ax.label_outer()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_spectrum_panels(specs: list[Spectrum], labels: list[str], path) -> None:
    """Stacked magnitude-spectrum panels sharing the frequency axis."""
    fig, axes = plt.subplots(len(specs), 1, figsize=(6.4, 2.2 * len(specs)), sharex=True)
    axes = np.atleast_1d(axes)
    for ax, spec, label in zip(axes, specs, labels):
        _spectrum_axes(ax, spec, label)
        ax.label_outer()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
