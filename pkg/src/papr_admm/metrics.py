"""CCDF of PAPR, power spectral density and out-of-band emission."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InputShapeError
from .signal import OfdmConfig, dft


@dataclass
class CcdfCurve:
    thresholds_db: np.ndarray
    probabilities: np.ndarray


@dataclass
class PsdCurve:
    """Peak-normalized PSD on a circularly shifted axis.

    ``freq_bins`` are normalized frequencies in ``[-0.5, 0.5)``: bin ``k`` of the
    ``lN``-point grid sits at ``k/lN`` for ``k < lN/2`` and at ``k/lN - 1``
    otherwise, so DC is in the middle of the arrays.
    """

    freq_bins: np.ndarray
    power_db: np.ndarray


def ccdf(papr_samples_db, thresholds_db) -> CcdfCurve:
    """Fraction of samples strictly above each threshold."""
    samples = np.sort(np.asarray(papr_samples_db, dtype=float).ravel())
    if samples.size == 0:
        raise InputShapeError("ccdf needs at least one sample")
    thresholds = np.asarray(thresholds_db, dtype=float).ravel()
    n_le = np.searchsorted(samples, thresholds, side="right")
    return CcdfCurve(thresholds, (samples.size - n_le) / samples.size)


def ccdf_abscissa(papr_samples_db, level: float) -> float:
    """Smallest threshold ``t`` with ``Pr(PAPR > t) <= level``.

    Evaluated exactly on the samples: it is the ``(floor(level*n) + 1)``-th
    largest one.
    """
    samples = np.sort(np.asarray(papr_samples_db, dtype=float).ravel())[::-1]
    if samples.size == 0:
        raise InputShapeError("ccdf needs at least one sample")
    m = int(np.floor(level * samples.size))
    if m >= samples.size:
        return -np.inf
    return float(samples[m])


def window(name: str, n: int) -> np.ndarray:
    if name in ("rect", "boxcar"):
        return np.ones(n)
    if name == "hann":
        # periodic Hann
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    raise ValueError(f"unknown window {name!r}")


def periodogram(x, window_name: str = "rect") -> np.ndarray:
    """Unnormalized single-symbol periodogram on the unshifted DFT grid.

    The window is power-compensated (divided by its mean square), so with the
    rectangular window the bin mean equals the mean sample power exactly.
    """
    x = np.asarray(x, dtype=np.complex128)
    w = window(window_name, x.shape[0])
    spectrum = dft(x * w, "forward")
    return np.abs(spectrum) ** 2 / np.mean(w**2)


def psd_from_mean(mean_periodogram) -> PsdCurve:
    """Shift a mean periodogram to centered order and normalize its peak to 0 dB."""
    p = np.fft.fftshift(np.asarray(mean_periodogram, dtype=float))
    n = p.shape[0]
    freq = (np.arange(n) - n // 2) / n
    peak = p.max()
    with np.errstate(divide="ignore"):
        power_db = 10.0 * np.log10(p / peak) if peak > 0 else np.full(n, -np.inf)
    return PsdCurve(freq, power_db)


def psd(signals: Iterable, window_name: str = "rect") -> PsdCurve:
    """Ensemble-averaged periodogram of equal-length symbols.

    Each symbol is one full period of an ``lN``-periodic sequence, so the
    default rectangular window has no leakage; ``"hann"`` is available for
    signals that are not grid-periodic.
    """
    total = None
    count = 0
    for x in signals:
        p = periodogram(x, window_name)
        if total is None:
            total = p
        elif p.shape != total.shape:
            raise InputShapeError("all signals must have the same length")
        else:
            total = total + p
        count += 1
    if count == 0:
        raise InputShapeError("psd needs at least one signal")
    return psd_from_mean(total / count)


def inband_mask(curve: PsdCurve, cfg: OfdmConfig) -> np.ndarray:
    """True on the bins that carry the ``N`` subcarriers (grid bins ``0..N-1``)."""
    n = curve.freq_bins.shape[0]
    k = np.rint(curve.freq_bins * n).astype(np.int64) % n
    return k < cfg.n_subcarriers


def oobe(curve: PsdCurve, cfg: OfdmConfig) -> float:
    """Highest out-of-band PSD level in dB relative to the curve's peak."""
    out = ~inband_mask(curve, cfg)
    if not out.any():
        return -np.inf
    return float(np.max(curve.power_db[out]))


def distortion_energy(u) -> float:
    u = np.asarray(u)
    return 0.5 * float(np.vdot(u, u).real)
