"""Power amplifier, AWGN channel, OFDM receiver and BER counting.

Eb/N0 convention
----------------
For a transmitted signal with measured mean sample power ``P`` on the
``lN``-point grid, the energy per subcarrier symbol is ``Es = l * P`` (unitary
transforms put ``N`` data bins among ``lN`` samples) and ``Eb = Es / k`` with
``k`` bits per constellation symbol. The complex noise variance per time
sample is therefore ``sigma^2 = l * P / (k * Eb/N0)``; under the unitary DFT it
is also the noise variance on every received subcarrier. For an undistorted
QPSK symbol this reproduces ``BER = Q(sqrt(2 Eb/N0))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputShapeError
from .signal import OfdmConfig, demap, dft


@dataclass(frozen=True)
class SspaParams:
    """Rapp AM/AM model; ``ibo_db`` is the back-off of the input mean power from saturation."""

    smoothing: float = 3.0
    ibo_db: float = 4.1

    def __post_init__(self):
        if not self.smoothing > 0:
            raise ValueError(f"smoothing must be positive, got {self.smoothing!r}")
        if not np.isfinite(self.ibo_db):
            raise ValueError("ibo_db must be finite")


@dataclass(frozen=True)
class BerRecord:
    ebn0_db: float
    bits_total: int
    bits_error: int

    @property
    def ber(self) -> float:
        return self.bits_error / self.bits_total if self.bits_total else float("nan")


def saturation_amplitude(avg_power: float, params: SspaParams) -> float:
    return math.sqrt(avg_power * 10.0 ** (params.ibo_db / 10.0))


def sspa(x, params: SspaParams = SspaParams(), avg_power: float | None = None) -> np.ndarray:
    """Rapp solid-state amplifier with unit small-signal gain and no AM/PM.

    Output magnitude is ``|x| / (1 + (|x|/A)^(2p))^(1/(2p))`` with
    ``A = sqrt(avg_power * 10^(ibo_db/10))``. ``avg_power`` defaults to the
    mean power of ``x`` itself.
    """
    x = np.asarray(x, dtype=np.complex128)
    if avg_power is None:
        avg_power = float(np.mean(np.abs(x) ** 2))
    if not avg_power > 0:
        raise ValueError("avg_power must be positive")
    a_sat = saturation_amplitude(avg_power, params)
    two_p = 2.0 * params.smoothing
    mag = np.abs(x)
    r = mag / a_sat
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        # above saturation use the reciprocal form so r**(2p) cannot overflow
        gain = np.where(
            r <= 1.0,
            (1.0 + r**two_p) ** (-1.0 / two_p),
            (1.0 / r) * (1.0 + (1.0 / r) ** two_p) ** (-1.0 / two_p),
        )
    return x * gain


def noise_variance(signal_power: float, ebn0_db: float, cfg: OfdmConfig) -> float:
    """Complex per-sample noise variance for a given Eb/N0 (see module docstring)."""
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return signal_power * cfg.oversampling / (cfg.scheme.bits_per_symbol * ebn0)


def awgn(x, ebn0_db: float, cfg: OfdmConfig, rng_seed=None) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise.

    ``ebn0_db = inf`` returns the input unchanged. ``rng_seed`` is anything
    :func:`numpy.random.default_rng` accepts.
    """
    x = np.asarray(x, dtype=np.complex128)
    if np.isposinf(ebn0_db):
        return x.copy()
    if not np.isfinite(ebn0_db):
        raise ValueError(f"ebn0_db must be finite or +inf, got {ebn0_db!r}")
    power = float(np.mean(np.abs(x) ** 2))
    sigma = math.sqrt(noise_variance(power, ebn0_db, cfg) / 2.0)
    rng = np.random.default_rng(rng_seed)
    noise = rng.standard_normal((2, x.shape[0]))
    return x + sigma * (noise[0] + 1j * noise[1])


def receive(y, cfg: OfdmConfig) -> np.ndarray:
    """Demodulate one received symbol to hard-decision bits.

    A blind real gain scales the ``N`` in-band bins to unit mean power before
    slicing, which undoes the amplifier's in-band compression.
    """
    y = np.asarray(y, dtype=np.complex128)
    if y.ndim != 1 or y.shape[0] != cfg.length:
        raise InputShapeError(f"expected a length-{cfg.length} signal, got shape {y.shape}")
    bins = dft(y, "forward")[: cfg.n_subcarriers]
    power = float(np.mean(np.abs(bins) ** 2))
    if power > 0:
        bins = bins / math.sqrt(power)
    return demap(bins, cfg)


def ber_experiment(method, cfg: OfdmConfig, solver=None, icf=None,
                   sspa_params: SspaParams | None = SspaParams(),
                   ebn0_grid: Sequence[float] = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0),
                   n_symbols: int = 100, seed: int = 0, workers: int = 1) -> list[BerRecord]:
    """Monte-Carlo BER of bits -> symbol -> method -> SSPA -> AWGN -> receiver.

    ``sspa_params=None`` bypasses the amplifier. Symbol ``i`` and its noise at
    grid point ``j`` come from substreams keyed on ``(seed, i)`` and
    ``(seed, i, j)``, so the counts do not depend on ``workers``.
    """
    from .experiments import ber_counts

    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    errors = ber_counts(method, cfg, solver, icf, sspa_params, list(ebn0_grid),
                        n_symbols, seed, workers)
    bits = n_symbols * cfg.bits_per_ofdm_symbol
    return [BerRecord(float(e), bits, int(n)) for e, n in zip(ebn0_grid, errors)]
