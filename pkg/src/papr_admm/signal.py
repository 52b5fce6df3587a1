"""OFDM symbol generation, oversampled synthesis, unitary DFT and PAPR.

Conventions used throughout the package:

* The DFT pair is unitary: both directions carry a ``1/sqrt(n)`` factor.
* The ``N`` subcarriers occupy DFT bins ``0 .. N-1`` of the ``lN``-point grid.
* Constellations have unit average symbol energy.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, InputShapeError, UnsupportedLengthError


class Scheme(str, enum.Enum):
    QPSK = "QPSK"
    QAM16 = "QAM16"

    @property
    def bits_per_symbol(self) -> int:
        return 2 if self is Scheme.QPSK else 4


@dataclass(frozen=True)
class OfdmConfig:
    """Geometry of one oversampled OFDM symbol.

    Parameters
    ----------
    n_subcarriers : int
        Number of data subcarriers ``N`` (at least 2).
    oversampling : int
        Oversampling factor ``l``; the time-domain length is ``l * N``.
    scheme : Scheme
        Constellation used on every subcarrier.
    """

    n_subcarriers: int = 512
    oversampling: int = 4
    scheme: Scheme = Scheme.QPSK
    idft_scale: str = "unitary"

    def __post_init__(self):
        if int(self.n_subcarriers) != self.n_subcarriers or self.n_subcarriers < 2:
            raise ValueError(f"n_subcarriers must be an integer >= 2, got {self.n_subcarriers!r}")
        if int(self.oversampling) != self.oversampling or self.oversampling < 1:
            raise ValueError(f"oversampling must be an integer >= 1, got {self.oversampling!r}")
        if self.idft_scale != "unitary":
            raise ValueError("only the unitary IDFT scale is supported")
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    @property
    def length(self) -> int:
        """Time-domain length ``l * N``."""
        return self.n_subcarriers * self.oversampling

    @property
    def bits_per_ofdm_symbol(self) -> int:
        return self.n_subcarriers * self.scheme.bits_per_symbol


# Gray-coded per-axis levels. QPSK: one bit per axis, 0 -> +1, 1 -> -1.
# 16QAM: two bits per axis, 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
_QPSK_LEVELS = np.array([1.0, -1.0]) / np.sqrt(2.0)
_QAM16_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0]) / np.sqrt(10.0)  # index = 2*b0 + b1


def constellation(scheme: Scheme | str) -> np.ndarray:
    """All constellation points, indexed by the integer value of their bit label."""
    scheme = Scheme(scheme)
    k = scheme.bits_per_symbol
    labels = (np.arange(2**k)[:, None] >> np.arange(k - 1, -1, -1)) & 1
    cfg = OfdmConfig(n_subcarriers=2**k, oversampling=1, scheme=scheme)
    return map_bits(labels.reshape(-1), cfg)


def map_bits(bits, cfg: OfdmConfig) -> np.ndarray:
    """Gray-map a bit vector to ``N`` unit-energy constellation points."""
    bits = np.asarray(bits)
    expected = cfg.bits_per_ofdm_symbol
    if bits.ndim != 1 or bits.shape[0] != expected:
        raise InputShapeError(f"expected {expected} bits, got shape {bits.shape}")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    b = bits.astype(np.int64)
    if cfg.scheme is Scheme.QPSK:
        b = b.reshape(-1, 2)
        return _QPSK_LEVELS[b[:, 0]] + 1j * _QPSK_LEVELS[b[:, 1]]
    b = b.reshape(-1, 4)
    i_idx = 2 * b[:, 0] + b[:, 1]
    q_idx = 2 * b[:, 2] + b[:, 3]
    return _QAM16_LEVELS[i_idx] + 1j * _QAM16_LEVELS[q_idx]


def demap(symbols, cfg: OfdmConfig) -> np.ndarray:
    """Hard-decision inverse of :func:`map_bits`."""
    s = np.asarray(symbols, dtype=np.complex128)
    if s.ndim != 1 or s.shape[0] != cfg.n_subcarriers:
        raise InputShapeError(f"expected {cfg.n_subcarriers} symbols, got shape {s.shape}")
    if cfg.scheme is Scheme.QPSK:
        out = np.empty((s.shape[0], 2), dtype=np.uint8)
        out[:, 0] = s.real < 0
        out[:, 1] = s.imag < 0
        return out.reshape(-1)
    out = np.empty((s.shape[0], 4), dtype=np.uint8)
    for col, comp in ((0, s.real), (2, s.imag)):
        a = comp * np.sqrt(10.0)
        out[:, col] = a > 0            # sign bit: + levels have b0 = 1
        out[:, col + 1] = np.abs(a) < 2  # inner levels have b1 = 1
    return out.reshape(-1)


def random_symbol(rng: np.random.Generator, cfg: OfdmConfig):
    """Draw uniform random bits and map them; returns ``(bits, symbol)``."""
    bits = rng.integers(0, 2, size=cfg.bits_per_ofdm_symbol, dtype=np.uint8)
    return bits, map_bits(bits, cfg)


# -- transforms ---------------------------------------------------------------

_counter_lock = threading.Lock()
_transform_calls = 0


def transform_count() -> int:
    """Number of transforms executed in this process so far.

    Every DFT the package performs, including the ones inside the ICF kernel,
    is accounted here. The ADMM solvers never touch it.
    """
    return _transform_calls


def _count_transforms(n: int = 1) -> None:
    global _transform_calls
    with _counter_lock:
        _transform_calls += n


def _check_pow2(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise UnsupportedLengthError(f"transform length must be a power of two, got {n}")


def dft(v, direction: str = "forward") -> np.ndarray:
    """Unitary DFT of a power-of-two length sequence.

    Parameters
    ----------
    v : array_like
        Complex input of length ``2**m``.
    direction : {"forward", "inverse"}
        ``forward`` uses ``exp(-2j*pi*k*n/len)``, ``inverse`` the conjugate kernel.
        Both scale by ``1/sqrt(len)``.
    """
    v = np.ascontiguousarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise InputShapeError(f"dft expects a 1-D sequence, got shape {v.shape}")
    n = v.shape[0]
    _check_pow2(n)
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    _count_transforms()
    return _kernels.fft_radix2(v, direction == "inverse") / np.sqrt(n)


def synthesize(s, cfg: OfdmConfig) -> np.ndarray:
    """Oversampled time-domain symbol ``x = F s``.

    ``F`` holds the first ``N`` columns of the unitary ``lN``-point inverse DFT
    matrix, computed here as an inverse DFT of the zero-padded symbol.
    """
    s = np.asarray(s, dtype=np.complex128)
    if s.ndim != 1 or s.shape[0] != cfg.n_subcarriers:
        raise InputShapeError(f"expected {cfg.n_subcarriers} symbols, got shape {s.shape}")
    padded = np.zeros(cfg.length, dtype=np.complex128)
    padded[: cfg.n_subcarriers] = s
    return dft(padded, "inverse")


def papr(x) -> float:
    """Peak-to-average power ratio (linear): ``max|x_i|^2 / mean|x_i|^2``."""
    p = np.abs(np.asarray(x)) ** 2
    mean = p.mean() if p.size else 0.0
    if not mean > 0:
        raise DegenerateInputError("PAPR is undefined for an all-zero signal")
    return float(p.max() / mean)


def papr_db(x) -> float:
    return 10.0 * np.log10(papr(x))


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)
