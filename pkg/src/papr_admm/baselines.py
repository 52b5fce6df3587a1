"""Iterative clipping and filtering (ICF) comparator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .admm import beta_from_target
from .errors import InputShapeError
from .signal import OfdmConfig, _check_pow2, _count_transforms


@dataclass(frozen=True)
class IcfParams:
    clip_target_db: float = 4.0
    iterations: int = 5

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError(f"iterations must be a positive integer, got {self.iterations!r}")


def icf(x_o, cfg: OfdmConfig, params: IcfParams = IcfParams()) -> np.ndarray:
    """Clip to the target radius, then zero the out-of-band bins; repeat.

    The clip radius is computed once from ``x_o`` with the same formula the
    ADMM solvers use, so the two are directly comparable. Filtering is the
    last step of every iteration: the returned signal has no out-of-band
    content but its peaks may have regrown above the radius.
    """
    x_o = np.ascontiguousarray(x_o, dtype=np.complex128)
    if x_o.ndim != 1 or x_o.shape[0] != cfg.length:
        raise InputShapeError(f"expected a length-{cfg.length} signal, got shape {x_o.shape}")
    _check_pow2(cfg.length)
    beta = beta_from_target(params.clip_target_db, x_o, cfg.length)
    _count_transforms(2 * params.iterations)
    return _kernels.icf_loop(x_o, beta, cfg.n_subcarriers, int(params.iterations))
