"""Uniform entry point over the PAPR-reduction methods compared in the experiments."""

from __future__ import annotations

import enum
from dataclasses import replace

import numpy as np

from .admm import SolverParams, Variant, solve
from .baselines import IcfParams, icf
from .signal import OfdmConfig


class Method(str, enum.Enum):
    NONE = "Original"
    T_ADMM = "T-ADMM"
    TCU_ADMM = "TCU-ADMM"
    ICF = "ICF"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "_").upper()
        aliases = {"NONE": cls.NONE, "ORIGINAL": cls.NONE, "T_ADMM": cls.T_ADMM,
                   "TCU_ADMM": cls.TCU_ADMM, "ICF": cls.ICF}
        if key not in aliases:
            raise ValueError(f"unknown method {value!r}")
        return aliases[key]


def apply_method(method, x_o, cfg: OfdmConfig, solver: SolverParams | None = None,
                 icf_params: IcfParams | None = None) -> np.ndarray:
    """Return the transmitted time signal produced by ``method`` from ``x_o``."""
    method = Method.parse(method)
    if method is Method.NONE:
        return np.asarray(x_o, dtype=np.complex128)
    if method is Method.ICF:
        return icf(x_o, cfg, icf_params or IcfParams())
    variant = Variant.T_ADMM if method is Method.T_ADMM else Variant.TCU_ADMM
    params = replace(solver or SolverParams(), variant=variant)
    return solve(x_o, params).x_final
