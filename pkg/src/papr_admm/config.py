"""Experiment configuration: TOML in, validated frozen dataclasses out.

Every key is optional; an empty file gives the defaults listed in
``DEFAULT_CONFIG_TOML`` (see the README for the meaning of each entry).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import tomli_w

from .admm import SolverParams, Variant
from .baselines import IcfParams
from .channel import SspaParams
from .errors import ConfigFileNotFoundError, ConfigSyntaxError, ConfigValueError
from .signal import OfdmConfig, Scheme

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def _default_thresholds():
    return tuple(round(0.1 * i, 10) for i in range(121))


@dataclass(frozen=True)
class ExperimentConfig:
    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    solver: SolverParams = field(default_factory=SolverParams)
    icf: IcfParams = field(default_factory=IcfParams)
    sspa: SspaParams = field(default_factory=SspaParams)
    n_symbols: int = 5000
    modulations: tuple = (Scheme.QPSK, Scheme.QAM16)
    ebn0_grid_db: tuple = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
    ccdf_thresholds_db: tuple = field(default_factory=_default_thresholds)
    convergence_iters: int = 100
    scaling_lengths: tuple = (512, 1024, 2048, 4096, 8192)
    scaling_iters: int = 200
    scaling_repeats: int = 31
    master_seed: int = 0
    workers: int = 1
    output_dir: str = "results"


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v):
    return (isinstance(v, (int, float)) and not isinstance(v, bool))


def _pow2(v):
    return v >= 1 and not v & (v - 1)


# section -> key -> (kind, predicate, message)
_SCHEMA = {
    "ofdm": {
        "n_subcarriers": ("int", lambda v: v >= 2, "must be an integer >= 2"),
        "oversampling": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "scheme": ("str", lambda v: v in Scheme.__members__, "must be QPSK or QAM16"),
        "idft_scale": ("str", lambda v: v == "unitary", "only 'unitary' is supported"),
    },
    "solver": {
        "rho": ("real", lambda v: v > 0, "must be > 0"),
        "papr_target_db": ("real", math.isfinite, "must be finite"),
        "max_iters": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "eps_residual": ("real", lambda v: v >= 0, "must be >= 0"),
        "variant": ("str", lambda v: v in Variant.__members__, "must be T_ADMM or TCU_ADMM"),
    },
    "icf": {
        "clip_target_db": ("real", math.isfinite, "must be finite"),
        "iterations": ("int", lambda v: v >= 1, "must be an integer >= 1"),
    },
    "sspa": {
        "smoothing": ("real", lambda v: v > 0, "must be > 0"),
        "ibo_db": ("real", math.isfinite, "must be finite"),
    },
    "": {
        "n_symbols": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "modulations": ("strlist", lambda v: len(v) >= 1 and all(m in Scheme.__members__ for m in v),
                        "must be a non-empty list drawn from QPSK, QAM16"),
        "ebn0_grid_db": ("reallist", lambda v: all(not math.isnan(e) and e != -math.inf for e in v),
                         "must be a list of finite values or inf"),
        "ccdf_thresholds_db": ("reallist", lambda v: len(v) >= 1 and all(math.isfinite(t) for t in v),
                               "must be a non-empty list of finite values"),
        "convergence_iters": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "scaling_lengths": ("intlist", lambda v: len(v) >= 1 and all(_pow2(n) and n >= 2 for n in v),
                            "must be a non-empty list of powers of two"),
        "scaling_iters": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "scaling_repeats": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "master_seed": ("int", lambda v: v >= 0, "must be a nonnegative integer"),
        "workers": ("int", lambda v: v >= 1, "must be an integer >= 1"),
        "output_dir": ("str", lambda v: len(v) > 0, "must be a non-empty path"),
    },
}

_KIND_CHECK = {
    "int": _is_int,
    "real": _is_real,
    "str": lambda v: isinstance(v, str),
    "strlist": lambda v: isinstance(v, list) and all(isinstance(e, str) for e in v),
    "reallist": lambda v: isinstance(v, list) and all(_is_real(e) for e in v),
    "intlist": lambda v: isinstance(v, list) and all(_is_int(e) for e in v),
}


def _check_section(name, table):
    schema = _SCHEMA[name]
    prefix = f"{name}." if name else ""
    out = {}
    for key, value in table.items():
        if key not in schema:
            raise ConfigValueError(prefix + key, "unknown key")
        kind, ok, msg = schema[key]
        if not _KIND_CHECK[kind](value) or not ok(value):
            raise ConfigValueError(prefix + key, f"{msg} (got {value!r})")
        out[key] = value
    return out


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Validate a parsed document and build the config."""
    sections = {}
    top = {}
    for key, value in doc.items():
        if key in _SCHEMA and key:
            if not isinstance(value, dict):
                raise ConfigValueError(key, "must be a table")
            sections[key] = _check_section(key, value)
        else:
            top[key] = value
    top = _check_section("", top)

    ofdm = OfdmConfig(**sections.get("ofdm", {}))
    if not _pow2(ofdm.length):
        raise ConfigValueError("ofdm", f"n_subcarriers * oversampling = {ofdm.length} must be a power of two")
    solver = SolverParams(**sections.get("solver", {}))
    kwargs = dict(ofdm=ofdm, solver=solver, icf=IcfParams(**sections.get("icf", {})),
                  sspa=SspaParams(**sections.get("sspa", {})))
    for key, value in top.items():
        if key == "modulations":
            value = tuple(Scheme(m) for m in value)
        elif key in ("ebn0_grid_db", "ccdf_thresholds_db"):
            value = tuple(float(e) for e in value)
        elif key == "scaling_lengths":
            value = tuple(value)
        kwargs[key] = value
    return ExperimentConfig(**kwargs)


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigFileNotFoundError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigFileNotFoundError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, source=str(path))


def parse_config_text(text: str, source: str = "<string>") -> ExperimentConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigSyntaxError(f"{source}: {exc}") from None
    return config_from_dict(doc)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "n_symbols": cfg.n_symbols,
        "master_seed": cfg.master_seed,
        "workers": cfg.workers,
        "output_dir": cfg.output_dir,
        "modulations": [m.value for m in cfg.modulations],
        "ebn0_grid_db": list(cfg.ebn0_grid_db),
        "ccdf_thresholds_db": list(cfg.ccdf_thresholds_db),
        "convergence_iters": cfg.convergence_iters,
        "scaling_lengths": list(cfg.scaling_lengths),
        "scaling_iters": cfg.scaling_iters,
        "scaling_repeats": cfg.scaling_repeats,
        "ofdm": {
            "n_subcarriers": cfg.ofdm.n_subcarriers,
            "oversampling": cfg.ofdm.oversampling,
            "scheme": cfg.ofdm.scheme.value,
            "idft_scale": cfg.ofdm.idft_scale,
        },
        "solver": {
            "rho": cfg.solver.rho,
            "papr_target_db": cfg.solver.papr_target_db,
            "max_iters": cfg.solver.max_iters,
            "eps_residual": cfg.solver.eps_residual,
            "variant": cfg.solver.variant.value,
        },
        "icf": {"clip_target_db": cfg.icf.clip_target_db, "iterations": cfg.icf.iterations},
        "sspa": {"smoothing": cfg.sspa.smoothing, "ibo_db": cfg.sspa.ibo_db},
    }


def serialize_config(cfg: ExperimentConfig) -> str:
    return tomli_w.dumps(config_to_dict(cfg))
