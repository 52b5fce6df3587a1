"""Monte-Carlo experiments and their CSV outputs.

Reproducibility rules:

* Symbol ``i`` of modulation ``m`` is drawn from
  ``SeedSequence(master_seed, spawn_key=(0, m, i))``; its channel noise at
  Eb/N0 grid point ``j`` from ``spawn_key=(1, m, i, j)``. Here ``m`` is the
  position of the scheme in ``Scheme`` (QPSK = 0, QAM16 = 1). All methods see
  the same symbols and the same noise.
* Work is split into fixed blocks of ``CHUNK`` consecutive symbols whatever
  the worker count; each block reduces its symbols in index order and the
  blocks are combined in block order, so floating-point sums are identical
  for any pool size.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .admm import Variant, solve
from .baselines import icf
from .channel import awgn, receive, sspa
from .config import ExperimentConfig, config_to_dict
from .methods import Method, apply_method
from .metrics import ccdf, periodogram, psd_from_mean
from .signal import OfdmConfig, Scheme, papr_db, random_symbol, synthesize

log = logging.getLogger(__name__)

CHUNK = 64
DATA_STREAM = 0
NOISE_STREAM = 1
PAPR_METHODS = (Method.NONE, Method.T_ADMM, Method.TCU_ADMM, Method.ICF)
IDEAL = "Ideal"


def _scheme_index(scheme: Scheme) -> int:
    return list(Scheme).index(Scheme(scheme))


def substream(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def symbol_for(master_seed: int, cfg: OfdmConfig, index: int):
    """``(bits, x_o)`` for symbol ``index`` of the stream belonging to ``cfg.scheme``."""
    rng = substream(master_seed, DATA_STREAM, _scheme_index(cfg.scheme), index)
    bits, s = random_symbol(rng, cfg)
    return bits, synthesize(s, cfg)


def _chunks(n):
    return [(a, min(a + CHUNK, n)) for a in range(0, n, CHUNK)]


def ordered_map(fn, items, workers: int = 1):
    """``map`` that keeps input order, optionally over a process pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _sum_in_order(parts):
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


# -- per-block workers (module level so they pickle) ------------------------------

def _papr_block(span, cfg, solver, icf_params, seed):
    a, b = span
    out = np.empty((b - a, len(PAPR_METHODS)))
    for row, i in enumerate(range(a, b)):
        _, x_o = symbol_for(seed, cfg, i)
        for col, m in enumerate(PAPR_METHODS):
            out[row, col] = papr_db(apply_method(m, x_o, cfg, solver, icf_params))
    return out


def _residual_block(span, cfg, params, seed):
    a, b = span
    total = np.zeros(params.max_iters)
    for i in range(a, b):
        _, x_o = symbol_for(seed, cfg, i)
        total = total + solve(x_o, params).residual_trace
    return total


def _psd_block(span, cfg, solver, icf_params, sspa_params, seed):
    a, b = span
    total = np.zeros((len(PAPR_METHODS), 2, cfg.length))
    for i in range(a, b):
        _, x_o = symbol_for(seed, cfg, i)
        for k, m in enumerate(PAPR_METHODS):
            x = apply_method(m, x_o, cfg, solver, icf_params)
            total[k, 0] += periodogram(x)
            total[k, 1] += periodogram(sspa(x, sspa_params))
    return total


def _ber_block(span, method, cfg, solver, icf_params, sspa_params, grid, seed):
    a, b = span
    errors = np.zeros(len(grid), dtype=np.int64)
    m_idx = _scheme_index(cfg.scheme)
    for i in range(a, b):
        bits, x_o = symbol_for(seed, cfg, i)
        x = apply_method(method, x_o, cfg, solver, icf_params)
        if sspa_params is not None:
            x = sspa(x, sspa_params)
        for j, ebn0 in enumerate(grid):
            noisy = awgn(x, ebn0, cfg, np.random.SeedSequence(seed, spawn_key=(NOISE_STREAM, m_idx, i, j)))
            errors[j] += int(np.count_nonzero(receive(noisy, cfg) != bits))
    return errors


def ber_counts(method, cfg, solver, icf_params, sspa_params, grid, n_symbols, seed, workers=1):
    fn = partial(_ber_block, method=Method.parse(method), cfg=cfg, solver=solver,
                 icf_params=icf_params, sspa_params=sspa_params, grid=list(grid), seed=seed)
    return _sum_in_order(ordered_map(fn, _chunks(n_symbols), workers))


# -- CSV and manifest ------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunManifest:
    """``manifest.json`` in the output directory.

    Created with ``"complete": false`` before any result is written; stage
    timings and file checksums are added as stages finish and ``complete``
    flips to true only when the whole run succeeded.
    """

    def __init__(self, config: ExperimentConfig, out_dir: Path, command: str):
        self.path = out_dir / "manifest.json"
        self.out_dir = out_dir
        self.data = {
            "artifact_version": __version__,
            "command": command,
            "config": config_to_dict(config),
            "complete": False,
            "stages": {},
            "files": {},
        }
        self._write()

    def _write(self):
        tmp = self.path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.data, indent=2, sort_keys=True), encoding="utf-8")
        os.replace(tmp, self.path)

    def record(self, stage: str, seconds: float, files):
        self.data["stages"][stage] = {"seconds": max(0.0, seconds)}
        for f in files:
            self.data["files"][f.name] = _sha256(f)
        self._write()

    def finish(self):
        self.data["complete"] = True
        self._write()


# -- experiments -----------------------------------------------------------------

def _ofdm(config: ExperimentConfig, scheme) -> OfdmConfig:
    return replace(config.ofdm, scheme=Scheme(scheme))


def run_convergence(config: ExperimentConfig, out_dir=None) -> dict:
    """Mean residual per iteration for both variants and every modulation."""
    out = Path(out_dir or config.output_dir)
    rows = []
    means = {}
    for variant in (Variant.T_ADMM, Variant.TCU_ADMM):
        params = replace(config.solver, variant=variant, max_iters=config.convergence_iters,
                         eps_residual=0.0)
        for scheme in config.modulations:
            cfg = _ofdm(config, scheme)
            fn = partial(_residual_block, cfg=cfg, params=params, seed=config.master_seed)
            total = _sum_in_order(ordered_map(fn, _chunks(config.n_symbols), config.workers))
            mean = total / config.n_symbols
            means[variant, Scheme(scheme)] = mean
            rows += [(variant.value, Scheme(scheme).value, k + 1, v) for k, v in enumerate(mean)]
    path = out / "residuals.csv"
    write_csv(path, ("variant", "modulation", "iteration", "mean_residual"), rows)
    return {"mean_residual": means, "files": [path]}


def papr_samples(config: ExperimentConfig, scheme) -> dict:
    cfg = _ofdm(config, scheme)
    fn = partial(_papr_block, cfg=cfg, solver=config.solver, icf_params=config.icf,
                 seed=config.master_seed)
    table = np.vstack(ordered_map(fn, _chunks(config.n_symbols), config.workers))
    return {m: table[:, k] for k, m in enumerate(PAPR_METHODS)}


def run_ccdf(config: ExperimentConfig, out_dir=None) -> dict:
    out = Path(out_dir or config.output_dir)
    rows = []
    samples = {}
    for scheme in config.modulations:
        per_method = papr_samples(config, scheme)
        for m, vals in per_method.items():
            samples[m, Scheme(scheme)] = vals
            curve = ccdf(vals, config.ccdf_thresholds_db)
            rows += [(m.value, Scheme(scheme).value, t, p)
                     for t, p in zip(curve.thresholds_db, curve.probabilities)]
    path = out / "ccdf.csv"
    write_csv(path, ("method", "modulation", "threshold_db", "ccdf"), rows)
    return {"papr_db": samples, "files": [path]}


def run_psd(config: ExperimentConfig, out_dir=None) -> dict:
    out = Path(out_dir or config.output_dir)
    rows = []
    curves = {}
    for scheme in config.modulations:
        cfg = _ofdm(config, scheme)
        fn = partial(_psd_block, cfg=cfg, solver=config.solver, icf_params=config.icf,
                     sspa_params=config.sspa, seed=config.master_seed)
        total = _sum_in_order(ordered_map(fn, _chunks(config.n_symbols), config.workers))
        for k, m in enumerate(PAPR_METHODS):
            for c, point in enumerate(("pre_sspa", "post_sspa")):
                curve = psd_from_mean(total[k, c] / config.n_symbols)
                curves[m, Scheme(scheme), point] = curve
                rows += [(m.value, Scheme(scheme).value, point, f, p)
                         for f, p in zip(curve.freq_bins, curve.power_db)]
    path = out / "psd.csv"
    write_csv(path, ("method", "modulation", "chain_point", "freq_norm", "power_db"), rows)
    return {"curves": curves, "files": [path]}


def run_ber(config: ExperimentConfig, out_dir=None) -> dict:
    """BER through the amplifier for every method, plus the distortion-free chain."""
    out = Path(out_dir or config.output_dir)
    rows = []
    results = {}
    chains = [(IDEAL, Method.NONE, None)] + [(m.value, m, config.sspa) for m in PAPR_METHODS]
    for scheme in config.modulations:
        cfg = _ofdm(config, scheme)
        bits = config.n_symbols * cfg.bits_per_ofdm_symbol
        for label, method, amp in chains:
            errors = ber_counts(method, cfg, config.solver, config.icf, amp,
                                config.ebn0_grid_db, config.n_symbols, config.master_seed,
                                config.workers)
            results[label, Scheme(scheme)] = (bits, errors)
            rows += [(label, Scheme(scheme).value, e, bits, int(n), n / bits)
                     for e, n in zip(config.ebn0_grid_db, errors)]
    path = out / "ber.csv"
    write_csv(path, ("method", "modulation", "ebn0_db", "bits", "errors", "ber"), rows)
    return {"counts": results, "files": [path]}


SCALING_VARIANTS = ("T_ADMM", "TCU_ADMM", "ICF")


def _timed_run(config: ExperimentConfig, ell_n: int, variant: str):
    ell = config.ofdm.oversampling
    cfg = OfdmConfig(n_subcarriers=ell_n // ell, oversampling=ell, scheme=Scheme.QPSK)
    _, x_o = symbol_for(config.master_seed, cfg, 0)
    k = config.scaling_iters
    if variant == "ICF":
        return partial(icf, x_o, cfg, replace(config.icf, iterations=k))
    params = replace(config.solver, variant=Variant(variant), max_iters=k, eps_residual=0.0)
    return partial(solve, x_o, params)


def scaling_samples(config: ExperimentConfig, lengths=None, variants=SCALING_VARIANTS) -> dict:
    """Per-round wall time per iteration in ns for every (variant, lN).

    After one untimed warm-up call each, every repetition round times all
    variants at all lengths back to back. Slow drift of the machine (clock
    scaling, neighbours) then hits every cell alike instead of biasing
    whichever cells happened to be measured last, and entry ``r`` of any two
    cells comes from the same round, so ratios can be taken per round.
    """
    lengths = config.scaling_lengths if lengths is None else lengths
    cells = [(v, n) for n in lengths for v in variants]
    runs = {c: _timed_run(config, c[1], c[0]) for c in cells}
    for fn in runs.values():
        fn()
    samples = {c: [] for c in cells}
    for _ in range(config.scaling_repeats):
        for c in cells:
            t0 = time.perf_counter_ns()
            runs[c]()
            samples[c].append((time.perf_counter_ns() - t0) / config.scaling_iters)
    return {c: np.array(v) for c, v in samples.items()}


def scaling_timings(config: ExperimentConfig, lengths=None, variants=SCALING_VARIANTS) -> dict:
    """Median over rounds of :func:`scaling_samples`."""
    return {c: float(np.median(v))
            for c, v in scaling_samples(config, lengths, variants).items()}


def time_per_iteration(config: ExperimentConfig, ell_n: int, variant: str) -> float:
    return scaling_timings(config, (ell_n,), (variant,))[variant, ell_n]


def run_scaling(config: ExperimentConfig, out_dir=None) -> dict:
    out = Path(out_dir or config.output_dir)
    samples = scaling_samples(config)
    timings = {c: float(np.median(v)) for c, v in samples.items()}
    rows = [(v, n, timings[v, n]) for v in SCALING_VARIANTS for n in config.scaling_lengths]
    path = out / "scaling.csv"
    write_csv(path, ("variant", "ell_n", "ns_per_iteration"), rows)
    return {"ns_per_iteration": timings, "samples": samples, "files": [path]}


STAGES = {
    "convergence": run_convergence,
    "ccdf": run_ccdf,
    "psd": run_psd,
    "ber": run_ber,
    "scaling": run_scaling,
}


def run(command: str, config: ExperimentConfig, out_dir=None) -> dict:
    """Run one stage (or ``"all"``) with a manifest in the output directory."""
    out = Path(out_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stages = list(STAGES) if command == "all" else [command]
    if any(s not in STAGES for s in stages):
        raise ValueError(f"unknown experiment {command!r}")
    manifest = RunManifest(config, out, command)
    results = {}
    for stage in stages:
        log.info("running %s (%d symbols)", stage, config.n_symbols)
        t0 = time.perf_counter()
        res = STAGES[stage](config, out)
        manifest.record(stage, time.perf_counter() - t0, res["files"])
        results[stage] = res
    manifest.finish()
    return results
