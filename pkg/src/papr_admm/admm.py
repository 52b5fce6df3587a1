"""Time-domain ADMM solvers for distortion-minimizing PAPR reduction.

The model is::

    minimize    0.5 * ||u||^2
    subject to  ||x||_inf <= beta,   x = x_o + u

with augmented Lagrangian

    L(u, x, y) = 0.5||u||^2 + Re(y^H (x - x_o - u)) + (rho/2)||x - x_o - u||^2.

Each iteration is a closed-form u-update, a per-sample projection onto the
l-infinity ball and a multiplier step, so the cost is linear in the signal
length and no transform is ever evaluated. ``T_ADMM`` keeps ``beta`` fixed;
``TCU_ADMM`` recomputes it from the current iterate before each projection.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, InputShapeError


class Variant(str, enum.Enum):
    T_ADMM = "T_ADMM"
    TCU_ADMM = "TCU_ADMM"


@dataclass(frozen=True)
class SolverParams:
    """Parameters shared by both solver variants.

    ``eps_residual`` stops the iteration once the residual
    ``||x^{k+1}-x^k||^2 + ||u^{k+1}-u^k||^2`` drops to it; ``0`` disables
    early stopping so exactly ``max_iters`` iterations run.
    """

    rho: float = 2.0
    papr_target_db: float = 4.0
    max_iters: int = 5
    eps_residual: float = 1e-8
    variant: Variant = Variant.TCU_ADMM

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not self.eps_residual >= 0:
            raise ValueError(f"eps_residual must be nonnegative, got {self.eps_residual!r}")
        if not np.isfinite(self.papr_target_db):
            raise ValueError("papr_target_db must be finite")
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.rho < 2:
            warnings.warn(
                f"rho={self.rho} is below 2; the descent/lower-bound guarantees "
                "for the fixed-threshold iteration do not apply",
                stacklevel=3,
            )

    @property
    def alpha(self) -> float:
        return amplitude_ratio(self.papr_target_db)


@dataclass(frozen=True)
class AdmmState:
    """Iterate ``(u^k, x^k, y^k)``; ``beta`` is the radius ``x^k`` was projected onto."""

    u: np.ndarray
    x: np.ndarray
    y: np.ndarray
    beta: float
    rho: float
    k: int


@dataclass
class SolveResult:
    x_final: np.ndarray
    u_final: np.ndarray
    y_final: np.ndarray
    residual_trace: np.ndarray
    feas_trace: np.ndarray
    lagrangian_trace: np.ndarray
    beta_trace: np.ndarray
    peak_trace: np.ndarray

    @property
    def iters_run(self) -> int:
        return int(self.residual_trace.shape[0])


def amplitude_ratio(papr_target_db: float) -> float:
    """Peak-to-rms amplitude ratio for a PAPR target in dB."""
    return float(np.sqrt(10.0 ** (papr_target_db / 10.0)))


def _rms_radius(alpha: float, signal, ell_n: int) -> float:
    norm = float(np.linalg.norm(signal))
    if not norm > 0:
        raise DegenerateInputError("threshold is undefined for an all-zero signal")
    return alpha * np.sqrt(1.0 / ell_n) * norm


def beta_from_target(papr_target_db: float, ref_signal, ell_n: int) -> float:
    """l-inf radius ``alpha * sqrt(1/lN) * ||x_o||_2`` for a PAPR target in dB."""
    return _rms_radius(amplitude_ratio(papr_target_db), ref_signal, ell_n)


def beta_adapt(x_k, papr_target_db: float, ell_n: int) -> float:
    """Radius recomputed from the current iterate (adaptive-threshold variant)."""
    return _rms_radius(amplitude_ratio(papr_target_db), x_k, ell_n)


def u_update(x_k, y_k, x_o, rho: float) -> np.ndarray:
    """Exact minimizer of ``L(., x_k, y_k)``."""
    return (rho / (rho + 1.0)) * (x_k - x_o + y_k / rho)


def x_target(u_next, y_k, x_o, rho: float) -> np.ndarray:
    """Unconstrained minimizer of ``L(u_next, ., y_k)``: ``u + x_o - y/rho``.

    The x-subproblem is ``min ||x - b||^2`` over the ball with this ``b``.
    """
    return u_next + x_o - y_k / rho


def project_linf(v, beta: float) -> np.ndarray:
    """Project onto ``{x : |x_i| <= beta}``, keeping the phase of clipped samples."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    v = np.asarray(v, dtype=np.complex128)
    mag = np.abs(v)
    over = mag > beta
    out = v.copy()
    out[over] = v[over] * (beta / mag[over])
    return out


def dual_update(y_k, x_next, u_next, x_o, rho: float) -> np.ndarray:
    return y_k + rho * (x_next - x_o - u_next)


def augmented_lagrangian(u, x, y, x_o, rho: float) -> float:
    r = x - x_o - u
    return float(0.5 * np.vdot(u, u).real + np.vdot(y, r).real
                 + 0.5 * rho * np.vdot(r, r).real)


def _as_signal(x_o) -> np.ndarray:
    x_o = np.ascontiguousarray(x_o, dtype=np.complex128)
    if x_o.ndim != 1 or x_o.shape[0] < 1:
        raise InputShapeError(f"expected a 1-D signal, got shape {x_o.shape}")
    return x_o


def initial_state(x_o, params: SolverParams) -> AdmmState:
    """``u = 0``, ``y = 0`` and ``x`` the projection of ``x_o`` onto the target ball."""
    x_o = _as_signal(x_o)
    beta = beta_from_target(params.papr_target_db, x_o, x_o.shape[0])
    zeros = np.zeros_like(x_o)
    return AdmmState(u=zeros, x=project_linf(x_o, beta), y=zeros.copy(),
                     beta=beta, rho=params.rho, k=1)


def step(state: AdmmState, x_o, params: SolverParams) -> AdmmState:
    """One iteration built from the individual update operations."""
    rho = params.rho
    u = u_update(state.x, state.y, x_o, rho)
    b = x_target(u, state.y, x_o, rho)
    if params.variant is Variant.TCU_ADMM:
        beta = beta_adapt(state.x, params.papr_target_db, x_o.shape[0])
    else:
        beta = state.beta
    x = project_linf(b, beta)
    y = dual_update(state.y, x, u, x_o, rho)
    return AdmmState(u=u, x=x, y=y, beta=beta, rho=rho, k=state.k + 1)


def iterate(x_o, params: SolverParams, n_iters: int | None = None) -> Iterator[AdmmState]:
    """Yield the initial state followed by ``n_iters`` iterates (no early stop)."""
    x_o = _as_signal(x_o)
    state = initial_state(x_o, params)
    yield state
    for _ in range(params.max_iters if n_iters is None else n_iters):
        state = step(state, x_o, params)
        yield state


def solve(x_o, params: SolverParams = SolverParams()) -> SolveResult:
    """Run the selected variant from :func:`initial_state`.

    Traces are indexed by iteration: entry ``k`` describes the transition to
    iterate ``k + 2``. ``peak_trace`` holds ``||x^{k+1}||_inf`` and
    ``beta_trace`` the radius it was projected onto.
    """
    x_o = _as_signal(x_o)
    init = initial_state(x_o, params)
    u, x, y, res, feas, lag, betas, peaks = _kernels.admm_loop(
        x_o, init.x, init.beta, params.alpha, float(params.rho),
        int(params.max_iters), float(params.eps_residual),
        params.variant is Variant.TCU_ADMM,
    )
    return SolveResult(x_final=x, u_final=u, y_final=y, residual_trace=res,
                       feas_trace=feas, lagrangian_trace=lag, beta_trace=betas,
                       peak_trace=peaks)


# -- convergence diagnostics ----------------------------------------------------

@dataclass
class DiagnosticsReport:
    """Per-iteration descent quantities for a sequence of iterates.

    Every array has one entry per transition ``k -> k+1``. The ``delta_*``
    terms split ``L^k - L^{k+1}`` into the u-, x- and multiplier steps;
    ``delta_y_claimed`` is the value ``+(1/rho)||y^k - y^{k+1}||^2`` that the
    textbook descent argument asserts, while ``delta_y`` is what the update
    actually produces (``-(1/rho)||y^k - y^{k+1}||^2``).
    """

    rho: float
    delta_u: np.ndarray
    delta_x: np.ndarray
    delta_y: np.ndarray
    delta_y_claimed: np.ndarray
    descent: np.ndarray
    descent_rhs: np.ndarray
    u_bound: np.ndarray
    x_bound: np.ndarray
    lagrangian: np.ndarray
    lower_bound: np.ndarray
    telescoping_error: np.ndarray
    multiplier_identity_error: np.ndarray
    scale: np.ndarray
    flags: dict = field(default_factory=dict)

    def __len__(self):
        return int(self.delta_u.shape[0])


def diagnose(states: Sequence[AdmmState], x_o, rho: float | None = None,
             rel_tol: float = 1e-10) -> DiagnosticsReport:
    """Evaluate the descent and lower-bound quantities along a trace.

    Nothing is asserted here; each inequality gets a boolean flag array in
    ``report.flags`` (``True`` where it fails by more than ``rel_tol`` times
    the local Lagrangian magnitude).
    """
    states = list(states)
    if len(states) < 2:
        raise InputShapeError("diagnose needs at least two consecutive states")
    x_o = _as_signal(x_o)
    if rho is None:
        rho = states[0].rho
    L = augmented_lagrangian

    rows = []
    for s0, s1 in zip(states[:-1], states[1:]):
        l_k = L(s0.u, s0.x, s0.y, x_o, rho)
        l_u = L(s1.u, s0.x, s0.y, x_o, rho)
        l_x = L(s1.u, s1.x, s0.y, x_o, rho)
        l_next = L(s1.u, s1.x, s1.y, x_o, rho)
        du2 = float(np.vdot(s0.u - s1.u, s0.u - s1.u).real)
        dx2 = float(np.vdot(s0.x - s1.x, s0.x - s1.x).real)
        dy2 = float(np.vdot(s0.y - s1.y, s0.y - s1.y).real)
        r = s1.x - x_o - s1.u
        r2 = float(np.vdot(r, r).real)
        d = s1.x - x_o
        ident = s1.y - (s1.u + rho * (s1.x - s0.x))
        rows.append((
            l_k - l_u, l_u - l_x, l_x - l_next, dy2 / rho,
            l_k - l_next,
            0.5 * rho * du2 + 0.5 * rho * dx2 + dy2 / rho,
            0.5 * rho * du2, 0.5 * rho * dx2,
            l_next,
            0.5 * float(np.vdot(d, d).real) + (0.5 * rho - 1.0) * r2,
            float(np.max(np.abs(ident))) if ident.size else 0.0,
            max(1.0, abs(l_k), abs(l_next)),
        ))
    a = np.array(rows, dtype=float).T
    (d_u, d_x, d_y, d_y_claimed, descent, rhs, u_bound, x_bound, lagr,
     low_bound, ident_err, scale) = a
    tel_err = np.abs(d_u + d_x + d_y - descent)
    tol = rel_tol * scale
    report = DiagnosticsReport(
        rho=rho, delta_u=d_u, delta_x=d_x, delta_y=d_y,
        delta_y_claimed=d_y_claimed, descent=descent, descent_rhs=rhs,
        u_bound=u_bound, x_bound=x_bound, lagrangian=lagr,
        lower_bound=low_bound, telescoping_error=tel_err,
        multiplier_identity_error=ident_err, scale=scale,
    )
    report.flags = {
        "u_descent": d_u < u_bound - tol,
        "x_descent": d_x < x_bound - tol,
        "total_descent": descent < rhs - tol,
        "lagrangian_nonnegative": lagr < -1e-9,
        "lower_bound": lagr < low_bound - tol,
        "telescoping": tel_err > tol,
        "multiplier_identity": ident_err > 1e-12,
    }
    return report
