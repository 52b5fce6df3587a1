"""Compiled inner loops.

Everything here works on contiguous complex128 arrays and is called through
the public wrappers in :mod:`papr_admm.signal`, :mod:`papr_admm.admm` and
:mod:`papr_admm.baselines`, which validate inputs and apply scaling.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def twiddles(n, inverse):
    sign = 1.0 if inverse else -1.0
    tw = np.empty(n // 2, dtype=np.complex128)
    for k in range(n // 2):
        ang = sign * 2.0 * math.pi * k / n
        tw[k] = complex(math.cos(ang), math.sin(ang))
    return tw


@njit(cache=True)
def fft_inplace(out, tw):
    """Iterative radix-2 decimation-in-time FFT with precomputed twiddles."""
    n = out.shape[0]
    # bit-reversal permutation
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = out[i]
            out[i] = out[j]
            out[j] = tmp

    size = 2
    while size <= n:
        h = size // 2
        step = n // size
        for start in range(0, n, size):
            for k in range(h):
                w = tw[k * step]
                a = out[start + k]
                b = out[start + k + h] * w
                out[start + k] = a + b
                out[start + k + h] = a - b
        size *= 2


@njit(cache=True)
def fft_radix2(v, inverse):
    """Unnormalized FFT; ``inverse`` flips the twiddle sign, no 1/n applied."""
    out = v.copy()
    fft_inplace(out, twiddles(v.shape[0], inverse))
    return out


@njit(cache=True)
def admm_loop(x_o, x_init, beta0, alpha, rho, max_iters, eps, adaptive):
    """Run the ADMM iteration and record per-iteration traces.

    One fused pass over the samples per iteration computes the u-update,
    the projection, the multiplier update and every trace quantity.
    """
    n = x_o.shape[0]
    u = np.zeros(n, dtype=np.complex128)
    x = x_init.copy()
    y = np.zeros(n, dtype=np.complex128)

    residual = np.empty(max_iters)
    feas = np.empty(max_iters)
    lagr = np.empty(max_iters)
    betas = np.empty(max_iters)
    peaks = np.empty(max_iters)

    c_u = rho / (rho + 1.0)
    inv_rho = 1.0 / rho
    inv_sqrt_n = 1.0 / math.sqrt(n)
    beta = beta0
    it = 0
    while it < max_iters:
        if adaptive:
            sq = 0.0
            for i in range(n):
                sq += x[i].real * x[i].real + x[i].imag * x[i].imag
            beta = alpha * inv_sqrt_n * math.sqrt(sq)
        beta_sq = beta * beta

        res = 0.0
        fsq = 0.0
        lag = 0.0
        peak = 0.0
        for i in range(n):
            yi = y[i]
            un = c_u * (x[i] - x_o[i] + yi * inv_rho)
            b = un + x_o[i] - yi * inv_rho
            m2 = b.real * b.real + b.imag * b.imag
            if m2 > beta_sq:
                xn = b * (beta / math.sqrt(m2))
                xm2 = beta_sq
            else:
                xn = b
                xm2 = m2
            r = xn - x_o[i] - un
            yn = yi + rho * r

            dx = xn - x[i]
            du = un - u[i]
            res += dx.real * dx.real + dx.imag * dx.imag
            res += du.real * du.real + du.imag * du.imag
            r2 = r.real * r.real + r.imag * r.imag
            fsq += r2
            lag += 0.5 * (un.real * un.real + un.imag * un.imag)
            lag += yn.real * r.real + yn.imag * r.imag + 0.5 * rho * r2
            if xm2 > peak:
                peak = xm2

            u[i] = un
            x[i] = xn
            y[i] = yn

        residual[it] = res
        feas[it] = math.sqrt(fsq)
        lagr[it] = lag
        betas[it] = beta
        peaks[it] = math.sqrt(peak)
        it += 1
        if eps > 0.0 and res <= eps:
            break

    return (u, x, y, residual[:it], feas[:it], lagr[:it], betas[:it],
            peaks[:it])


@njit(cache=True)
def icf_loop(x_o, beta, n_inband, iterations):
    """Clip to ``beta`` then zero every bin at index >= ``n_inband``."""
    n = x_o.shape[0]
    x = x_o.copy()
    beta_sq = beta * beta
    tw_f = twiddles(n, False)
    tw_i = twiddles(n, True)
    inv_n = 1.0 / n
    for _ in range(iterations):
        for i in range(n):
            m2 = x[i].real * x[i].real + x[i].imag * x[i].imag
            if m2 > beta_sq:
                x[i] = x[i] * (beta / math.sqrt(m2))
        fft_inplace(x, tw_f)
        for k in range(n_inband, n):
            x[k] = 0.0
        fft_inplace(x, tw_i)
        for i in range(n):
            x[i] = x[i] * inv_n
    return x
