import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from papr_admm.channel import (SspaParams, awgn, ber_experiment, noise_variance, receive,
                               saturation_amplitude, sspa)
from papr_admm.errors import InputShapeError
from papr_admm.signal import OfdmConfig, Scheme, random_symbol, synthesize

from conftest import crandn, qfunc

CFG = OfdmConfig()


def test_saturation_amplitude():
    assert saturation_amplitude(2.0, SspaParams(ibo_db=0.0)) == pytest.approx(math.sqrt(2))
    assert saturation_amplitude(1.0, SspaParams(ibo_db=10.0)) == pytest.approx(math.sqrt(10))


def test_sspa_examples():
    p = SspaParams(smoothing=3.0, ibo_db=0.0)
    A = 1.0
    small = sspa(np.array([1e-4]), p, avg_power=1.0)
    assert abs(small[0]) == pytest.approx(1e-4, rel=1e-12)
    assert abs(sspa(np.array([A]), p, avg_power=1.0)[0]) == pytest.approx(A / 2 ** (1 / 6), rel=1e-12)
    assert abs(sspa(np.array([10 * A]), p, avg_power=1.0)[0]) == pytest.approx(A, abs=1e-3)


def test_sspa_default_power_is_input_power(rng):
    x = crandn(rng, 64, scale=3.0)
    p = float(np.mean(np.abs(x) ** 2))
    np.testing.assert_array_equal(sspa(x), sspa(x, avg_power=p))


def test_sspa_large_smoothing_is_hard_limiter(rng):
    x = crandn(rng, 256, scale=2.0)
    A = 1.0
    out = sspa(x, SspaParams(smoothing=200.0, ibo_db=0.0), avg_power=1.0)
    limiter = np.where(np.abs(x) > A, A * x / np.abs(x), x)
    assert np.max(np.abs(out - limiter)) < 5e-3


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-6, 1e3), st.floats(-math.pi, math.pi), st.floats(0.5, 20.0))
def test_sspa_bounded_and_phase_preserving(mag, phase, smoothing):
    x = np.array([mag * np.exp(1j * phase)])
    y = sspa(x, SspaParams(smoothing=smoothing, ibo_db=0.0), avg_power=1.0)[0]
    assert abs(y) <= 1.0 + 1e-15  # A up to rounding
    assert abs(y) <= mag * (1 + 1e-15)
    assert math.isfinite(abs(y))
    assert abs(np.angle(y / x[0])) < 1e-12


def test_awgn_infinite_ebn0_is_passthrough(rng):
    x = crandn(rng, 32)
    np.testing.assert_array_equal(awgn(x, math.inf, CFG, 1), x)


def test_awgn_rejects_nan():
    with pytest.raises(ValueError):
        awgn(np.ones(8), float("nan"), CFG, 0)


def test_noise_statistics():
    cfg = OfdmConfig(n_subcarriers=2**18, oversampling=4)
    x = np.ones(2**20, complex)
    ebn0_db = 3.0
    n = awgn(x, ebn0_db, cfg, 5) - x
    expected = 4 / (2 * 10 ** 0.3)
    assert noise_variance(1.0, ebn0_db, cfg) == pytest.approx(expected)
    assert np.mean(np.abs(n) ** 2) == pytest.approx(expected, rel=0.01)
    assert abs(np.mean(n)) < 0.01
    assert np.var(n.real) == pytest.approx(np.var(n.imag), rel=0.01)
    for lag in (1, 2, 7):
        rho = abs(np.vdot(n[:-lag], n[lag:])) / np.vdot(n, n).real
        assert rho < 0.01


def test_awgn_is_seeded(rng):
    x = crandn(rng, 64)
    np.testing.assert_array_equal(awgn(x, 5.0, CFG, 11), awgn(x, 5.0, CFG, 11))
    assert not np.array_equal(awgn(x, 5.0, CFG, 11), awgn(x, 5.0, CFG, 12))


@pytest.mark.parametrize("scheme", list(Scheme))
def test_noiseless_loopback(scheme, rng):
    cfg = OfdmConfig(scheme=scheme)
    bits, s = random_symbol(rng, cfg)
    x = synthesize(s, cfg)
    np.testing.assert_array_equal(receive(x, cfg), bits)
    np.testing.assert_array_equal(receive(0.25 * x, cfg), bits)


def test_receive_shape_error():
    with pytest.raises(InputShapeError):
        receive(np.ones(10), CFG)


def test_high_backoff_sspa_is_error_free():
    res = ber_experiment("none", CFG, sspa_params=SspaParams(ibo_db=20.0),
                         ebn0_grid=[math.inf], n_symbols=100, seed=3)
    assert res[0].bits_total >= 1e5
    assert res[0].bits_error == 0


def test_ideal_qpsk_ber_at_1e3_point():
    ebn0_db = 6.79
    res = ber_experiment("none", CFG, sspa_params=None, ebn0_grid=[ebn0_db], n_symbols=2000, seed=9)[0]
    theory = qfunc(math.sqrt(2 * 10 ** (ebn0_db / 10)))
    assert res.ber == pytest.approx(theory, rel=0.10)


def test_ber_is_deterministic_and_monotone():
    grid = [0.0, 2.0, 4.0, 6.0]
    a = ber_experiment("TCU-ADMM", CFG, ebn0_grid=grid, n_symbols=70, seed=4)
    b = ber_experiment("TCU-ADMM", CFG, ebn0_grid=grid, n_symbols=70, seed=4, workers=2)
    assert a == b
    errs = [r.bits_error for r in a]
    assert errs == sorted(errs, reverse=True)
