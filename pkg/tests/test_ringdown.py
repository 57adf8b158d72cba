import math

import numpy as np
import pytest

from superfluid_om.errors import FitError, ValidationError
from superfluid_om.ringdown import RingdownSeries, decay_time, fit_ringdown, synthesize_ringdown

TWO_PI = 2 * math.pi


def test_one_decay_time_reaches_one_over_e():
    omega = TWO_PI * 1e3
    tau = decay_time(1e4, omega)
    s = synthesize_ringdown(1e4, omega, 2.0, 100.0 / tau, tau)
    assert s.time[-1] == pytest.approx(tau, rel=1e-12)
    assert s.amplitude[-1] == pytest.approx(2.0 / math.e, rel=1e-12)


def test_decay_time_12201():
    assert decay_time(7e6, TWO_PI * 12201) == pytest.approx(182.62, abs=0.01)


def test_seeded_determinism():
    a = synthesize_ringdown(7e6, TWO_PI * 12201, 1.0, 10.0, 50.0, noise=0.01, seed=5)
    b = synthesize_ringdown(7e6, TWO_PI * 12201, 1.0, 10.0, 50.0, noise=0.01, seed=5)
    c = synthesize_ringdown(7e6, TWO_PI * 12201, 1.0, 10.0, 50.0, noise=0.01, seed=6)
    assert a.amplitude.tobytes() == b.amplitude.tobytes()
    assert not np.array_equal(a.amplitude, c.amplitude)


def test_noiseless_recovery_exact():
    omega = TWO_PI * 1e3
    s = synthesize_ringdown(1e4, omega, 1.0, 1000.0, 2 * decay_time(1e4, omega))
    fit = fit_ringdown(s, omega)
    assert fit.q == pytest.approx(1e4, rel=1e-6)
    assert fit.amplitude0 == pytest.approx(1.0, rel=1e-9)
    assert isinstance(fit.q, float)


def test_12201_hz_scenario_round_trip():
    omega = TWO_PI * 12201
    tau = decay_time(7e6, omega)
    fit = fit_ringdown(synthesize_ringdown(7e6, omega, 1.0, 10.0, 2 * tau, noise=0.01, seed=1), omega)
    assert abs(fit.q - 7e6) / 7e6 < 0.01


@pytest.mark.parametrize("Q", [1e4, 1e6, 7e6])
@pytest.mark.parametrize("noise", [0.001, 0.01, 0.05])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_recovery_within_three_sigma(Q, noise, seed):
    omega = TWO_PI * 12201
    tau = decay_time(Q, omega)
    s = synthesize_ringdown(Q, omega, 1.0, 2000.0 / (3 * tau), 3 * tau, noise=noise, seed=seed)
    fit = fit_ringdown(s, omega, floor=3 * noise)
    assert abs(fit.q - Q) <= 3 * fit.q_stderr
    assert fit.q_stderr > 0


def test_constant_series_fails():
    t = np.linspace(0, 10, 50)
    with pytest.raises(FitError):
        fit_ringdown(RingdownSeries(t, np.ones_like(t)), 1e4)


def test_short_series_fails():
    omega = TWO_PI * 12201
    s = synthesize_ringdown(7e6, omega, 1.0, 10.0, 0.05 * decay_time(7e6, omega))
    with pytest.raises(FitError, match="decay times"):
        fit_ringdown(s, omega)


def test_too_few_samples_fails():
    s = RingdownSeries(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.5, 0.25]))
    with pytest.raises(FitError):
        fit_ringdown(s, 1e4)


def test_csv_round_trip():
    s = synthesize_ringdown(1e4, 1e4, 1.0, 100.0, 1.0, noise=0.01, seed=3)
    text = s.to_csv()
    assert text.splitlines()[0] == "time_s,amplitude"
    back = RingdownSeries.from_csv(text)
    assert np.array_equal(back.time, s.time) and np.array_equal(back.amplitude, s.amplitude)
    with pytest.raises(ValidationError):
        RingdownSeries.from_csv("t,a\n1,2\n")


def test_invalid_synthesis():
    with pytest.raises(ValidationError):
        synthesize_ringdown(-1.0, 1e4, 1.0, 10.0, 1.0)
    with pytest.raises(ValidationError):
        synthesize_ringdown(1e4, 1e4, 1.0, 10.0, 1.0, noise=-0.1)
